//! Search for `(α, β, ζ)` making the error functions satisfy the variation
//! inequalities, with a grid certificate of the worst margins.
//!
//! Dividing both sides of each inequality by `e^{αt+βt^{r−1}}` leaves a
//! right-hand side independent of `α, β` and a left-hand side increasing in
//! both, so feasibility is upward closed and a log grid plus bisection finds
//! near-minimal constants.

use serde::{Deserialize, Serialize};

use super::{binom, f_reduced, q_of, FKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantSearchConfig {
    pub grid_points: usize,
    /// Required `(lhs − rhs) / max(lhs, rhs)` at every grid point.
    pub margin: f64,
    /// The inequalities are checked on `[0, horizon]`; it must cover every `t_max`.
    pub horizon: f64,
    pub phi_schedule: Vec<f64>,
    /// Log-grid exponents: `α, β ∈ {2^k}`.
    pub log2_range: (i32, i32),
    pub bisection_steps: usize,
}

impl Default for ConstantSearchConfig {
    fn default() -> Self {
        ConstantSearchConfig {
            grid_points: 10_000,
            margin: 1e-3,
            horizon: 1.0,
            phi_schedule: vec![1e-30, 1e-100, 1e-300],
            log2_range: (-2, 16),
            bisection_steps: 30,
        }
    }
}

/// Worst margin of one inequality, over all its `ℓ` and grid points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityMargin {
    pub item: u8,
    pub worst: f64,
    pub at_t: f64,
    pub at_ell: Option<usize>,
}

/// Items (7), (8) and the `O(φ^{−λ})` bounds at one `φ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiCheck {
    pub phi: f64,
    pub t_max: f64,
    /// `max φ^δ f_V / q`, required below `φ^{δ/2}`.
    pub max_ratio: f64,
    pub ratio_bound: f64,
    /// `min (q − φ^δ f_V − φ^λ)`, required `≥ 0`.
    pub min_slack: f64,
    /// `max φ^λ · max(|f|, |f′|, |f″|)` over `f_V` and every `f_ℓ`.
    pub f_bound_constant: f64,
}

impl PhiCheck {
    pub fn holds(&self) -> bool {
        self.max_ratio < self.ratio_bound && self.min_slack >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub r: usize,
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
    pub delta: f64,
    pub lambda: f64,
    pub config: ConstantSearchConfig,
    pub margins: Vec<InequalityMargin>,
    /// The same margins on a grid of twice the density.
    pub refined_margins: Vec<InequalityMargin>,
    pub phi_checks: Vec<PhiCheck>,
}

impl Certificate {
    pub fn worst_margin(&self) -> f64 {
        self.margins
            .iter()
            .chain(&self.refined_margins)
            .map(|m| m.worst)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn holds(&self) -> bool {
        self.worst_margin() >= self.config.margin && self.phi_checks.iter().all(PhiCheck::holds)
    }
}

fn rel_margin(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        // both sides vanish only if α and β are degenerate
        return 0.0;
    }
    (lhs - rhs) / scale
}

/// Worst margins of the six variation inequalities on a `grid_points` grid
/// over `[0, horizon]`.
pub fn variation_margins(
    r: usize,
    alpha: f64,
    beta: f64,
    horizon: f64,
    grid_points: usize,
) -> Result<Vec<InequalityMargin>> {
    let mut worst: Vec<InequalityMargin> = (1..=6)
        .map(|item| InequalityMargin {
            item,
            worst: f64::INFINITY,
            at_t: 0.0,
            at_ell: None,
        })
        .collect();
    let rs = r as f64;
    let steps = grid_points.max(2) - 1;
    let mut fl = vec![[0.0; 3]; r + 1];
    for j in 0..=steps {
        let t = horizon * j as f64 / steps as f64;
        let q = q_of(t, r);
        let fv = f_reduced(t, FKind::V, r, alpha, beta)?;
        for (ell, slot) in fl.iter_mut().enumerate().skip(2) {
            *slot = f_reduced(t, FKind::Ell(ell), r, alpha, beta)?;
        }
        let mut note = |item: u8, ell: Option<usize>, lhs: f64, rhs: f64| {
            let m = rel_margin(lhs, rhs);
            let w = &mut worst[item as usize - 1];
            if m < w.worst || m.is_nan() {
                *w = InequalityMargin {
                    item,
                    worst: m,
                    at_t: t,
                    at_ell: ell,
                };
            }
        };
        note(1, None, fv[1], 3.0 * fl[2][0]);
        for ell in 2..=r {
            let l = ell as f64;
            let d = fl[ell][1];
            if ell < r {
                note(2, Some(ell), d, 5.0 * l / q * fl[ell + 1][0]);
                let c = binom::<f64>(r - 1, ell);
                note(
                    3,
                    Some(ell),
                    d,
                    2.0 * l * c * t.powi((r - ell - 1) as i32) * q.powi(ell as i32 - 2) * fv[0],
                );
            }
            let c = binom::<f64>(r - 1, ell - 1);
            note(
                4,
                Some(ell),
                d,
                7.0 * (l - 1.0) * c * t.powi((r - ell) as i32) * q.powi(ell as i32 - 2) * fl[2][0],
            );
            note(
                5,
                Some(ell),
                d,
                6.0 * (l - 1.0) * (rs - 1.0) * t.powi(r as i32 - 2) * fl[ell][0],
            );
            note(
                6,
                Some(ell),
                d,
                3.0 * (l - 1.0)
                    * (rs - 1.0)
                    * c
                    * t.powi((2 * r - ell - 2) as i32)
                    * q.powi(ell as i32 - 2)
                    * fv[0],
            );
        }
    }
    Ok(worst)
}

fn min_margin(m: &[InequalityMargin]) -> f64 {
    m.iter().map(|x| x.worst).fold(f64::INFINITY, f64::min)
}

/// Items (7), (8) and the `f = O(φ^{−λ})` constants on `[0, t_max]`.
pub fn phi_check(
    r: usize,
    alpha: f64,
    beta: f64,
    zeta: f64,
    phi: f64,
    grid_points: usize,
) -> Result<PhiCheck> {
    let delta = 0.1;
    let lambda = 1.0 / (100.0 * r as f64);
    let t_max = zeta * (1.0 / phi).ln().powf(1.0 / (r as f64 - 1.0));
    let pd = phi.powf(delta);
    let pl = phi.powf(lambda);
    let mut max_ratio: f64 = 0.0;
    let mut min_slack = f64::INFINITY;
    let mut fmax: f64 = 0.0;
    let steps = grid_points.max(2) - 1;
    for j in 0..=steps {
        let t = t_max * j as f64 / steps as f64;
        let e = (alpha * t + beta * t.powi(r as i32 - 1)).exp();
        let q = q_of(t, r);
        let fv = f_reduced(t, FKind::V, r, alpha, beta)?;
        let f_v = fv[0] * e;
        max_ratio = max_ratio.max(pd * f_v / q);
        min_slack = min_slack.min(q - pd * f_v - pl);
        let kinds = std::iter::once(FKind::V).chain((2..=r).map(FKind::Ell));
        for kind in kinds {
            let f = f_reduced(t, kind, r, alpha, beta)?;
            let m = f.iter().map(|x| x.abs()).fold(0.0, f64::max) * e;
            fmax = fmax.max(m * pl);
        }
    }
    Ok(PhiCheck {
        phi,
        t_max,
        max_ratio,
        ratio_bound: phi.powf(delta / 2.0),
        min_slack,
        f_bound_constant: fmax,
    })
}

pub fn find_constants(r: usize) -> Result<Certificate> {
    find_constants_with(r, &ConstantSearchConfig::default())
}

pub fn find_constants_with(r: usize, cfg: &ConstantSearchConfig) -> Result<Certificate> {
    if !(3..=8).contains(&r) {
        return Err(Error::invalid(format!("constant search supports 3 <= r <= 8, got {r}")));
    }
    let lambda = 1.0 / (100.0 * r as f64);
    let phi_min = cfg.phi_schedule.iter().copied().fold(1.0, f64::min);
    let widest = lambda * (1.0 / phi_min).ln().powf(1.0 / (r as f64 - 1.0));
    if widest > cfg.horizon {
        return Err(Error::invalid(format!(
            "horizon {} does not cover t_max {widest} at zeta = lambda",
            cfg.horizon
        )));
    }
    // coarse grids keep the search cheap; the final check uses the full grid
    let coarse = (cfg.grid_points / 10).max(200);
    let feasible = |a: f64, b: f64| -> Result<f64> {
        Ok(min_margin(&variation_margins(r, a, b, cfg.horizon, coarse)?))
    };

    let (lo, hi) = cfg.log2_range;
    let mut best: Option<(f64, f64)> = None;
    let mut best_seen = (f64::NEG_INFINITY, 0.0, 0.0);
    for ka in lo..=hi {
        for kb in lo..=hi {
            let (a, b) = (2f64.powi(ka), 2f64.powi(kb));
            let m = feasible(a, b)?;
            if m > best_seen.0 {
                best_seen = (m, a, b);
            }
            if m >= cfg.margin && best.is_none_or(|(ba, bb)| a + b < ba + bb) {
                best = Some((a, b));
            }
        }
    }
    let Some((mut alpha, mut beta)) = best else {
        return Err(Error::ConstantSearch {
            r,
            alpha: best_seen.1,
            beta: best_seen.2,
            best_margin: best_seen.0,
        });
    };
    // shrink each constant toward the largest infeasible value below it
    for _ in 0..2 {
        let (mut bad, mut good) = (0.0, alpha);
        for _ in 0..cfg.bisection_steps {
            let mid = 0.5 * (bad + good);
            if feasible(mid, beta)? >= cfg.margin {
                good = mid;
            } else {
                bad = mid;
            }
        }
        alpha = good;
        let (mut bad, mut good) = (0.0, beta);
        for _ in 0..cfg.bisection_steps {
            let mid = 0.5 * (bad + good);
            if feasible(alpha, mid)? >= cfg.margin {
                good = mid;
            } else {
                bad = mid;
            }
        }
        beta = good;
    }
    // headroom for the finer grids, which may see slightly worse points
    alpha *= 1.1;
    beta *= 1.1;

    let margins = variation_margins(r, alpha, beta, cfg.horizon, cfg.grid_points)?;
    let refined_margins = variation_margins(r, alpha, beta, cfg.horizon, 2 * cfg.grid_points)?;
    let worst = min_margin(&margins).min(min_margin(&refined_margins));
    if worst < cfg.margin {
        return Err(Error::ConstantSearch {
            r,
            alpha,
            beta,
            best_margin: worst,
        });
    }

    let mut zeta = lambda;
    let phi_checks = loop {
        let checks = cfg
            .phi_schedule
            .iter()
            .map(|&phi| phi_check(r, alpha, beta, zeta, phi, cfg.grid_points))
            .collect::<Result<Vec<_>>>()?;
        if checks.iter().all(PhiCheck::holds) {
            break checks;
        }
        zeta /= 2.0;
        if zeta < 1e-9 {
            return Err(Error::ConstantSearch {
                r,
                alpha,
                beta,
                best_margin: worst,
            });
        }
    };

    Ok(Certificate {
        r,
        alpha,
        beta,
        zeta,
        delta: 0.1,
        lambda,
        config: cfg.clone(),
        margins,
        refined_margins,
        phi_checks,
    })
}
