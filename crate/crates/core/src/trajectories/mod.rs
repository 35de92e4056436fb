//! Deterministic trajectories in scaled time: the open-vertex probability
//! `q`, the degree trajectories `s_ℓ`, their created/destroyed parts `s_ℓ^±`,
//! and the error functions `f_V`, `f_ℓ` that set the allowed band widths.

mod constants;
mod quad;
mod table;

use serde::{Deserialize, Serialize};

use crate::combin::binomial_u128;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use constants::{
    find_constants, find_constants_with, phi_check, variation_margins, Certificate,
    ConstantSearchConfig, InequalityMargin, PhiCheck,
};
pub use quad::adaptive_simpson;
pub use table::{build_table, TrajectoryTable};

/// Constants and scales the trajectories depend on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryParams<S> {
    pub r: usize,
    pub n: S,
    pub d: S,
    pub phi: S,
    pub delta: S,
    pub lambda: S,
    pub zeta: S,
    pub alpha: S,
    pub beta: S,
}

impl<S: Scalar> TrajectoryParams<S> {
    /// `δ = 1/10`, `λ = 1/(100r)`, `ζ = λ`; `α = β = 0` until constants are set.
    pub fn new(r: usize, n: S, d: S, phi: S) -> Result<Self> {
        if r < 3 {
            return Err(Error::invalid(format!("trajectories need r >= 3, got {r}")));
        }
        if !(phi > S::zero() && phi < S::one()) {
            return Err(Error::invalid(format!("phi must lie in (0,1), got {phi}")));
        }
        if !(n > S::zero() && d > S::zero()) {
            return Err(Error::invalid("N and D must be positive"));
        }
        let lambda = S::one() / S::from_usize_lossy(100 * r);
        Ok(TrajectoryParams {
            r,
            n,
            d,
            phi,
            delta: S::lit(0.1),
            lambda,
            zeta: lambda,
            alpha: S::zero(),
            beta: S::zero(),
        })
    }

    pub fn with_zeta(mut self, zeta: S) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn with_constants(mut self, alpha: S, beta: S) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }

    /// `D^{1/(r−1)}`.
    pub fn d_root(&self) -> S {
        self.d.powf(S::one() / self.rm1())
    }

    /// `D^{(ℓ−1)/(r−1)}`, the natural scale of `d_ℓ`.
    pub fn degree_scale(&self, ell: usize) -> S {
        self.d.powf(S::from_usize_lossy(ell - 1) / self.rm1())
    }

    /// `t_max = ζ log^{1/(r−1)}(1/φ)`.
    pub fn t_max(&self) -> S {
        self.zeta * (S::one() / self.phi).ln().powf(S::one() / self.rm1())
    }

    /// `i_max = N D^{−1/(r−1)} t_max`, not rounded.
    pub fn i_max(&self) -> S {
        self.n / self.d_root() * self.t_max()
    }

    pub fn t_of_i(&self, i: usize) -> S {
        t_of_i(S::from_usize_lossy(i), self.n, self.d, self.r)
    }

    fn rm1(&self) -> S {
        S::from_usize_lossy(self.r - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Selector for the error functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FKind {
    V,
    Ell(usize),
}

fn binom<S: Scalar>(n: usize, k: usize) -> S {
    S::from_u128(binomial_u128(n as u64, k as u64).unwrap_or(0)).expect("binomial fits")
}

fn check_ell(ell: usize, lo: usize, hi: usize) -> Result<()> {
    if (lo..=hi).contains(&ell) {
        Ok(())
    } else {
        Err(Error::invalid(format!("ell must lie in {lo}..={hi}, got {ell}")))
    }
}

/// Scaled time `t = D^{1/(r−1)} i / N`.
pub fn t_of_i<S: Scalar>(i: S, n: S, d: S, r: usize) -> S {
    d.powf(S::one() / S::from_usize_lossy(r - 1)) * i / n
}

/// `q(t) = exp(−t^{r−1})`.
pub fn q_of<S: Scalar>(t: S, r: usize) -> S {
    (-t.powi(r as i32 - 1)).exp()
}

pub fn q_prime<S: Scalar>(t: S, r: usize) -> S {
    -S::from_usize_lossy(r - 1) * t.powi(r as i32 - 2) * q_of(t, r)
}

pub fn q_second<S: Scalar>(t: S, r: usize) -> S {
    let k = S::from_usize_lossy(r - 1);
    let a = k * t.powi(r as i32 - 2);
    let da = if r == 3 {
        k
    } else {
        k * S::from_usize_lossy(r - 2) * t.powi(r as i32 - 3)
    };
    (a * a - da) * q_of(t, r)
}

/// `s_ℓ(t) = C(r−1,ℓ−1) D^{(ℓ−1)/(r−1)} t^{r−ℓ} q^{ℓ−1}`.
pub fn s_ell<S: Scalar>(t: S, ell: usize, p: &TrajectoryParams<S>) -> Result<S> {
    check_ell(ell, 2, p.r)?;
    Ok(p.degree_scale(ell) * s_ell_unit(t, ell, p.r))
}

/// `s_ℓ / D^{(ℓ−1)/(r−1)}`.
fn s_ell_unit<S: Scalar>(t: S, ell: usize, r: usize) -> S {
    binom::<S>(r - 1, ell - 1) * t.powi((r - ell) as i32) * q_of(t, r).powi(ell as i32 - 1)
}

/// Derivative of `s_ℓ^±` divided by `D^{(ℓ−1)/(r−1)}`.
fn rate_unit<S: Scalar>(t: S, ell: usize, sign: Sign, r: usize) -> S {
    let q = q_of(t, r);
    match sign {
        // ℓ s_{ℓ+1} / q, rescaled
        Sign::Plus => {
            S::from_usize_lossy(ell)
                * binom::<S>(r - 1, ell)
                * t.powi((r - ell - 1) as i32)
                * q.powi(ell as i32 - 1)
        }
        // (ℓ−1) s_ℓ s_2 / q, rescaled
        Sign::Minus => {
            S::from_usize_lossy((ell - 1) * (r - 1))
                * binom::<S>(r - 1, ell - 1)
                * t.powi((2 * r - ell - 2) as i32)
                * q.powi(ell as i32 - 1)
        }
    }
}

fn check_sign(ell: usize, sign: Sign, r: usize) -> Result<()> {
    match sign {
        Sign::Plus => check_ell(ell, 2, r - 1),
        Sign::Minus => check_ell(ell, 2, r),
    }
}

/// `(s_ℓ^±)′(t)`.
pub fn s_ell_pm_rate<S: Scalar>(t: S, ell: usize, sign: Sign, p: &TrajectoryParams<S>) -> Result<S> {
    check_sign(ell, sign, p.r)?;
    Ok(p.degree_scale(ell) * rate_unit(t, ell, sign, p.r))
}

/// `s_ℓ^+(t) = D^{−1/(r−1)} ∫_0^t ℓ s_{ℓ+1}/q` and
/// `s_ℓ^−(t) = D^{−1/(r−1)} ∫_0^t (ℓ−1) s_ℓ s_2/q`, by adaptive quadrature.
pub fn s_ell_pm<S: Scalar>(
    t: S,
    ell: usize,
    sign: Sign,
    p: &TrajectoryParams<S>,
    tol: S,
) -> Result<S> {
    Ok(p.degree_scale(ell) * s_ell_pm_unit(S::zero(), t, ell, sign, p, tol)?)
}

pub(crate) fn s_ell_pm_unit<S: Scalar>(
    from: S,
    to: S,
    ell: usize,
    sign: Sign,
    p: &TrajectoryParams<S>,
    tol: S,
) -> Result<S> {
    check_sign(ell, sign, p.r)?;
    let r = p.r;
    adaptive_simpson(|x| rate_unit(x, ell, sign, r), from, to, tol)
}

/// Closed form `s_r^−(t) = D (1 − q^{r−1})`.
pub fn s_r_minus_closed<S: Scalar>(t: S, p: &TrajectoryParams<S>) -> S {
    p.d * (S::one() - q_of(t, p.r).powi(p.r as i32 - 1))
}

/// `(m, k)` with `f = (1 + t^m) q^k exp(αt + βt^{r−1})`.
fn f_shape(kind: FKind, r: usize) -> Result<(i32, i32)> {
    match kind {
        FKind::V => Ok((2, 2)),
        FKind::Ell(ell) => {
            check_ell(ell, 2, r)?;
            Ok(((r - ell + 2) as i32, ell as i32))
        }
    }
}

/// `f`, `f′`, `f″` divided by `exp(αt + βt^{r−1})`, so large exponents never overflow.
pub(crate) fn f_reduced<S: Scalar>(
    t: S,
    kind: FKind,
    r: usize,
    alpha: S,
    beta: S,
) -> Result<[S; 3]> {
    let (m, k) = f_shape(kind, r)?;
    let ms = S::from_i32(m).unwrap();
    let rm1 = S::from_usize_lossy(r - 1);
    let qk = q_of(t, r).powi(k);
    let pp = S::one() + t.powi(m);
    let dp = ms * t.powi(m - 1);
    let ddp = ms * (ms - S::one()) * t.powi(m - 2);
    // g = αt + (β − k) t^{r−1}
    let c = beta - S::from_i32(k).unwrap();
    let dg = alpha + c * rm1 * t.powi(r as i32 - 2);
    let ddg = if r == 3 {
        c * rm1
    } else {
        c * rm1 * S::from_usize_lossy(r - 2) * t.powi(r as i32 - 3)
    };
    // f = P e^g, so f′ = (P′ + P g′) e^g and e^g = q^k e^{αt+βt^{r−1}}
    Ok([
        pp * qk,
        (dp + pp * dg) * qk,
        (ddp + S::lit(2.0) * dp * dg + pp * (ddg + dg * dg)) * qk,
    ])
}

fn exp_factor<S: Scalar>(t: S, p: &TrajectoryParams<S>) -> S {
    (p.alpha * t + p.beta * t.powi(p.r as i32 - 1)).exp()
}

/// `f_ℓ = (1 + t^{r−ℓ+2}) q^ℓ e^{αt+βt^{r−1}}` or `f_V = (1 + t²) q² e^{αt+βt^{r−1}}`.
pub fn f_func<S: Scalar>(t: S, kind: FKind, p: &TrajectoryParams<S>) -> Result<S> {
    Ok(f_reduced(t, kind, p.r, p.alpha, p.beta)?[0] * exp_factor(t, p))
}

pub fn f_prime<S: Scalar>(t: S, kind: FKind, p: &TrajectoryParams<S>) -> Result<S> {
    Ok(f_reduced(t, kind, p.r, p.alpha, p.beta)?[1] * exp_factor(t, p))
}

pub fn f_second<S: Scalar>(t: S, kind: FKind, p: &TrajectoryParams<S>) -> Result<S> {
    Ok(f_reduced(t, kind, p.r, p.alpha, p.beta)?[2] * exp_factor(t, p))
}
