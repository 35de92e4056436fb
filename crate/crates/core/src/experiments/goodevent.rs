//! Evaluates the good-event conditions and the `Z` variables along a
//! recorded run.
//!
//! At any feasible size the hypotheses behind the a.a.s. statement
//! (`φ ≤ log^{−Θ(r)} N` and friends) fail by many orders of magnitude, so the
//! report is a diagnostic: it gives slack ratios and sign fractions, and `τ`
//! is simply the first recorded violation.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{i_max, RunLog, StatSnapshot};
use crate::trajectories::{f_func, q_of, s_ell_pm, FKind, Sign, TrajectoryParams};

/// The crude-bound thresholds `D_{a↑b}`, `D_{1↑b}`, `C_{a,a′→k}`, `D′_ℓ`, `D″_ℓ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodEventThresholds {
    pub r: usize,
    pub d: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl GoodEventThresholds {
    pub fn new(r: usize, d: f64, phi: f64) -> Self {
        GoodEventThresholds {
            r,
            d,
            phi,
            lambda: 1.0 / (100.0 * r as f64),
        }
    }

    fn dpow(&self, num: i64) -> f64 {
        self.d.powf(num as f64 / (self.r as f64 - 1.0))
    }

    fn phipow(&self, lambda_coeff: i64, one: bool) -> f64 {
        let e = if one { 1.0 } else { 0.0 } - lambda_coeff as f64 * self.lambda;
        self.phi.powf(e)
    }

    /// `D_{1↑b} = D^{(b−1)/(r−1)} φ^{−(2r−2b)λ}` for `a = 1`,
    /// `D_{a↑b} = D^{(b−a)/(r−1)} φ^{1−(2r−2b)λ}` for `2 ≤ a < b ≤ r`.
    pub fn set_degree(&self, a: usize, b: usize) -> f64 {
        assert!(1 <= a && a < b && b <= self.r);
        let r = self.r as i64;
        let coeff = 2 * r - 2 * b as i64;
        self.dpow(b as i64 - a as i64) * self.phipow(coeff, a >= 2)
    }

    /// `C_{a,a′→k} = 2^r D^{(a+a′−k−2)/(r−1)} φ^{1−(4r−2k−2)λ}` for
    /// `2 ≤ a, a′ ≤ r` and `1 ≤ k < min(a, a′)`.
    pub fn codegree(&self, a: usize, a2: usize, k: usize) -> Option<f64> {
        let ok = (2..=self.r).contains(&a) && (2..=self.r).contains(&a2) && k >= 1 && k < a.min(a2);
        if !ok {
            return None;
        }
        let r = self.r as i64;
        let coeff = 4 * r - 2 * k as i64 - 2;
        Some(2f64.powi(self.r as i32) * self.dpow((a + a2) as i64 - k as i64 - 2) * self.phipow(coeff, true))
    }

    /// `D′_ℓ = D^{(ℓ−1)/(r−1)} φ^{1−(4r−2ℓ)λ}`.
    pub fn d_prime(&self, ell: usize) -> f64 {
        let r = self.r as i64;
        self.dpow(ell as i64 - 1) * self.phipow(4 * r - 2 * ell as i64, true)
    }

    /// `D″_ℓ = D^{(ℓ−1)/(r−1)} φ^{1−(2r−2ℓ)λ}`.
    pub fn d_dprime(&self, ell: usize) -> f64 {
        let r = self.r as i64;
        self.dpow(ell as i64 - 1) * self.phipow(2 * r - 2 * ell as i64, true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `|V(i)| ∈ Nq ± Nφ^δ f_V`
    OpenVertices,
    /// `d_ℓ^±(v) ∈ s_ℓ^± ± D^{(ℓ−1)/(r−1)} φ^δ f_ℓ` for unmarked open `v`
    DegreeBands,
    /// `d_{A↑b} ≤ D_{a↑b}`
    SetDegrees,
    /// `c_{a,a′→k}(v,v′) ≤ C_{a,a′→k}` on non-bad pairs
    Codegrees,
    /// `d′_ℓ(v) ≤ D′_ℓ`
    DPrime,
    /// `d″_ℓ(v) ≤ D″_ℓ`
    DDoublePrime,
}

impl Condition {
    pub const ALL: [Condition; 6] = [
        Condition::OpenVertices,
        Condition::DegreeBands,
        Condition::SetDegrees,
        Condition::Codegrees,
        Condition::DPrime,
        Condition::DDoublePrime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Condition::OpenVertices => "open_vertices",
            Condition::DegreeBands => "degree_bands",
            Condition::SetDegrees => "set_degrees",
            Condition::Codegrees => "codegrees",
            Condition::DPrime => "d_prime",
            Condition::DDoublePrime => "d_double_prime",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: Condition,
    /// False when the snapshot lacks the data (for example no diagnostics).
    pub checked: bool,
    pub holds: bool,
    /// Largest observed/allowed ratio; `≤ 1` means the condition holds.
    pub worst_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointReport {
    pub step: usize,
    pub t: f64,
    pub open: usize,
    /// `|V(i)| − Nq − Nφ^δ f_V`.
    pub z_v: f64,
    /// `|V(i)| − Nq + Nφ^δ f_V`, the lower-band counterpart.
    pub z_v_lower: f64,
    /// Per `ℓ = 2..=r`: max over unmarked tracked `v` of `d_ℓ^+ − s_ℓ^+ − band`
    /// (`None` for `ℓ = r`, where no edges are created).
    pub z_plus_max: Vec<Option<f64>>,
    pub z_minus_max: Vec<f64>,
    /// Per `ℓ`: min over unmarked tracked `v` of `d_ℓ^± − s_ℓ^± + band`.
    pub z_plus_lower_min: Vec<Option<f64>>,
    pub z_minus_lower_min: Vec<f64>,
    pub tracked_unmarked: usize,
    /// Incremental `d_ℓ(0) + d_ℓ^+ − d_ℓ^−` agrees with the live recount for every tracked vertex.
    pub bookkeeping_ok: bool,
    pub conditions: Vec<ConditionResult>,
}

impl CheckpointReport {
    pub fn all_hold(&self) -> bool {
        self.conditions.iter().all(|c| !c.checked || c.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodEventReport {
    pub params: TrajectoryParams<f64>,
    pub thresholds: GoodEventThresholds,
    pub i_max: usize,
    pub checkpoints: Vec<CheckpointReport>,
    /// First step `≤ i_max` at which a checked condition fails, if any.
    pub first_violation: Option<usize>,
    /// `τ`: the first violation, or `i_max`.
    pub tau: usize,
    /// Fraction of steps `0..=min(i_max, last)` with `Z_V < 0`.
    pub fraction_z_v_negative: f64,
    pub note: String,
}

impl GoodEventReport {
    /// Structured text: one line per condition per checkpoint.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {}", self.note)?;
        writeln!(
            out,
            "# i_max={} tau={} first_violation={} fraction_z_v_negative={}",
            self.i_max,
            self.tau,
            self.first_violation.map_or("none".to_string(), |s| s.to_string()),
            self.fraction_z_v_negative
        )?;
        for c in &self.checkpoints {
            writeln!(
                out,
                "step={} t={} open={} z_v={} z_v_lower={} bookkeeping={}",
                c.step, c.t, c.open, c.z_v, c.z_v_lower, c.bookkeeping_ok
            )?;
            for cond in &c.conditions {
                let status = match (cond.checked, cond.holds) {
                    (false, _) => "unchecked",
                    (true, true) => "holds",
                    (true, false) => "VIOLATED",
                };
                writeln!(
                    out,
                    "step={} condition={} status={} worst_ratio={}",
                    c.step,
                    cond.condition.name(),
                    status,
                    cond.worst_ratio
                )?;
            }
        }
        Ok(())
    }
}

fn ratio_result(condition: Condition, ratios: impl IntoIterator<Item = f64>) -> ConditionResult {
    let worst = ratios.into_iter().fold(0.0, f64::max);
    ConditionResult {
        condition,
        checked: true,
        holds: worst <= 1.0,
        worst_ratio: worst,
    }
}

fn unchecked(condition: Condition) -> ConditionResult {
    ConditionResult {
        condition,
        checked: false,
        holds: true,
        worst_ratio: f64::NAN,
    }
}

/// `(Z_V, Z̃_V)` at step `i` with `|V(i)| = open`.
fn z_v(p: &TrajectoryParams<f64>, i: usize, open: usize) -> Result<(f64, f64, f64)> {
    let t = p.t_of_i(i);
    let base = open as f64 - p.n * q_of(t, p.r);
    let band = p.n * p.phi.powf(p.delta) * f_func(t, FKind::V, p)?;
    Ok((base - band, base + band, band))
}

fn checkpoint(
    snap: &StatSnapshot,
    p: &TrajectoryParams<f64>,
    th: &GoodEventThresholds,
) -> Result<CheckpointReport> {
    let r = p.r;
    let t = p.t_of_i(snap.step);
    let (zv, zv_lower, band_v) = z_v(p, snap.step, snap.open)?;
    let mut conditions = vec![ratio_result(
        Condition::OpenVertices,
        [(zv + band_v).abs() / band_v],
    )];

    let pd = p.phi.powf(p.delta);
    let mut s_plus = vec![0.0; r + 1];
    let mut s_minus = vec![0.0; r + 1];
    let mut bands = vec![0.0; r + 1];
    for ell in 2..=r {
        if ell < r {
            s_plus[ell] = s_ell_pm(t, ell, Sign::Plus, p, 1e-10)?;
        }
        s_minus[ell] = s_ell_pm(t, ell, Sign::Minus, p, 1e-10)?;
        bands[ell] = p.degree_scale(ell) * pd * f_func(t, FKind::Ell(ell), p)?;
    }
    let mut z_plus_max = vec![None; r - 1];
    let mut z_minus_max = vec![f64::NEG_INFINITY; r - 1];
    let mut z_plus_lower_min = vec![None; r - 1];
    let mut z_minus_lower_min = vec![f64::INFINITY; r - 1];
    let mut band_ratios = Vec::new();
    let mut tracked_unmarked = 0;
    for vs in snap.vertices.iter().filter(|v| !v.marked) {
        tracked_unmarked += 1;
        for ell in 2..=r {
            let k = ell - 2;
            if ell < r {
                let dev = vs.plus[k] as f64 - s_plus[ell];
                let hi = z_plus_max[k].map_or(dev - bands[ell], |z: f64| z.max(dev - bands[ell]));
                let lo = z_plus_lower_min[k].map_or(dev + bands[ell], |z: f64| z.min(dev + bands[ell]));
                z_plus_max[k] = Some(hi);
                z_plus_lower_min[k] = Some(lo);
                band_ratios.push(dev.abs() / bands[ell]);
            }
            let dev = vs.minus[k] as f64 - s_minus[ell];
            z_minus_max[k] = z_minus_max[k].max(dev - bands[ell]);
            z_minus_lower_min[k] = z_minus_lower_min[k].min(dev + bands[ell]);
            band_ratios.push(dev.abs() / bands[ell]);
        }
    }
    conditions.push(ratio_result(Condition::DegreeBands, band_ratios));

    match &snap.diagnostics {
        Some(diag) => {
            conditions.push(ratio_result(
                Condition::SetDegrees,
                diag.set_degree_max
                    .iter()
                    .map(|s| s.max as f64 / th.set_degree(s.a, s.b)),
            ));
            conditions.push(ratio_result(
                Condition::Codegrees,
                diag.codegree_max
                    .iter()
                    .filter_map(|c| th.codegree(c.a, c.a2, c.k).map(|cap| c.max as f64 / cap)),
            ));
        }
        None => {
            conditions.push(unchecked(Condition::SetDegrees));
            conditions.push(unchecked(Condition::Codegrees));
        }
    }
    let per_vertex = |get: fn(&crate::process::VertexStats) -> &Vec<u32>, cap: &dyn Fn(usize) -> f64| {
        snap.vertices
            .iter()
            .flat_map(|vs| (2..=r).map(move |ell| (vs, ell)))
            .map(|(vs, ell)| get(vs)[ell - 2] as f64 / cap(ell))
            .collect::<Vec<_>>()
    };
    conditions.push(ratio_result(
        Condition::DPrime,
        per_vertex(|v| &v.d_prime, &|l| th.d_prime(l)),
    ));
    conditions.push(ratio_result(
        Condition::DDoublePrime,
        per_vertex(|v| &v.d_dprime, &|l| th.d_dprime(l)),
    ));

    Ok(CheckpointReport {
        step: snap.step,
        t,
        open: snap.open,
        z_v: zv,
        z_v_lower: zv_lower,
        z_plus_max,
        z_minus_max,
        z_plus_lower_min,
        z_minus_lower_min,
        tracked_unmarked,
        bookkeeping_ok: snap.vertices.iter().all(|v| v.bookkeeping_holds()),
        conditions,
    })
}

/// Checks every snapshot of `log` (which must start at step 0 with tracked
/// vertices) and condition (10) at every recorded step.
pub fn good_event_check(
    log: &RunLog,
    params: &TrajectoryParams<f64>,
    thresholds: &GoodEventThresholds,
) -> Result<GoodEventReport> {
    let first = log
        .snapshots
        .first()
        .ok_or_else(|| Error::MissingSnapshots("run has no snapshots".into()))?;
    if first.step != 0 {
        return Err(Error::MissingSnapshots("first snapshot is not at step 0".into()));
    }
    if first.vertices.is_empty() {
        return Err(Error::MissingSnapshots("snapshots carry no tracked vertices".into()));
    }
    if params.r != log.header.r {
        return Err(Error::invalid(format!(
            "params have r = {}, run has r = {}",
            params.r, log.header.r
        )));
    }
    let imax = i_max(params.n, params.d, params.phi, params.zeta, params.r) as usize;

    let mut first_violation = None;
    let mut negative = 0usize;
    let mut counted = 0usize;
    let opens = std::iter::once((0, log.header.n_vertices)).chain(log.steps.iter().map(|s| (s.step, s.open)));
    for (i, open) in opens.take_while(|&(i, _)| i <= imax) {
        let (zv, zv_lower, _) = z_v(params, i, open)?;
        counted += 1;
        if zv < 0.0 {
            negative += 1;
        }
        if first_violation.is_none() && (zv > 0.0 || zv_lower < 0.0) {
            first_violation = Some(i);
        }
    }

    let checkpoints = log
        .snapshots
        .iter()
        .map(|s| checkpoint(s, params, thresholds))
        .collect::<Result<Vec<_>>>()?;
    for c in checkpoints.iter().filter(|c| c.step <= imax) {
        if !c.all_hold() {
            first_violation = Some(first_violation.map_or(c.step, |f: usize| f.min(c.step)));
        }
    }

    let mut note = String::new();
    let _ = write!(
        note,
        "diagnostic only: the asymptotic hypotheses (phi <= log^(-300r) N) cannot hold at N = {}",
        params.n
    );
    Ok(GoodEventReport {
        params: *params,
        thresholds: thresholds.clone(),
        i_max: imax,
        checkpoints,
        first_violation,
        tau: first_violation.unwrap_or(imax),
        fraction_z_v_negative: negative as f64 / counted.max(1) as f64,
        note,
    })
}
