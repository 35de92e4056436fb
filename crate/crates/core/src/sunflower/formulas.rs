//! Closed-form counts for `ℋ_{n,w}`: `N`, the degree `D`, the dominant kernel
//! size, set-degree and codegree bounds, `φ`, `κ`, and the spread arithmetic.
//!
//! Every count is returned as a [`LogScaleNumber`]: the log-gamma magnitude is
//! always present and the exact integer is attached whenever it is cheap.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::combin::{binomial_big, factorial_big};
use crate::error::{Error, Result};

/// Exact values are attached only below this magnitude (about 8700 digits).
const EXACT_LN_CAP: f64 = 20_000.0;
/// ... and only when the loops building them stay short.
const EXACT_W_CAP: u64 = 400;

fn ln_fact(k: i64) -> f64 {
    debug_assert!(k >= 0);
    ln_gamma(k as f64 + 1.0)
}

fn ln_binom(n: i64, k: i64) -> f64 {
    if n < 0 || k < 0 || k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k <= 2000 {
        // direct sum avoids cancellation between huge log-gammas
        return (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum();
    }
    ln_fact(n) - ln_fact(k) - ln_fact(n - k)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// A nonnegative count carried as a natural-log magnitude, with the exact
/// value when available.
#[derive(Clone, Debug, PartialEq)]
pub struct LogScaleNumber {
    ln: f64,
    exact: Option<BigUint>,
}

impl LogScaleNumber {
    pub fn new(ln: f64, exact: Option<BigUint>) -> Self {
        LogScaleNumber { ln, exact }
    }

    pub fn from_exact(x: BigUint) -> Self {
        let ln = if x.is_zero() {
            f64::NEG_INFINITY
        } else {
            crate::combin::ln_big(&x)
        };
        LogScaleNumber { ln, exact: Some(x) }
    }

    /// Natural log; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        self.ln
    }

    pub fn exact(&self) -> Option<&BigUint> {
        self.exact.as_ref()
    }

    pub fn exact_u128(&self) -> Option<u128> {
        self.exact.as_ref().and_then(|x| x.to_u128())
    }

    /// `exp(ln)`; may be infinite.
    pub fn to_f64(&self) -> f64 {
        match &self.exact {
            Some(x) if x.bits() < 1000 => x.to_f64().unwrap(),
            _ => self.ln.exp(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// Relative disagreement between the log magnitude and the exact value.
    pub fn consistency_error(&self) -> Option<f64> {
        let x = self.exact.as_ref()?;
        if x.is_zero() {
            return Some(if self.is_zero() { 0.0 } else { f64::INFINITY });
        }
        let exact_ln = crate::combin::ln_big(x);
        Some((exact_ln - self.ln).abs() / exact_ln.abs().max(1.0))
    }
}

impl std::fmt::Display for LogScaleNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.exact {
            Some(x) if x.bits() <= 64 => write!(f, "{x}"),
            _ => write!(f, "exp({})", self.ln),
        }
    }
}

/// Parameters `(n, w, r)` of the sunflower-free process.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SFParams {
    pub n: u64,
    pub w: u64,
    pub r: usize,
}

impl SFParams {
    pub fn new(n: u64, w: u64, r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::invalid(format!("r = {r} must be at least 3")));
        }
        if w < 1 || w >= n {
            return Err(Error::invalid(format!("need 1 <= w < n, got w = {w}, n = {n}")));
        }
        Ok(SFParams { n, w, r })
    }

    fn exact_ok(&self, ln: f64) -> bool {
        self.w <= EXACT_W_CAP && ln <= EXACT_LN_CAP
    }
}

/// `N = C(n, w)`.
pub fn count_n(n: u64, w: u64) -> LogScaleNumber {
    let ln = ln_binom(n as i64, w as i64);
    let exact = (w.min(n.saturating_sub(w)) <= 5000 && ln <= EXACT_LN_CAP)
        .then(|| binomial_big(n as i64, w as i64));
    LogScaleNumber::new(ln, exact)
}

/// `ln D_s`, or `-inf` when the term vanishes.
fn ln_d_term(p: &SFParams, s: u64) -> f64 {
    let (n, w, r, s) = (p.n as i64, p.w as i64, p.r as i64, s as i64);
    let tail = n - r * w + (r - 1) * s;
    if tail < 0 || n < w {
        return f64::NEG_INFINITY;
    }
    ln_fact(w) + ln_fact(n - w) - ln_fact(r - 1) - ln_fact(s) - r as f64 * ln_fact(w - s) - ln_fact(tail)
}

/// `D_s · (r−1)!`, the ordered count of petal choices for kernel size `s`.
fn d_term_ordered(p: &SFParams, s: u64) -> BigUint {
    let (n, w, s) = (p.n as i64, p.w as i64, s as i64);
    let mut acc = binomial_big(w, s);
    for i in 1..p.r as i64 {
        if acc.is_zero() {
            break;
        }
        acc *= binomial_big(n - i * w + (i - 1) * s, w - s);
    }
    acc
}

/// The degree `D` of `ℋ_{n,w}`: the number of `r`-sunflowers through a fixed
/// `w`-set, summed over kernel sizes `s = 0..w−1`.
pub fn count_d(p: &SFParams) -> LogScaleNumber {
    let terms: Vec<f64> = (0..p.w).map(|s| ln_d_term(p, s)).collect();
    let ln = log_sum_exp(&terms);
    let exact = p.exact_ok(ln).then(|| {
        let total: BigUint = (0..p.w).map(|s| d_term_ordered(p, s)).sum();
        total / factorial_big(p.r as u64 - 1)
    });
    LogScaleNumber::new(ln, exact)
}

/// Exact `D_s` for each kernel size (used by tests and reports).
pub fn d_terms_exact(p: &SFParams) -> Vec<BigUint> {
    let f = factorial_big(p.r as u64 - 1);
    (0..p.w).map(|s| d_term_ordered(p, s) / &f).collect()
}

fn falling(x: i64, k: usize) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for j in 0..k as i64 {
        let f = x - j;
        if f <= 0 {
            return BigUint::zero();
        }
        acc *= f as u64;
    }
    acc
}

/// Kernel size of the largest term `D_s`, scanning the ratio
/// `D_{s+1}/D_s = (w−s)^r / ((s+1)·(n−w−(r−1)(w−s−1))_{r−1})` from the first
/// nonzero term until it drops to at most 1. `None` when `D = 0`.
pub fn dominant_kernel_size(p: &SFParams) -> Option<u64> {
    let (n, w, r) = (p.n as i64, p.w as i64, p.r);
    let rr = r as i64;
    let mut s = (0..w).find(|&s| n - rr * w + (rr - 1) * s >= 0)?;
    while s < w - 1 {
        let num = BigUint::from((w - s) as u64).pow(r as u32);
        let den = BigUint::from((s + 1) as u64) * falling(n - w - (rr - 1) * (w - s - 1), r - 1);
        if num <= den {
            break;
        }
        s += 1;
    }
    Some(s as u64)
}

/// `g(s)`, the number of ordered completions of a fixed `ℓ`-sunflower with
/// kernel size `s` into an `r`-sunflower, for every `s = 0..w−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaEllBound {
    pub ell: usize,
    pub g: Vec<LogScaleNumber>,
}

impl DeltaEllBound {
    pub fn g0(&self) -> &LogScaleNumber {
        &self.g[0]
    }

    /// Kernel size of the largest `g(s)`.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (s, g) in self.g.iter().enumerate() {
            if g.ln() > self.g[best].ln() {
                best = s;
            }
        }
        best
    }

    pub fn max(&self) -> &LogScaleNumber {
        &self.g[self.argmax()]
    }
}

pub fn delta_ell_bound(p: &SFParams, ell: usize) -> Result<DeltaEllBound> {
    if ell < 2 || ell >= p.r {
        return Err(Error::invalid(format!("need 2 <= ell <= r-1, got ell = {ell}")));
    }
    let (n, w, r, l) = (p.n as i64, p.w as i64, p.r as i64, ell as i64);
    let g = (0..w)
        .map(|s| {
            let top = n - l * w + (l - 1) * s;
            let tail = n - r * w + (r - 1) * s;
            let ln = if tail < 0 || top < 0 {
                f64::NEG_INFINITY
            } else {
                ln_fact(top) - (r - l) as f64 * ln_fact(w - s) - ln_fact(tail)
            };
            let exact = p.exact_ok(ln).then(|| {
                (l..r).fold(BigUint::from(1u32), |acc, i| {
                    acc * binomial_big(n - i * w + (i - 1) * s, w - s)
                })
            });
            LogScaleNumber::new(ln, exact)
        })
        .collect();
    Ok(DeltaEllBound { ell, g })
}

/// Sum over kernels `K ⊆ W_0 ∩ W_1` (with `|W_0 ∩ W_1| = t`) of the ordered
/// completions `(W_2, …, W_r)` shared by two fixed `w`-sets.
pub fn codegree_formula(p: &SFParams, t: u64) -> Result<LogScaleNumber> {
    if t >= p.w {
        return Err(Error::invalid(format!("need t < w, got t = {t}")));
    }
    let (n, w, r, t) = (p.n as i64, p.w as i64, p.r as i64, t as i64);
    let base = n - 2 * w + t;
    let terms: Vec<f64> = (0..=t)
        .map(|s| {
            let tail = n + t - (r + 1) * w + (r - 1) * s;
            if base < 0 || tail < 0 {
                return f64::NEG_INFINITY;
            }
            ln_fact(t) + ln_fact(base)
                - ln_fact(s)
                - ln_fact(t - s)
                - (r - 1) as f64 * ln_fact(w - s)
                - ln_fact(tail)
        })
        .collect();
    let ln = log_sum_exp(&terms);
    let exact = p.exact_ok(ln).then(|| {
        (0..=t)
            .map(|s| {
                (1..r).fold(binomial_big(t, s), |acc, i| {
                    acc * binomial_big(base - (i - 1) * (w - s), w - s)
                })
            })
            .sum::<BigUint>()
    });
    Ok(LogScaleNumber::new(ln, exact))
}

/// The `(r−1)`-codegree itself: the ordered count divided by `(r−1)!`.
pub fn codegree_unordered(p: &SFParams, t: u64) -> Result<LogScaleNumber> {
    let ordered = codegree_formula(p, t)?;
    let ln = ordered.ln() - ln_fact(p.r as i64 - 1);
    let exact = ordered.exact().map(|x| x / factorial_big(p.r as u64 - 1));
    Ok(LogScaleNumber::new(ln, exact))
}

/// `φ = exp(−w²/(10n))`.
pub fn phi_sf(n: u64, w: u64) -> f64 {
    (-((w * w) as f64) / (10.0 * n as f64)).exp()
}

/// `κ(n,w) = (w²/(nD))^{1/(r−1)}`.
pub fn kappa(p: &SFParams) -> f64 {
    let ln_d = count_d(p).ln();
    ((2.0 * (p.w as f64).ln() - (p.n as f64).ln() - ln_d) / (p.r as f64 - 1.0)).exp()
}

/// The final-size lower bound `N (log(1/φ)/D)^{1/(r−1)}` and its equivalent
/// form `10^{−1/(r−1)} (w²/n)^{1/(r−1)} N D^{−1/(r−1)}`, both as logs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremBound {
    pub ln_bound: f64,
    pub ln_alternative: f64,
    pub ln_n: f64,
}

impl TheoremBound {
    pub fn value(&self) -> f64 {
        self.ln_bound.exp()
    }
}

pub fn theorem_lower_bound(p: &SFParams) -> TheoremBound {
    let ln_n = count_n(p.n, p.w).ln();
    let ln_d = count_d(p).ln();
    let rm1 = p.r as f64 - 1.0;
    let ln_inv_phi = (p.w * p.w) as f64 / (10.0 * p.n as f64);
    let ln_bound = ln_n + (ln_inv_phi.ln() - ln_d) / rm1;
    let w2n = (p.w * p.w) as f64 / p.n as f64;
    let ln_alternative = ln_n + (w2n.ln() - 10f64.ln() - ln_d) / rm1;
    TheoremBound {
        ln_bound,
        ln_alternative,
        ln_n,
    }
}

/// `ψ(rs, r, s) = (rs)!/(r!(s!)^r)`: unordered partitions of an `rs`-set into
/// `r` blocks of size `s`.
pub fn spread_psi(r: u64, s: u64) -> BigUint {
    factorial_big(r * s) / (factorial_big(r) * factorial_big(s).pow(r as u32))
}

fn ln_psi(r: i64, s: i64) -> f64 {
    ln_fact(r * s) - ln_fact(r) - r as f64 * ln_fact(s)
}

/// Spread data for the hypergraph of `r`-sunflowers with kernel size `t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpreadReport {
    pub t: u64,
    /// `ln κ` with `κ = n^{w−t} / (c e^{w−t−1} (w−t)! r)`.
    pub ln_kappa: f64,
    /// `ln |E| = ln [C(n,t) C(n−t, r(w−t)) ψ(r(w−t), r, w−t)]`.
    pub ln_edges: f64,
    /// `ln m` with `m = K e^{2w−t} r n^t log r`.
    pub ln_m_threshold: f64,
}

pub fn spread_kappa(p: &SFParams, t: u64, c: f64, k_const: f64) -> Result<SpreadReport> {
    if t >= p.w {
        return Err(Error::invalid(format!("need t < w, got t = {t}")));
    }
    let (n, w, r, t_) = (p.n as i64, p.w as i64, p.r as i64, t as i64);
    let petal = w - t_;
    let ln_n = (n as f64).ln();
    let ln_r = (r as f64).ln();
    let ln_kappa = petal as f64 * ln_n - c.ln() - (petal - 1) as f64 - ln_fact(petal) - ln_r;
    let ln_edges = ln_binom(n, t_) + ln_binom(n - t_, r * petal) + ln_psi(r, petal);
    let ln_m_threshold = k_const.ln() + (2 * w - t_) as f64 + ln_r + t_ as f64 * ln_n + ln_r.ln();
    Ok(SpreadReport {
        t,
        ln_kappa,
        ln_edges,
        ln_m_threshold,
    })
}

/// Exact log-magnitudes of `N` and `D` against their leading-order expansions
/// `w + w log(n/w) − w²/2n` and `(r−1)(w + w log(n/w)) − (r²−1)w²/2n`, with
/// residuals in units of `w²/n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub n: u64,
    pub w: u64,
    pub r: usize,
    pub ln_n: f64,
    pub ln_n_expansion: f64,
    pub ln_d: f64,
    pub ln_d_expansion: f64,
    /// `(ln N − expansion) / (w²/n)`.
    pub resid_n: f64,
    pub resid_d: f64,
}

/// `w = ⌊n^α⌋`.
pub fn asymptotic_check(n: u64, alpha: f64, r: usize) -> Result<AsymptoticReport> {
    let w = (n as f64).powf(alpha).floor() as u64;
    let p = SFParams::new(n, w, r)?;
    let (nf, wf, rf) = (n as f64, w as f64, r as f64);
    let scale = wf * wf / nf;
    let lead = wf + wf * (nf / wf).ln();
    let ln_n_expansion = lead - scale / 2.0;
    let ln_d_expansion = (rf - 1.0) * lead - scale * (rf * rf - 1.0) / 2.0;
    let ln_n = ln_binom(n as i64, w as i64);
    let ln_d = count_d(&p).ln();
    Ok(AsymptoticReport {
        n,
        w,
        r,
        ln_n,
        ln_n_expansion,
        ln_d,
        ln_d_expansion,
        resid_n: (ln_n - ln_n_expansion) / scale,
        resid_d: (ln_d - ln_d_expansion) / scale,
    })
}
