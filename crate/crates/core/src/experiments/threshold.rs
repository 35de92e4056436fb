//! Probability that `H_{n,p,w}` contains an `r`-sunflower, across
//! `p = c (N D)^{−1/r}`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{expected_xr, sample_hnpw};
use crate::error::{Error, Result};
use crate::rng::trial_seed;
use crate::sunflower::{count_d, count_n, verify_family, SFParams};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959964;

/// Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    pub n: u64,
    pub w: u64,
    pub r: usize,
    pub multipliers: Vec<f64>,
    pub trials: u64,
    pub seed_base: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub c: f64,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub expected_xr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdTable {
    pub config: ThresholdConfig,
    pub rows: Vec<ThresholdRow>,
}

impl ThresholdTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "c,p,trials,successes,p_hat,ci_lo,ci_hi")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.c, r.p, r.trials, r.successes, r.p_hat, r.ci_lo, r.ci_hi
            )?;
        }
        Ok(())
    }

    /// `p̂` never drops by more than the overlap of consecutive intervals allows.
    pub fn is_monotone_within_ci(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].ci_hi >= w[0].ci_lo)
    }
}

/// Trial `k` uses seed `seed_base + k` for every multiplier, so the sampled
/// families are nested across `c` within a trial.
pub fn threshold_experiment(cfg: &ThresholdConfig) -> Result<ThresholdTable> {
    if cfg.trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let params = SFParams::new(cfg.n, cfg.w, cfg.r)?;
    let ln_nd = count_n(cfg.n, cfg.w).ln() + count_d(&params).ln();
    let scale = (-ln_nd / cfg.r as f64).exp();
    let mut rows = Vec::with_capacity(cfg.multipliers.len());
    for &c in &cfg.multipliers {
        let p = (c * scale).clamp(0.0, 1.0);
        let hits: Vec<bool> = (0..cfg.trials)
            .into_par_iter()
            .map(|k| -> Result<bool> {
                let fam = sample_hnpw(cfg.n as u32, cfg.w as u32, p, trial_seed(cfg.seed_base, k))?;
                Ok(!verify_family(&fam, cfg.r).sunflower_free)
            })
            .collect::<Result<_>>()?;
        let successes = hits.iter().filter(|&&h| h).count() as u64;
        let (ci_lo, ci_hi) = wilson_interval(successes, cfg.trials, WILSON_Z);
        rows.push(ThresholdRow {
            c,
            p,
            trials: cfg.trials,
            successes,
            p_hat: successes as f64 / cfg.trials as f64,
            ci_lo,
            ci_hi,
            expected_xr: expected_xr(&params, p),
        });
    }
    Ok(ThresholdTable {
        config: cfg.clone(),
        rows,
    })
}
