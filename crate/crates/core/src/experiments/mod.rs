//! Monte Carlo and diagnostic experiments: random `w`-uniform families and
//! their sunflower counts, the `X_r > 0` threshold, the good-event checker and
//! trajectory comparisons along engine runs.

mod compare;
mod goodevent;
mod threshold;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial_u128, for_each_subset};
use crate::error::{Error, Result};
use crate::rng;
use crate::sunflower::{count_d, count_n, is_sunflower, SFParams, WSet, WSetFamily};

pub use compare::{trajectory_comparison, DeviationRow, TrajectoryComparison};
pub use goodevent::{
    good_event_check, CheckpointReport, Condition, ConditionResult, GoodEventReport,
    GoodEventThresholds,
};
pub use threshold::{
    threshold_experiment, wilson_interval, ThresholdConfig, ThresholdRow, ThresholdTable, WILSON_Z,
};

/// Cap on `C(n, w)` for the samplers.
pub const SAMPLE_CAP: u128 = 10_000_000;
/// Cap on `C(|F|, r)` for the plain sunflower scan.
pub const SCAN_CAP: u128 = 100_000_000;
/// Default node budget for the pruned sunflower count.
pub const COUNT_BUDGET: u64 = 1_000_000_000;

fn total_sets(n: u32, w: u32) -> Result<u64> {
    let total = binomial_u128(n as u64, w as u64).unwrap_or(u128::MAX);
    if total > SAMPLE_CAP {
        return Err(Error::CapExceeded {
            what: "C(n, w)",
            required: total,
            cap: SAMPLE_CAP,
        });
    }
    Ok(total as u64)
}

/// `H_{n,p,w}`: each `w`-set independently with probability `p`, in rank order.
///
/// Set `k` is kept iff the `k`-th uniform draw is below `p`, so on a fixed
/// seed the families are nested in `p`.
pub fn sample_hnpw(n: u32, w: u32, p: f64, seed: u64) -> Result<WSetFamily> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("p must lie in [0,1], got {p}")));
    }
    let total = total_sets(n, w)?;
    let mut rng = rng::main_rng(seed);
    let mut fam = WSetFamily::new(n, w);
    for rank in 0..total {
        if rng.random::<f64>() < p {
            fam.push(WSet::unrank(n, w, rank));
        }
    }
    Ok(fam)
}

/// `H_{n,m,w}`: a uniform `m`-subset of all `w`-sets, in rank order.
pub fn sample_hnmw(n: u32, m: u64, w: u32, seed: u64) -> Result<WSetFamily> {
    let total = total_sets(n, w)?;
    if m > total {
        return Err(Error::invalid(format!("m = {m} exceeds C(n,w) = {total}")));
    }
    let mut rng = rng::main_rng(seed);
    let mut ranks: Vec<usize> = rand::seq::index::sample(&mut rng, total as usize, m as usize).into_vec();
    ranks.sort_unstable();
    let mut fam = WSetFamily::new(n, w);
    for rank in ranks {
        fam.push(WSet::unrank(n, w, rank as u64));
    }
    Ok(fam)
}

/// Calls `f` with the member indices (increasing) of every `r`-sunflower in
/// the family. Sets are added in index order; after two sets the kernel is
/// fixed, and every later set must contain it and meet each chosen set in
/// exactly the kernel.
fn for_each_sunflower(
    family: &WSetFamily,
    r: usize,
    budget: u64,
    mut f: impl FnMut(&[usize]),
) -> Result<u64> {
    if r < 2 {
        return Err(Error::invalid("sunflowers need r >= 2"));
    }
    let sets = family.sets();
    let mut nodes = 0u64;
    let mut found = 0u64;
    let mut chosen = Vec::with_capacity(r);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let k = sets[i].intersection_size(&sets[j]);
            let kernel = sets[i].intersection(&sets[j]);
            let cands: Vec<usize> = (j + 1..sets.len())
                .filter(|&c| {
                    kernel.iter().all(|&x| sets[c].has(x))
                        && sets[c].intersection_size(&sets[i]) == k
                        && sets[c].intersection_size(&sets[j]) == k
                })
                .collect();
            chosen.clear();
            chosen.extend([i, j]);
            extend(sets, k, &cands, r, &mut chosen, &mut nodes, budget, &mut found, &mut f)?;
        }
    }
    Ok(found)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    sets: &[WSet],
    k: usize,
    cands: &[usize],
    r: usize,
    chosen: &mut Vec<usize>,
    nodes: &mut u64,
    budget: u64,
    found: &mut u64,
    f: &mut impl FnMut(&[usize]),
) -> Result<()> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::Budget {
            nodes: *nodes,
            partial: *found,
        });
    }
    if chosen.len() == r {
        *found += 1;
        f(chosen);
        return Ok(());
    }
    let need = r - chosen.len();
    for (pos, &c) in cands.iter().enumerate() {
        if cands.len() - pos < need {
            break;
        }
        let rest: Vec<usize> = cands[pos + 1..]
            .iter()
            .copied()
            .filter(|&d| sets[d].intersection_size(&sets[c]) == k)
            .collect();
        chosen.push(c);
        extend(sets, k, &rest, r, chosen, nodes, budget, found, f)?;
        chosen.pop();
    }
    Ok(())
}

/// Exact number `X_r` of `r`-sunflowers in the family.
pub fn count_sunflowers(family: &WSetFamily, r: usize) -> Result<u64> {
    count_sunflowers_budget(family, r, COUNT_BUDGET)
}

pub fn count_sunflowers_budget(family: &WSetFamily, r: usize, budget: u64) -> Result<u64> {
    for_each_sunflower(family, r, budget, |_| {})
}

/// Every `r`-sunflower as sorted member indices.
pub fn list_sunflowers(family: &WSetFamily, r: usize) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_sunflower(family, r, COUNT_BUDGET, |s| out.push(s.to_vec()))?;
    Ok(out)
}

/// `X_r` by testing every `r`-subset of the family.
pub fn count_sunflowers_scan(family: &WSetFamily, r: usize) -> Result<u64> {
    let total = binomial_u128(family.len() as u64, r as u64).unwrap_or(u128::MAX);
    if total > SCAN_CAP {
        return Err(Error::CapExceeded {
            what: "C(|F|, r) for the plain scan",
            required: total,
            cap: SCAN_CAP,
        });
    }
    let idx: Vec<usize> = (0..family.len()).collect();
    let mut count = 0;
    let mut buf = Vec::with_capacity(r);
    for_each_subset(&idx, r, |s| {
        buf.clear();
        buf.extend(s.iter().map(|&i| family.sets()[i].clone()));
        if is_sunflower(&buf).is_ok_and(|v| v.is_sunflower) {
            count += 1;
        }
    });
    Ok(count)
}

/// `E[X_r] = (1/r) N D p^r` for `H_{n,p,w}`.
pub fn expected_xr(params: &SFParams, p: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    let ln = count_n(params.n, params.w).ln() + count_d(params).ln() + params.r as f64 * p.ln()
        - (params.r as f64).ln();
    ln.exp()
}

/// `E[X_r²]` two ways for a small instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondMomentAudit {
    /// `Σ_S Σ_{S′: |S ∩ S′| = j} p^{2r−j}` for `j = 0..=r`.
    pub by_overlap: Vec<f64>,
    pub decomposed: f64,
    /// `Σ_F P(F) X_r(F)²` over every subfamily `F`.
    pub direct: f64,
}

/// Largest `C(n, w)` for which every subfamily is enumerated.
pub const AUDIT_MAX_SETS: u64 = 20;

pub fn second_moment_audit(params: &SFParams, p: f64) -> Result<SecondMomentAudit> {
    let (n, w, r) = (params.n as u32, params.w as u32, params.r);
    let total = total_sets(n, w)?;
    if total > AUDIT_MAX_SETS {
        return Err(Error::CapExceeded {
            what: "C(n, w) for the second-moment audit",
            required: total as u128,
            cap: AUDIT_MAX_SETS as u128,
        });
    }
    let mut all = WSetFamily::new(n, w);
    for rank in 0..total {
        all.push(WSet::unrank(n, w, rank));
    }
    let masks: Vec<u32> = list_sunflowers(&all, r)?
        .iter()
        .map(|s| s.iter().fold(0u32, |m, &i| m | 1 << i))
        .collect();

    let mut by_overlap = vec![0.0; r + 1];
    for &a in &masks {
        for &b in &masks {
            let j = (a & b).count_ones() as usize;
            by_overlap[j] += p.powi((2 * r - j) as i32);
        }
    }
    let decomposed = by_overlap.iter().sum();

    let mut direct = 0.0;
    for fam in 0u32..1 << total {
        let x = masks.iter().filter(|&&m| fam & m == m).count() as f64;
        if x > 0.0 {
            let k = fam.count_ones() as i32;
            direct += p.powi(k) * (1.0 - p).powi(total as i32 - k) * x * x;
        }
    }
    Ok(SecondMomentAudit {
        by_overlap,
        decomposed,
        direct,
    })
}
