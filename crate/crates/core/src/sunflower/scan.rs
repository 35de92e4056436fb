//! The sunflower-free process as a single scan over a random permutation of
//! all `w`-sets: each set is accepted iff it creates no `r`-sunflower.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{creates_sunflower, SFParams, WSet, WSetFamily};
use crate::combin::binomial_u128;
use crate::error::{Error, Result};
use crate::rng;

/// Default cap on the number of candidate sets `C(n, w)`.
pub const DEFAULT_SCAN_CAP: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Acceptance {
    /// Position in the scan, from 0.
    pub position: u64,
    /// Lexicographic rank of the accepted set.
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanLog {
    pub seed: u64,
    pub params: SFParams,
    pub scanned: u64,
    pub accepted: Vec<Acceptance>,
}

pub fn sunflower_free_process(p: &SFParams, seed: u64, cap: u64) -> Result<(WSetFamily, ScanLog)> {
    let total = binomial_u128(p.n, p.w).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            what: "candidate w-sets",
            required: total,
            cap: cap as u128,
        });
    }
    let (n, w) = (p.n as u32, p.w as u32);
    let mut order: Vec<u64> = (0..total as u64).collect();
    order.shuffle(&mut rng::main_rng(seed));
    let mut family = WSetFamily::new(n, w);
    let mut accepted = Vec::new();
    for (pos, &rank) in order.iter().enumerate() {
        let cand = WSet::unrank(n, w, rank);
        if !creates_sunflower(&family, &cand, p.r) {
            family.push(cand);
            accepted.push(Acceptance {
                position: pos as u64,
                rank,
            });
        }
    }
    Ok((
        family,
        ScanLog {
            seed,
            params: *p,
            scanned: total as u64,
            accepted,
        },
    ))
}
