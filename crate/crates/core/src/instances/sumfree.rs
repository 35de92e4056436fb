//! The sum-free process on `Z_{2n}` without building the Schur hypergraph.
//!
//! Choosing `v` closes every open `u` that now completes a solution with two
//! chosen elements (one of them `v`): `u = v + s`, `u = s − v`, `u = v − s`
//! for chosen `s` (including `s = v`), and `u` with `2u = v`. Selection draws
//! the same rank from the same generator as the explicit engine, so on the
//! same seed both pick the same sequence.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{schur_element, schur_vertex};
use crate::error::{Error, Result};
use crate::process::{OpenSet, RunHeader, RunLog, StepCap, StepRecord, Termination};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumFreeRun {
    pub n: u64,
    /// Chosen elements of `Z_{2n}`, sorted.
    pub elements: Vec<u64>,
    pub log: RunLog,
}

impl SumFreeRun {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Pairs `{v, −v}` with `v ≠ −v` inside the final set.
    pub fn bad_pairs_in_set(&self) -> usize {
        let m = 2 * self.n;
        self.elements
            .iter()
            .filter(|&&a| a < m - a && self.elements.binary_search(&(m - a)).is_ok())
            .count()
    }

    /// Expected number of such pairs in a uniform random subset of the same size.
    pub fn null_expected_bad_pairs(&self) -> f64 {
        let big_n = (2 * self.n - 1) as f64;
        let s = self.size() as f64;
        (self.n - 1) as f64 * s * (s - 1.0) / (big_n * (big_n - 1.0))
    }
}

/// No `a + b = c` inside `set` (with `a = b` allowed); `0` must be absent.
pub fn is_sum_free(set: &[u64], n: u64) -> bool {
    let m = 2 * n;
    let mut member = vec![false; m as usize];
    for &a in set {
        if a == 0 || a >= m {
            return false;
        }
        member[a as usize] = true;
    }
    set.iter()
        .all(|&a| set.iter().all(|&b| !member[((a + b) % m) as usize]))
}

/// Runs to exhaustion.
pub fn sumfree_run(n: u64, seed: u64) -> Result<SumFreeRun> {
    sumfree_run_capped(n, seed, StepCap::Exhaust)
}

pub fn sumfree_run_capped(n: u64, seed: u64, cap: StepCap) -> Result<SumFreeRun> {
    if !(2..=1_000_000).contains(&n) {
        return Err(Error::invalid(format!("sum-free run needs 2 <= n <= 10^6, got {n}")));
    }
    let m = 2 * n;
    let n_vertices = (m - 1) as usize;
    let cap = cap.resolve(n_vertices, 3);
    let mut open = OpenSet::full(n_vertices);
    let mut chosen: Vec<u64> = Vec::new();
    let mut rng = rng::main_rng(seed);
    let mut steps = Vec::new();
    let mut closed = Vec::new();
    let termination = loop {
        if cap.is_some_and(|c| steps.len() >= c) {
            break Termination::StepCap;
        }
        if open.is_empty() {
            break Termination::Exhausted;
        }
        let k = rng.random_range(0..open.len());
        let vid = open.select(k);
        open.remove(vid);
        let v = schur_element(vid);
        chosen.push(v);
        closed.clear();
        let mut close = |u: u64, open: &mut OpenSet| {
            if u != 0 && open.remove(schur_vertex(u)) {
                closed.push(schur_vertex(u));
            }
        };
        for &s in &chosen {
            close((v + s) % m, &mut open);
            close((s + m - v) % m, &mut open);
            close((v + m - s) % m, &mut open);
        }
        if v.is_multiple_of(2) {
            close(v / 2, &mut open);
            close(v / 2 + n, &mut open);
        }
        closed.sort_unstable();
        steps.push(StepRecord {
            step: steps.len() + 1,
            chosen: vid,
            open: open.len(),
            closed: closed.clone(),
        });
    };
    let mut elements = chosen;
    elements.sort_unstable();
    Ok(SumFreeRun {
        n,
        elements,
        log: RunLog {
            header: RunHeader {
                seed,
                instance: format!("schur:{n}"),
                n_vertices,
                r: 3,
            },
            steps,
            snapshots: Vec::new(),
            termination,
        },
    })
}
