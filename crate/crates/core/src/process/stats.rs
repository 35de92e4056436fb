//! Incremental `d_ℓ^±` bookkeeping and whole-hypergraph diagnostics.

use rustc_hash::FxHashMap as HashMap;

use smallvec::SmallVec;

use super::{CodegreeMax, Diagnostics, OpenSet, ProcessState, SetDegreeMax};
use crate::combin::for_each_subset;
use crate::hypergraph::VertexId;

const UNTRACKED: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub(super) struct Tracker {
    levels: usize,
    slot: Vec<u32>,
    tracked: Vec<VertexId>,
    initial: Vec<u32>,
    plus: Vec<u32>,
    minus: Vec<u32>,
}

impl Tracker {
    pub(super) fn new(n: usize, r: usize, mut tracked: Vec<VertexId>) -> Self {
        tracked.sort_unstable();
        tracked.dedup();
        let mut slot = vec![UNTRACKED; n];
        for (i, &v) in tracked.iter().enumerate() {
            slot[v as usize] = i as u32;
        }
        let levels = r - 1;
        let len = tracked.len() * levels;
        Tracker {
            levels,
            slot,
            tracked,
            initial: vec![0; len],
            plus: vec![0; len],
            minus: vec![0; len],
        }
    }

    pub(super) fn tracked(&self) -> &[VertexId] {
        &self.tracked
    }

    fn base(&self, v: VertexId) -> Option<usize> {
        let s = self.slot[v as usize];
        (s != UNTRACKED).then(|| s as usize * self.levels)
    }

    pub(super) fn set_initial(&mut self, v: VertexId, counts: &[u32]) {
        if let Some(b) = self.base(v) {
            self.initial[b..b + self.levels].copy_from_slice(counts);
        }
    }

    pub(super) fn created(&mut self, edge: &[VertexId], open: &OpenSet) {
        let idx = edge.len() - 2;
        for &u in edge {
            if let Some(b) = self.base(u).filter(|_| open.contains(u)) {
                self.plus[b + idx] += 1;
            }
        }
    }

    pub(super) fn removed(&mut self, edge: &[VertexId], open: &OpenSet) {
        let idx = edge.len() - 2;
        for &u in edge {
            if let Some(b) = self.base(u).filter(|_| open.contains(u)) {
                self.minus[b + idx] += 1;
            }
        }
    }

    pub(super) fn counts(&self, v: VertexId) -> (&[u32], &[u32], &[u32]) {
        let b = self.base(v).expect("vertex is tracked");
        let r = b..b + self.levels;
        (&self.initial[r.clone()], &self.plus[r.clone()], &self.minus[r])
    }
}

/// Maxima of `d_{A↑b}` over open `A` and of `c_{a,a′→k}(v,v′)` over non-bad
/// pairs with `v` among the first `sample` open vertices.
pub(super) fn diagnostics(state: &ProcessState, sample: usize) -> Diagnostics {
    let r = state.r();
    let mut set_degree_max = Vec::new();
    let mut counts: HashMap<SmallVec<[VertexId; 8]>, u32> = HashMap::default();
    for b in 2..=r {
        for a in 1..b {
            counts.clear();
            for e in state.live_edges().filter(|e| e.len() == b) {
                for_each_subset(e, a, |s| *counts.entry(SmallVec::from_slice(s)).or_default() += 1);
            }
            let max = counts.values().copied().max().unwrap_or(0);
            set_degree_max.push(SetDegreeMax { a, b, max });
        }
    }

    let mut best: HashMap<(usize, usize, usize), u32> = HashMap::default();
    let sampled: Vec<VertexId> = state.open_set().iter().take(sample).collect();
    let mut per_partner: HashMap<(VertexId, usize, usize, usize), u32> = HashMap::default();
    for &v in &sampled {
        per_partner.clear();
        for e in state.live_edges_through(v) {
            for &u in e.iter().filter(|&&u| u != v) {
                for f in state.live_edges_through(u) {
                    if f.contains(&v) {
                        continue;
                    }
                    let shared: SmallVec<[VertexId; 8]> =
                        e.iter().copied().filter(|x| f.contains(x)).collect();
                    // count each (e, f) once, via its smallest shared vertex
                    if shared[0] != u {
                        continue;
                    }
                    let k = shared.len();
                    for &w in f.iter().filter(|&&w| !e.contains(&w)) {
                        if state.bad_pairs().is_some_and(|bp| bp.is_bad(v, w)) {
                            continue;
                        }
                        *per_partner.entry((w, e.len(), f.len(), k)).or_default() += 1;
                    }
                }
            }
        }
        for (&(_, a, a2, k), &c) in &per_partner {
            let slot = best.entry((a, a2, k)).or_default();
            *slot = (*slot).max(c);
        }
    }
    let mut codegree_max: Vec<CodegreeMax> = best
        .into_iter()
        .map(|((a, a2, k), max)| CodegreeMax { a, a2, k, max })
        .collect();
    codegree_max.sort_by_key(|c| (c.a, c.a2, c.k));

    Diagnostics {
        set_degree_max,
        codegree_max,
        codegree_sample: sampled.len(),
    }
}
