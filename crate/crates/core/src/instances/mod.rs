//! Worked instances: the Schur hypergraph on `Z_{2n} ∖ {0}`, `b`-blowups,
//! the `H`-free hypergraph on the edges of `K_n`, and the sum-free process.

mod sumfree;

use std::collections::HashSet;

use crate::combin::{binomial_u128, for_each_subset, rank_subset};
use crate::error::{Error, Result};
use crate::hypergraph::{ExplicitHypergraph, HEdge, VertexId, MAX_EDGE_SIZE};
use crate::rng;

pub use sumfree::{is_sum_free, sumfree_run, sumfree_run_capped, SumFreeRun};

/// Vertex id of the group element `a ∈ Z_{2n} ∖ {0}`.
pub fn schur_vertex(a: u64) -> VertexId {
    debug_assert!(a > 0);
    (a - 1) as VertexId
}

/// Group element of a Schur vertex id.
pub fn schur_element(v: VertexId) -> u64 {
    v as u64 + 1
}

/// Solutions of `a + b = c` in `Z_{2n} ∖ {0}`: a 3-edge when `a, b, c` are
/// distinct, a 2-edge `{a, 2a}` for `a + a = c`. Triples containing some
/// `{a, 2a}` are then dropped by the antichain reduction.
pub fn schur_hypergraph(n: u64) -> Result<ExplicitHypergraph> {
    ExplicitHypergraph::build((2 * n - 1) as usize, schur_solutions(n)?, 3)
}

/// Every solution as an edge, before the antichain reduction.
pub fn schur_solutions(n: u64) -> Result<Vec<HEdge>> {
    if n < 2 {
        return Err(Error::invalid(format!("Schur instance needs n >= 2, got {n}")));
    }
    let m = 2 * n;
    let mut edges = Vec::new();
    for a in 1..m {
        let c = (2 * a) % m;
        if c != 0 {
            edges.push(HEdge::new([schur_vertex(a), schur_vertex(c)])?);
        }
        for b in a + 1..m {
            let c = (a + b) % m;
            if c != 0 {
                edges.push(HEdge::new([schur_vertex(a), schur_vertex(b), schur_vertex(c)])?);
            }
        }
    }
    Ok(edges)
}

/// Vertex id of copy `i` of base vertex `v` in a `b`-blowup.
pub fn blowup_vertex(v: VertexId, i: u32, b: u32) -> VertexId {
    v * b + i
}

/// Replaces each vertex by `b` copies and each edge by all `b^r` copy-edges.
pub fn blowup(base: &ExplicitHypergraph, b: u32) -> Result<ExplicitHypergraph> {
    if b == 0 {
        return Err(Error::invalid("blowup factor must be positive"));
    }
    if !base.is_uniform() {
        return Err(Error::invalid("blowup is defined for uniform hypergraphs"));
    }
    let mut edges = Vec::with_capacity(base.n_edges() * (b as usize).pow(base.r_bound() as u32));
    let mut idx = Vec::new();
    for e in base.edges() {
        let m = e.members();
        idx.clear();
        idx.resize(m.len(), 0u32);
        loop {
            edges.push(HEdge::new(m.iter().zip(&idx).map(|(&v, &i)| blowup_vertex(v, i, b)))?);
            // odometer over copy indices
            let Some(pos) = (0..idx.len()).rev().find(|&p| idx[p] + 1 < b) else {
                break;
            };
            idx[pos] += 1;
            idx[pos + 1..].fill(0);
        }
    }
    ExplicitHypergraph::build(base.n_vertices() * b as usize, edges, base.r_bound())
}

/// `m` distinct `r`-sets drawn uniformly from `{0, …, n−1}` (fewer if
/// `C(n, r) < m`), rejection-sampled on the main stream of `seed`.
pub fn random_uniform(n: u32, m: usize, r: usize, seed: u64) -> Result<ExplicitHypergraph> {
    if r == 0 || r > MAX_EDGE_SIZE || r > n as usize {
        return Err(Error::invalid(format!("need 1 <= r <= min(n, {MAX_EDGE_SIZE}), got r = {r}")));
    }
    let total = binomial_u128(n as u64, r as u64).unwrap_or(u128::MAX);
    let m = (m as u128).min(total) as usize;
    let mut rng = rng::main_rng(seed);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let mut e: Vec<VertexId> = rand::seq::index::sample(&mut rng, n as usize, r)
            .into_iter()
            .map(|v| v as VertexId)
            .collect();
        e.sort_unstable();
        if seen.insert(e.clone()) {
            edges.push(HEdge::new(e)?);
        }
    }
    ExplicitHypergraph::build(n as usize, edges, r)
}

/// A small pattern graph on vertices `0..n_vertices`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Pattern {
    pub fn triangle() -> Self {
        Pattern {
            n_vertices: 3,
            edges: vec![(0, 1), (1, 2), (0, 2)],
        }
    }

    /// Parses `triangle`, `k4`, `c4`, `path3`.
    pub fn by_name(name: &str) -> Result<Self> {
        let cycle = |k: usize| Pattern {
            n_vertices: k,
            edges: (0..k).map(|i| (i, (i + 1) % k)).collect(),
        };
        match name {
            "triangle" | "k3" => Ok(Self::triangle()),
            "c4" => Ok(cycle(4)),
            "c5" => Ok(cycle(5)),
            "path3" => Ok(Pattern {
                n_vertices: 4,
                edges: vec![(0, 1), (1, 2), (2, 3)],
            }),
            _ => Err(Error::invalid(format!("unknown pattern {name:?}"))),
        }
    }
}

/// Cap on `C(n, k) · k!` pattern placements.
pub const HFREE_PLACEMENT_CAP: u128 = 10_000_000;

/// Vertex id of the edge `{x, y}` of `K_n`.
pub fn kn_edge_vertex(n: u32, x: u32, y: u32) -> VertexId {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    rank_subset(n, &[a, b]) as VertexId
}

/// Hypergraph on `E(K_n)` whose edges are the edge sets of copies of `pattern`.
pub fn h_free_hypergraph(n: u32, pattern: &Pattern) -> Result<ExplicitHypergraph> {
    let k = pattern.n_vertices;
    let ne = pattern.edges.len();
    if !(2..=5.min(MAX_EDGE_SIZE)).contains(&ne) {
        return Err(Error::invalid(format!("pattern must have 2..=5 edges, has {ne}")));
    }
    if n > 40 {
        return Err(Error::CapExceeded {
            what: "K_n order",
            required: n as u128,
            cap: 40,
        });
    }
    let placements = binomial_u128(n as u64, k as u64)
        .and_then(|c| c.checked_mul((1..=k as u128).product()))
        .unwrap_or(u128::MAX);
    if placements > HFREE_PLACEMENT_CAP {
        return Err(Error::CapExceeded {
            what: "pattern placements",
            required: placements,
            cap: HFREE_PLACEMENT_CAP,
        });
    }
    let ground: Vec<u32> = (0..n).collect();
    let mut seen: HashSet<HEdge> = HashSet::new();
    let mut perm: Vec<usize> = Vec::with_capacity(k);
    for_each_subset(&ground, k, |verts| {
        perm.clear();
        perm.extend(0..k);
        loop {
            let e = HEdge::new(
                pattern
                    .edges
                    .iter()
                    .map(|&(x, y)| kn_edge_vertex(n, verts[perm[x]], verts[perm[y]])),
            )
            .expect("pattern edges are distinct");
            seen.insert(e);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    });
    let n_vertices = (n as usize) * (n as usize).saturating_sub(1) / 2;
    ExplicitHypergraph::build(n_vertices, seen.into_iter().collect(), ne)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
