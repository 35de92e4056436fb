//! Explicit r-bounded hypergraphs and the degree/codegree queries used by the
//! regularity conditions.

mod conditions;
mod io;

use std::collections::HashSet;

use rustc_hash::FxHashMap as HashMap;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::combin::for_each_subset;
use crate::error::{Error, Result};

pub use conditions::{verify_theorem_conditions, ConditionCheck, ConditionReport};
pub use io::{read_edge_list, write_edge_list};

pub type VertexId = u32;

/// Largest edge size supported by the engine and the antichain reduction.
pub const MAX_EDGE_SIZE: usize = 8;

/// An edge: strictly increasing vertex ids, size in `[2, r]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HEdge(SmallVec<[VertexId; 4]>);

impl HEdge {
    /// Sorts and validates `members`; rejects repeated vertices and sizes below 2.
    pub fn new(members: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let mut v: SmallVec<[VertexId; 4]> = members.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!("edge {v:?} repeats a vertex")));
        }
        if v.len() < 2 {
            return Err(Error::invalid(format!("edge {v:?} has size < 2")));
        }
        Ok(HEdge(v))
    }

    pub fn members(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

/// `a ⊆ b` for strictly increasing slices.
pub fn is_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Immutable r-bounded hypergraph whose edge set is an antichain.
#[derive(Clone, Debug)]
pub struct ExplicitHypergraph {
    n_vertices: usize,
    r_bound: usize,
    edges: Vec<HEdge>,
    incidence: Vec<Vec<u32>>,
}

impl ExplicitHypergraph {
    /// Builds the hypergraph, collapsing duplicates and dropping every edge
    /// that contains another input edge.
    pub fn build(n_vertices: usize, edges: Vec<HEdge>, r_bound: usize) -> Result<Self> {
        if !(2..=MAX_EDGE_SIZE).contains(&r_bound) {
            return Err(Error::invalid(format!(
                "r_bound {r_bound} outside [2, {MAX_EDGE_SIZE}]"
            )));
        }
        if n_vertices > u32::MAX as usize {
            return Err(Error::invalid("too many vertices"));
        }
        for e in &edges {
            if e.len() < 2 || e.len() > r_bound {
                return Err(Error::invalid(format!(
                    "edge {:?} has size {} outside [2, {r_bound}]",
                    e.members(),
                    e.len()
                )));
            }
            if let Some(&v) = e.members().last() {
                if v as usize >= n_vertices {
                    return Err(Error::invalid(format!("vertex {v} >= n_vertices {n_vertices}")));
                }
            }
        }
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();

        let present: HashSet<&[VertexId]> = edges.iter().map(|e| e.members()).collect();
        let keep: Vec<bool> = edges
            .iter()
            .map(|e| {
                let m = e.members();
                let mut dominated = false;
                for k in 2..m.len() {
                    for_each_subset(m, k, |s| dominated |= present.contains(s));
                    if dominated {
                        break;
                    }
                }
                !dominated
            })
            .collect();
        drop(present);
        let edges: Vec<HEdge> = edges
            .into_iter()
            .zip(keep)
            .filter_map(|(e, k)| k.then_some(e))
            .collect();
        Ok(Self::from_antichain(n_vertices, edges, r_bound))
    }

    /// Wraps a deduplicated, sorted antichain without re-checking it.
    pub(crate) fn from_antichain(n_vertices: usize, edges: Vec<HEdge>, r_bound: usize) -> Self {
        let mut incidence = vec![Vec::new(); n_vertices];
        for (i, e) in edges.iter().enumerate() {
            for &v in e.members() {
                incidence[v as usize].push(i as u32);
            }
        }
        ExplicitHypergraph {
            n_vertices,
            r_bound,
            edges,
            incidence,
        }
    }

    /// Convenience constructor from raw vertex lists.
    pub fn from_lists(n_vertices: usize, lists: &[Vec<VertexId>], r_bound: usize) -> Result<Self> {
        let edges = lists
            .iter()
            .map(|l| HEdge::new(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::build(n_vertices, edges, r_bound)
    }

    pub fn empty(n_vertices: usize, r_bound: usize) -> Self {
        Self::from_antichain(n_vertices, Vec::new(), r_bound)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn r_bound(&self) -> usize {
        self.r_bound
    }

    pub fn edges(&self) -> &[HEdge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> &HEdge {
        &self.edges[id]
    }

    /// Ids of the edges containing `v`.
    pub fn incident(&self, v: VertexId) -> &[u32] {
        &self.incidence[v as usize]
    }

    pub fn incidence_index(&self) -> &[Vec<u32>] {
        &self.incidence
    }

    /// True if every edge has size exactly `r_bound`.
    pub fn is_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == self.r_bound)
    }

    pub fn contains_edge(&self, members: &[VertexId]) -> bool {
        let Some(&v) = members.first() else {
            return false;
        };
        if v as usize >= self.n_vertices {
            return false;
        }
        self.incident(v)
            .iter()
            .any(|&id| self.edges[id as usize].members() == members)
    }

    /// `d_{A↑b}`: the number of edges of size exactly `b` containing `a`.
    pub fn degree_up(&self, a: &[VertexId], b: usize) -> usize {
        let mut a: SmallVec<[VertexId; 8]> = SmallVec::from_slice(a);
        a.sort_unstable();
        a.dedup();
        let Some(&pivot) = a.iter().min_by_key(|&&v| self.incidence[v as usize].len()) else {
            return 0;
        };
        self.incident(pivot)
            .iter()
            .map(|&id| &self.edges[id as usize])
            .filter(|e| e.len() == b && is_subset(&a, e.members()))
            .count()
    }

    /// Keys `e \ {v}` for the size-`r` edges through `v` that avoid `avoid`.
    fn completions(&self, v: VertexId, avoid: VertexId) -> HashSet<SmallVec<[VertexId; 8]>> {
        self.incident(v)
            .iter()
            .map(|&id| &self.edges[id as usize])
            .filter(|e| e.len() == self.r_bound && !e.contains(avoid))
            .map(|e| e.members().iter().copied().filter(|&x| x != v).collect())
            .collect()
    }

    /// `(r−1)`-codegree of `v` and `v2`.
    pub fn codegree_rm1(&self, v: VertexId, v2: VertexId) -> Result<usize> {
        if v == v2 {
            return Err(Error::invalid("codegree of a vertex with itself"));
        }
        let left = self.completions(v, v2);
        if left.is_empty() {
            return Ok(0);
        }
        Ok(self
            .completions(v2, v)
            .iter()
            .filter(|s| left.contains(*s))
            .count())
    }

    /// `c_{a,a'→k}(v, v2)`: ordered pairs of edges `(e, e')` with
    /// `v ∈ e \ e'`, `v2 ∈ e' \ e`, `|e| = a`, `|e'| = a2`, `|e ∩ e'| = k`.
    pub fn codegree_pairs(
        &self,
        v: VertexId,
        v2: VertexId,
        a: usize,
        a2: usize,
        k: usize,
    ) -> Result<usize> {
        if v == v2 {
            return Err(Error::invalid("codegree pairs need distinct vertices"));
        }
        if k >= a || k >= a2 || a > self.r_bound || a2 > self.r_bound || a < 2 || a2 < 2 {
            return Err(Error::invalid(format!(
                "need k < a, a' <= r: a={a}, a'={a2}, k={k}, r={}",
                self.r_bound
            )));
        }
        let left: Vec<&HEdge> = self
            .incident(v)
            .iter()
            .map(|&id| &self.edges[id as usize])
            .filter(|e| e.len() == a && !e.contains(v2))
            .collect();
        let mut count = 0;
        for &id in self.incident(v2) {
            let f = &self.edges[id as usize];
            if f.len() != a2 || f.contains(v) {
                continue;
            }
            count += left
                .iter()
                .filter(|e| intersection_size(e.members(), f.members()) == k)
                .count();
        }
        Ok(count)
    }

    /// `Δ_ℓ(H^(b))`: the largest number of size-`b` edges sharing an `ℓ`-set.
    pub fn max_set_degree(&self, ell: usize, b: usize) -> usize {
        if ell == 0 || ell >= b {
            return 0;
        }
        let mut counts: HashMap<SmallVec<[VertexId; 8]>, usize> = HashMap::default();
        for e in self.edges.iter().filter(|e| e.len() == b) {
            for_each_subset(e.members(), ell, |s| {
                *counts.entry(SmallVec::from_slice(s)).or_default() += 1;
            });
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// All `(r−1)`-codegrees that are nonzero, keyed by `(min, max)` vertex.
    pub fn codegree_table(&self) -> HashMap<(VertexId, VertexId), usize> {
        let mut groups: HashMap<SmallVec<[VertexId; 8]>, SmallVec<[VertexId; 4]>> = HashMap::default();
        for e in self.edges.iter().filter(|e| e.len() == self.r_bound) {
            for &v in e.members() {
                let key = e.members().iter().copied().filter(|&x| x != v).collect();
                groups.entry(key).or_default().push(v);
            }
        }
        let mut table = HashMap::default();
        for verts in groups.values() {
            for (i, &x) in verts.iter().enumerate() {
                for &y in &verts[i + 1..] {
                    let key = (x.min(y), x.max(y));
                    *table.entry(key).or_default() += 1;
                }
            }
        }
        table
    }

    /// `B(v)` for every vertex: partners whose `(r−1)`-codegree is at least `φD`.
    pub fn bad_pair_map(&self, d: f64, phi: f64) -> BadPairs {
        let threshold = phi * d;
        let mut partners = vec![Vec::new(); self.n_vertices];
        for ((x, y), c) in self.codegree_table() {
            if c as f64 >= threshold {
                partners[x as usize].push(y);
                partners[y as usize].push(x);
            }
        }
        for p in &mut partners {
            p.sort_unstable();
        }
        BadPairs { partners }
    }
}

pub(crate) fn intersection_size(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Symmetric bad-pair relation, `partners[v] = B(v)` sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPairs {
    partners: Vec<Vec<VertexId>>,
}

impl BadPairs {
    pub fn none(n_vertices: usize) -> Self {
        BadPairs {
            partners: vec![Vec::new(); n_vertices],
        }
    }

    pub fn from_partners(partners: Vec<Vec<VertexId>>) -> Self {
        BadPairs { partners }
    }

    pub fn partners(&self, v: VertexId) -> &[VertexId] {
        &self.partners[v as usize]
    }

    pub fn is_bad(&self, v: VertexId, u: VertexId) -> bool {
        self.partners[v as usize].binary_search(&u).is_ok()
    }

    pub fn n_vertices(&self) -> usize {
        self.partners.len()
    }

    pub fn max_size(&self) -> usize {
        self.partners.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.partners.iter().enumerate().all(|(v, ps)| {
            ps.iter()
                .all(|&u| self.partners[u as usize].binary_search(&(v as VertexId)).is_ok())
        })
    }
}
