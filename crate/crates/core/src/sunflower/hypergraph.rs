//! Explicit enumeration of `ℋ_{n,w}`: one vertex per `w`-set (lexicographic
//! rank), one edge per `r`-sunflower, generated kernel size by kernel size.

use super::{count_d, count_n, SFParams};
use crate::combin::{for_each_subset, rank_subset};
use crate::error::{Error, Result};
use crate::hypergraph::{ExplicitHypergraph, HEdge, VertexId, MAX_EDGE_SIZE};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SunflowerCaps {
    pub max_vertices: u64,
    pub max_edges: u64,
}

impl Default for SunflowerCaps {
    fn default() -> Self {
        SunflowerCaps {
            max_vertices: 5000,
            max_edges: 10_000_000,
        }
    }
}

pub fn sunflower_hypergraph(p: &SFParams, caps: SunflowerCaps) -> Result<ExplicitHypergraph> {
    if p.r > MAX_EDGE_SIZE {
        return Err(Error::invalid(format!("r = {} exceeds {MAX_EDGE_SIZE}", p.r)));
    }
    let n_vertices = count_n(p.n, p.w)
        .exact_u128()
        .filter(|&v| v <= caps.max_vertices as u128)
        .ok_or(Error::CapExceeded {
            what: "sunflower hypergraph vertices",
            required: count_n(p.n, p.w).exact_u128().unwrap_or(u128::MAX),
            cap: caps.max_vertices as u128,
        })? as usize;
    let d = count_d(p).exact_u128().unwrap_or(u128::MAX);
    let n_edges = (n_vertices as u128).saturating_mul(d) / p.r as u128;
    if n_edges > caps.max_edges as u128 {
        return Err(Error::CapExceeded {
            what: "sunflower hypergraph edges",
            required: n_edges,
            cap: caps.max_edges as u128,
        });
    }

    let n = p.n as u32;
    let ground: Vec<u32> = (0..n).collect();
    let mut edges = Vec::with_capacity(n_edges as usize);
    for s in 0..p.w as usize {
        for_each_subset(&ground, s, |kernel| {
            let rest: Vec<u32> = ground.iter().copied().filter(|x| !kernel.contains(x)).collect();
            let mut petals: Vec<Vec<u32>> = Vec::with_capacity(p.r);
            add_petals(&rest, p.w as usize - s, p.r, &mut petals, &mut |petals| {
                let ids = petals.iter().map(|petal| {
                    let mut set: Vec<u32> = kernel.iter().chain(petal.iter()).copied().collect();
                    set.sort_unstable();
                    rank_subset(n, &set) as VertexId
                });
                edges.push(HEdge::new(ids).expect("distinct w-sets"));
            });
        });
    }
    edges.sort_unstable();
    debug_assert!(edges.windows(2).all(|e| e[0] != e[1]));
    Ok(ExplicitHypergraph::from_antichain(n_vertices, edges, p.r))
}

/// Unordered families of `r` pairwise disjoint `size`-subsets of `rest`,
/// canonical by increasing minimum element.
fn add_petals(
    rest: &[u32],
    size: usize,
    r: usize,
    petals: &mut Vec<Vec<u32>>,
    emit: &mut impl FnMut(&[Vec<u32>]),
) {
    if petals.len() == r {
        emit(petals);
        return;
    }
    let floor = petals.last().map(|p| p[0] as i64).unwrap_or(-1);
    let avail: Vec<u32> = rest
        .iter()
        .copied()
        .filter(|&x| x as i64 > floor && !petals.iter().any(|p| p.contains(&x)))
        .collect();
    for_each_subset(&avail, size, |petal| {
        petals.push(petal.to_vec());
        add_petals(rest, size, r, petals, emit);
        petals.pop();
    });
}
