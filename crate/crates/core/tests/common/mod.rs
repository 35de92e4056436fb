//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library routine it is compared against.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sflab::hypergraph::HEdge;
use sflab::process::Fate;
use sflab::{BadPairs, ExplicitHypergraph, RunLog};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: u32, k: usize) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, k: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All `k`-subsets of `items`.
pub fn choose<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    subsets(items.len() as u32, k)
        .into_iter()
        .map(|ix| ix.into_iter().map(|i| items[i as usize].clone()).collect())
        .collect()
}

fn inter(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().copied().filter(|x| b.contains(x)).collect()
}

/// Distinct sets whose pairwise intersections all coincide.
pub fn is_sunflower(sets: &[&[u32]]) -> bool {
    let k = inter(sets[0], sets[1]);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i] == sets[j] || inter(sets[i], sets[j]) != k {
                return false;
            }
        }
    }
    true
}

/// Unordered `r`-sunflowers among all `w`-subsets of `[n]` that contain the set `{0, …, w−1}`.
pub fn d_brute(n: u32, w: usize, r: usize) -> u64 {
    let all = subsets(n, w);
    let fixed: Vec<u32> = (0..w as u32).collect();
    let others: Vec<&Vec<u32>> = all.iter().filter(|s| **s != fixed).collect();
    let mut count = 0;
    for pick in subsets(others.len() as u32, r - 1) {
        let mut sets: Vec<&[u32]> = vec![&fixed];
        sets.extend(pick.iter().map(|&i| others[i as usize].as_slice()));
        if is_sunflower(&sets) {
            count += 1;
        }
    }
    count
}

/// Number of `r`-subsets of `family` that are sunflowers.
pub fn x_r_brute(family: &[Vec<u32>], r: usize) -> u64 {
    subsets(family.len() as u32, r)
        .into_iter()
        .filter(|ix| {
            let sets: Vec<&[u32]> = ix.iter().map(|&i| family[i as usize].as_slice()).collect();
            is_sunflower(&sets)
        })
        .count() as u64
}

/// Whether `cand` completes an `r`-sunflower with some `r−1` members of `family`.
pub fn creates_sunflower_brute(family: &[Vec<u32>], cand: &[u32], r: usize) -> bool {
    subsets(family.len() as u32, r - 1).into_iter().any(|ix| {
        let mut sets: Vec<&[u32]> = vec![cand];
        sets.extend(ix.iter().map(|&i| family[i as usize].as_slice()));
        is_sunflower(&sets)
    })
}

pub fn edge_sets(h: &ExplicitHypergraph) -> Vec<Vec<u32>> {
    h.edges().iter().map(|e| e.members().to_vec()).collect()
}

/// A random hypergraph on `n` vertices with `m` candidate edges of sizes `2..=r`.
pub fn random_hypergraph(rng: &mut impl Rng, n: u32, m: usize, r: usize) -> ExplicitHypergraph {
    let edges: Vec<HEdge> = (0..m)
        .map(|_| {
            let size = rng.random_range(2..=r);
            let mut picked = BTreeSet::new();
            while picked.len() < size {
                picked.insert(rng.random_range(0..n));
            }
            HEdge::new(picked).unwrap()
        })
        .collect();
    ExplicitHypergraph::build(n as usize, edges, r).unwrap()
}

/// Edges of size `b` containing every vertex of `a`.
pub fn degree_naive(h: &ExplicitHypergraph, a: &[u32], b: usize) -> usize {
    edge_sets(h)
        .iter()
        .filter(|e| e.len() == b && a.iter().all(|x| e.contains(x)))
        .count()
}

/// `(r−1)`-sets `S` with `S ∪ {v}` and `S ∪ {v2}` both size-`r` edges.
pub fn codegree_naive(h: &ExplicitHypergraph, v: u32, v2: u32) -> usize {
    let r = h.r_bound();
    let edges: HashSet<Vec<u32>> = edge_sets(h).into_iter().filter(|e| e.len() == r).collect();
    edges
        .iter()
        .filter(|e| e.contains(&v) && !e.contains(&v2))
        .filter(|e| {
            let mut other: Vec<u32> = e.iter().copied().filter(|&x| x != v).collect();
            other.push(v2);
            other.sort_unstable();
            edges.contains(&other)
        })
        .count()
}

/// Ordered edge pairs `(e, e')`, `v ∈ e∖e'`, `v2 ∈ e'∖e`, sizes `a, a2`, overlap `k`.
pub fn codegree_pairs_naive(h: &ExplicitHypergraph, v: u32, v2: u32, a: usize, a2: usize, k: usize) -> usize {
    let edges = edge_sets(h);
    let mut count = 0;
    for e in &edges {
        for f in &edges {
            if e.len() == a
                && f.len() == a2
                && e.contains(&v)
                && !f.contains(&v)
                && f.contains(&v2)
                && !e.contains(&v2)
                && inter(e, f).len() == k
            {
                count += 1;
            }
        }
    }
    count
}

/// Largest number of size-`b` edges sharing an `ell`-set.
pub fn max_set_degree_naive(h: &ExplicitHypergraph, ell: usize, b: usize) -> usize {
    if ell == 0 || ell >= b {
        return 0;
    }
    subsets(h.n_vertices() as u32, ell)
        .iter()
        .map(|s| degree_naive(h, s, b))
        .max()
        .unwrap_or(0)
}

/// Independence, maximality and the chosen/closed partition of a finished run.
pub fn check_final_run(h: &ExplicitHypergraph, log: &RunLog) -> Result<(), String> {
    let chosen: HashSet<u32> = log.chosen().into_iter().collect();
    if chosen.len() != log.n_steps() {
        return Err("a vertex was chosen twice".into());
    }
    let edges = edge_sets(h);
    if let Some(e) = edges.iter().find(|e| e.iter().all(|x| chosen.contains(x))) {
        return Err(format!("independence: edge {e:?} inside I"));
    }
    for v in 0..h.n_vertices() as u32 {
        if chosen.contains(&v) {
            continue;
        }
        let blocked = edges
            .iter()
            .any(|e| e.contains(&v) && e.iter().all(|x| *x == v || chosen.contains(x)));
        if !blocked {
            return Err(format!("maximality: {v} could be added"));
        }
    }
    let fates = sflab::process::fate_map(log);
    for (v, f) in fates.iter().enumerate() {
        let ok = match f {
            Fate::Chosen { .. } => chosen.contains(&(v as u32)),
            Fate::Closed { .. } => !chosen.contains(&(v as u32)),
            Fate::Open => false,
        };
        if !ok {
            return Err(format!("partition: vertex {v} has fate {f:?}"));
        }
    }
    Ok(())
}

/// `ℋ(i)` from scratch: given the chosen set, a vertex is closed iff some edge
/// minus `I` is exactly that vertex; the live edges are the minimal sets
/// `e ∖ I` over edges avoiding closed vertices.
pub struct Residual {
    pub closed: HashSet<u32>,
    pub live: Vec<Vec<u32>>,
}

pub fn residual(h: &ExplicitHypergraph, chosen: &HashSet<u32>) -> Residual {
    let edges = edge_sets(h);
    let rest: Vec<Vec<u32>> = edges
        .iter()
        .map(|e| e.iter().copied().filter(|x| !chosen.contains(x)).collect())
        .collect();
    let closed: HashSet<u32> = rest.iter().filter(|s: &&Vec<u32>| s.len() == 1).map(|s| s[0]).collect();
    let mut cands: Vec<Vec<u32>> = rest
        .into_iter()
        .filter(|s| s.len() >= 2 && s.iter().all(|x| !closed.contains(x)))
        .collect();
    cands.sort();
    cands.dedup();
    let present: HashSet<&[u32]> = cands.iter().map(|s| s.as_slice()).collect();
    let live = cands
        .iter()
        .filter(|s| (2..s.len()).all(|k| choose(s, k).iter().all(|t| !present.contains(t.as_slice()))))
        .cloned()
        .collect();
    Residual { closed, live }
}

/// Whether no live edge contains another.
pub fn is_antichain(live: &[Vec<u32>]) -> bool {
    for (i, a) in live.iter().enumerate() {
        for (j, b) in live.iter().enumerate() {
            if i != j && a.len() <= b.len() && a.iter().all(|x| b.contains(x)) {
                return false;
            }
        }
    }
    true
}

/// Per-size counts, indexed by `ℓ − 2`, of live edges through `v`, of those
/// holding a marked vertex other than `v`, and of those holding a bad pair
/// avoiding `v`.
pub fn vertex_counts(
    live: &[Vec<u32>],
    v: u32,
    r: usize,
    marked: &HashSet<u32>,
    bad: &BadPairs,
) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let mut d = vec![0; r - 1];
    let mut d1 = vec![0; r - 1];
    let mut d2 = vec![0; r - 1];
    for e in live.iter().filter(|e| e.contains(&v)) {
        let idx = e.len() - 2;
        d[idx] += 1;
        let others: Vec<u32> = e.iter().copied().filter(|&x| x != v).collect();
        if others.iter().any(|x| marked.contains(x)) {
            d1[idx] += 1;
        }
        let has_bad = others
            .iter()
            .enumerate()
            .any(|(i, &a)| others[i + 1..].iter().any(|&b| bad.partners(a).contains(&b)));
        if has_bad {
            d2[idx] += 1;
        }
    }
    (d, d1, d2)
}

/// Schur relations `x + y ≡ z (mod 2n)` over nonzero elements; the
/// degenerate ones (`x = y`) give pairs `{x, 2x}`.
pub fn schur_relations(n: u64) -> (Vec<[u64; 3]>, Vec<[u64; 2]>) {
    let m = 2 * n;
    let mut triples = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for x in 1..m {
        for y in x..m {
            let z = (x + y) % m;
            if z == 0 {
                continue;
            }
            if x == y {
                if z != x {
                    pairs.insert([x.min(z), x.max(z)]);
                }
            } else if z != x && z != y {
                let mut t = [x, y, z];
                t.sort_unstable();
                triples.insert(t);
            }
        }
    }
    (triples.into_iter().collect(), pairs.into_iter().collect())
}

/// Size-3 Schur edges through each element `1..2n`, excluding triples that
/// contain a degenerate pair.
pub fn schur_degrees_brute(n: u64) -> Vec<u64> {
    let (triples, pairs) = schur_relations(n);
    let pairs: HashSet<[u64; 2]> = pairs.into_iter().collect();
    let mut deg = vec![0u64; 2 * n as usize];
    for t in triples {
        let absorbed = [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]
            .iter()
            .any(|p| pairs.contains(p));
        if !absorbed {
            for a in t {
                deg[a as usize] += 1;
            }
        }
    }
    deg
}

/// Two-sided Wilson score interval.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let c = (p + z * z / (2.0 * n)) / (1.0 + z * z / n);
    let h = z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    (c - h, c + h)
}
