//! w-set combinatorics: sunflower detection, the permutation-scan
//! sunflower-free process, the explicit sunflower hypergraph `ℋ_{n,w}` and the
//! counting formulas around it.

mod formulas;
mod hypergraph;
mod scan;

use std::collections::HashMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::combin::{rank_subset, unrank_subset};
use crate::error::{Error, Result};

pub use formulas::{
    asymptotic_check, codegree_formula, codegree_unordered, count_d, count_n,
    d_terms_exact, delta_ell_bound, dominant_kernel_size, kappa, phi_sf, spread_kappa, spread_psi,
    theorem_lower_bound, AsymptoticReport, DeltaEllBound, LogScaleNumber, SFParams,
    SpreadReport, TheoremBound,
};
pub use hypergraph::{sunflower_hypergraph, SunflowerCaps};
pub use scan::{sunflower_free_process, ScanLog, DEFAULT_SCAN_CAP};

type Mask = SmallVec<[u64; 2]>;

/// A `w`-subset of `{0, …, n−1}`: sorted elements plus a bit mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WSet {
    elems: SmallVec<[u32; 8]>,
    mask: Mask,
}

impl WSet {
    /// Sorts `elems`; rejects repeats and elements `>= n`.
    pub fn new(n: u32, elems: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut e: SmallVec<[u32; 8]> = elems.into_iter().collect();
        e.sort_unstable();
        if e.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::invalid(format!("set {e:?} repeats an element")));
        }
        if let Some(&x) = e.last() {
            if x >= n {
                return Err(Error::invalid(format!("element {x} >= n = {n}")));
            }
        }
        Ok(Self::from_sorted(n, &e))
    }

    pub(crate) fn from_sorted(n: u32, elems: &[u32]) -> Self {
        let mut mask: Mask = SmallVec::from_elem(0, (n as usize).div_ceil(64).max(1));
        for &x in elems {
            mask[(x / 64) as usize] |= 1 << (x % 64);
        }
        WSet {
            elems: SmallVec::from_slice(elems),
            mask,
        }
    }

    /// The set of lexicographic rank `rank` among the `w`-subsets of `[n]`.
    pub fn unrank(n: u32, w: u32, rank: u64) -> Self {
        let mut buf = Vec::with_capacity(w as usize);
        unrank_subset(n, w, rank, &mut buf);
        Self::from_sorted(n, &buf)
    }

    pub fn rank(&self, n: u32) -> u64 {
        rank_subset(n, &self.elems)
    }

    pub fn elements(&self) -> &[u32] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    fn and(&self, other: &WSet) -> Mask {
        self.mask.iter().zip(&other.mask).map(|(a, b)| a & b).collect()
    }

    pub fn intersection_size(&self, other: &WSet) -> usize {
        self.mask
            .iter()
            .zip(&other.mask)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersection(&self, other: &WSet) -> Vec<u32> {
        self.elems.iter().copied().filter(|&x| other.has(x)).collect()
    }

    pub fn has(&self, x: u32) -> bool {
        let i = (x / 64) as usize;
        i < self.mask.len() && self.mask[i] >> (x % 64) & 1 == 1
    }
}

/// Result of a sunflower test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunflowerVerdict {
    pub is_sunflower: bool,
    /// The common intersection, when the sets form a sunflower.
    pub kernel: Option<Vec<u32>>,
}

fn check_input(sets: &[WSet]) -> Result<()> {
    if sets.len() < 2 {
        return Err(Error::invalid("a sunflower test needs at least two sets"));
    }
    if sets.iter().any(|s| s.len() != sets[0].len()) {
        return Err(Error::invalid("sets must have equal cardinality"));
    }
    Ok(())
}

/// Pairwise test: every pairwise intersection equals the first one.
pub fn is_sunflower(sets: &[WSet]) -> Result<SunflowerVerdict> {
    check_input(sets)?;
    let kernel = sets[0].and(&sets[1]);
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if sets[i].and(&sets[j]) != kernel {
                return Ok(SunflowerVerdict {
                    is_sunflower: false,
                    kernel: None,
                });
            }
        }
    }
    Ok(SunflowerVerdict {
        is_sunflower: true,
        kernel: Some(sets[0].intersection(&sets[1])),
    })
}

/// Multiplicity test: each element lies in zero, one, or all of the sets.
pub fn is_sunflower_by_multiplicity(sets: &[WSet]) -> Result<SunflowerVerdict> {
    check_input(sets)?;
    let k = sets.len();
    let mut count: HashMap<u32, usize> = HashMap::new();
    for s in sets {
        for &x in s.elements() {
            *count.entry(x).or_default() += 1;
        }
    }
    if count.values().any(|&c| c != 1 && c != k) {
        return Ok(SunflowerVerdict {
            is_sunflower: false,
            kernel: None,
        });
    }
    let mut kernel: Vec<u32> = count
        .into_iter()
        .filter_map(|(x, c)| (c == k).then_some(x))
        .collect();
    kernel.sort_unstable();
    Ok(SunflowerVerdict {
        is_sunflower: true,
        kernel: Some(kernel),
    })
}

/// A family of distinct `w`-subsets of `[n]`, kept in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSetFamily {
    n: u32,
    w: u32,
    sets: Vec<WSet>,
}

impl WSetFamily {
    pub fn new(n: u32, w: u32) -> Self {
        WSetFamily {
            n,
            w,
            sets: Vec::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn sets(&self) -> &[WSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Appends without checking for duplicates.
    pub fn push(&mut self, s: WSet) {
        debug_assert_eq!(s.len(), self.w as usize);
        self.sets.push(s);
    }

    pub fn ranks(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.rank(self.n)).collect()
    }

    /// Writes the text form: a header `n w r`, then one set per line.
    pub fn write_text<W: Write>(&self, r: usize, mut out: W) -> Result<()> {
        writeln!(out, "{} {} {r}", self.n, self.w)?;
        for s in &self.sets {
            let line: Vec<String> = s.elements().iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    /// Reads the text form; returns the family and `r`.
    pub fn read_text<R: BufRead>(input: R) -> Result<(Self, usize)> {
        let mut header: Option<(u32, u32, usize)> = None;
        let mut fam = WSetFamily::new(0, 0);
        let mut seen = std::collections::HashSet::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let nums = line
                .split_whitespace()
                .map(|s| {
                    s.parse::<u64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        msg: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let Some((n, w, _)) = header else {
                if nums.len() != 3 {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "header must be `n w r`".into(),
                    });
                }
                let (n, w, r) = (nums[0] as u32, nums[1] as u32, nums[2] as usize);
                header = Some((n, w, r));
                fam = WSetFamily::new(n, w);
                continue;
            };
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            if nums.len() != w as usize {
                return Err(parse_err(format!("expected {w} elements, got {}", nums.len())));
            }
            let s = WSet::new(n, nums.iter().map(|&x| x as u32))
                .map_err(|e| parse_err(e.to_string()))?;
            if !seen.insert(s.clone()) {
                return Err(parse_err(format!("duplicate set {:?}", s.elements())));
            }
            fam.push(s);
        }
        let (_, _, r) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        Ok((fam, r))
    }
}

/// Whether `family ∪ {cand}` contains an `r`-sunflower through `cand`.
///
/// Members are bucketed by their kernel candidate `K = cand ∩ f`; inside a
/// bucket we need `r − 1` members whose petals `f ∖ K` are pairwise disjoint.
pub fn creates_sunflower(family: &WSetFamily, cand: &WSet, r: usize) -> bool {
    creates_sunflower_in(family.sets(), cand, r)
}

pub(crate) fn creates_sunflower_in(sets: &[WSet], cand: &WSet, r: usize) -> bool {
    assert!(r >= 2);
    let need = r - 1;
    let mut buckets: HashMap<Mask, Vec<usize>> = HashMap::new();
    for (i, f) in sets.iter().enumerate() {
        if f == cand {
            continue;
        }
        buckets.entry(cand.and(f)).or_default().push(i);
    }
    buckets.into_iter().any(|(kernel, members)| {
        if members.len() < need {
            return false;
        }
        let petals: Vec<Mask> = members
            .iter()
            .map(|&i| {
                sets[i]
                    .mask
                    .iter()
                    .zip(&kernel)
                    .map(|(a, k)| a & !k)
                    .collect()
            })
            .collect();
        let mut used: Mask = SmallVec::from_elem(0, kernel.len());
        disjoint_petals(&petals, 0, need, &mut used)
    })
}

fn disjoint_petals(petals: &[Mask], start: usize, need: usize, used: &mut Mask) -> bool {
    if need == 0 {
        return true;
    }
    for i in start..petals.len() {
        if petals.len() - i < need {
            return false;
        }
        let p = &petals[i];
        if p.iter().zip(used.iter()).any(|(a, b)| a & b != 0) {
            continue;
        }
        for (u, a) in used.iter_mut().zip(p) {
            *u |= a;
        }
        let found = disjoint_petals(petals, i + 1, need - 1, used);
        for (u, a) in used.iter_mut().zip(p) {
            *u &= !a;
        }
        if found {
            return true;
        }
    }
    false
}

/// Brute force over all `(r−1)`-subsets of the family.
pub fn creates_sunflower_brute(family: &WSetFamily, cand: &WSet, r: usize) -> bool {
    let others: Vec<usize> = (0..family.len()).filter(|&i| family.sets[i] != *cand).collect();
    let mut found = false;
    crate::combin::for_each_subset(&others, r - 1, |sub| {
        if found {
            return;
        }
        let mut group: Vec<WSet> = sub.iter().map(|&i| family.sets[i].clone()).collect();
        group.push(cand.clone());
        found = is_sunflower(&group).map(|v| v.is_sunflower).unwrap_or(false);
    });
    found
}

/// Outcome of re-checking a family for sunflower-freeness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub sunflower_free: bool,
    /// Index of the first member that completes an `r`-sunflower with earlier members.
    pub first_violation: Option<usize>,
}

/// Every sunflower has a last member, so an incremental scan suffices.
pub fn verify_family(family: &WSetFamily, r: usize) -> FamilyCheck {
    for i in 0..family.len() {
        if creates_sunflower_in(&family.sets[..i], &family.sets[i], r) {
            return FamilyCheck {
                sunflower_free: false,
                first_violation: Some(i),
            };
        }
    }
    FamilyCheck {
        sunflower_free: true,
        first_violation: None,
    }
}

/// Whether every `w`-set outside the family would create an `r`-sunflower.
pub fn is_maximal(family: &WSetFamily, r: usize) -> bool {
    let present: std::collections::HashSet<u64> = family.ranks().into_iter().collect();
    let total = crate::combin::binomial_u128(family.n as u64, family.w as u64).unwrap() as u64;
    (0..total)
        .filter(|rk| !present.contains(rk))
        .all(|rk| creates_sunflower(family, &WSet::unrank(family.n, family.w, rk), r))
}
