//! Small combinatorial helpers shared across modules.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `C(n, k)` in u128, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Exact `C(n, k)`; zero when `k > n` or `n < 0`.
pub fn binomial_big(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial_big(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        // exact conversion keeps full precision while finite
        let f: f64 = num_traits::ToPrimitive::to_f64(x).unwrap();
        return f.ln();
    }
    let shift = bits - 64;
    let top: u64 = num_traits::ToPrimitive::to_u64(&(x >> shift)).unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Calls `f` on every `k`-subset of `items` (in lexicographic position order).
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T])) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = Vec::with_capacity(k);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(&buf);
        let n = items.len();
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Lexicographic rank of a sorted `k`-subset of `{0, ..., n-1}`.
pub fn rank_subset(n: u32, subset: &[u32]) -> u64 {
    let k = subset.len() as u64;
    let mut rank: u64 = 0;
    let mut prev: u64 = 0;
    for (i, &x) in subset.iter().enumerate() {
        let x = x as u64;
        for y in prev..x {
            rank += binomial_u128(n as u64 - y - 1, k - i as u64 - 1).unwrap() as u64;
        }
        prev = x + 1;
    }
    rank
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(n: u32, k: u32, mut rank: u64, out: &mut Vec<u32>) {
    out.clear();
    let mut x: u64 = 0;
    for i in 0..k as u64 {
        loop {
            let c = binomial_u128(n as u64 - x - 1, k as u64 - i - 1).unwrap() as u64;
            if rank < c {
                break;
            }
            rank -= c;
            x += 1;
        }
        out.push(x as u32);
        x += 1;
    }
}
