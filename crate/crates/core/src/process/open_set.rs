/// Set of open vertices with uniform selection by rank.
///
/// Selection returns the `k`-th smallest open vertex, so any two engines that
/// draw `k` the same way from the same generator pick the same vertex.
#[derive(Clone, Debug)]
pub struct OpenSet {
    tree: Vec<u32>,
    present: Vec<bool>,
    len: usize,
    top_bit: usize,
}

impl OpenSet {
    /// All of `0..n` open.
    pub fn full(n: usize) -> Self {
        let mut tree = vec![0u32; n + 1];
        for i in 1..=n {
            tree[i] += 1;
            let j = i + (i & i.wrapping_neg());
            if j <= n {
                tree[j] += tree[i];
            }
        }
        let top_bit = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        OpenSet {
            tree,
            present: vec![true; n],
            len: n,
            top_bit,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: u32) -> bool {
        self.present[v as usize]
    }

    /// Returns false if `v` was already absent.
    pub fn remove(&mut self, v: u32) -> bool {
        let idx = v as usize;
        if !self.present[idx] {
            return false;
        }
        self.present[idx] = false;
        self.len -= 1;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] -= 1;
            i += i & i.wrapping_neg();
        }
        true
    }

    /// The `k`-th smallest open vertex, `k < len`.
    pub fn select(&self, k: usize) -> u32 {
        assert!(k < self.len, "rank {k} out of range {}", self.len);
        let mut pos = 0usize;
        let mut rem = k as u32;
        let mut bit = self.top_bit;
        while bit > 0 {
            let next = pos + bit;
            if next < self.tree.len() && self.tree[next] <= rem {
                pos = next;
                rem -= self.tree[next];
            }
            bit >>= 1;
        }
        pos as u32
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i as u32))
    }
}
