//! Lazy enumeration of column index sets.
//!
//! [`enumerate_block_selections`] streams the k-subsets of `0..n` that take
//! at most `f_i` indices from block `i`, in lexicographic order. The stream
//! never materializes the full family.

use std::ops::Deref;

use crate::Error;

/// Strictly increasing list of column indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnSelection(Vec<usize>);

impl ColumnSelection {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self, Error> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams("selection must be strictly increasing".into()));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::OutOfBounds { index: i, len: n });
        }
        Ok(ColumnSelection(indices))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl Deref for ColumnSelection {
    type Target = [usize];
    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// Plain k-combinations of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, current: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let k = self.current.len();
        match (0..k).rev().find(|&i| self.current[i] < self.n - k + i) {
            Some(i) => {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// Stream of k-subsets respecting per-block caps.
#[derive(Clone, Debug)]
pub struct BlockSelections {
    block_of: Vec<usize>,
    caps: Vec<usize>,
    k: usize,
    current: Vec<usize>,
    counts: Vec<usize>,
    started: bool,
    done: bool,
}

/// Every k-subset `I` of `0..Σn_i` with `|I ∩ J_i| ≤ f_i`, each once, in
/// lexicographic order. Caps above the block size are clamped.
pub fn enumerate_block_selections(block_sizes: &[usize], caps: &[usize], k: usize) -> BlockSelections {
    assert_eq!(block_sizes.len(), caps.len(), "one cap per block");
    let block_of: Vec<usize> = block_sizes.iter().enumerate().flat_map(|(b, &w)| std::iter::repeat_n(b, w)).collect();
    BlockSelections {
        block_of,
        caps: caps.iter().zip(block_sizes).map(|(&f, &w)| f.min(w)).collect(),
        k,
        current: Vec::with_capacity(k),
        counts: vec![0; block_sizes.len()],
        started: false,
        done: false,
    }
}

impl BlockSelections {
    fn n(&self) -> usize {
        self.block_of.len()
    }

    /// Can `need` more indices be drawn from `from..n` under the current counts?
    fn feasible(&self, from: usize, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        let mut avail = 0usize;
        let mut idx = from;
        let n = self.n();
        while idx < n {
            let b = self.block_of[idx];
            let mut in_block = 0;
            while idx < n && self.block_of[idx] == b {
                in_block += 1;
                idx += 1;
            }
            avail += in_block.min(self.caps[b] - self.counts[b]);
            if avail >= need {
                return true;
            }
        }
        false
    }

    fn push(&mut self, idx: usize) {
        self.counts[self.block_of[idx]] += 1;
        self.current.push(idx);
    }

    fn pop(&mut self) -> Option<usize> {
        let idx = self.current.pop()?;
        self.counts[self.block_of[idx]] -= 1;
        Some(idx)
    }

    /// Smallest admissible index at or after `from` that keeps the rest feasible.
    fn place(&mut self, from: usize) -> bool {
        let need_after = self.k - self.current.len() - 1;
        for idx in from..self.n() {
            let b = self.block_of[idx];
            if self.counts[b] >= self.caps[b] {
                continue;
            }
            self.push(idx);
            if self.feasible(idx + 1, need_after) {
                return true;
            }
            self.pop();
        }
        false
    }

    fn fill(&mut self) -> bool {
        while self.current.len() < self.k {
            let from = self.current.last().map_or(0, |&l| l + 1);
            if !self.place(from) {
                return false;
            }
        }
        true
    }
}

impl Iterator for BlockSelections {
    type Item = ColumnSelection;

    fn next(&mut self) -> Option<ColumnSelection> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if !self.feasible(0, self.k) || !self.fill() {
                self.done = true;
                return None;
            }
            return Some(ColumnSelection(self.current.clone()));
        }
        // Advance the deepest position that can move; the greedy fill after it
        // always succeeds because `place` checks feasibility.
        loop {
            let Some(last) = self.pop() else {
                self.done = true;
                return None;
            };
            if self.place(last + 1) {
                let ok = self.fill();
                debug_assert!(ok);
                return Some(ColumnSelection(self.current.clone()));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial_u64;

    fn brute(block_sizes: &[usize], caps: &[usize], k: usize) -> Vec<Vec<usize>> {
        let n: usize = block_sizes.iter().sum();
        let block_of: Vec<usize> =
            block_sizes.iter().enumerate().flat_map(|(b, &w)| std::iter::repeat_n(b, w)).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let mut counts = vec![0; block_sizes.len()];
            for &i in &set {
                counts[block_of[i]] += 1;
            }
            if counts.iter().zip(caps).all(|(c, f)| c <= f) {
                out.push(set);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn small_example() {
        let got: Vec<Vec<usize>> = enumerate_block_selections(&[2, 2], &[1, 1], 2).map(|s| s.into_vec()).collect();
        assert_eq!(got, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn unconstrained_is_all_subsets() {
        assert_eq!(enumerate_block_selections(&[3, 4], &[3, 4], 3).count() as u64, binomial_u64(7, 3));
    }

    #[test]
    fn empty_selection_and_infeasible() {
        let v: Vec<_> = enumerate_block_selections(&[2, 3], &[1, 1], 0).collect();
        assert_eq!(v.len(), 1);
        assert!(v[0].is_empty());
        assert_eq!(enumerate_block_selections(&[2, 3], &[1, 1], 3).count(), 0);
        assert_eq!(enumerate_block_selections(&[2, 0, 3], &[2, 0, 0], 2).count(), 1);
    }

    #[test]
    fn matches_brute_force_filter() {
        let shapes: &[(&[usize], &[usize])] = &[
            (&[3, 3], &[2, 2]),
            (&[4, 3, 2], &[2, 1, 2]),
            (&[3, 3, 3, 3], &[2, 2, 1, 2]),
            (&[5, 7], &[3, 6]),
            (&[1, 1, 1, 1, 1], &[1, 0, 1, 1, 0]),
            (&[6, 6], &[0, 6]),
        ];
        for &(sizes, caps) in shapes {
            let n: usize = sizes.iter().sum();
            for k in 0..=n {
                let got: Vec<Vec<usize>> = enumerate_block_selections(sizes, caps, k).map(|s| s.into_vec()).collect();
                assert_eq!(got, brute(sizes, caps, k), "sizes {sizes:?} caps {caps:?} k {k}");
            }
        }
    }

    #[test]
    fn combinations_lexicographic() {
        let v: Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(v, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn selection_validation() {
        assert!(ColumnSelection::new(vec![0, 2, 5], 6).is_ok());
        assert!(ColumnSelection::new(vec![2, 2], 6).is_err());
        assert!(ColumnSelection::new(vec![1, 6], 6).is_err());
    }
}
