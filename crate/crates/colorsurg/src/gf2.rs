//! Dense vectors over GF(2) and incremental row-echelon bases.

use serde::{Deserialize, Serialize};

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i & 63);
        if b {
            self.words[i >> 6] |= m;
        } else {
            self.words[i >> 6] &= !m;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    pub fn xor_assign(&mut self, o: &BitVec) {
        debug_assert_eq!(self.len, o.len);
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= *b;
        }
    }

    pub fn and_popcount(&self, o: &BitVec) -> u32 {
        self.words
            .iter()
            .zip(&o.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit.
    pub fn leading(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(k * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Concatenation `self || o`.
    pub fn concat(&self, o: &BitVec) -> BitVec {
        BitVec::from_indices(
            self.len + o.len,
            self.ones().chain(o.ones().map(|i| i + self.len)),
        )
    }
}

/// Row-echelon basis keyed by leading bit, optionally tracking which inserted
/// rows combine into each basis row.
#[derive(Clone, Debug)]
pub struct Basis {
    len: usize,
    rows: Vec<(BitVec, BitVec)>,
    pivot: std::collections::HashMap<usize, usize>,
    inserted: usize,
    cap: usize,
}

impl Basis {
    /// `cap` is the maximum number of insertions whose combinations are tracked.
    pub fn new(len: usize, cap: usize) -> Self {
        Basis {
            len,
            rows: Vec::new(),
            pivot: Default::default(),
            inserted: 0,
            cap,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn vec_len(&self) -> usize {
        self.len
    }

    /// Reduce `v`; returns the residue and the combination of inserted rows used.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        let mut c = BitVec::zeros(self.cap);
        while let Some(h) = r.leading() {
            match self.pivot.get(&h) {
                Some(&k) => {
                    r.xor_assign(&self.rows[k].0);
                    c.xor_assign(&self.rows[k].1);
                }
                None => break,
            }
        }
        (r, c)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Combination of inserted rows summing to `v`, if any.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let (r, c) = self.reduce(v);
        if r.is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// Insert a row. Returns `Err(combination)` when it is dependent; the
    /// combination (including the new row) sums to zero.
    pub fn insert(&mut self, v: &BitVec) -> Result<(), BitVec> {
        let id = self.inserted;
        self.inserted += 1;
        let (r, mut c) = self.reduce(v);
        if id < self.cap {
            c.flip(id);
        }
        match r.leading() {
            Some(h) => {
                self.pivot.insert(h, self.rows.len());
                self.rows.push((r, c));
                Ok(())
            }
            None => Err(c),
        }
    }
}

/// Rank of a list of vectors.
pub fn rank(rows: &[BitVec]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut b = Basis::new(first.len(), 0);
    for r in rows {
        let _ = b.insert(r);
    }
    b.rank()
}

/// Basis of combinations `x` with `sum_i x_i rows_i = 0`.
pub fn left_nullspace(rows: &[BitVec], width: usize) -> Vec<BitVec> {
    let mut b = Basis::new(width, rows.len());
    rows.iter().filter_map(|r| b.insert(r).err()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_ops() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(129, true);
        assert_eq!(v.leading(), Some(129));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 129]);
        v.flip(129);
        assert_eq!(v.leading(), Some(0));
        assert_eq!(v.count_ones(), 1);
    }

    #[test]
    fn nullspace_of_dependent_rows() {
        let a = BitVec::from_indices(5, [0, 1]);
        let b = BitVec::from_indices(5, [1, 2]);
        let c = BitVec::from_indices(5, [0, 2]);
        let ns = left_nullspace(&[a.clone(), b.clone(), c.clone()], 5);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(rank(&[a, b, c]), 2);
    }

    #[test]
    fn express_tracks_combination() {
        let rows = [
            BitVec::from_indices(4, [0, 3]),
            BitVec::from_indices(4, [1]),
            BitVec::from_indices(4, [2, 3]),
        ];
        let mut b = Basis::new(4, 3);
        for r in &rows {
            b.insert(r).unwrap();
        }
        let target = BitVec::from_indices(4, [0, 1, 2]);
        let c = b.express(&target).unwrap();
        let mut acc = BitVec::zeros(4);
        for i in c.ones() {
            acc.xor_assign(&rows[i]);
        }
        assert_eq!(acc, target);
    }
}
