//! Dense GF(2) linear algebra over packed bit-vectors.
//!
//! Chains are column vectors; the boundary matrix of dimension `k` has rows
//! indexed by `(k-1)`-simplices and columns by `k`-simplices. All routines
//! are deterministic: no randomized pivoting, leftmost pivot first.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Packed bit-vector over GF(2); XOR is the group operation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec[{}; ones={:?}]", self.len, self.iter_ones().collect::<Vec<_>>())
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(WORD_BITS)] }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + b)
                }
            })
        })
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find_map(|(wi, &w)| {
            (w != 0).then(|| wi * WORD_BITS + w.trailing_zeros() as usize)
        })
    }

    pub fn last_one(&self) -> Option<usize> {
        self.words.iter().enumerate().rev().find_map(|(wi, &w)| {
            (w != 0).then(|| wi * WORD_BITS + (63 - w.leading_zeros() as usize))
        })
    }

    /// Coordinate-lexicographic order: at the lowest differing index the
    /// vector with the bit unset is the smaller one.
    pub fn lex_cmp(&self, other: &BitVec) -> std::cmp::Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter().zip(&other.words) {
            let d = a ^ b;
            if d != 0 {
                let bit = 1u64 << d.trailing_zeros();
                return if a & bit == 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        std::cmp::Ordering::Equal
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }
}

/// Incremental GF(2) row basis keyed by highest set bit. Used for
/// independence tests and span membership.
#[derive(Clone, Debug, Default)]
pub struct XorBasis {
    rows: std::collections::BTreeMap<usize, BitVec>,
}

impl XorBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, mut v: BitVec) -> BitVec {
        while let Some(h) = v.last_one() {
            match self.rows.get(&h) {
                Some(row) => v.xor_assign(row),
                None => break,
            }
        }
        v
    }

    /// Inserts `v` if independent of the current span; returns whether it was.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let r = self.reduce(v);
        match r.last_one() {
            Some(h) => {
                self.rows.insert(h, r);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }
}

/// Dense GF(2) matrix stored as rows of [`BitVec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Z2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

/// Row-reduced echelon form plus pivot bookkeeping.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Z2Matrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Z2Matrix { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn from_rows(rows: Vec<BitVec>) -> Self {
        let cols = rows.first().map_or(0, BitVec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Z2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut BitVec {
        &mut self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v);
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut t = Z2Matrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix-vector product over GF(2); `v` is a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} vs {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = 0u64;
            for (a, b) in row.words().iter().zip(v.words()) {
                acc ^= a & b;
            }
            out.set(r, acc.count_ones() % 2 == 1);
        }
        Ok(out)
    }

    /// Row-reduced echelon form: leftmost pivot, lowest row first.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivot_cols = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            let Some(p) = (next_row..m.rows.len()).find(|&r| m.rows[r].get(col)) else {
                continue;
            };
            m.rows.swap(next_row, p);
            let pivot = m.rows[next_row].clone();
            for (r, row) in m.rows.iter_mut().enumerate() {
                if r != next_row && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivot_cols.push(col);
            next_row += 1;
            if next_row == m.rows.len() {
                break;
            }
        }
        let rank = pivot_cols.len();
        Rref { matrix: m, pivot_cols, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Solves `self * w = b`, returning the representative with all free
    /// variables set to zero, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Result<Option<BitVec>> {
        if b.len() != self.rows.len() {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} vs {} rows",
                b.len(),
                self.rows.len()
            )));
        }
        let mut m = self.clone();
        let mut rhs = b.clone();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, pivot col)
        let mut next_row = 0;
        for col in 0..m.cols {
            let Some(p) = (next_row..m.rows.len()).find(|&r| m.rows[r].get(col)) else {
                continue;
            };
            m.rows.swap(next_row, p);
            let (a, bb) = (rhs.get(next_row), rhs.get(p));
            rhs.set(next_row, bb);
            rhs.set(p, a);
            let pivot = m.rows[next_row].clone();
            let pivot_rhs = rhs.get(next_row);
            for r in 0..m.rows.len() {
                if r != next_row && m.rows[r].get(col) {
                    m.rows[r].xor_assign(&pivot);
                    let v = rhs.get(r) ^ pivot_rhs;
                    rhs.set(r, v);
                }
            }
            pivots.push((next_row, col));
            next_row += 1;
            if next_row == m.rows.len() {
                break;
            }
        }
        // inconsistent iff some zero row has rhs 1
        for r in next_row..m.rows.len() {
            if rhs.get(r) {
                return Ok(None);
            }
        }
        let mut w = BitVec::zeros(self.cols);
        for &(row, col) in &pivots {
            if rhs.get(row) {
                w.set(col, true);
            }
        }
        Ok(Some(w))
    }
}

impl Z2Matrix {
    /// Basis of the null space; one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let Rref { matrix, pivot_cols, .. } = self.rref();
        let is_pivot: std::collections::HashSet<usize> = pivot_cols.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !is_pivot.contains(c)) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (row, &pc) in pivot_cols.iter().enumerate() {
                if matrix.rows[row].get(free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        basis
    }
}
