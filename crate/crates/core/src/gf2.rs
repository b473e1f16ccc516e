//! Bit-packed vectors and matrices over GF(2).
//!
//! Bits are stored little-endian inside `u64` words: bit `i` lives in word
//! `i / 64` at position `i % 64`. The packing is internal; every external
//! format goes through the bit accessors.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Errors raised by GF(2) linear algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("system is underdetermined (rank {rank} < {cols} unknowns)")]
    Underdetermined { rank: usize, cols: usize },
    #[error("system is inconsistent")]
    Inconsistent,
}

/// A fixed-length vector over GF(2).
///
/// Padding bits past `len` are always zero, so derived equality is exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_padding();
        v
    }

    /// Builds a vector from 0/1 values; any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let bits: Vec<u8> = iter.into_iter().map(u8::from).collect();
        Self::from_bits(&bits)
    }

    /// Vector of length `len` with ones at the given positions.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` of the integer at position `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_padding();
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Raw words, little-endian bit order.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "and of vectors with different lengths");
        BitVec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Positions of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD_BITS + tz)
                }
            })
        })
    }

    /// Lowest set bit at or after `from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut wi = from / WORD_BITS;
        let mut w = self.words[wi] & (u64::MAX << (from % WORD_BITS));
        loop {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    /// Highest set bit, if any.
    pub fn last_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD_BITS + 63 - w.leading_zeros() as usize)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    /// Same bits, new length; truncates or zero-extends.
    pub fn resized(&self, len: usize) -> BitVec {
        let mut out = BitVec::zeros(len);
        let n = words_for(len).min(self.words.len());
        out.words[..n].copy_from_slice(&self.words[..n]);
        out.clear_padding();
        out
    }

    /// Cyclic rotation towards higher indices: bit `i` moves to `(i + shift) % len`.
    pub fn rotated(&self, shift: usize) -> BitVec {
        let mut out = BitVec::zeros(self.len);
        if self.len == 0 {
            return out;
        }
        for i in self.iter_ones() {
            out.set((i + shift) % self.len, true);
        }
        out
    }

    fn clear_padding(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A dense matrix over GF(2), stored as one [`BitVec`] per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows; all rows must share `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Gf2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Gf2Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    /// Builds a matrix from nested 0/1 slices.
    ///
    /// # Panics
    /// If the rows are ragged.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged dense matrix");
                BitVec::from_bits(r.as_ref())
            })
            .collect();
        BitMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.data
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<(), Gf2Error> {
        if row.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.data.push(row);
        self.rows += 1;
        Ok(())
    }

    /// Replaces row `target` by `target XOR source`.
    pub fn row_xor(&mut self, target: usize, source: usize) -> Result<(), Gf2Error> {
        for index in [target, source] {
            if index >= self.rows {
                return Err(Gf2Error::IndexOutOfRange {
                    index,
                    len: self.rows,
                });
            }
        }
        if target == source {
            self.data[target] = BitVec::zeros(self.cols);
        } else {
            let src = self.data[source].clone();
            self.data[target].xor_assign(&src);
        }
        Ok(())
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_bools((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Submatrix keeping the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let data = self
            .data
            .iter()
            .map(|row| BitVec::from_bools(cols.iter().map(|&c| row.get(c))))
            .collect();
        BitMatrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Appends `extra` zero columns to every row.
    pub fn widened(&self, cols: usize) -> BitMatrix {
        assert!(cols >= self.cols);
        BitMatrix {
            rows: self.rows,
            cols,
            data: self.data.iter().map(|r| r.resized(cols)).collect(),
        }
    }

    /// GF(2) rank. Works on a copy.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<BitVec> = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form of a copy, dropping zero rows.
    ///
    /// Columns are scanned in the order given by `column_order`; returns the
    /// reduced rows and the pivot column of each.
    pub fn rref_with_order(&self, column_order: &[usize]) -> (Vec<BitVec>, Vec<usize>) {
        let mut rows: Vec<BitVec> = self.data.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for &col in column_order {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        (rows, pivots)
    }

    /// GF(2) product `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(BitVec::from_bools(self.data.iter().map(|row| row.dot(v))))
    }

    /// Solves `self · x = b` when the solution exists and is unique.
    pub fn solve_unique(&self, b: &BitVec) -> Result<BitVec, Gf2Error> {
        if b.len() != self.rows {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        // Augmented rows: coefficients then the right-hand side at index `cols`.
        let mut rows: Vec<BitVec> = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut aug = row.resized(self.cols + 1);
                aug.set(self.cols, b.get(r));
                aug
            })
            .collect();
        let mut pivots = Vec::with_capacity(self.cols);
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        if rows[rank..].iter().any(|r| r.get(self.cols)) {
            return Err(Gf2Error::Inconsistent);
        }
        if rank < self.cols {
            return Err(Gf2Error::Underdetermined {
                rank,
                cols: self.cols,
            });
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &col) in pivots.iter().enumerate() {
            x.set(col, rows[r].get(self.cols));
        }
        Ok(x)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let data: Vec<BitVec> = (0..rows)
            .map(|_| BitVec::from_bools((0..cols).map(|_| rng.gen_bool(0.5))))
            .collect();
        BitMatrix::from_rows(cols, data).unwrap()
    }

    // Oracle: rank = log2 of the number of distinct row-space vectors.
    fn rank_by_enumeration(m: &BitMatrix) -> usize {
        let mut span: HashSet<BitVec> = HashSet::new();
        span.insert(BitVec::zeros(m.cols()));
        for row in m.row_vecs() {
            let shifted: Vec<BitVec> = span.iter().map(|v| v.xor(row)).collect();
            span.extend(shifted);
        }
        span.len().trailing_zeros() as usize
    }

    fn solve_by_search(a: &BitMatrix, b: &BitVec) -> Vec<BitVec> {
        (0u64..1 << a.cols())
            .map(|x| BitVec::from_u64(a.cols(), x))
            .filter(|x| &a.mul_vec(x).unwrap() == b)
            .collect()
    }

    #[test]
    fn row_xor_examples() {
        let mut m = BitMatrix::from_dense(&[[1u8, 1], [0, 1]]);
        m.row_xor(0, 1).unwrap();
        assert_eq!(m, BitMatrix::from_dense(&[[1u8, 0], [0, 1]]));
        m.row_xor(1, 1).unwrap();
        assert!(m.row(1).is_zero());
        assert_eq!(
            m.row_xor(2, 0),
            Err(Gf2Error::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn row_xor_preserves_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut m = random_matrix(&mut rng, 8, 8);
            let before = rank_by_enumeration(&m);
            let (t, s) = (rng.gen_range(0..8), rng.gen_range(0..8));
            if t == s {
                continue;
            }
            m.row_xor(t, s).unwrap();
            assert_eq!(rank_by_enumeration(&m), before);
            assert_eq!(m.rank(), before);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(4).rank(), 4);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
        let m = BitMatrix::from_dense(&[[1u8, 1, 0], [0, 1, 1], [1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        // input untouched
        assert_eq!(m.row(2), &BitVec::from_bits(&[1, 0, 1]));
    }

    #[test]
    fn rank_matches_row_space_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let rows = rng.gen_range(1..=10);
            let cols = rng.gen_range(1..=70);
            let m = random_matrix(&mut rng, rows, cols);
            assert_eq!(m.rank(), rank_by_enumeration(&m), "{m:?}");
        }
    }

    #[test]
    fn solve_examples() {
        let b = BitVec::from_bits(&[1, 0, 1]);
        assert_eq!(BitMatrix::identity(3).solve_unique(&b).unwrap(), b);
        let a = BitMatrix::from_dense(&[[1u8, 1], [1, 1]]);
        assert_eq!(
            a.solve_unique(&BitVec::from_bits(&[1, 0])),
            Err(Gf2Error::Inconsistent)
        );
        assert_eq!(
            a.solve_unique(&BitVec::from_bits(&[1, 1])),
            Err(Gf2Error::Underdetermined { rank: 1, cols: 2 })
        );
        assert!(matches!(
            a.solve_unique(&BitVec::zeros(3)),
            Err(Gf2Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn solve_full_column_rank_6x4_matches_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        while checked < 50 {
            let a = random_matrix(&mut rng, 6, 4);
            if a.rank() < 4 {
                continue;
            }
            let x = BitVec::from_u64(4, rng.gen_range(0..16));
            let b = a.mul_vec(&x).unwrap();
            assert_eq!(solve_by_search(&a, &b), vec![x.clone()]);
            assert_eq!(a.solve_unique(&b).unwrap(), x);
            checked += 1;
        }
    }

    #[test]
    fn solve_agrees_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=14);
            let cols = rng.gen_range(1..=12);
            let a = random_matrix(&mut rng, rows, cols);
            let b = BitVec::from_bools((0..rows).map(|_| rng.gen_bool(0.5)));
            let found = solve_by_search(&a, &b);
            match a.solve_unique(&b) {
                Ok(x) => assert_eq!(found, vec![x]),
                Err(Gf2Error::Inconsistent) => assert!(found.is_empty()),
                Err(Gf2Error::Underdetermined { .. }) => assert!(found.len() > 1),
                Err(e) => panic!("unexpected {e}"),
            }
        }
    }

    #[test]
    fn hamming_parity_annihilates_codewords() {
        let h = BitMatrix::from_dense(&[
            [1u8, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]);
        // Four independent codewords spanning the code.
        let g = BitMatrix::from_dense(&[
            [1u8, 1, 1, 0, 0, 0, 0],
            [1, 0, 0, 1, 1, 0, 0],
            [0, 1, 0, 1, 0, 1, 0],
            [1, 1, 0, 1, 0, 0, 1],
        ]);
        for msg in 0u64..16 {
            let mut cw = BitVec::zeros(7);
            for r in 0..4 {
                if msg >> r & 1 == 1 {
                    cw.xor_assign(g.row(r));
                }
            }
            assert!(h.mul_vec(&cw).unwrap().is_zero(), "{cw}");
        }
        assert!(h.mul_vec(&BitVec::zeros(7)).unwrap().is_zero());
        let v = BitVec::from_bits(&[1, 0, 1, 1]);
        assert_eq!(BitMatrix::identity(4).mul_vec(&v).unwrap(), v);
    }

    #[test]
    fn bit_helpers() {
        let v = BitVec::from_support(130, &[0, 64, 129]);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.next_one(1), Some(64));
        assert_eq!(v.next_one(130), None);
        assert_eq!(v.last_one(), Some(129));
        assert_eq!(BitVec::ones(70).count_ones(), 70);
        assert_eq!(v.rotated(1).iter_ones().collect::<Vec<_>>(), vec![0, 1, 65]);
        assert_eq!(v.resized(65).count_ones(), 2);
    }

    proptest! {
        #[test]
        fn mul_vec_is_linear(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..150) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let v = BitVec::from_bools((0..cols).map(|_| rng.gen_bool(0.5)));
            let w = BitVec::from_bools((0..cols).map(|_| rng.gen_bool(0.5)));
            let lhs = m.mul_vec(&v.xor(&w)).unwrap();
            let rhs = m.mul_vec(&v).unwrap().xor(&m.mul_vec(&w).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
