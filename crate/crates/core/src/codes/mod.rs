//! Binary linear block codes: parity-check matrices, constructions and
//! file formats.

pub mod alist;
pub mod catalog;
pub mod cyclic;
pub mod field;
pub mod ldpc;
pub mod poly;
pub mod spec_file;

use std::path::PathBuf;

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec, Gf2Error};

pub use cyclic::{
    bch_generator_polynomial, cyclic_h_from_polynomial, cyclic_ldpc_support,
    extend_with_overall_parity, h_from_generator_polynomial, qr_generator_polynomial,
    CyclicCodeSpec,
};
pub use field::Gf2mField;
pub use ldpc::{random_ldpc, WeightProfile};
pub use poly::Gf2Poly;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator {generator} does not divide x^{n}+1 (remainder {remainder})")]
    NotADivisor {
        generator: Gf2Poly,
        n: usize,
        remainder: Gf2Poly,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("unknown code {0:?}")]
    UnknownCode(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// A binary linear block code described by its parity-check matrix.
///
/// `h` may hold more rows than `n - k`; redundant rows are kept because
/// the iterative decoders use them.
#[derive(Clone)]
pub struct Code {
    name: String,
    n: usize,
    k: usize,
    h: BitMatrix,
    dmin_claimed: Option<usize>,
    row_adj: Vec<Vec<u32>>,
    col_adj: Vec<Vec<u32>>,
}

impl Code {
    /// Wraps a parity-check matrix; `k` is derived as `n - rank(h)`.
    pub fn new(name: impl Into<String>, h: BitMatrix, dmin_claimed: Option<usize>) -> Self {
        let n = h.cols();
        let k = n - h.rank();
        let row_adj: Vec<Vec<u32>> = h
            .row_vecs()
            .iter()
            .map(|r| r.iter_ones().map(|c| c as u32).collect())
            .collect();
        let mut col_adj = vec![Vec::new(); n];
        for (r, cols) in row_adj.iter().enumerate() {
            for &c in cols {
                col_adj[c as usize].push(r as u32);
            }
        }
        Code {
            name: name.into(),
            n,
            k,
            h,
            dmin_claimed,
            row_adj,
            col_adj,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_dmin(mut self, dmin: Option<usize>) -> Self {
        self.dmin_claimed = dmin;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of independent checks, `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn dmin_claimed(&self) -> Option<usize> {
        self.dmin_claimed
    }

    /// Column indices of each row of `h`.
    pub fn row_adjacency(&self) -> &[Vec<u32>] {
        &self.row_adj
    }

    /// Row indices of each column of `h`.
    pub fn col_adjacency(&self) -> &[Vec<u32>] {
        &self.col_adj
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_adj.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.col_adj.iter().map(Vec::len).collect()
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        word.len() == self.n && self.h.row_vecs().iter().all(|r| !r.dot(word))
    }

    /// Systematic encoder with parity positions chosen from the highest
    /// column indices down, so cyclic codes get information bits `0..k`.
    pub fn systematic_encoder(&self) -> SystematicEncoder {
        let order: Vec<usize> = (0..self.n).rev().collect();
        let (rows, pivots) = self.h.rref_with_order(&order);
        let mut is_parity = vec![false; self.n];
        for &p in &pivots {
            is_parity[p] = true;
        }
        let info_positions: Vec<usize> = (0..self.n).filter(|&c| !is_parity[c]).collect();
        let parity_equations = rows
            .iter()
            .map(|row| BitVec::from_bools(info_positions.iter().map(|&c| row.get(c))))
            .collect();
        SystematicEncoder {
            n: self.n,
            info_positions,
            parity_positions: pivots,
            parity_equations,
        }
    }

    /// A basis of the code (rows of a generator matrix), derived from `h`.
    pub fn generator_rows(&self) -> Vec<BitVec> {
        let enc = self.systematic_encoder();
        (0..self.k)
            .map(|i| enc.encode(&BitVec::from_support(self.k, &[i])))
            .collect()
    }
}

impl std::fmt::Debug for Code {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Code")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("k", &self.k)
            .field("h_rows", &self.h.rows())
            .field("dmin_claimed", &self.dmin_claimed)
            .finish()
    }
}

/// Maps `k` information bits onto a codeword, leaving them verbatim at
/// `info_positions`.
#[derive(Debug, Clone)]
pub struct SystematicEncoder {
    n: usize,
    info_positions: Vec<usize>,
    parity_positions: Vec<usize>,
    /// Row `r`: which information bits sum into `parity_positions[r]`.
    parity_equations: Vec<BitVec>,
}

impl SystematicEncoder {
    pub fn k(&self) -> usize {
        self.info_positions.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn parity_positions(&self) -> &[usize] {
        &self.parity_positions
    }

    pub fn parity_equations(&self) -> &[BitVec] {
        &self.parity_equations
    }

    pub fn encode(&self, info: &BitVec) -> BitVec {
        assert_eq!(info.len(), self.k(), "information length mismatch");
        let mut cw = BitVec::zeros(self.n);
        for (i, &pos) in self.info_positions.iter().enumerate() {
            cw.set(pos, info.get(i));
        }
        for (eq, &pos) in self.parity_equations.iter().zip(&self.parity_positions) {
            cw.set(pos, eq.dot(info));
        }
        cw
    }

    pub fn extract(&self, codeword: &BitVec) -> BitVec {
        BitVec::from_bools(self.info_positions.iter().map(|&p| codeword.get(p)))
    }
}

/// Minimum distance by exhaustive enumeration of all `2^k` codewords.
///
/// Only sensible for small `k`; returns `None` for the trivial code.
pub fn exhaustive_min_distance(code: &Code) -> Option<usize> {
    assert!(code.k() <= 24, "exhaustive enumeration needs k <= 24");
    let basis = code.generator_rows();
    let mut best: Option<usize> = None;
    // Gray-code walk over all nonzero messages.
    let mut cw = BitVec::zeros(code.n());
    for i in 1u64..(1u64 << code.k()) {
        let flip = i.trailing_zeros() as usize;
        cw.xor_assign(&basis[flip]);
        let w = cw.count_ones();
        best = Some(best.map_or(w, |b| b.min(w)));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn hamming7() -> Code {
        Code::new(
            "hamming(7,4)",
            BitMatrix::from_dense(&[
                [1u8, 0, 1, 0, 1, 0, 1],
                [0, 1, 1, 0, 0, 1, 1],
                [0, 0, 0, 1, 1, 1, 1],
            ]),
            Some(3),
        )
    }

    #[test]
    fn hamming_dimensions_and_encoder() {
        let c = hamming7();
        assert_eq!((c.n(), c.k(), c.redundancy()), (7, 4, 3));
        let enc = c.systematic_encoder();
        assert_eq!(enc.parity_positions().len(), 3);
        for m in 0u64..16 {
            let info = BitVec::from_u64(4, m);
            let cw = enc.encode(&info);
            assert!(c.is_codeword(&cw));
            assert_eq!(enc.extract(&cw), info);
        }
        assert_eq!(exhaustive_min_distance(&c), Some(3));
    }

    #[test]
    fn adjacency_matches_matrix() {
        let c = hamming7();
        assert_eq!(c.row_adjacency()[0], vec![0, 2, 4, 6]);
        assert_eq!(c.col_adjacency()[6], vec![0, 1, 2]);
        assert_eq!(c.col_weights(), vec![1, 1, 2, 1, 2, 2, 3]);
    }
}
