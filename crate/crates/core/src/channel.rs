//! Binary erasure channel and erasure incidence bookkeeping.
//!
//! Sampling uses `ChaCha8Rng::seed_from_u64`; bit `i` is erased when the
//! `i`-th `f64` draw (rand 0.8 `Standard`, 53-bit mantissa) is below ε.
//! Trial `t` of a run seeded with `s` uses [`trial_seed`]`(s, t)`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("erasure probability {0} outside [0, 1]")]
    BadEpsilon(f64),
    #[error("invalid symbol {symbol:?} at position {position}; expected 0, 1 or ?")]
    BadSymbol { symbol: char, position: usize },
    #[error("dimension mismatch: H has {expected} columns, word has {got} bits")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    epsilon: f64,
    seed: u64,
}

impl ChannelConfig {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(ChannelError::BadEpsilon(epsilon));
        }
        Ok(ChannelConfig { epsilon, seed })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a run seeded with `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    master ^ splitmix64(index)
}

/// Erasure mask of length `n`, drawn from `rng`.
pub fn erasure_mask(n: usize, epsilon: f64, rng: &mut impl Rng) -> BitVec {
    BitVec::from_bools((0..n).map(|_| rng.gen::<f64>() < epsilon))
}

/// A word as seen by the receiver. Erased positions always hold 0.
#[derive(Clone, PartialEq, Eq)]
pub struct ReceivedWord {
    known: BitVec,
    erased: BitVec,
}

impl ReceivedWord {
    pub fn new(bits: &BitVec, erased: BitVec) -> Self {
        assert_eq!(bits.len(), erased.len(), "word and mask lengths differ");
        let mut known = bits.clone();
        for j in erased.iter_ones() {
            known.set(j, false);
        }
        ReceivedWord { known, erased }
    }

    pub fn unerased(bits: &BitVec) -> Self {
        ReceivedWord::new(bits, BitVec::zeros(bits.len()))
    }

    /// `bits` with the given positions erased.
    pub fn with_erasures(bits: &BitVec, positions: &[usize]) -> Self {
        ReceivedWord::new(bits, BitVec::from_support(bits.len(), positions))
    }

    pub fn n(&self) -> usize {
        self.known.len()
    }

    pub fn known_bits(&self) -> &BitVec {
        &self.known
    }

    pub fn erased_mask(&self) -> &BitVec {
        &self.erased
    }

    pub fn is_erased(&self, j: usize) -> bool {
        self.erased.get(j)
    }

    pub fn erasure_count(&self) -> usize {
        self.erased.count_ones()
    }

    pub fn erased_positions(&self) -> Vec<usize> {
        self.erased.iter_ones().collect()
    }

    /// Whether `word` agrees with every unerased position.
    pub fn agrees_with(&self, word: &BitVec) -> bool {
        word.len() == self.n()
            && (0..self.n()).all(|j| self.erased.get(j) || word.get(j) == self.known.get(j))
    }
}

impl FromStr for ReceivedWord {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let symbols: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut known = BitVec::zeros(symbols.len());
        let mut erased = BitVec::zeros(symbols.len());
        for (position, &symbol) in symbols.iter().enumerate() {
            match symbol {
                '0' => {}
                '1' => known.set(position, true),
                '?' => erased.set(position, true),
                _ => return Err(ChannelError::BadSymbol { symbol, position }),
            }
        }
        Ok(ReceivedWord { known, erased })
    }
}

impl fmt::Display for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n() {
            let c = match (self.erased.get(j), self.known.get(j)) {
                (true, _) => '?',
                (false, true) => '1',
                (false, false) => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ReceivedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReceivedWord({self})")
    }
}

/// Sends `codeword` through the BEC described by `cfg`.
pub fn transmit(codeword: &BitVec, cfg: &ChannelConfig) -> ReceivedWord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    ReceivedWord::new(
        codeword,
        erasure_mask(codeword.len(), cfg.epsilon, &mut rng),
    )
}

/// Erasure incidence between check rows and erased bits.
///
/// Only rows touching at least one erased bit are kept. `row_sets[a]` holds
/// the erased bits of row `rows[a]`; `col_sets[b]` holds the rows containing
/// erased bit `bits[b]`. All lists are ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErasureState {
    rows: Vec<usize>,
    row_sets: Vec<Vec<usize>>,
    bits: Vec<usize>,
    col_sets: Vec<Vec<usize>>,
}

pub fn build_erasure_state(h: &BitMatrix, rw: &ReceivedWord) -> Result<ErasureState, ChannelError> {
    if h.cols() != rw.n() {
        return Err(ChannelError::DimensionMismatch {
            expected: h.cols(),
            got: rw.n(),
        });
    }
    let mask = rw.erased_mask();
    let bits = rw.erased_positions();
    let mut rows = Vec::new();
    let mut row_sets = Vec::new();
    for r in 0..h.rows() {
        let set: Vec<usize> = h.row(r).and(mask).iter_ones().collect();
        if !set.is_empty() {
            rows.push(r);
            row_sets.push(set);
        }
    }
    Ok(ErasureState::from_row_sets(rows, row_sets, bits))
}

impl ErasureState {
    /// Builds the state from explicit `E^h` sets. `bits` must list every bit
    /// mentioned by the row sets.
    pub fn from_row_sets(rows: Vec<usize>, row_sets: Vec<Vec<usize>>, bits: Vec<usize>) -> Self {
        let mut col_sets = vec![Vec::new(); bits.len()];
        for (&r, set) in rows.iter().zip(&row_sets) {
            for j in set {
                let b = bits
                    .binary_search(j)
                    .expect("row set bit missing from bits");
                col_sets[b].push(r);
            }
        }
        ErasureState {
            rows,
            row_sets,
            bits,
            col_sets,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Rows of `M_ε`, ascending.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// Erased bits, ascending.
    pub fn erased_bits(&self) -> &[usize] {
        &self.bits
    }

    /// `E^h` of row `r`; empty when the row has no erasures.
    pub fn row_set(&self, r: usize) -> &[usize] {
        match self.rows.binary_search(&r) {
            Ok(a) => &self.row_sets[a],
            Err(_) => &[],
        }
    }

    /// `E^v` of bit `j`; empty when the bit is not erased.
    pub fn col_set(&self, j: usize) -> &[usize] {
        match self.bits.binary_search(&j) {
            Ok(b) => &self.col_sets[b],
            Err(_) => &[],
        }
    }

    pub fn row_degree(&self, r: usize) -> usize {
        self.row_set(r).len()
    }

    pub fn bit_degree(&self, j: usize) -> usize {
        self.col_set(j).len()
    }

    /// `(row, E^h)` pairs in row order.
    pub fn row_entries(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        self.rows
            .iter()
            .zip(&self.row_sets)
            .map(|(&r, s)| (r, s.as_slice()))
    }

    /// Marks bit `j` as known, dropping rows left without erasures.
    pub fn resolve(&mut self, j: usize) {
        let Ok(b) = self.bits.binary_search(&j) else {
            return;
        };
        self.bits.remove(b);
        let touched = self.col_sets.remove(b);
        for r in touched.into_iter().rev() {
            let a = self.rows.binary_search(&r).expect("incidence asymmetry");
            let set = &mut self.row_sets[a];
            set.retain(|&x| x != j);
            if set.is_empty() {
                self.rows.remove(a);
                self.row_sets.remove(a);
            }
        }
    }

    /// Checks `j ∈ E_i^h ⇔ i ∈ E_j^v`.
    pub fn is_symmetric(&self) -> bool {
        let forward: usize = self.row_sets.iter().map(Vec::len).sum();
        let backward: usize = self.col_sets.iter().map(Vec::len).sum();
        forward == backward
            && self.row_entries().all(|(r, set)| {
                set.iter()
                    .all(|&j| self.col_set(j).binary_search(&r).is_ok())
            })
    }
}
