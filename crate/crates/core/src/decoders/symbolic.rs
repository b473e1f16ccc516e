//! Peeling with guessed bits kept as unknowns.
//!
//! Which checks become solvable during peeling depends only on the erasure
//! pattern, never on bit values, so every branch of a guess tree follows
//! the same path. Instead of enumerating branches, each guess introduces a
//! fresh variable and every recovered bit is stored as an affine function
//! of the variables. Checks that end with no erasures constrain the
//! variables; the surviving candidates are exactly the solutions of those
//! constraints.

use crate::channel::{ErasureState, ReceivedWord};
use crate::codes::Code;
use crate::gf2::BitVec;

/// Affine forms are packed as `words` u64s; bit `n` is the constant term.
pub(crate) struct SymbolicPeeler<'a> {
    code: &'a Code,
    n: usize,
    words: usize,
    expr: Vec<u64>,
    open: Vec<bool>,
    remaining: usize,
    row_count: Vec<u32>,
    row_acc: Vec<u64>,
    row_index_xor: Vec<u32>,
    ready: Vec<u32>,
    basis: Vec<(usize, Vec<u64>)>,
    inconsistent: bool,
    variables: usize,
    pub(crate) peel_steps: usize,
}

pub(crate) enum Resolution {
    /// All bits determined; the unique consistent word.
    Unique(BitVec),
    /// `2^free` consistent words.
    Multiple { free: usize },
    /// No word satisfies the checks.
    None,
}

impl<'a> SymbolicPeeler<'a> {
    pub(crate) fn new(code: &'a Code, rw: &ReceivedWord) -> Self {
        let n = code.n();
        let words = (n + 1).div_ceil(64);
        let rows = code.row_adjacency();
        let mut p = SymbolicPeeler {
            code,
            n,
            words,
            expr: vec![0; n * words],
            open: (0..n).map(|j| rw.is_erased(j)).collect(),
            remaining: rw.erasure_count(),
            row_count: vec![0; rows.len()],
            row_acc: vec![0; rows.len() * words],
            row_index_xor: vec![0; rows.len()],
            ready: Vec::new(),
            basis: Vec::new(),
            inconsistent: false,
            variables: 0,
            peel_steps: 0,
        };
        let known = rw.known_bits();
        for j in known.iter_ones() {
            p.set_const(j);
        }
        for (r, cols) in rows.iter().enumerate() {
            for &c in cols {
                let c = c as usize;
                if p.open[c] {
                    p.row_count[r] += 1;
                    p.row_index_xor[r] ^= c as u32;
                } else {
                    let (acc, e) = p.acc_and_expr(r, c);
                    xor_into(acc, e);
                }
            }
            match p.row_count[r] {
                0 => {
                    let v = p.row_acc[r * words..(r + 1) * words].to_vec();
                    p.constrain(v);
                }
                1 => p.ready.push(r as u32),
                _ => {}
            }
        }
        p
    }

    fn set_const(&mut self, j: usize) {
        let (w, b) = (self.n / 64, self.n % 64);
        self.expr[j * self.words + w] |= 1 << b;
    }

    fn acc_and_expr(&mut self, r: usize, c: usize) -> (&mut [u64], &[u64]) {
        let w = self.words;
        (
            &mut self.row_acc[r * w..(r + 1) * w],
            &self.expr[c * w..(c + 1) * w],
        )
    }

    pub(crate) fn remaining(&self) -> usize {
        self.remaining
    }

    /// Introduces a fresh unknown for open bit `j`.
    pub(crate) fn guess(&mut self, j: usize) {
        debug_assert!(self.variables < self.n);
        let v = self.variables;
        self.variables += 1;
        let mut e = vec![0u64; self.words];
        e[v / 64] |= 1 << (v % 64);
        self.resolve(j, &e);
    }

    fn resolve(&mut self, j: usize, e: &[u64]) {
        debug_assert!(self.open[j]);
        let w = self.words;
        self.open[j] = false;
        self.remaining -= 1;
        self.expr[j * w..(j + 1) * w].copy_from_slice(e);
        for &r in &self.code.col_adjacency()[j] {
            let r = r as usize;
            self.row_count[r] -= 1;
            self.row_index_xor[r] ^= j as u32;
            xor_into(&mut self.row_acc[r * w..(r + 1) * w], e);
            match self.row_count[r] {
                0 => {
                    let v = self.row_acc[r * w..(r + 1) * w].to_vec();
                    self.constrain(v);
                }
                1 => self.ready.push(r as u32),
                _ => {}
            }
        }
    }

    /// Records the constraint `v = 0`.
    fn constrain(&mut self, mut v: Vec<u64>) {
        for (pivot, row) in &self.basis {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                xor_into(&mut v, row);
            }
        }
        match first_var(&v, self.n) {
            Some(pivot) => self.basis.push((pivot, v)),
            None => {
                if v[self.n / 64] >> (self.n % 64) & 1 == 1 {
                    self.inconsistent = true;
                }
            }
        }
    }

    pub(crate) fn peel(&mut self) {
        let w = self.words;
        while let Some(r) = self.ready.pop() {
            let r = r as usize;
            if self.row_count[r] != 1 {
                continue;
            }
            let j = self.row_index_xor[r] as usize;
            let e = self.row_acc[r * w..(r + 1) * w].to_vec();
            self.resolve(j, &e);
            self.peel_steps += 1;
        }
    }

    pub(crate) fn snapshot(&self) -> ErasureState {
        let mut rows = Vec::new();
        let mut row_sets = Vec::new();
        for (r, cols) in self.code.row_adjacency().iter().enumerate() {
            if self.row_count[r] > 0 {
                rows.push(r);
                row_sets.push(
                    cols.iter()
                        .map(|&c| c as usize)
                        .filter(|&c| self.open[c])
                        .collect(),
                );
            }
        }
        let bits = (0..self.n).filter(|&j| self.open[j]).collect();
        ErasureState::from_row_sets(rows, row_sets, bits)
    }

    /// Solves the constraints once every bit is determined.
    pub(crate) fn resolution(&self) -> Resolution {
        debug_assert_eq!(self.remaining, 0);
        if self.inconsistent {
            return Resolution::None;
        }
        let free = self.variables - self.basis.len();
        if free > 0 {
            return Resolution::Multiple { free };
        }
        // Every variable is a pivot; later basis rows never hold earlier
        // pivots, so back-substitution runs in reverse.
        let mut value = vec![false; self.variables];
        for (pivot, row) in self.basis.iter().rev() {
            let mut v = row[self.n / 64] >> (self.n % 64) & 1 == 1;
            for q in ones(row, self.variables).filter(|&q| q != *pivot) {
                v ^= value[q];
            }
            value[*pivot] = v;
        }
        let w = self.words;
        let word = BitVec::from_bools((0..self.n).map(|j| {
            let e = &self.expr[j * w..(j + 1) * w];
            let mut b = e[self.n / 64] >> (self.n % 64) & 1 == 1;
            for q in ones(e, self.variables) {
                b ^= value[q];
            }
            b
        }));
        Resolution::Unique(word)
    }
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Set variable bits below `limit`.
fn ones(v: &[u64], limit: usize) -> impl Iterator<Item = usize> + '_ {
    v.iter()
        .enumerate()
        .flat_map(move |(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
        .take_while(move |&q| q < limit)
}

fn first_var(v: &[u64], n: usize) -> Option<usize> {
    ones(v, n).next()
}
