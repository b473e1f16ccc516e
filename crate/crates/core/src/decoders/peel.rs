#[cfg(test)]
use crate::channel::ErasureState;
use crate::channel::ReceivedWord;
use crate::codes::Code;
use crate::gf2::BitVec;

use super::{check_dims, DecodeError, DecodeOutcome, Status};

/// Incremental peeling state with an undo journal.
///
/// Per row it tracks the erasure count, the XOR of known bits and the XOR
/// of erased column indices, so a degree-1 row names its erased bit directly.
pub(crate) struct Peeler<'a> {
    code: &'a Code,
    value: Vec<u8>,
    erased: Vec<bool>,
    remaining: usize,
    row_count: Vec<u32>,
    row_parity: Vec<u8>,
    row_index_xor: Vec<u32>,
    ready: Vec<u32>,
    journal: Vec<u32>,
    conflicts: usize,
    pub(crate) peel_steps: usize,
}

impl<'a> Peeler<'a> {
    pub(crate) fn new(code: &'a Code, rw: &ReceivedWord) -> Self {
        let n = code.n();
        let known = rw.known_bits();
        let value: Vec<u8> = (0..n).map(|j| u8::from(known.get(j))).collect();
        let erased: Vec<bool> = (0..n).map(|j| rw.is_erased(j)).collect();
        let rows = code.row_adjacency();
        let mut p = Peeler {
            code,
            remaining: rw.erasure_count(),
            row_count: vec![0; rows.len()],
            row_parity: vec![0; rows.len()],
            row_index_xor: vec![0; rows.len()],
            ready: Vec::new(),
            journal: Vec::new(),
            conflicts: 0,
            peel_steps: 0,
            value,
            erased,
        };
        for (r, cols) in rows.iter().enumerate() {
            for &c in cols {
                let c = c as usize;
                if p.erased[c] {
                    p.row_count[r] += 1;
                    p.row_index_xor[r] ^= c as u32;
                } else {
                    p.row_parity[r] ^= p.value[c];
                }
            }
            match p.row_count[r] {
                0 if p.row_parity[r] == 1 => p.conflicts += 1,
                1 => p.ready.push(r as u32),
                _ => {}
            }
        }
        p
    }

    pub(crate) fn remaining(&self) -> usize {
        self.remaining
    }

    /// Some check is violated by the current assignment.
    pub(crate) fn contradicted(&self) -> bool {
        self.conflicts > 0
    }

    #[cfg(test)]
    pub(crate) fn mark(&self) -> usize {
        self.journal.len()
    }

    #[cfg(test)]
    pub(crate) fn row_parity(&self, r: usize) -> u8 {
        self.row_parity[r]
    }

    pub(crate) fn assign(&mut self, j: usize, v: u8) {
        debug_assert!(self.erased[j]);
        self.erased[j] = false;
        self.value[j] = v;
        self.remaining -= 1;
        self.journal.push(j as u32);
        for &r in &self.code.col_adjacency()[j] {
            let r = r as usize;
            self.row_count[r] -= 1;
            self.row_parity[r] ^= v;
            self.row_index_xor[r] ^= j as u32;
            match self.row_count[r] {
                0 if self.row_parity[r] == 1 => self.conflicts += 1,
                1 => self.ready.push(r as u32),
                _ => {}
            }
        }
    }

    #[cfg(test)]
    /// Reverts assignments back to `mark`.
    pub(crate) fn undo_to(&mut self, mark: usize) {
        while self.journal.len() > mark {
            let j = self.journal.pop().unwrap() as usize;
            let v = self.value[j];
            for &r in &self.code.col_adjacency()[j] {
                let r = r as usize;
                if self.row_count[r] == 0 && self.row_parity[r] == 1 {
                    self.conflicts -= 1;
                }
                self.row_count[r] += 1;
                self.row_parity[r] ^= v;
                self.row_index_xor[r] ^= j as u32;
            }
            self.erased[j] = true;
            self.value[j] = 0;
            self.remaining += 1;
        }
        self.ready.clear();
    }

    /// Solves degree-1 rows until none is left or a check is violated.
    pub(crate) fn peel(&mut self) {
        while let Some(r) = self.ready.pop() {
            if self.conflicts > 0 {
                self.ready.clear();
                return;
            }
            let r = r as usize;
            if self.row_count[r] != 1 {
                continue;
            }
            let j = self.row_index_xor[r] as usize;
            let v = self.row_parity[r];
            self.assign(j, v);
            self.peel_steps += 1;
        }
    }

    pub(crate) fn word(&self) -> BitVec {
        BitVec::from_bools(self.value.iter().map(|&v| v == 1))
    }

    #[cfg(test)]
    /// Current incidence as an [`ErasureState`].
    pub(crate) fn snapshot(&self) -> ErasureState {
        let mut rows = Vec::new();
        let mut row_sets = Vec::new();
        for (r, cols) in self.code.row_adjacency().iter().enumerate() {
            if self.row_count[r] > 0 {
                rows.push(r);
                row_sets.push(
                    cols.iter()
                        .map(|&c| c as usize)
                        .filter(|&c| self.erased[c])
                        .collect(),
                );
            }
        }
        let bits = (0..self.erased.len()).filter(|&j| self.erased[j]).collect();
        ErasureState::from_row_sets(rows, row_sets, bits)
    }

    /// The partially decoded word, erasures still marked.
    #[cfg(test)]
    pub(crate) fn received(&self) -> ReceivedWord {
        ReceivedWord::new(
            &self.word(),
            BitVec::from_bools(self.erased.iter().copied()),
        )
    }
}

/// Peeling decoder: repeatedly solves checks with a single erasure.
pub fn recover(code: &Code, rw: &ReceivedWord) -> Result<DecodeOutcome, DecodeError> {
    check_dims(code, rw)?;
    let mut p = Peeler::new(code, rw);
    p.peel();
    let done = p.remaining() == 0 && !p.contradicted();
    Ok(DecodeOutcome {
        status: if done {
            Status::Recovered
        } else {
            Status::Failure
        },
        word: done.then(|| p.word()),
        peel_iterations: p.peel_steps,
        ..DecodeOutcome::failure()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::build_erasure_state;
    use crate::codes::catalog::hamming7;

    #[test]
    fn snapshot_matches_rebuild_during_peeling() {
        let code = hamming7();
        let rw = ReceivedWord::with_erasures(&BitVec::zeros(7), &[0, 1, 2, 6]);
        let mut p = Peeler::new(&code, &rw);
        assert_eq!(p.snapshot(), build_erasure_state(code.h(), &rw).unwrap());
        let mark = p.mark();
        p.assign(2, 0);
        p.peel();
        let now = p.received();
        assert_eq!(p.snapshot(), build_erasure_state(code.h(), &now).unwrap());
        assert!(p.snapshot().is_symmetric());
        p.undo_to(mark);
        assert_eq!(p.received(), rw);
    }
}
