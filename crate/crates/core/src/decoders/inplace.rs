use crate::channel::ReceivedWord;
use crate::codes::Code;
use crate::gf2::BitVec;

use super::{check_dims, DecodeError, DecodeOutcome, Status};

/// Elimination plan for one erasure pattern.
///
/// The plan depends only on which positions are erased, so it can be
/// replayed on any number of right-hand sides sharing that pattern.
#[derive(Debug, Clone)]
pub struct InPlaceSchedule {
    symbols: Vec<usize>,
    rows: Vec<usize>,
    ops: Vec<(u32, u32)>,
    pivots: Vec<u32>,
    pivot_coeffs: Vec<BitVec>,
    failed_at: Option<usize>,
}

impl InPlaceSchedule {
    /// Eliminates erased symbols in the given visit order. For each symbol
    /// the first unflagged equation containing it is flagged and added to
    /// every other unflagged equation containing it. Planning stops at the
    /// first symbol no unflagged equation contains.
    pub fn plan(code: &Code, symbols: &[usize]) -> Self {
        let m = symbols.len();
        let col_adj = code.col_adjacency();
        let mut rows: Vec<usize> = symbols
            .iter()
            .flat_map(|&j| col_adj[j].iter().map(|&r| r as usize))
            .collect();
        rows.sort_unstable();
        rows.dedup();
        let mut coeffs = vec![BitVec::zeros(m); rows.len()];
        for (t, &j) in symbols.iter().enumerate() {
            for &r in &col_adj[j] {
                let a = rows.binary_search(&(r as usize)).unwrap();
                coeffs[a].set(t, true);
            }
        }

        let mut flagged = vec![false; rows.len()];
        let mut ops = Vec::new();
        let mut pivots = Vec::with_capacity(m);
        let mut failed_at = None;
        for t in 0..m {
            let Some(a) = (0..rows.len()).find(|&a| !flagged[a] && coeffs[a].get(t)) else {
                failed_at = Some(t);
                break;
            };
            flagged[a] = true;
            pivots.push(a as u32);
            let pivot = coeffs[a].clone();
            for b in a + 1..rows.len() {
                if !flagged[b] && coeffs[b].get(t) {
                    coeffs[b].xor_assign(&pivot);
                    ops.push((b as u32, a as u32));
                }
            }
        }
        let pivot_coeffs = pivots.iter().map(|&a| coeffs[a as usize].clone()).collect();
        InPlaceSchedule {
            symbols: symbols.to_vec(),
            rows,
            ops,
            pivots,
            pivot_coeffs,
            failed_at,
        }
    }

    /// All symbols received a pivot.
    pub fn is_complete(&self) -> bool {
        self.failed_at.is_none()
    }

    /// Length of the longest prefix of the visit order whose columns are
    /// independent.
    pub fn solved_prefix(&self) -> usize {
        self.pivots.len()
    }

    pub fn flagged_rows(&self) -> usize {
        self.pivots.len()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    /// Rows of `H` taking part in the elimination, ascending. Right-hand
    /// sides passed to [`solve`](Self::solve) follow this order.
    pub fn equations(&self) -> &[usize] {
        &self.rows
    }

    pub fn row_operations(&self) -> usize {
        self.ops.len()
    }

    /// Replays the plan on `rhs` (one vector per equation, one bit per
    /// column) and returns the symbol values in visit order.
    ///
    /// # Panics
    /// If the plan is incomplete or `rhs` has the wrong length.
    pub fn solve(&self, mut rhs: Vec<BitVec>) -> Vec<BitVec> {
        assert!(self.is_complete(), "schedule has no pivot for every symbol");
        assert_eq!(rhs.len(), self.rows.len());
        for &(b, a) in &self.ops {
            let (b, a) = (b as usize, a as usize);
            let src = rhs[a].clone();
            rhs[b].xor_assign(&src);
        }
        let m = self.symbols.len();
        let width = rhs.first().map_or(0, BitVec::len);
        let mut values = vec![BitVec::zeros(width); m];
        for t in (0..m).rev() {
            let mut v = rhs[self.pivots[t] as usize].clone();
            for u in self.pivot_coeffs[t].iter_ones().filter(|&u| u > t) {
                v.xor_assign(&values[u]);
            }
            values[t] = v;
        }
        values
    }
}

/// Gaussian reduction over the erased columns, visiting erased symbols in
/// ascending order.
pub fn inplace_decode(code: &Code, rw: &ReceivedWord) -> Result<DecodeOutcome, DecodeError> {
    check_dims(code, rw)?;
    let schedule = InPlaceSchedule::plan(code, &rw.erased_positions());
    let mut outcome = DecodeOutcome {
        flagged_rows: schedule.flagged_rows(),
        ..DecodeOutcome::failure()
    };
    if !schedule.is_complete() {
        return Ok(outcome);
    }
    let known = rw.known_bits();
    let h = code.h();
    let rhs = schedule
        .equations()
        .iter()
        .map(|&r| BitVec::from_bools([h.row(r).dot(known)]))
        .collect();
    let mut word = known.clone();
    for (&j, v) in schedule.symbols().iter().zip(schedule.solve(rhs)) {
        word.set(j, v.get(0));
    }
    if code.is_codeword(&word) {
        outcome.status = Status::Recovered;
        outcome.word = Some(word);
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::catalog::hamming7;

    #[test]
    fn replay_matches_per_column_decode() {
        let code = hamming7();
        let enc = code.systematic_encoder();
        let erased = [0usize, 3, 5];
        let schedule = InPlaceSchedule::plan(&code, &erased);
        assert!(schedule.is_complete());
        let words: Vec<BitVec> = (0..16u64)
            .map(|i| enc.encode(&BitVec::from_u64(4, i)))
            .collect();
        let rhs = schedule
            .equations()
            .iter()
            .map(|&r| {
                BitVec::from_bools(words.iter().map(|w| {
                    let known = ReceivedWord::with_erasures(w, &erased);
                    code.h().row(r).dot(known.known_bits())
                }))
            })
            .collect();
        let values = schedule.solve(rhs);
        for (col, w) in words.iter().enumerate() {
            let single = inplace_decode(&code, &ReceivedWord::with_erasures(w, &erased)).unwrap();
            assert_eq!(single.word.as_ref(), Some(w));
            for (t, &j) in erased.iter().enumerate() {
                assert_eq!(values[t].get(col), w.get(j));
            }
        }
    }
}
