use crate::channel::{ErasureState, ReceivedWord};
use crate::codes::Code;

use super::symbolic::{Resolution, SymbolicPeeler};
use super::{check_dims, DecodeError, DecodeOutcome, Status};

/// The bit to guess at a stopping set: among bits of rows holding exactly
/// two erasures, the one in most checks, lowest index on ties.
pub fn select_crucial_bit(state: &ErasureState) -> Option<usize> {
    state
        .row_entries()
        .filter(|(_, set)| set.len() == 2)
        .flat_map(|(_, set)| set.iter().copied())
        .max_by_key(|&j| (state.bit_degree(j), std::cmp::Reverse(j)))
}

/// Branching plan once every row holds more than two erasures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessPlan {
    /// Smallest erasure count over rows with erasures.
    pub delta: usize,
    /// Rows with exactly `delta` erasures, ascending.
    pub omega_delta: Vec<usize>,
    /// Rows of `omega_delta` with at least two bits found in no other row.
    pub x_delta: Vec<usize>,
    pub min_g: usize,
    pub crucial_row: usize,
    /// Erased bits of the crucial row, ascending.
    pub crucial_bits: Vec<usize>,
    /// For each `x_delta` row other than the crucial row, its lowest bit
    /// found in no other row.
    pub private_bits: Vec<usize>,
}

impl GuessPlan {
    /// Guesses this step consumes: one for the crucial row, one per private bit.
    pub fn cost(&self) -> usize {
        1 + self.private_bits.len()
    }

    /// Binary choices enumerated by this step.
    pub fn branch_bits(&self) -> usize {
        self.delta - 1 + self.private_bits.len()
    }
}

pub fn compute_guess_plan(state: &ErasureState) -> Option<GuessPlan> {
    let delta = state.row_entries().map(|(_, s)| s.len()).min()?;
    let omega_delta: Vec<usize> = state
        .row_entries()
        .filter(|(_, s)| s.len() == delta)
        .map(|(r, _)| r)
        .collect();
    let private = |r: usize| {
        state
            .row_set(r)
            .iter()
            .copied()
            .filter(|&j| state.bit_degree(j) == 1)
    };
    let x_delta: Vec<usize> = omega_delta
        .iter()
        .copied()
        .filter(|&r| private(r).nth(1).is_some())
        .collect();
    let weight =
        |r: usize| -> usize { state.row_set(r).iter().map(|&j| state.bit_degree(j)).sum() };
    let crucial_row = *omega_delta
        .iter()
        .max_by_key(|&&r| (weight(r), std::cmp::Reverse(r)))?;
    let private_bits = x_delta
        .iter()
        .filter(|&&r| r != crucial_row)
        .map(|&r| private(r).next().unwrap())
        .collect();
    Some(GuessPlan {
        delta,
        min_g: x_delta.len() + 1,
        crucial_bits: state.row_set(crucial_row).to_vec(),
        omega_delta,
        x_delta,
        crucial_row,
        private_bits,
    })
}

/// How many guesses a decoder may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Budget {
    /// Bit guesses only, at most `gs`.
    Bits(usize),
    /// Bit guesses whenever a two-erasure row exists; row guesses, counted
    /// with their private bits, limited to `gs`.
    Rows(usize),
}

impl Budget {
    fn allows_bit(&self, bits: usize) -> bool {
        match *self {
            Budget::Bits(gs) => bits < gs,
            Budget::Rows(_) => true,
        }
    }

    fn allows_plan(&self, rows: usize, min_g: usize) -> bool {
        match *self {
            Budget::Bits(_) => false,
            Budget::Rows(gs) => rows + min_g <= gs,
        }
    }

    /// The guesses charged against `gs`.
    fn charged(&self, bits: usize, rows: usize) -> usize {
        match *self {
            Budget::Bits(_) => bits,
            Budget::Rows(_) => rows,
        }
    }
}

/// Guess decoder: peeling plus guesses on crucial bits, at most `gs`.
///
/// The outcome is what enumerating all `2^g` value assignments would give:
/// failure if peeling stalls with no two-erasure row or no guesses left,
/// ambiguous if more than one assignment satisfies every check, recovered
/// otherwise.
pub fn guess_decode(
    code: &Code,
    rw: &ReceivedWord,
    gs: usize,
) -> Result<DecodeOutcome, DecodeError> {
    decode_with_budget(code, rw, Budget::Bits(gs))
}

/// Multi-guess decoder. Crucial bits are guessed, without limit, while any
/// row holds two erasures; once every row holds more, it guesses a whole
/// crucial row (only assignments satisfying that row's check) together
/// with one private bit per independent row. `gs` bounds these row-stage
/// guesses: a step whose `min_g` would exceed what is left fails. The plan
/// is recomputed after every peeling fixpoint.
pub fn multi_guess_decode(
    code: &Code,
    rw: &ReceivedWord,
    gs: usize,
) -> Result<DecodeOutcome, DecodeError> {
    decode_with_budget(code, rw, Budget::Rows(gs))
}

pub(crate) fn decode_with_budget(
    code: &Code,
    rw: &ReceivedWord,
    budget: Budget,
) -> Result<DecodeOutcome, DecodeError> {
    check_dims(code, rw)?;
    let mut p = SymbolicPeeler::new(code, rw);
    let (mut bits, mut rows) = (0, 0);
    let stalled = loop {
        p.peel();
        if p.remaining() == 0 {
            break false;
        }
        let state = p.snapshot();
        if let Some(j) = select_crucial_bit(&state) {
            if !budget.allows_bit(bits) {
                break true;
            }
            p.guess(j);
            bits += 1;
            continue;
        }
        let plan = compute_guess_plan(&state).expect("stalled state has erasures");
        if !budget.allows_plan(rows, plan.min_g) {
            break true;
        }
        for &j in plan.crucial_bits[..plan.delta - 1]
            .iter()
            .chain(&plan.private_bits)
        {
            p.guess(j);
        }
        rows += plan.cost();
    };
    let mut outcome = DecodeOutcome {
        guesses_used: budget.charged(bits, rows),
        peel_iterations: p.peel_steps,
        ..DecodeOutcome::failure()
    };
    if stalled {
        return Ok(outcome);
    }
    match p.resolution() {
        Resolution::Unique(word) => {
            outcome.status = Status::Recovered;
            outcome.word = Some(word);
            outcome.candidates_checked = 1;
        }
        Resolution::Multiple { free } => {
            outcome.status = Status::Ambiguous;
            outcome.candidates_checked = 1usize.checked_shl(free as u32).unwrap_or(usize::MAX);
        }
        Resolution::None => {}
    }
    Ok(outcome)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{erasure_mask, ReceivedWord};
    use crate::codes::catalog;
    use crate::gf2::BitVec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn symbolic_search_matches_branching() {
        let codes: Vec<Code> = ["bch15", "qr17", "golay23", "bch31"]
            .iter()
            .map(|n| catalog::by_name(n).unwrap())
            .chain([catalog::hamming7()])
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 3];
        for code in &codes {
            let n = code.n();
            let enc = code.systematic_encoder();
            for _ in 0..400 {
                let eps = rng.gen_range(0.1..0.6);
                let mask = erasure_mask(n, eps, &mut rng);
                let word = enc.encode(&BitVec::from_bools((0..code.k()).map(|_| rng.gen())));
                let rw = ReceivedWord::new(&word, mask);
                for budget in [
                    Budget::Bits(2),
                    Budget::Rows(0),
                    Budget::Rows(1),
                    Budget::Rows(3),
                ] {
                    let fast = decode_with_budget(code, &rw, budget).unwrap();
                    let slow = branching::decode(code, &rw, budget);
                    assert_eq!(fast.status, slow.status, "{} {budget:?} {rw}", code.name());
                    assert_eq!(fast.word, slow.word);
                    if fast.is_recovered() {
                        assert_eq!(fast.word.as_ref(), Some(&word));
                    }
                    seen[fast.status as usize] += 1;
                }
            }
        }
        assert!(seen.iter().all(|&c| c > 0), "{seen:?}");
    }
}
