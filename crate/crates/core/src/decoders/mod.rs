//! Erasure decoders sharing one outcome type.
//!
//! [`recover`] peels degree-1 checks. [`guess_decode`] additionally branches
//! on crucial bits of two-erasure rows; [`multi_guess_decode`] branches on
//! whole rows once every row holds more than two erasures. [`inplace_decode`]
//! is Gaussian reduction restricted to the erased columns.

mod guess;
mod inplace;
mod peel;
mod symbolic;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::channel::ReceivedWord;
use crate::codes::Code;
use crate::gf2::BitVec;

pub use guess::{
    compute_guess_plan, guess_decode, multi_guess_decode, select_crucial_bit, GuessPlan,
};
pub use inplace::{inplace_decode, InPlaceSchedule};
pub use peel::recover;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("dimension mismatch: code length {expected}, word length {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown decoder {0:?}")]
    UnknownDecoder(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Recovered,
    Ambiguous,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: Status,
    /// Present iff `status == Recovered`.
    pub word: Option<BitVec>,
    pub guesses_used: usize,
    pub candidates_checked: usize,
    pub peel_iterations: usize,
    /// In-place only: equations flagged before finishing or failing.
    pub flagged_rows: usize,
}

impl DecodeOutcome {
    pub(crate) fn failure() -> Self {
        DecodeOutcome {
            status: Status::Failure,
            word: None,
            guesses_used: 0,
            candidates_checked: 0,
            peel_iterations: 0,
            flagged_rows: 0,
        }
    }

    pub fn is_recovered(&self) -> bool {
        self.status == Status::Recovered
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    Recovery,
    Guess { gs: usize },
    MultiGuess { gs: usize },
    InPlace,
}

impl Decoder {
    pub fn decode(&self, code: &Code, rw: &ReceivedWord) -> Result<DecodeOutcome, DecodeError> {
        match *self {
            Decoder::Recovery => recover(code, rw),
            Decoder::Guess { gs } => guess_decode(code, rw, gs),
            Decoder::MultiGuess { gs } => multi_guess_decode(code, rw, gs),
            Decoder::InPlace => inplace_decode(code, rw),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Decoder::Recovery => "recovery",
            Decoder::Guess { .. } => "guess",
            Decoder::MultiGuess { .. } => "multiguess",
            Decoder::InPlace => "inplace",
        }
    }

    /// Parses a decoder kind; `gs` applies to the guessing decoders.
    pub fn from_kind(kind: &str, gs: usize) -> Result<Self, DecodeError> {
        Ok(match kind {
            "recovery" => Decoder::Recovery,
            "guess" => Decoder::Guess { gs },
            "multiguess" | "multi-guess" => Decoder::MultiGuess { gs },
            "inplace" | "in-place" => Decoder::InPlace,
            other => return Err(DecodeError::UnknownDecoder(other.to_string())),
        })
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoder::Guess { gs } | Decoder::MultiGuess { gs } => {
                write!(f, "{}(gs={gs})", self.kind())
            }
            _ => f.write_str(self.kind()),
        }
    }
}

impl FromStr for Decoder {
    type Err = DecodeError;

    /// Accepts `recovery`, `inplace`, `guess:2`, `multiguess:3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, gs) = match s.split_once(':') {
            Some((k, g)) => (
                k,
                g.parse()
                    .map_err(|_| DecodeError::UnknownDecoder(s.to_string()))?,
            ),
            None => (s, 0),
        };
        Decoder::from_kind(kind, gs)
    }
}

pub(crate) fn check_dims(code: &Code, rw: &ReceivedWord) -> Result<(), DecodeError> {
    if code.n() != rw.n() {
        return Err(DecodeError::DimensionMismatch {
            expected: code.n(),
            got: rw.n(),
        });
    }
    Ok(())
}
