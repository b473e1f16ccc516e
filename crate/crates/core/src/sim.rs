//! Monte-Carlo frame-error sweeps and shortfall census.
//!
//! Trial `t` at every grid point draws from `ChaCha8Rng` seeded with
//! [`trial_seed`]`(master, t)`, so all grid points and all decoders see the
//! same uniforms (common random numbers). Trials run in chunks of
//! [`CHUNK`]; early stopping is checked only between chunks, which keeps
//! results independent of thread scheduling.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::channel::{erasure_mask, trial_seed, ReceivedWord};
use crate::codes::Code;
use crate::decoders::{DecodeError, Decoder, InPlaceSchedule, Status};
use crate::gf2::BitVec;
use crate::lt::{lt_decode, lt_encode_with, SolitonDistribution};

pub const CHUNK: u64 = 1000;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

pub const FER_HEADER: [&str; 7] = [
    "epsilon",
    "trials",
    "frame_errors",
    "undetected",
    "fer",
    "ci_low",
    "ci_high",
];

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sweep: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error("{path}: {source}")]
    Csv { path: String, source: csv::Error },
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: u64,
        message: String,
    },
}

/// What a sweep simulates.
#[derive(Debug, Clone)]
pub enum SimTarget {
    /// A block code with one of the erasure decoders.
    Block { code: Code, decoder: Decoder },
    /// An LT code: `k` source bits, `symbols` output symbols sent through
    /// the channel.
    Lt {
        k: usize,
        symbols: usize,
        distribution: SolitonDistribution,
    },
}

impl SimTarget {
    pub fn lt(k: usize, symbols: usize) -> Result<Self, SimError> {
        let distribution =
            SolitonDistribution::ideal(k).map_err(|e| SimError::InvalidConfig(e.to_string()))?;
        Ok(SimTarget::Lt {
            k,
            symbols,
            distribution,
        })
    }

    pub fn label(&self) -> String {
        match self {
            SimTarget::Block { code, decoder } => format!("{} {decoder}", code.name()),
            SimTarget::Lt { k, symbols, .. } => format!("lt(k={k}, symbols={symbols})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub target: SimTarget,
    pub epsilons: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    /// Stop a grid point once this many frame errors are seen.
    pub stop_after_errors: Option<u64>,
    /// Send random codewords instead of the all-zero word.
    pub random_codewords: bool,
}

impl SweepConfig {
    pub fn new(target: SimTarget, epsilons: Vec<f64>, trials: u64, master_seed: u64) -> Self {
        SweepConfig {
            target,
            epsilons,
            trials,
            master_seed,
            stop_after_errors: None,
            random_codewords: false,
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.trials == 0 {
            return Err(SimError::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(SimError::InvalidConfig(format!(
                "epsilon {e} outside [0, 1]"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub epsilon: f64,
    pub erasures: usize,
    pub status: Status,
    pub undetected: bool,
    pub guesses_used: usize,
    pub wall_time: Duration,
}

impl TrialRecord {
    pub fn frame_error(&self) -> bool {
        self.status != Status::Recovered || self.undetected
    }
}

/// One row of a FER table.
#[derive(Debug, Clone, PartialEq)]
pub struct FerPoint {
    pub epsilon: f64,
    pub trials: u64,
    pub frame_errors: u64,
    pub undetected: u64,
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl FerPoint {
    pub fn from_counts(epsilon: f64, trials: u64, frame_errors: u64, undetected: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(frame_errors, trials);
        FerPoint {
            epsilon,
            trials,
            frame_errors,
            undetected,
            fer: if trials == 0 {
                0.0
            } else {
                frame_errors as f64 / trials as f64
            },
            ci_low,
            ci_high,
        }
    }

    pub fn undetected_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.undetected as f64 / self.trials as f64
        }
    }
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Runs one trial at erasure probability `epsilon`.
pub fn run_trial(
    target: &SimTarget,
    epsilon: f64,
    seed: u64,
    random_codewords: bool,
) -> Result<TrialRecord, SimError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (erasures, status, undetected, guesses_used) = match target {
        SimTarget::Block { code, decoder } => {
            let mask = erasure_mask(code.n(), epsilon, &mut rng);
            let sent = if random_codewords {
                let enc = code.systematic_encoder();
                enc.encode(&BitVec::from_bools((0..enc.k()).map(|_| rng.gen::<bool>())))
            } else {
                BitVec::zeros(code.n())
            };
            let rw = ReceivedWord::new(&sent, mask);
            let out = decoder.decode(code, &rw)?;
            let undetected = out.word.as_ref().is_some_and(|w| *w != sent);
            (rw.erasure_count(), out.status, undetected, out.guesses_used)
        }
        SimTarget::Lt {
            k,
            symbols,
            distribution,
        } => {
            let source = if random_codewords {
                BitVec::from_bools((0..*k).map(|_| rng.gen::<bool>()))
            } else {
                BitVec::zeros(*k)
            };
            let encoded = lt_encode_with(&source, *symbols, rng.gen(), distribution);
            let mask = erasure_mask(*symbols, epsilon, &mut rng);
            let survivors: Vec<_> = encoded
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !mask.get(*i))
                .map(|(_, s)| s)
                .collect();
            let (status, undetected) = match lt_decode(&survivors, *k) {
                Ok(bits) => (Status::Recovered, bits != source),
                Err(_) => (Status::Failure, false),
            };
            (mask.count_ones(), status, undetected, 0)
        }
    };
    Ok(TrialRecord {
        epsilon,
        erasures,
        status,
        undetected,
        guesses_used,
        wall_time: start.elapsed(),
    })
}

/// FER per grid point; FER counts failures, ambiguities and undetected
/// errors.
pub fn run_fer_sweep(cfg: &SweepConfig) -> Result<Vec<FerPoint>, SimError> {
    cfg.validate()?;
    let mut table = Vec::with_capacity(cfg.epsilons.len());
    for &eps in &cfg.epsilons {
        let (mut done, mut errors, mut undetected) = (0u64, 0u64, 0u64);
        while done < cfg.trials {
            let end = (done + CHUNK).min(cfg.trials);
            let (e, u) = (done..end)
                .into_par_iter()
                .map(|t| {
                    let rec = run_trial(
                        &cfg.target,
                        eps,
                        trial_seed(cfg.master_seed, t),
                        cfg.random_codewords,
                    )?;
                    Ok::<_, SimError>((u64::from(rec.frame_error()), u64::from(rec.undetected)))
                })
                .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
            errors += e;
            undetected += u;
            done = end;
            if cfg.stop_after_errors.is_some_and(|limit| errors >= limit) {
                break;
            }
        }
        log::info!(
            "{} eps={eps}: {errors}/{done} frame errors",
            cfg.target.label()
        );
        table.push(FerPoint::from_counts(eps, done, errors, undetected));
    }
    Ok(table)
}

/// Parses `start:stop:step` into grid points, inclusive of `stop` up to
/// rounding; points are rounded to 12 decimals.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, SimError> {
    let bad = || SimError::InvalidConfig(format!("bad grid {spec:?}; expected start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [single] => Ok(vec![single]),
        [start, stop, step] if step > 0.0 && stop >= start => {
            let count = ((stop - start) / step + 1e-9).floor() as u64;
            Ok((0..=count)
                .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                .collect())
        }
        _ => Err(bad()),
    }
}

pub fn fer_csv_string(table: &[FerPoint]) -> Result<String, SimError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |source| SimError::Csv {
        path: "<memory>".into(),
        source,
    };
    w.write_record(FER_HEADER).map_err(wrap)?;
    for p in table {
        w.write_record([
            p.epsilon.to_string(),
            p.trials.to_string(),
            p.frame_errors.to_string(),
            p.undetected.to_string(),
            p.fer.to_string(),
            p.ci_low.to_string(),
            p.ci_high.to_string(),
        ])
        .map_err(wrap)?;
    }
    let bytes = w.into_inner().map_err(|e| wrap(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn write_csv(table: &[FerPoint], path: &Path) -> Result<(), SimError> {
    let text = fer_csv_string(table)?;
    std::fs::write(path, text).map_err(|e| SimError::Csv {
        path: path.display().to_string(),
        source: e.into(),
    })
}

pub fn read_csv(path: &Path) -> Result<Vec<FerPoint>, SimError> {
    let name = path.display().to_string();
    let wrap = |source| SimError::Csv {
        path: name.clone(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(wrap)?;
    let header = r.headers().map_err(wrap)?.clone();
    if header.iter().ne(FER_HEADER) {
        return Err(SimError::Format {
            path: name,
            line: 1,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(wrap)?;
        let line = rec.position().map_or(0, |p| p.line());
        let field = |i: usize| -> Result<&str, SimError> {
            rec.get(i).ok_or_else(|| SimError::Format {
                path: name.clone(),
                line,
                message: format!("missing column {}", FER_HEADER[i]),
            })
        };
        let bad = |i: usize| SimError::Format {
            path: name.clone(),
            line,
            message: format!("bad value in column {}", FER_HEADER[i]),
        };
        let f = |i: usize| -> Result<f64, SimError> { field(i)?.parse().map_err(|_| bad(i)) };
        let u = |i: usize| -> Result<u64, SimError> { field(i)?.parse().map_err(|_| bad(i)) };
        out.push(FerPoint {
            epsilon: f(0)?,
            trials: u(1)?,
            frame_errors: u(2)?,
            undetected: u(3)?,
            fer: f(4)?,
            ci_low: f(5)?,
            ci_high: f(6)?,
        });
    }
    Ok(out)
}

/// Distribution of erasures left uncorrected relative to `n - k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortfallStats {
    pub max_correctable: usize,
    pub trials: u64,
    /// `histogram[s]`: trials with shortfall `s`.
    pub histogram: Vec<u64>,
}

impl ShortfallStats {
    pub fn probability(&self, shortfall: usize) -> f64 {
        self.histogram.get(shortfall).copied().unwrap_or(0) as f64 / self.trials as f64
    }

    pub fn mean_shortfall(&self) -> f64 {
        let total: u64 = self
            .histogram
            .iter()
            .enumerate()
            .map(|(s, &c)| s as u64 * c)
            .sum();
        total as f64 / self.trials as f64
    }

    pub fn mean_corrected(&self) -> f64 {
        self.max_correctable as f64 - self.mean_shortfall()
    }

    /// Fraction of trials correcting at most `corrected` erasures.
    pub fn prob_corrected_at_most(&self, corrected: usize) -> f64 {
        let min_shortfall = self.max_correctable.saturating_sub(corrected);
        let count: u64 = self.histogram.iter().skip(min_shortfall).sum();
        count as f64 / self.trials as f64
    }

    pub fn csv_string(&self) -> String {
        let mut out = String::from("shortfall,corrected,count,probability\n");
        for (s, &c) in self.histogram.iter().enumerate() {
            out.push_str(&format!(
                "{s},{},{c},{}\n",
                self.max_correctable - s,
                c as f64 / self.trials as f64
            ));
        }
        out
    }
}

/// Erasures the optimal decoder corrects in one census trial.
///
/// A uniformly random pattern of `n - k` erasures is drawn in random order;
/// erasures are then removed from the end of that order one at a time
/// until in-place decoding succeeds. Success on a prefix is equivalent to
/// the prefix columns being independent, so a single elimination in the
/// drawn order yields the answer.
pub fn census_trial(code: &Code, seed: u64) -> usize {
    InPlaceSchedule::plan(code, &census_order(code, seed)).solved_prefix()
}

/// The erasure order [`census_trial`] draws for `seed`.
pub fn census_order(code: &Code, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..code.n()).collect();
    order.shuffle(&mut rng);
    order.truncate(code.redundancy());
    order
}

pub fn run_shortfall_census(
    code: &Code,
    trials: u64,
    seed: u64,
) -> Result<ShortfallStats, SimError> {
    if trials == 0 {
        return Err(SimError::InvalidConfig("trials must be at least 1".into()));
    }
    let max_correctable = code.redundancy();
    let histogram = (0..trials)
        .into_par_iter()
        .fold(
            || vec![0u64; max_correctable + 1],
            |mut h, t| {
                h[max_correctable - census_trial(code, trial_seed(seed, t))] += 1;
                h
            },
        )
        .reduce(
            || vec![0u64; max_correctable + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let last = histogram.iter().rposition(|&c| c > 0).unwrap_or(0);
    Ok(ShortfallStats {
        max_correctable,
        trials,
        histogram: histogram[..=last].to_vec(),
    })
}
