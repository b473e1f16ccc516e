//! LT fountain codes over single bits.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::Code;
use crate::gf2::{BitMatrix, BitVec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LtError {
    #[error("source length must be at least 1")]
    EmptySource,
    #[error("peeling stalled with {recovered} of {k} source bits recovered")]
    Incomplete { recovered: usize, k: usize },
}

/// Output-degree distribution over `1..=k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonDistribution {
    k: usize,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl SolitonDistribution {
    /// Ideal soliton: `ρ(1) = 1/k`, `ρ(d) = 1/(d(d-1))`.
    pub fn ideal(k: usize) -> Result<Self, LtError> {
        if k == 0 {
            return Err(LtError::EmptySource);
        }
        let pmf = (1..=k)
            .map(|d| {
                if d == 1 {
                    1.0 / k as f64
                } else {
                    1.0 / (d as f64 * (d - 1) as f64)
                }
            })
            .collect();
        Ok(Self::from_pmf(k, pmf))
    }

    /// Robust soliton with spike parameters `c` and `delta`
    /// (0.1 and 0.5 are customary).
    pub fn robust(k: usize, c: f64, delta: f64) -> Result<Self, LtError> {
        let ideal = Self::ideal(k)?;
        let kf = k as f64;
        let r = c * (kf / delta).ln() * kf.sqrt();
        let spike = if r > 0.0 {
            (kf / r).floor() as usize
        } else {
            0
        };
        let tau = |d: usize| -> f64 {
            if spike == 0 || d > spike {
                0.0
            } else if d < spike {
                r / (d as f64 * kf)
            } else {
                r * (r / delta).ln() / kf
            }
        };
        let raw: Vec<f64> = (1..=k)
            .map(|d| ideal.pmf[d - 1] + tau(d).max(0.0))
            .collect();
        let beta: f64 = raw.iter().sum();
        Ok(Self::from_pmf(
            k,
            raw.into_iter().map(|p| p / beta).collect(),
        ))
    }

    fn from_pmf(k: usize, pmf: Vec<f64>) -> Self {
        let mut acc = 0.0;
        let cdf = pmf
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        SolitonDistribution { k, pmf, cdf }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `pmf()[d - 1]` is the probability of degree `d`.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        let u = rng.gen::<f64>() * self.cdf[self.k - 1];
        let i = self.cdf.partition_point(|&c| c <= u);
        i.min(self.k - 1) + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtOutputSymbol {
    pub id: u64,
    /// Source indices, ascending.
    pub neighbors: Vec<usize>,
    pub value: bool,
}

/// Encodes with the ideal soliton distribution.
pub fn lt_encode(source: &BitVec, count: usize, seed: u64) -> Result<Vec<LtOutputSymbol>, LtError> {
    let dist = SolitonDistribution::ideal(source.len())?;
    Ok(lt_encode_with(source, count, seed, &dist))
}

/// Encodes `count` symbols; symbol `i` draws its degree and neighbors from
/// one ChaCha8 stream seeded with `seed`.
pub fn lt_encode_with(
    source: &BitVec,
    count: usize,
    seed: u64,
    dist: &SolitonDistribution,
) -> Vec<LtOutputSymbol> {
    assert_eq!(
        dist.k(),
        source.len(),
        "distribution and source sizes differ"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count as u64)
        .map(|id| {
            let d = dist.sample(&mut rng);
            let mut neighbors = index::sample(&mut rng, source.len(), d).into_vec();
            neighbors.sort_unstable();
            let value = neighbors.iter().fold(false, |acc, &i| acc ^ source.get(i));
            LtOutputSymbol {
                id,
                neighbors,
                value,
            }
        })
        .collect()
}

/// Peeling decoder over the received symbols.
pub fn lt_decode(symbols: &[LtOutputSymbol], k: usize) -> Result<BitVec, LtError> {
    let mut degree: Vec<usize> = symbols.iter().map(|s| s.neighbors.len()).collect();
    let mut value: Vec<bool> = symbols.iter().map(|s| s.value).collect();
    let mut index_xor: Vec<usize> = symbols
        .iter()
        .map(|s| s.neighbors.iter().fold(0, |a, &i| a ^ i))
        .collect();
    let mut users = vec![Vec::new(); k];
    for (s, sym) in symbols.iter().enumerate() {
        for &i in &sym.neighbors {
            users[i].push(s);
        }
    }
    let mut ripple: Vec<usize> = (0..symbols.len()).filter(|&s| degree[s] == 1).collect();
    let mut known: Vec<Option<bool>> = vec![None; k];
    let mut recovered = 0;
    while let Some(s) = ripple.pop() {
        if degree[s] != 1 {
            continue;
        }
        let i = index_xor[s];
        let v = value[s];
        known[i] = Some(v);
        recovered += 1;
        for &t in &users[i] {
            degree[t] -= 1;
            value[t] ^= v;
            index_xor[t] ^= i;
            if degree[t] == 1 {
                ripple.push(t);
            }
        }
    }
    if recovered < k {
        return Err(LtError::Incomplete { recovered, k });
    }
    Ok(BitVec::from_bools(known.into_iter().map(Option::unwrap)))
}

/// Parity-check view of received symbols: columns `0..k` are the source
/// bits, column `k + s` is symbol `s`, and row `s` ties symbol `s` to its
/// neighbors.
pub fn induced_code(symbols: &[LtOutputSymbol], k: usize) -> Code {
    let n = k + symbols.len();
    let rows = symbols
        .iter()
        .enumerate()
        .map(|(s, sym)| {
            let mut row = BitVec::from_support(n, &sym.neighbors);
            row.set(k + s, true);
            row
        })
        .collect();
    Code::new("lt-induced", BitMatrix::from_rows(n, rows).unwrap(), None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_pmf_sums_to_one() {
        for k in [1, 2, 10, 128, 1000] {
            let d = SolitonDistribution::ideal(k).unwrap();
            let s: f64 = d.pmf().iter().sum();
            assert!((s - 1.0).abs() < 1e-12, "k={k}: {s}");
            assert!(d.pmf().iter().all(|&p| p >= 0.0));
        }
        let r = SolitonDistribution::robust(128, 0.1, 0.5).unwrap();
        assert!((r.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_symbols_fail() {
        assert!(lt_decode(&[], 3).is_err());
        assert_eq!(lt_decode(&[], 0), Ok(BitVec::zeros(0)));
    }
}
