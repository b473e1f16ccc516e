//! Random LDPC parity-check matrices from explicit degree profiles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Code, CodeError};
use crate::gf2::BitMatrix;

/// Per-node weights: one entry per row and one per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightProfile {
    pub row_weights: Vec<usize>,
    pub col_weights: Vec<usize>,
}

impl WeightProfile {
    /// Regular `(col_weight, row_weight)` profile of length `n`.
    pub fn regular(n: usize, col_weight: usize, row_weight: usize) -> Result<Self, CodeError> {
        if row_weight == 0 || (n * col_weight) % row_weight != 0 {
            return Err(CodeError::InvalidParameter(format!(
                "n*col_weight = {} not divisible by row weight {row_weight}",
                n * col_weight
            )));
        }
        Ok(WeightProfile {
            row_weights: vec![row_weight; n * col_weight / row_weight],
            col_weights: vec![col_weight; n],
        })
    }

    /// Irregular profile from node-perspective column degree fractions.
    /// Column counts are rounded by largest remainder; rows share the edges
    /// as evenly as possible.
    pub fn irregular(
        n: usize,
        rows: usize,
        col_fractions: &[(usize, f64)],
    ) -> Result<Self, CodeError> {
        let total: f64 = col_fractions.iter().map(|&(_, f)| f).sum();
        if rows == 0 || col_fractions.is_empty() || total <= 0.0 {
            return Err(CodeError::InvalidParameter("empty degree profile".into()));
        }
        let exact: Vec<f64> = col_fractions
            .iter()
            .map(|&(_, f)| f / total * n as f64)
            .collect();
        let mut counts: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
        let mut order: Vec<usize> = (0..counts.len()).collect();
        order.sort_by(|&a, &b| {
            let ra = exact[a] - exact[a].floor();
            let rb = exact[b] - exact[b].floor();
            rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
        });
        let missing = n - counts.iter().sum::<usize>();
        for &i in order.iter().take(missing) {
            counts[i] += 1;
        }
        let mut col_weights = Vec::with_capacity(n);
        for (&(deg, _), &cnt) in col_fractions.iter().zip(&counts) {
            col_weights.extend(std::iter::repeat(deg).take(cnt));
        }
        let edges: usize = col_weights.iter().sum();
        let row_weights = (0..rows)
            .map(|i| edges / rows + usize::from(i < edges % rows))
            .collect();
        Ok(WeightProfile {
            row_weights,
            col_weights,
        })
    }
}

/// Samples `H` by randomly pairing column sockets with row sockets.
///
/// Repeated edges are repaired by socket swaps; 4-cycles between weight-2
/// columns are broken the same way when a swap exists. Deterministic for a
/// fixed seed.
pub fn random_ldpc(n: usize, profile: &WeightProfile, seed: u64) -> Result<Code, CodeError> {
    let WeightProfile {
        row_weights,
        col_weights,
    } = profile;
    if col_weights.len() != n {
        return Err(CodeError::InvalidParameter(format!(
            "{} column weights for n = {n}",
            col_weights.len()
        )));
    }
    let edges: usize = col_weights.iter().sum();
    if edges != row_weights.iter().sum::<usize>() {
        return Err(CodeError::InvalidParameter(format!(
            "column weights sum to {edges}, row weights to {}",
            row_weights.iter().sum::<usize>()
        )));
    }
    let m = row_weights.len();
    if let Some(&w) = col_weights.iter().find(|&&w| w > m) {
        return Err(CodeError::InvalidParameter(format!(
            "column weight {w} exceeds {m} rows"
        )));
    }
    if let Some(&w) = row_weights.iter().find(|&&w| w > n) {
        return Err(CodeError::InvalidParameter(format!(
            "row weight {w} exceeds n = {n}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // slot_row[s]: row owning edge slot s; slot_col[s]: column plugged into it.
    let slot_row: Vec<usize> = row_weights
        .iter()
        .enumerate()
        .flat_map(|(r, &w)| std::iter::repeat(r).take(w))
        .collect();
    let mut slot_col: Vec<usize> = col_weights
        .iter()
        .enumerate()
        .flat_map(|(c, &w)| std::iter::repeat(c).take(w))
        .collect();
    slot_col.shuffle(&mut rng);

    let mut h = BitMatrix::zeros(m, n);
    let mut duplicates = Vec::new();
    for s in 0..edges {
        let (r, c) = (slot_row[s], slot_col[s]);
        if h.get(r, c) {
            duplicates.push(s);
        } else {
            h.set(r, c, true);
        }
    }
    for s in duplicates {
        let (r, c) = (slot_row[s], slot_col[s]);
        let mut fixed = false;
        for _ in 0..100 * edges {
            let t = rng.gen_range(0..edges);
            let (rt, ct) = (slot_row[t], slot_col[t]);
            // After the swap: (r, ct) and (rt, c) must both be new edges.
            if rt != r && ct != c && !h.get(r, ct) && !h.get(rt, c) {
                h.set(rt, ct, false);
                h.set(r, ct, true);
                h.set(rt, c, true);
                slot_col.swap(s, t);
                fixed = true;
                break;
            }
        }
        if !fixed {
            return Err(CodeError::InvalidParameter(
                "could not place all edges without repetition".into(),
            ));
        }
    }
    break_weight_two_cycles(&mut h, col_weights, &mut rng);
    let name = format!("ldpc({},{})", n, n - h.rank());
    Ok(Code::new(name, h, None))
}

fn break_weight_two_cycles(h: &mut BitMatrix, col_weights: &[usize], rng: &mut ChaCha8Rng) {
    let n = h.cols();
    let rows_of = |h: &BitMatrix, c: usize| -> Vec<usize> {
        (0..h.rows()).filter(|&r| h.get(r, c)).collect()
    };
    for _pass in 0..10 {
        let mut seen = std::collections::HashMap::new();
        let mut clash = None;
        for c in (0..n).filter(|&c| col_weights[c] == 2) {
            let rows = rows_of(h, c);
            if let Some(&other) = seen.get(&rows) {
                clash = Some((other, c));
                break;
            }
            seen.insert(rows, c);
        }
        let Some((_, c)) = clash else { return };
        // Move one edge of column `c` to a different row by exchanging it
        // with an edge of some other column.
        let rows_c = rows_of(h, c);
        let r = rows_c[1];
        let mut done = false;
        for _ in 0..10 * n {
            let d = rng.gen_range(0..n);
            if d == c {
                continue;
            }
            let rows_d = rows_of(h, d);
            let rd = rows_d[rng.gen_range(0..rows_d.len())];
            if rd == r || h.get(rd, c) || h.get(r, d) {
                continue;
            }
            h.set(r, c, false);
            h.set(rd, d, false);
            h.set(rd, c, true);
            h.set(r, d, true);
            done = true;
            break;
        }
        if !done {
            return;
        }
    }
}
