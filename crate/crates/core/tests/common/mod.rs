#![allow(dead_code)]

use beclab::codes::{
    catalog, cyclic_h_from_polynomial, random_ldpc, Code, CyclicCodeSpec, WeightProfile,
};
use beclab::gf2::{BitMatrix, BitVec};
use rand::Rng;

/// Codes with n <= 63 used by the oracle and dominance suites.
pub fn small_corpus() -> Vec<Code> {
    let mut codes: Vec<Code> = ["hamming7", "bch15", "qr17", "golay23", "bch31", "bch63"]
        .iter()
        .map(|n| catalog::by_name(n).unwrap())
        .collect();
    // Projective-plane difference sets: (7,3) and (21,11).
    for (n, support) in [(7, vec![0, 1, 3]), (21, vec![0, 1, 4, 14, 16])] {
        codes.push(cyclic_h_from_polynomial(&CyclicCodeSpec::new(n, support).unwrap()).unwrap());
    }
    codes.push(random_ldpc(48, &WeightProfile::regular(48, 3, 6).unwrap(), 5).unwrap());
    codes.push(
        random_ldpc(
            60,
            &WeightProfile::irregular(60, 30, &[(2, 0.5), (3, 0.3), (5, 0.2)]).unwrap(),
            8,
        )
        .unwrap(),
    );
    codes
}

/// Rank of the columns of `h` at `positions`.
pub fn erased_rank(h: &BitMatrix, positions: &[usize]) -> usize {
    h.select_columns(positions).rank()
}

pub fn random_codeword(code: &Code, rng: &mut impl Rng) -> BitVec {
    let enc = code.systematic_encoder();
    enc.encode(&BitVec::from_bools((0..enc.k()).map(|_| rng.gen::<bool>())))
}
