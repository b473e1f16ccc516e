//! Cyclic codes: parity-check matrices from check polynomials, BCH and
//! quadratic-residue generators, and orthogonal low-weight idempotents for
//! cyclic LDPC codes.

use super::field::{cyclotomic_coset, cyclotomic_cosets, Gf2mField};
use super::poly::Gf2Poly;
use super::{Code, CodeError};
use crate::gf2::{BitMatrix, BitVec};

/// One parity-check row of a cyclic code, given by its set of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCodeSpec {
    pub n: usize,
    pub check_polynomial_support: Vec<usize>,
}

impl CyclicCodeSpec {
    pub fn new(n: usize, mut support: Vec<usize>) -> Result<Self, CodeError> {
        support.sort_unstable();
        support.dedup();
        if let Some(&bad) = support.iter().find(|&&e| e >= n) {
            return Err(CodeError::InvalidParameter(format!(
                "exponent {bad} not below n = {n}"
            )));
        }
        if support.len() < 2 {
            return Err(CodeError::InvalidParameter(format!(
                "row weight {} < 2",
                support.len()
            )));
        }
        Ok(CyclicCodeSpec {
            n,
            check_polynomial_support: support,
        })
    }

    /// Row weight `w`.
    pub fn weight(&self) -> usize {
        self.check_polynomial_support.len()
    }

    /// True when every pairwise difference of the support is distinct modulo
    /// `n`, i.e. no two rows of the circulant share more than one position.
    pub fn is_orthogonal(&self) -> bool {
        let mut seen = vec![false; self.n];
        for &a in &self.check_polynomial_support {
            for &b in &self.check_polynomial_support {
                if a != b {
                    let d = (a + self.n - b) % self.n;
                    if seen[d] {
                        return false;
                    }
                    seen[d] = true;
                }
            }
        }
        true
    }
}

/// Circulant parity-check matrix: row `i` is the support shifted right by
/// `i`. All `n` rows are kept.
pub fn cyclic_h_from_polynomial(spec: &CyclicCodeSpec) -> Result<Code, CodeError> {
    let spec = CyclicCodeSpec::new(spec.n, spec.check_polynomial_support.clone())?;
    let base = BitVec::from_support(spec.n, &spec.check_polynomial_support);
    let rows = (0..spec.n).map(|i| base.rotated(i)).collect();
    let h = BitMatrix::from_rows(spec.n, rows)?;
    let code = Code::new(format!("cyclic({})", spec.n), h, None);
    let name = format!("cyclic({},{})", code.n(), code.k());
    let dmin = spec.is_orthogonal().then(|| spec.weight() + 1);
    Ok(code.with_name(name).with_dmin(dmin))
}

/// Parity-check matrix of the cyclic code generated by `g`.
///
/// Rows are the `n` cyclic shifts of the reciprocal of `h(x) = (x^n+1)/g(x)`.
pub fn h_from_generator_polynomial(g: &Gf2Poly, n: usize) -> Result<Code, CodeError> {
    let (h_poly, rem) = Gf2Poly::x_n_plus_one(n).div_rem(g);
    if !rem.is_zero() {
        return Err(CodeError::NotADivisor {
            generator: g.clone(),
            n,
            remainder: rem,
        });
    }
    let deg_g = g.degree().unwrap_or(0);
    let support: Vec<usize> = h_poly.support().iter().map(|&t| (n - t) % n).collect();
    let base = BitVec::from_support(n, &support);
    let rows = (0..n).map(|i| base.rotated(i)).collect();
    let h = BitMatrix::from_rows(n, rows)?;
    let code = Code::new(format!("cyclic({},{})", n, n - deg_g), h, None);
    debug_assert_eq!(code.k(), n - deg_g);
    Ok(code)
}

/// Narrow-sense primitive BCH generator: lcm of the minimal polynomials of
/// `alpha^1 .. alpha^(design_distance - 1)`.
pub fn bch_generator_polynomial(
    field: &Gf2mField,
    n: usize,
    design_distance: usize,
) -> Result<Gf2Poly, CodeError> {
    if n as u64 != field.group_order() {
        return Err(CodeError::InvalidParameter(format!(
            "n = {n} but GF(2^{}) has group order {}",
            field.m(),
            field.group_order()
        )));
    }
    if design_distance < 2 || design_distance > n {
        return Err(CodeError::InvalidParameter(format!(
            "design distance {design_distance} outside 2..={n}"
        )));
    }
    let mut covered = vec![false; n];
    let mut g = Gf2Poly::one();
    for e in 1..design_distance {
        if covered[e] {
            continue;
        }
        for c in cyclotomic_coset(e as u64, n as u64) {
            covered[c as usize] = true;
        }
        g = g.mul(&field.minimal_polynomial(e as u64));
    }
    Ok(g)
}

/// Quadratic-residue code generator for prime `n`: product of the minimal
/// polynomials of `beta^r` over the cosets inside the residue set, where
/// `beta` is a primitive `n`-th root of unity in `field`.
pub fn qr_generator_polynomial(n: usize, field: &Gf2mField) -> Result<Gf2Poly, CodeError> {
    if n < 3 || !is_prime(n) {
        return Err(CodeError::InvalidParameter(format!(
            "{n} is not an odd prime"
        )));
    }
    if n % 8 != 1 && n % 8 != 7 {
        return Err(CodeError::InvalidParameter(format!(
            "2 is not a quadratic residue modulo {n}"
        )));
    }
    let order = field.group_order();
    if order % n as u64 != 0 {
        return Err(CodeError::InvalidParameter(format!(
            "{n} does not divide 2^{} - 1",
            field.m()
        )));
    }
    let step = order / n as u64;
    let mut residue = vec![false; n];
    for i in 1..n {
        residue[i * i % n] = true;
    }
    let mut g = Gf2Poly::one();
    for coset in cyclotomic_cosets(n as u64) {
        let rep = coset[0] as usize;
        if rep != 0 && residue[rep] {
            debug_assert!(coset.iter().all(|&c| residue[c as usize]));
            g = g.mul(&field.minimal_polynomial(rep as u64 * step));
        }
    }
    Ok(g)
}

/// Appends an overall parity bit: zero column for the old rows plus one
/// all-ones row.
pub fn extend_with_overall_parity(code: &Code) -> Code {
    let n = code.n() + 1;
    let mut h = code.h().widened(n);
    h.push_row(BitVec::ones(n))
        .expect("all-ones row has the widened length");
    let extended = Code::new(format!("extended {}", code.name()), h, None);
    debug_assert_eq!(extended.k(), code.k());
    let dmin = code
        .dmin_claimed()
        .map(|d| if d % 2 == 1 { d + 1 } else { d });
    extended.with_dmin(dmin)
}

/// Searches unions of cyclotomic cosets modulo `n` for a weight-`weight`
/// support whose circulant is orthogonal (distinct pairwise differences)
/// and has dimension `target_k`.
///
/// Such a support is the set of ones of a binary idempotent, so its
/// circulant has a simple rank structure; the search visits coset unions
/// in a fixed order and returns the first match.
pub fn cyclic_ldpc_support(n: usize, weight: usize, target_k: usize) -> Option<Vec<usize>> {
    let cosets: Vec<Vec<usize>> = cyclotomic_cosets(n as u64)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x as usize).collect())
        .collect();
    let mut chosen = Vec::new();
    search_cosets(&cosets, 0, weight, n, target_k, &mut chosen)
}

fn search_cosets(
    cosets: &[Vec<usize>],
    start: usize,
    remaining: usize,
    n: usize,
    target_k: usize,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if remaining == 0 {
        let spec = CyclicCodeSpec::new(n, chosen.clone()).ok()?;
        if !spec.is_orthogonal() {
            return None;
        }
        let code = cyclic_h_from_polynomial(&spec).ok()?;
        return (code.k() == target_k).then(|| spec.check_polynomial_support);
    }
    for i in start..cosets.len() {
        let c = &cosets[i];
        if c.len() > remaining {
            continue;
        }
        let mark = chosen.len();
        chosen.extend_from_slice(c);
        let partial = CyclicCodeSpec {
            n,
            check_polynomial_support: chosen.clone(),
        };
        if chosen.len() < 2 || partial.is_orthogonal() {
            if let Some(found) =
                search_cosets(cosets, i + 1, remaining - c.len(), n, target_k, chosen)
            {
                return Some(found);
            }
        }
        chosen.truncate(mark);
    }
    None
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::exhaustive_min_distance;

    fn all_divisors_of_degree(n: usize, deg: usize) -> Vec<Gf2Poly> {
        let target = Gf2Poly::x_n_plus_one(n);
        (0u64..1 << deg)
            .map(|low| {
                let mut s: Vec<usize> = (0..deg).filter(|i| low >> i & 1 == 1).collect();
                s.push(deg);
                Gf2Poly::from_support(&s)
            })
            .filter(|p| target.div_rem(p).1.is_zero())
            .collect()
    }

    #[test]
    fn fano_difference_set() {
        // Any weight-3 perfect difference set mod 7 spans a 4-dimensional
        // circulant: the (7,3) simplex code with dmin 4 = 1 + w.
        let code =
            cyclic_h_from_polynomial(&CyclicCodeSpec::new(7, vec![0, 1, 3]).unwrap()).unwrap();
        assert_eq!(code.h().rank(), 4);
        assert_eq!(code.k(), 3);
        assert_eq!(code.dmin_claimed(), Some(4));
        assert_eq!(exhaustive_min_distance(&code), Some(4));
    }

    #[test]
    fn small_circulants() {
        let all_ones =
            cyclic_h_from_polynomial(&CyclicCodeSpec::new(3, vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!((all_ones.h().rank(), all_ones.k()), (1, 2));
        let rep = cyclic_h_from_polynomial(&CyclicCodeSpec::new(3, vec![0, 1]).unwrap()).unwrap();
        assert_eq!((rep.h().rank(), rep.k()), (2, 1));
        assert!(CyclicCodeSpec::new(5, vec![2]).is_err());
        assert!(CyclicCodeSpec::new(5, vec![1, 5]).is_err());
    }

    #[test]
    fn circulant_rows_are_rotation_invariant() {
        let code =
            cyclic_h_from_polynomial(&CyclicCodeSpec::new(15, vec![0, 1, 4, 6]).unwrap()).unwrap();
        let rows: std::collections::HashSet<_> = code.h().row_vecs().iter().cloned().collect();
        for row in code.h().row_vecs() {
            assert!(rows.contains(&row.rotated(1)));
        }
    }

    #[test]
    fn hamming_from_generator() {
        let g = Gf2Poly::from_support(&[0, 1, 3]);
        let code = h_from_generator_polynomial(&g, 7).unwrap();
        assert_eq!((code.k(), code.h().rank()), (4, 3));
        // Every multiple of g of degree < 7 is a codeword.
        for m in 0u64..16 {
            let msg: Vec<usize> = (0..4).filter(|i| m >> i & 1 == 1).collect();
            let cw = Gf2Poly::from_support(&msg).mul(&g).to_bitvec(7);
            assert!(code.is_codeword(&cw));
        }
        let parity = h_from_generator_polynomial(&Gf2Poly::from_support(&[0, 1]), 4).unwrap();
        assert_eq!(parity.k(), 3);
        assert!(parity.h().row_vecs().iter().all(|r| r == &BitVec::ones(4)));
        match h_from_generator_polynomial(&Gf2Poly::from_support(&[0, 2]), 7) {
            Err(CodeError::NotADivisor { remainder, .. }) => assert!(!remainder.is_zero()),
            other => panic!("expected NotADivisor, got {other:?}"),
        }
    }

    #[test]
    fn bch_15_7() {
        let f = Gf2mField::new(4).unwrap();
        let g = bch_generator_polynomial(&f, 15, 5).unwrap();
        assert_eq!(g.degree(), Some(8));
        let code = h_from_generator_polynomial(&g, 15).unwrap();
        assert_eq!(code.k(), 7);
        assert!(exhaustive_min_distance(&code).unwrap() >= 5);
        let ham = bch_generator_polynomial(&f, 15, 2).unwrap();
        assert_eq!(ham, f.minimal_polynomial(1));
        assert_eq!(ham.degree(), Some(4));
        assert!(bch_generator_polynomial(&f, 31, 5).is_err());
    }

    #[test]
    fn bch_31_designs_meet_distance() {
        let f = Gf2mField::new(5).unwrap();
        for d in [3usize, 5, 7] {
            let g = bch_generator_polynomial(&f, 31, d).unwrap();
            let code = h_from_generator_polynomial(&g, 31).unwrap();
            if code.k() <= 21 {
                assert!(exhaustive_min_distance(&code).unwrap() >= d, "d={d}");
            }
        }
    }

    #[test]
    fn qr_7_and_17_match_exhaustive_factoring() {
        let f3 = Gf2mField::new(3).unwrap();
        let g7 = qr_generator_polynomial(7, &f3).unwrap();
        assert!(all_divisors_of_degree(7, 3).contains(&g7));
        assert_eq!(h_from_generator_polynomial(&g7, 7).unwrap().k(), 4);

        let f8 = Gf2mField::new(8).unwrap();
        let g17 = qr_generator_polynomial(17, &f8).unwrap();
        assert!(all_divisors_of_degree(17, 8).contains(&g17));
        let c17 = h_from_generator_polynomial(&g17, 17).unwrap();
        assert_eq!(c17.k(), 9);
        assert!(exhaustive_min_distance(&c17).unwrap() >= 5);

        let f11 = Gf2mField::new(11).unwrap();
        let golay =
            h_from_generator_polynomial(&qr_generator_polynomial(23, &f11).unwrap(), 23).unwrap();
        assert_eq!(golay.k(), 12);
        assert_eq!(exhaustive_min_distance(&golay), Some(7));
    }

    #[test]
    fn qr_rejects_bad_parameters() {
        let f = Gf2mField::new(4).unwrap();
        assert!(qr_generator_polynomial(15, &f).is_err());
        assert!(qr_generator_polynomial(11, &f).is_err()); // 11 = 3 mod 8
        assert!(qr_generator_polynomial(7, &f).is_err()); // 7 does not divide 15
    }

    #[test]
    fn extension_of_repetition_code() {
        let rep = cyclic_h_from_polynomial(&CyclicCodeSpec::new(3, vec![0, 1]).unwrap())
            .unwrap()
            .with_dmin(Some(3));
        let ext = extend_with_overall_parity(&rep);
        assert_eq!((ext.n(), ext.k()), (4, 1));
        assert_eq!(exhaustive_min_distance(&ext), Some(4));
        assert_eq!(ext.dmin_claimed(), Some(4));
    }

    #[test]
    fn small_idempotent_search() {
        // Weight-3 orthogonal idempotent mod 7 gives the (7,3) code.
        let s = cyclic_ldpc_support(7, 3, 3).unwrap();
        assert_eq!(s, vec![1, 2, 4]);
        assert!(cyclic_ldpc_support(7, 3, 5).is_none());
    }
}
