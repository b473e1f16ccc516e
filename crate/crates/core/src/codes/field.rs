//! Arithmetic in GF(2^m) for 2 <= m <= 64.
//!
//! Elements are `u64` polynomial bases reduced modulo a primitive polynomial.
//! The modulus for each `m` is the smallest primitive polynomial of that
//! degree when read as an integer; the table is computed once on demand.

use std::sync::OnceLock;

use super::poly::Gf2Poly;
use super::CodeError;
use crate::gf2::BitVec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2mField {
    m: u32,
    /// Modulus bits below `x^m` (the leading term is implicit).
    low: u64,
    order: u64,
}

impl Gf2mField {
    /// Field of size `2^m` built on the table's primitive polynomial.
    pub fn new(m: u32) -> Result<Self, CodeError> {
        if !(2..=64).contains(&m) {
            return Err(CodeError::InvalidParameter(format!(
                "extension degree {m} outside 2..=64"
            )));
        }
        Ok(Self::from_low_bits(m, primitive_polynomial_low(m)))
    }

    /// Field defined by an explicit modulus given as its exponent set.
    /// Rejects moduli that are not primitive.
    pub fn with_modulus(m: u32, support: &[usize]) -> Result<Self, CodeError> {
        if !(2..=64).contains(&m) || !support.contains(&(m as usize)) {
            return Err(CodeError::InvalidParameter(format!(
                "modulus support {support:?} is not of degree {m}"
            )));
        }
        let mut low = 0u64;
        for &e in support {
            if e > m as usize {
                return Err(CodeError::InvalidParameter(format!(
                    "modulus exponent {e} exceeds degree {m}"
                )));
            }
            if e < m as usize {
                low ^= 1 << e;
            }
        }
        if !is_primitive(m, low) {
            return Err(CodeError::InvalidParameter(format!(
                "modulus {support:?} is not primitive"
            )));
        }
        Ok(Self::from_low_bits(m, low))
    }

    fn from_low_bits(m: u32, low: u64) -> Self {
        let order = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        Gf2mField { m, low, order }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Size of the multiplicative group, `2^m - 1`.
    pub fn group_order(&self) -> u64 {
        self.order
    }

    pub fn modulus_support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.m as usize)
            .filter(|&i| self.low >> i & 1 == 1)
            .collect();
        s.push(self.m as usize);
        s
    }

    /// The primitive element `x`.
    pub fn alpha(&self) -> u64 {
        2
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(self.m, self.low, a, b)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(self.m, self.low, a, e)
    }

    /// `alpha^e`.
    pub fn alpha_pow(&self, e: u64) -> u64 {
        self.pow(self.alpha(), e % self.order)
    }

    /// Minimal polynomial over GF(2) of `alpha^e`.
    pub fn minimal_polynomial(&self, e: u64) -> Gf2Poly {
        let coset = cyclotomic_coset(e % self.order, self.order);
        // Product of (x + alpha^c) with GF(2^m) coefficients, low degree first.
        let mut coeffs: Vec<u64> = vec![1];
        for &c in &coset {
            let root = self.alpha_pow(c);
            let mut next = vec![0u64; coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] ^= a;
                next[i] ^= self.mul(a, root);
            }
            coeffs = next;
        }
        let bits: Vec<u8> = coeffs
            .iter()
            .map(|&c| {
                assert!(c <= 1, "minimal polynomial coefficient outside GF(2)");
                c as u8
            })
            .collect();
        Gf2Poly::from_coeffs(BitVec::from_bits(&bits))
    }
}

/// Cyclotomic coset of `s` under multiplication by 2 modulo `n`, in
/// generation order.
pub fn cyclotomic_coset(s: u64, n: u64) -> Vec<u64> {
    let mut out = vec![s % n];
    let mut x = (s % n) * 2 % n;
    while x != out[0] {
        out.push(x);
        x = ((x as u128 * 2) % n as u128) as u64;
    }
    out
}

/// All cyclotomic cosets modulo `n`, ordered by smallest representative;
/// each coset sorted ascending.
pub fn cyclotomic_cosets(n: u64) -> Vec<Vec<u64>> {
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s as usize] {
            continue;
        }
        let mut c = cyclotomic_coset(s, n);
        for &x in &c {
            seen[x as usize] = true;
        }
        c.sort_unstable();
        out.push(c);
    }
    out
}

/// Multiplicative order of 2 modulo odd `n > 1`.
pub fn order_of_two(n: u64) -> u64 {
    let mut x = 2 % n;
    let mut k = 1;
    while x != 1 {
        x = x * 2 % n;
        k += 1;
    }
    k
}

fn mul_mod(m: u32, low: u64, a: u64, b: u64) -> u64 {
    let top = 1u128 << m;
    let modulus = top | low as u128;
    let mut acc: u128 = 0;
    let mut a = a as u128;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc as u64
}

fn pow_mod(m: u32, low: u64, a: u64, mut e: u64) -> u64 {
    let mut base = a;
    let mut acc = 1u64;
    while e != 0 {
        if e & 1 == 1 {
            acc = mul_mod(m, low, acc, base);
        }
        base = mul_mod(m, low, base, base);
        e >>= 1;
    }
    acc
}

fn is_primitive(m: u32, low: u64) -> bool {
    if low & 1 == 0 {
        return false;
    }
    let order = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    if pow_mod(m, low, 2, order) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|q| pow_mod(m, low, 2, order / q) != 1)
}

fn primitive_polynomial_low(m: u32) -> u64 {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (0..=64u32)
            .map(|m| {
                if m < 2 {
                    return 0;
                }
                (1u64..)
                    .step_by(2)
                    .find(|&low| is_primitive(m, low))
                    .expect("a primitive polynomial exists for every degree")
            })
            .collect()
    });
    table[m as usize]
}

// --- integer factoring for group orders up to 2^64 - 1 ---

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    a %= n;
    while e != 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, a, n);
        }
        a = mul_mod_u64(a, a, n);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Pollard rho with Brent-style cycle detection; `n` odd composite.
fn pollard_rho(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

/// Distinct prime factors of `n`, ascending.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < 1 << 12 && p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    while let Some(x) = stack.pop() {
        if x == 1 {
            continue;
        }
        if is_prime_u64(x) {
            out.push(x);
            continue;
        }
        let d = pollard_rho(x);
        stack.push(d);
        stack.push(x / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields_have_expected_moduli() {
        assert_eq!(Gf2mField::new(3).unwrap().modulus_support(), vec![0, 1, 3]);
        assert_eq!(Gf2mField::new(4).unwrap().modulus_support(), vec![0, 1, 4]);
        assert_eq!(
            Gf2mField::new(8).unwrap().modulus_support(),
            vec![0, 2, 3, 4, 8]
        );
    }

    #[test]
    fn generator_has_full_order() {
        for m in [2u32, 3, 4, 5, 7, 8, 10, 12] {
            let f = Gf2mField::new(m).unwrap();
            let mut x = 1u64;
            for i in 1..=f.group_order() {
                x = f.mul(x, f.alpha());
                assert_eq!(x == 1, i == f.group_order(), "m={m} i={i}");
            }
        }
        for m in [31u32, 51, 63, 64] {
            let f = Gf2mField::new(m).unwrap();
            assert_eq!(f.alpha_pow(f.group_order()), 1);
            for q in prime_factors(f.group_order()) {
                assert_ne!(f.pow(f.alpha(), f.group_order() / q), 1);
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
        assert_eq!(
            prime_factors((1 << 51) - 1),
            vec![7, 103, 2143, 11119, 131071]
        );
        assert_eq!(
            prime_factors(u64::MAX),
            vec![3, 5, 17, 257, 641, 65537, 6700417]
        );
    }

    #[test]
    fn rejects_non_primitive_modulus() {
        // x^4+x^3+x^2+x+1 is irreducible but alpha has order 5.
        assert!(Gf2mField::with_modulus(4, &[0, 1, 2, 3, 4]).is_err());
        assert!(Gf2mField::with_modulus(4, &[0, 3, 4]).is_ok());
        assert!(Gf2mField::new(1).is_err());
    }

    #[test]
    fn minimal_polynomials_gf16() {
        let f = Gf2mField::new(4).unwrap();
        assert_eq!(f.minimal_polynomial(1).support(), vec![0, 1, 4]);
        assert_eq!(f.minimal_polynomial(3).support(), vec![0, 1, 2, 3, 4]);
        assert_eq!(f.minimal_polynomial(5).support(), vec![0, 1, 2]);
        assert_eq!(f.minimal_polynomial(0).support(), vec![0, 1]);
    }

    #[test]
    fn cosets() {
        assert_eq!(cyclotomic_coset(1, 15), vec![1, 2, 4, 8]);
        assert_eq!(
            cyclotomic_cosets(7),
            vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]
        );
        assert_eq!(order_of_two(103), 51);
        assert_eq!(order_of_two(341), 10);
    }
}
