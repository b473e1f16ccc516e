//! Polynomials over GF(2), packed into a [`BitVec`] (bit `i` = coefficient of `x^i`).

use std::fmt;

use crate::gf2::BitVec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    // Invariant: either empty (zero polynomial) or the top bit is set.
    coeffs: BitVec,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly {
            coeffs: BitVec::zeros(0),
        }
    }

    pub fn one() -> Self {
        Self::from_support(&[0])
    }

    /// `x^n + 1`.
    pub fn x_n_plus_one(n: usize) -> Self {
        Self::from_support(&[0, n])
    }

    /// Polynomial with unit coefficients at the given exponents. Repeated
    /// exponents cancel.
    pub fn from_support(support: &[usize]) -> Self {
        let len = support.iter().max().map_or(0, |&d| d + 1);
        let mut coeffs = BitVec::zeros(len);
        for &e in support {
            coeffs.flip(e);
        }
        Self::normalized(coeffs)
    }

    pub fn from_coeffs(coeffs: BitVec) -> Self {
        Self::normalized(coeffs)
    }

    fn normalized(coeffs: BitVec) -> Self {
        let len = coeffs.last_one().map_or(0, |d| d + 1);
        Gf2Poly {
            coeffs: coeffs.resized(len),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> bool {
        i < self.coeffs.len() && self.coeffs.get(i)
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter_ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.coeffs.count_ones()
    }

    /// Coefficients padded or truncated to `len` positions.
    pub fn to_bitvec(&self, len: usize) -> BitVec {
        self.coeffs.resized(len)
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut c = self.coeffs.resized(len);
        c.xor_assign(&other.coeffs.resized(len));
        Self::normalized(c)
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Gf2Poly::zero();
        };
        let mut out = BitVec::zeros(da + db + 1);
        for i in self.coeffs.iter_ones() {
            for j in other.coeffs.iter_ones() {
                out.flip(i + j);
            }
        }
        Self::normalized(out)
    }

    /// Quotient and remainder of division by `divisor`.
    ///
    /// # Panics
    /// If `divisor` is zero.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let Some(dn) = self.degree() else {
            return (Gf2Poly::zero(), Gf2Poly::zero());
        };
        if dn < dd {
            return (Gf2Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = BitVec::zeros(dn - dd + 1);
        let dsupp = divisor.support();
        for shift in (0..=dn - dd).rev() {
            if rem.get(shift + dd) {
                quot.set(shift, true);
                for &e in &dsupp {
                    rem.flip(shift + e);
                }
            }
        }
        (Self::normalized(quot), Self::normalized(rem))
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .support()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join("+"))
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}
