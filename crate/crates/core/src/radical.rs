//! Exact numbers of the form `Σ q_r · √r` with square-free radicands `r`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Splits `n` as `outer² · core` with `core` square-free.
pub fn square_free_split(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut outer = 1;
    let mut core = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    (outer, core * n)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RadicalScalar {
    /// square-free radicand → coefficient; zero coefficients are never stored
    terms: BTreeMap<u64, BigRational>,
}

impl RadicalScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(1, q);
        }
        Self { terms }
    }

    /// `√n`, normalized. `√0 = 0`.
    pub fn sqrt(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (outer, core) = square_free_split(n);
        let mut terms = BTreeMap::new();
        terms.insert(core, BigRational::from_integer(BigInt::from(outer)));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|&r| r == 1)
    }

    /// The value when no irrational radicand survives.
    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| self.terms.get(&1).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Coefficient of `√r` for square-free `r`.
    pub fn coefficient(&self, r: u64) -> BigRational {
        self.terms.get(&r).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&r, q)| (r, q))
    }

    fn add_term(&mut self, r: u64, q: BigRational) {
        if q.is_zero() {
            return;
        }
        let entry = self.terms.entry(r).or_insert_with(BigRational::zero);
        *entry += q;
        if entry.is_zero() {
            self.terms.remove(&r);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&r, c)| (r, c * q)).collect(),
        }
    }
}

impl Add for &RadicalScalar {
    type Output = RadicalScalar;
    fn add(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&RadicalScalar> for RadicalScalar {
    fn add_assign(&mut self, rhs: &RadicalScalar) {
        for (&r, q) in &rhs.terms {
            self.add_term(r, q.clone());
        }
    }
}

impl Neg for &RadicalScalar {
    type Output = RadicalScalar;
    fn neg(self) -> RadicalScalar {
        RadicalScalar {
            terms: self.terms.iter().map(|(&r, q)| (r, -q)).collect(),
        }
    }
}

impl Mul for &RadicalScalar {
    type Output = RadicalScalar;
    fn mul(self, rhs: &RadicalScalar) -> RadicalScalar {
        let mut out = RadicalScalar::zero();
        for (&a, p) in &self.terms {
            for (&b, q) in &rhs.terms {
                // √a·√b = √(ab); with a, b square-free, gcd² splits off
                let g = num_integer::gcd(a, b);
                let core = (a / g) * (b / g);
                out.add_term(core, p * q * BigRational::from_integer(BigInt::from(g)));
            }
        }
        out
    }
}

impl fmt::Display for RadicalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&r, q)| {
                if r == 1 {
                    q.to_string()
                } else {
                    format!("({q})*sqrt({r})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn split_examples() {
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(12), (2, 3));
        assert_eq!(square_free_split(72), (6, 2));
        assert_eq!(square_free_split(97), (1, 97));
    }

    #[test]
    fn sqrt_products_cancel() {
        let s2 = RadicalScalar::sqrt(2);
        assert!(!s2.is_rational());
        assert_eq!((&s2 * &s2).to_rational(), Some(BigRational::from_integer(2.into())));
        let s6 = &RadicalScalar::sqrt(2) * &RadicalScalar::sqrt(3);
        assert_eq!(s6, RadicalScalar::sqrt(6));
        assert_eq!(RadicalScalar::sqrt(8), &RadicalScalar::from_integer(2) * &s2);
        assert!(RadicalScalar::sqrt(0).is_zero());
        assert_eq!(RadicalScalar::sqrt(1), RadicalScalar::one());
    }

    #[test]
    fn addition_drops_zero_terms() {
        let s3 = RadicalScalar::sqrt(3);
        let sum = &s3 + &(-&s3);
        assert!(sum.is_zero());
        assert!(sum.is_rational());
        assert_eq!(sum.to_rational(), Some(BigRational::zero()));
    }

    proptest! {
        #[test]
        fn split_reconstructs(n in 1u64..100_000) {
            let (outer, core) = square_free_split(n);
            prop_assert_eq!(outer * outer * core, n);
            let (o2, c2) = square_free_split(core);
            prop_assert_eq!((o2, c2), (1, core));
        }

        #[test]
        fn sqrt_squares_to_n(n in 1u64..10_000) {
            let s = RadicalScalar::sqrt(n);
            prop_assert_eq!((&s * &s).to_rational(), Some(BigRational::from_integer(BigInt::from(n))));
        }

        #[test]
        fn multiplication_is_multiplicative(a in 1u64..500, b in 1u64..500) {
            prop_assert_eq!(&RadicalScalar::sqrt(a) * &RadicalScalar::sqrt(b), RadicalScalar::sqrt(a * b));
        }
    }
}
