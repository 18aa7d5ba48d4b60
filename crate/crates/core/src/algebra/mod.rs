//! Exact scalars and polynomial algebra.
//!
//! Coefficients live in ℚ throughout the crate.  `Rat` is kept in lowest
//! terms with a positive denominator by `num-rational`, which is exactly the
//! representation invariant we need.

mod bpoly;
mod upoly;

pub use bpoly::BPoly;
pub use upoly::UPoly;

use num_bigint::BigInt;

/// Exact rational scalar.
pub type Rat = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`.  Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// `r^k` for any integer exponent; `r` must be nonzero when `k < 0`.
pub fn rat_pow(r: &Rat, k: i64) -> Rat {
    use num_traits::One;
    if k == 0 {
        return Rat::one();
    }
    let base = if k < 0 { r.recip() } else { r.clone() };
    let mut acc = Rat::one();
    let mut e = k.unsigned_abs();
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// Degree of a polynomial, with an explicit sentinel for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Degree {
    /// Degree of the zero polynomial (smaller than every finite degree).
    NegInf,
    Fin(usize),
}

impl Degree {
    pub fn fin(self) -> Option<usize> {
        match self {
            Degree::NegInf => None,
            Degree::Fin(d) => Some(d),
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, Degree::NegInf)
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::Fin(d) => write!(f, "{d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use num_traits::Zero;

    #[test]
    fn degree_ordering() {
        assert!(Degree::NegInf < Degree::Fin(0));
        assert!(Degree::Fin(1) < Degree::Fin(2));
    }

    #[test]
    fn exact_arithmetic_no_rounding() {
        let mut rng = Rng::new(1);
        for _ in 0..200 {
            let a = ratio(rng.int(-50, 50), rng.nonzero_int(20));
            let b = ratio(rng.int(-50, 50), rng.nonzero_int(20));
            assert_eq!(&(&a + &b) - &b, a);
        }
    }

    #[test]
    fn rat_pow_negative() {
        let r = ratio(2, 3);
        assert_eq!(rat_pow(&r, -2), ratio(9, 4));
        assert_eq!(rat_pow(&Rat::zero(), 0), rat(1));
    }
}
