//! Dense univariate polynomials in `y` over ℚ.

use super::{rat, Degree, Rat};
use crate::error::Error;
use crate::Result;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial; `coeffs[i]` is the coefficient of `y^i`.
/// Invariant: empty iff zero, otherwise the last coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UPoly {
    coeffs: Vec<Rat>,
}

impl UPoly {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rat) -> Self {
        UPoly::from_coeffs(vec![c])
    }

    /// The polynomial `y`.
    pub fn y() -> Self {
        UPoly::monomial(Rat::one(), 1)
    }

    /// `c * y^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        UPoly { coeffs }
    }

    /// Builds a polynomial, stripping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        UPoly::from_coeffs(cs.iter().map(|&c| rat(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        if self.coeffs.is_empty() {
            Degree::NegInf
        } else {
            Degree::Fin(self.coeffs.len() - 1)
        }
    }

    /// Coefficient of `y^i` (zero beyond the stored range).
    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn evaluate(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Substitution `P(Q(y))`.
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// Substitution of an affine argument, `P(s*y + t)`.
    pub fn compose_affine(&self, s: &Rat, t: &Rat) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            // acc = acc*(s y + t) + c
            let mut next = vec![Rat::zero(); acc.coeffs.len() + 1];
            for (i, a) in acc.coeffs.iter().enumerate() {
                next[i + 1] += a * s;
                next[i] += a * t;
            }
            if next.is_empty() {
                next.push(c.clone());
            } else {
                next[0] += c;
            }
            acc = UPoly::from_coeffs(next);
        }
        acc
    }

    /// `P(y + t)`.
    pub fn shift(&self, t: &Rat) -> UPoly {
        self.compose_affine(&Rat::one(), t)
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> UPoly {
        let mut cur = self.clone();
        for _ in 0..k {
            if cur.coeffs.len() <= 1 {
                return UPoly::zero();
            }
            let next: Vec<Rat> = cur
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect();
            cur = UPoly::from_coeffs(next);
        }
        cur
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Shift to the arithmetic mean of the roots: returns `(c, P(y+c))` where
    /// `c = -p_{d-1}/(d p_d)`, so the shifted polynomial has no `y^{d-1}` term.
    pub fn mean_shift(&self) -> Result<(Rat, UPoly)> {
        let d = match self.degree() {
            Degree::Fin(d) if d >= 1 => d,
            _ => return Err(Error::DegreeTooLow("mean_shift needs degree >= 1")),
        };
        let c = -self.coeff(d - 1) / (rat(d as i64) * self.leading_coeff());
        let shifted = self.shift(&c);
        debug_assert!(shifted.coeff(d - 1).is_zero());
        Ok((c, shifted))
    }

    /// Drops the terms of degree <= 1, returning `(stripped, t1, t0)` with
    /// `P = stripped + t1*y + t0` and `stripped` supported in degrees >= 2.
    pub fn split_linear(&self) -> (UPoly, Rat, Rat) {
        let t0 = self.coeff(0);
        let t1 = self.coeff(1);
        let mut coeffs = self.coeffs.clone();
        if !coeffs.is_empty() {
            coeffs[0] = Rat::zero();
        }
        if coeffs.len() > 1 {
            coeffs[1] = Rat::zero();
        }
        (UPoly::from_coeffs(coeffs), t1, t0)
    }

    /// Makes the polynomial monic (no-op on zero).
    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        UPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        UPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    #[test]
    fn compose_examples() {
        // y^2 o (y+1) = y^2 + 2y + 1
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
        // identity substitution
        let q = p(&[3, 0, 5, 7]);
        assert_eq!(q.compose(&UPoly::y()), q);
        assert_eq!(UPoly::y().compose(&q), q);
        // (y^3 + y) o (2y) = 8y^3 + 2y, matches direct expansion
        assert_eq!(p(&[0, 1, 0, 1]).compose(&p(&[0, 2])), p(&[0, 2, 0, 8]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0, 0, 1, 1]).derivative(1), p(&[0, 2, 3]));
        assert_eq!(p(&[5]).derivative(1), UPoly::zero());
        // (y^5 + y^4)'' = 20y^3 + 12y^2
        assert_eq!(p(&[0, 0, 0, 0, 1, 1]).derivative(2), p(&[0, 0, 12, 20]));
        assert_eq!(p(&[1, 2]).derivative(5), UPoly::zero());
    }

    #[test]
    fn mean_shift_examples() {
        // y^3 + 3y^2 -> c = -1, shifted = y^3 - 3y + 2
        let (c, s) = p(&[0, 0, 3, 1]).mean_shift().unwrap();
        assert_eq!(c, ratio(-1, 1));
        assert_eq!(s, p(&[2, -3, 0, 1]));
        // monomial already centered
        let (c, s) = p(&[0, 0, 0, 1]).mean_shift().unwrap();
        assert!(c.is_zero());
        assert_eq!(s, p(&[0, 0, 0, 1]));
        // 2y^2 + 4y -> c = -1, shifted = 2y^2 - 2
        let (c, s) = p(&[0, 4, 2]).mean_shift().unwrap();
        assert_eq!(c, ratio(-1, 1));
        assert_eq!(s, p(&[-2, 0, 2]));
        assert!(p(&[7]).mean_shift().is_err());
    }

    #[test]
    fn support_examples() {
        assert_eq!(
            p(&[0, 1, 0, 1]).support(),
            BTreeSet::from([1usize, 3usize])
        );
        assert!(UPoly::zero().support().is_empty());
    }

    #[test]
    fn compose_affine_matches_compose() {
        let q = p(&[1, -2, 0, 3]);
        let s = ratio(2, 3);
        let t = ratio(-1, 2);
        let lin = &UPoly::monomial(s.clone(), 1) + &UPoly::constant(t.clone());
        assert_eq!(q.compose_affine(&s, &t), q.compose(&lin));
    }

    #[test]
    fn degree_under_compose() {
        let a = p(&[1, 0, 1]); // deg 2
        let b = p(&[0, 1, 0, 2]); // deg 3
        assert_eq!(a.compose(&b).degree(), Degree::Fin(6));
    }
}
