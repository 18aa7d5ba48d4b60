//! Sparse bivariate polynomials in `x, y` over ℚ.

use super::{Degree, Rat, UPoly};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Sparse polynomial; key `(i, j)` holds the coefficient of `x^i y^j`.
/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl BPoly {
    pub fn zero() -> Self {
        BPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = BPoly::zero();
        p.add_term(0, 0, c);
        p
    }

    pub fn x() -> Self {
        BPoly::monomial(Rat::one(), 1, 0)
    }

    pub fn y() -> Self {
        BPoly::monomial(Rat::one(), 0, 1)
    }

    pub fn monomial(c: Rat, i: u32, j: u32) -> Self {
        let mut p = BPoly::zero();
        p.add_term(i, j, c);
        p
    }

    /// A univariate polynomial in `y` viewed as bivariate.
    pub fn from_upoly_y(p: &UPoly) -> Self {
        let mut out = BPoly::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            out.add_term(0, j as u32, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Degree {
        self.terms
            .keys()
            .map(|&(i, j)| (i + j) as usize)
            .max()
            .map_or(Degree::NegInf, Degree::Fin)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_constant() {
            Some(self.coeff(0, 0))
        } else {
            None
        }
    }

    /// Homogeneous part of top total degree.
    pub fn leading_form(&self) -> BPoly {
        match self.total_degree() {
            Degree::NegInf => BPoly::zero(),
            Degree::Fin(d) => {
                let mut out = BPoly::zero();
                for (&(i, j), c) in &self.terms {
                    if (i + j) as usize == d {
                        out.add_term(i, j, c.clone());
                    }
                }
                out
            }
        }
    }

    /// Whether `self == c * other` for some scalar `c`, returning it.
    pub fn proportional_to(&self, other: &BPoly) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let (&key, denom) = other.terms.iter().next()?;
        let c = self.terms.get(&key)? / denom;
        if *self == other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> BPoly {
        if c.is_zero() {
            return BPoly::zero();
        }
        BPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> BPoly {
        let mut acc = BPoly::constant(Rat::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn d_dx(&self) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c * Rat::from_integer(i.into()));
            }
        }
        out
    }

    pub fn d_dy(&self) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c * Rat::from_integer(j.into()));
            }
        }
        out
    }

    /// Exact expansion of `F(X(x,y), Y(x,y))`.
    pub fn substitute_pair(&self, xs: &BPoly, ys: &BPoly) -> BPoly {
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let xpows = power_table(xs, max_i);
        let ypows = power_table(ys, max_j);
        let mut out = BPoly::zero();
        for (&(i, j), c) in &self.terms {
            let prod = &xpows[i as usize] * &ypows[j as usize];
            out = &out + &prod.scale(c);
        }
        out
    }

    pub fn evaluate(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * super::rat_pow(x, i as i64) * super::rat_pow(y, j as i64);
        }
        acc
    }
}

fn power_table(p: &BPoly, up_to: u32) -> Vec<BPoly> {
    let mut pows = Vec::with_capacity(up_to as usize + 1);
    pows.push(BPoly::constant(Rat::one()));
    for _ in 0..up_to {
        let next = &pows[pows.len() - 1] * p;
        pows.push(next);
    }
    pows
}

impl Add for &BPoly {
    type Output = BPoly;
    fn add(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BPoly {
    type Output = BPoly;
    fn sub(self, rhs: &BPoly) -> BPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Neg for &BPoly {
    type Output = BPoly;
    fn neg(self) -> BPoly {
        BPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect(),
        }
    }
}

impl Mul for &BPoly {
    type Output = BPoly;
    fn mul(self, rhs: &BPoly) -> BPoly {
        let mut out = BPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}
