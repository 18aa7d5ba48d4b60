//! Plane polynomial automorphisms: composition, inversion, factorization into
//! affine and elementary maps, and amalgam normal forms.

mod word;

pub use word::{decompose_elementary, Affine, Factor, Tail, Token, Word};

use crate::algebra::{BPoly, Degree, Rat, UPoly};
use crate::error::Error;
use crate::Result;
use num_traits::{One, Zero};

/// A plane polynomial automorphism as the pair of its components,
/// `(x, y) -> (first, second)`.  Construction checks that the Jacobian
/// determinant is a nonzero constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyAuto {
    first: BPoly,
    second: BPoly,
    jac: Rat,
}

impl PolyAuto {
    pub fn new(first: BPoly, second: BPoly) -> Result<Self> {
        let jac = {
            let j = &(&first.d_dx() * &second.d_dy()) - &(&first.d_dy() * &second.d_dx());
            j.constant_value()
                .ok_or(Error::NotAnAutomorphism("Jacobian is not constant"))?
        };
        if jac.is_zero() {
            return Err(Error::NotAnAutomorphism("Jacobian vanishes"));
        }
        Ok(PolyAuto { first, second, jac })
    }

    pub fn identity() -> Self {
        PolyAuto::new(BPoly::x(), BPoly::y()).unwrap()
    }

    pub fn first(&self) -> &BPoly {
        &self.first
    }

    pub fn second(&self) -> &BPoly {
        &self.second
    }

    /// The constant Jacobian determinant.
    pub fn jacobian(&self) -> &Rat {
        &self.jac
    }

    /// Membership in `G`: Jacobian determinant exactly 1.
    pub fn in_g(&self) -> bool {
        self.jac.is_one()
    }

    /// Composition `(self o rhs)(p) = self(rhs(p))`.
    pub fn compose(&self, rhs: &PolyAuto) -> PolyAuto {
        let first = self.first.substitute_pair(&rhs.first, &rhs.second);
        let second = self.second.substitute_pair(&rhs.first, &rhs.second);
        PolyAuto {
            first,
            second,
            jac: &self.jac * &rhs.jac,
        }
    }

    /// `f o g o f^{-1} o g^{-1}`.
    pub fn commutator(&self, rhs: &PolyAuto) -> Result<PolyAuto> {
        Ok(self
            .compose(rhs)
            .compose(&self.inverse()?)
            .compose(&rhs.inverse()?))
    }

    /// Exact inverse, via the factorization.
    pub fn inverse(&self) -> Result<PolyAuto> {
        Ok(self.to_word()?.inverse().to_poly_auto())
    }

    /// Canonical amalgam normal form.  Errors with `NotAnAutomorphism` when
    /// the degree-reduction stalls (the pair is not invertible).
    pub fn to_word(&self) -> Result<Word> {
        let mut tokens: Vec<Token> = Vec::new();
        let mut g1 = self.first.clone();
        let mut g2 = self.second.clone();
        loop {
            let d1 = g1.total_degree();
            let d2 = g2.total_degree();
            if d1 <= Degree::Fin(1) && d2 <= Degree::Fin(1) {
                let m = affine_from_components(&g1, &g2)?;
                let (tok, tail) = m.decompose()?;
                if let Some(t) = tok {
                    tokens.push(t);
                }
                return Ok(Word::from_parts(tokens, tail));
            }
            if d1 > d2 {
                tokens.push(Token::E(peel_elementary(&mut g1, &g2)?));
            } else {
                let lambda = peel_affine_lambda(&g1, &g2, d1, d2)?;
                // a(l)^{-1} o (g1, g2) = (-g2, g1 + l*g2)
                let n2 = &g1 + &g2.scale(&lambda);
                g1 = -&g2;
                g2 = n2;
                tokens.push(Token::A(lambda));
            }
        }
    }

    /// Builds the automorphism realized by a normal form.  The component
    /// degrees multiply along elementary tokens, so this is only feasible for
    /// words of moderate total degree.
    pub fn from_word(w: &Word) -> PolyAuto {
        w.to_poly_auto()
    }

    /// Minimal number of affine/elementary letters.
    pub fn algebraic_length(&self) -> Result<usize> {
        Ok(self.to_word()?.algebraic_length())
    }

    /// Alternating factorization into affine and elementary automorphisms.
    pub fn jung_factorize(&self) -> Result<Factorization> {
        let w = self.to_word()?;
        let mut factors: Vec<(PolyAuto, Factor)> = Vec::new();
        let n = w.tokens().len();
        if n == 0 {
            return Ok(Factorization {
                factors: vec![(w.tail().to_poly_auto(), Factor::Affine)],
            });
        }
        for (i, t) in w.tokens().iter().enumerate() {
            let mut piece = Word::from_token(t.clone());
            if i == n - 1 {
                piece.mul_tail(w.tail());
            }
            factors.push((piece.to_poly_auto(), t.factor()));
        }
        Ok(Factorization { factors })
    }
}

/// Alternating affine/elementary factorization of an automorphism.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub factors: Vec<(PolyAuto, Factor)>,
}

impl Factorization {
    pub fn compose(&self) -> PolyAuto {
        let mut acc = PolyAuto::identity();
        for (f, _) in &self.factors {
            acc = acc.compose(f);
        }
        acc
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

fn affine_from_components(g1: &BPoly, g2: &BPoly) -> Result<Affine> {
    let pick = |p: &BPoly| (p.coeff(1, 0), p.coeff(0, 1), p.coeff(0, 0));
    let (a, b, c) = pick(g1);
    let (d, e, f) = pick(g2);
    let m = Affine { a, b, c, d, e, f };
    if m.det().is_zero() {
        return Err(Error::NotAnAutomorphism("degenerate linear part"));
    }
    Ok(m)
}

/// Strips the leading elementary factor: finds `Q` in `y^2 Q[y]` with
/// `deg(g1 - Q(g2)) <= deg(g2)` by killing leading forms, or reports failure.
fn peel_elementary(g1: &mut BPoly, g2: &BPoly) -> Result<UPoly> {
    let d2 = match g2.total_degree() {
        Degree::Fin(d) if d >= 1 => d,
        _ => return Err(Error::NotAnAutomorphism("second component is constant")),
    };
    let lf2 = g2.leading_form();
    let mut q = UPoly::zero();
    loop {
        let d1 = match g1.total_degree() {
            Degree::Fin(d) => d,
            Degree::NegInf => break,
        };
        if d1 <= d2 {
            break;
        }
        if d1 % d2 != 0 {
            return Err(Error::NotAnAutomorphism("component degrees incompatible"));
        }
        let m = d1 / d2;
        let c = g1
            .leading_form()
            .proportional_to(&lf2.pow(m as u32))
            .ok_or(Error::NotAnAutomorphism("leading form is not a power"))?;
        q = &q + &UPoly::monomial(c.clone(), m);
        *g1 = &*g1 - &g2.pow(m as u32).scale(&c);
    }
    debug_assert!(q.degree() >= Degree::Fin(2));
    Ok(q)
}

fn peel_affine_lambda(g1: &BPoly, g2: &BPoly, d1: Degree, d2: Degree) -> Result<Rat> {
    if d1 < d2 {
        return Ok(Rat::zero());
    }
    // equal degrees: the leading forms must be proportional
    let c = g1
        .leading_form()
        .proportional_to(&g2.leading_form())
        .ok_or(Error::NotAnAutomorphism("leading forms not proportional"))?;
    Ok(-c)
}

impl Tail {
    pub fn to_poly_auto(&self) -> PolyAuto {
        let mut first = BPoly::zero();
        first.add_term(1, 0, self.a.clone());
        first.add_term(0, 1, self.b.clone());
        first.add_term(0, 0, self.c.clone());
        let mut second = BPoly::zero();
        second.add_term(0, 1, self.e.clone());
        second.add_term(0, 0, self.f.clone());
        PolyAuto::new(first, second).expect("tail is invertible")
    }
}

impl Token {
    pub fn to_poly_auto(&self) -> PolyAuto {
        match self {
            Token::A(l) => {
                let mut first = BPoly::zero();
                first.add_term(1, 0, l.clone());
                first.add_term(0, 1, Rat::one());
                let second = BPoly::x().scale(&-Rat::one());
                PolyAuto::new(first, second).expect("a(l) is invertible")
            }
            Token::E(q) => {
                let first = &BPoly::x() + &BPoly::from_upoly_y(q);
                PolyAuto::new(first, BPoly::y()).expect("e(Q) is invertible")
            }
        }
    }
}

impl Word {
    pub fn to_poly_auto(&self) -> PolyAuto {
        let mut acc = self.tail().to_poly_auto();
        for t in self.tokens().iter().rev() {
            acc = t.to_poly_auto().compose(&acc);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn pair(fx: BPoly, fy: BPoly) -> PolyAuto {
        PolyAuto::new(fx, fy).unwrap()
    }

    fn e_poly(cs: &[i64]) -> BPoly {
        &BPoly::x() + &BPoly::from_upoly_y(&UPoly::from_ints(cs))
    }

    #[test]
    fn compose_examples() {
        // (y, x) o (x + y^2, y) = (y, x + y^2)
        let swap = pair(BPoly::y(), BPoly::x());
        let henon = pair(e_poly(&[0, 0, 1]), BPoly::y());
        let c = swap.compose(&henon);
        assert_eq!(c.first(), &BPoly::y());
        assert_eq!(c.second(), &e_poly(&[0, 0, 1]));
        // f o f^{-1} = id
        let f = henon.compose(&swap);
        assert_eq!(f.compose(&f.inverse().unwrap()), PolyAuto::identity());
    }

    #[test]
    fn paper_commutator_values() {
        // [(x, y+1), (x + y^2, y)] = (x - 2y + 1, y)
        let u = pair(BPoly::x(), &BPoly::y() + &BPoly::constant(rat(1)));
        let e = pair(e_poly(&[0, 0, 1]), BPoly::y());
        let c = u.commutator(&e).unwrap();
        let mut expect_first = BPoly::x();
        expect_first.add_term(0, 1, rat(-2));
        expect_first.add_term(0, 0, rat(1));
        assert_eq!(c.first(), &expect_first);
        assert_eq!(c.second(), &BPoly::y());

        // [(x+a, y+b), (-x, -y)] = (x + 2a, y + 2b)
        let (a, b) = (ratio(3, 2), ratio(-5, 7));
        let t = Word::translation(a.clone(), b.clone()).to_poly_auto();
        let minus = pair(BPoly::x().scale(&rat(-1)), BPoly::y().scale(&rat(-1)));
        let c = t.commutator(&minus).unwrap();
        let expect = Word::translation(rat(2) * a, rat(2) * b).to_poly_auto();
        assert_eq!(c, expect);

        // [f, f] = id
        let f = e.compose(&minus);
        assert_eq!(f.commutator(&f).unwrap(), PolyAuto::identity());
    }

    #[test]
    fn in_g_examples() {
        assert!(pair(BPoly::y(), BPoly::x().scale(&rat(-1))).in_g());
        assert!(!pair(BPoly::y(), BPoly::x()).in_g());
        assert!(!pair(BPoly::x().scale(&rat(2)), BPoly::y()).in_g());
    }

    #[test]
    fn normal_form_examples() {
        // (y, -x) = a(0), identity tail
        let w = pair(BPoly::y(), BPoly::x().scale(&rat(-1)))
            .to_word()
            .unwrap();
        assert_eq!(w.tokens(), &[Token::A(rat(0))]);
        assert!(w.tail().is_identity());

        // (x + y^2 + y + 1, y) = e(y^2) . (x + y + 1, y)
        let w = pair(e_poly(&[1, 1, 1]), BPoly::y()).to_word().unwrap();
        assert_eq!(w.tokens(), &[Token::E(UPoly::from_ints(&[0, 0, 1]))]);
        assert_eq!(w.tail(), &Tail::new(rat(1), rat(1), rat(1), rat(1), rat(0)));

        // (2x + y + 1, -x): lambda = -alpha/delta = 2
        let mut fx = BPoly::x().scale(&rat(2));
        fx.add_term(0, 1, rat(1));
        fx.add_term(0, 0, rat(1));
        let f = pair(fx, BPoly::x().scale(&rat(-1)));
        let w = f.to_word().unwrap();
        assert_eq!(w.tokens(), &[Token::A(rat(2))]);
        assert_eq!(w.to_poly_auto(), f);
    }

    #[test]
    fn amalgam_element_has_length_zero() {
        // (2x + 3, y/2)
        let mut fx = BPoly::x().scale(&rat(2));
        fx.add_term(0, 0, rat(3));
        let f = pair(fx, BPoly::y().scale(&ratio(1, 2)));
        assert_eq!(f.algebraic_length().unwrap(), 0);
    }

    #[test]
    fn factorize_henon() {
        // (y, x + y^2) is affine . elementary
        let f = pair(BPoly::y(), e_poly(&[0, 0, 1]));
        let fact = f.jung_factorize().unwrap();
        assert_eq!(fact.len(), 2);
        assert_eq!(fact.factors[0].1, Factor::Affine);
        assert_eq!(fact.factors[1].1, Factor::Elementary);
        assert_eq!(fact.compose(), f);
        // affine input: single affine factor
        let aff = Word::translation(rat(1), rat(2)).to_poly_auto();
        let fact = aff.jung_factorize().unwrap();
        assert_eq!(fact.len(), 1);
        assert_eq!(fact.compose(), aff);
    }

    #[test]
    fn word_pair_round_trip() {
        let w = Word::e_gen(UPoly::from_ints(&[0, 0, 1]))
            .mul(&Word::a_gen(rat(1)))
            .mul(&Word::e_gen(UPoly::from_ints(&[0, 0, 0, 1])));
        let f = w.to_poly_auto();
        assert_eq!(f.to_word().unwrap(), w);
        assert_eq!(f.jung_factorize().unwrap().compose(), f);
        assert_eq!(f.algebraic_length().unwrap(), 3);
    }

    #[test]
    fn inverse_of_token_product() {
        // e(y^2) o a(1): inverse recomposes to identity
        let w = Word::e_gen(UPoly::from_ints(&[0, 0, 1])).mul(&Word::a_gen(rat(1)));
        let f = w.to_poly_auto();
        let inv = f.inverse().unwrap();
        assert_eq!(f.compose(&inv), PolyAuto::identity());
        assert_eq!(inv.compose(&f), PolyAuto::identity());
    }

    #[test]
    fn rejects_non_automorphism() {
        // (x + y^2, y + x^2) has non-constant Jacobian
        assert!(
            PolyAuto::new(e_poly(&[0, 0, 1]), &BPoly::y() + &BPoly::monomial(rat(1), 2, 0))
                .is_err()
        );
        // (x*y, y) singular linear part
        assert!(PolyAuto::new(&BPoly::x() * &BPoly::y(), BPoly::y()).is_err());
    }
}
