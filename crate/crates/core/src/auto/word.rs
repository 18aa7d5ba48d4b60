//! Canonical amalgam words: tokens, tails, and normal forms.
//!
//! Every plane polynomial automorphism is uniquely `t_1 ... t_k * s` where the
//! `t_i` alternate between the coset representatives `a(l) = (l*x + y, -x)`
//! and `e(Q) = (x + Q(y), y)` with `Q` in `y^2 Q[y] \ {0}`, and `s` lies in
//! the amalgamated part `A n E`.  [`Word`] stores exactly that data and keeps
//! it canonical under multiplication and inversion, so two automorphisms are
//! equal iff their `Word`s are structurally equal.

use crate::algebra::{rat, Degree, Rat, UPoly};
use crate::error::Error;
use crate::Result;
use num_traits::{One, Zero};

/// Element of the amalgamated part: `(a*x + b*y + c, e*y + f)` with `a*e != 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tail {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub e: Rat,
    pub f: Rat,
}

impl Tail {
    pub fn identity() -> Self {
        Tail {
            a: Rat::one(),
            b: Rat::zero(),
            c: Rat::zero(),
            e: Rat::one(),
            f: Rat::zero(),
        }
    }

    pub fn new(a: Rat, b: Rat, c: Rat, e: Rat, f: Rat) -> Self {
        debug_assert!(!a.is_zero() && !e.is_zero());
        Tail { a, b, c, e, f }
    }

    /// Translation `(x + cx, y + cy)`.
    pub fn translation(cx: Rat, cy: Rat) -> Self {
        Tail::new(Rat::one(), Rat::zero(), cx, Rat::one(), cy)
    }

    /// Diagonal `(d*x, y/d)` (Jacobian 1).
    pub fn diagonal(d: Rat) -> Self {
        debug_assert!(!d.is_zero());
        Tail::new(d.clone(), Rat::zero(), Rat::zero(), d.recip(), Rat::zero())
    }

    /// Upper transvection `(x + t*y, y)`.
    pub fn transvection(t: Rat) -> Self {
        Tail::new(Rat::one(), t, Rat::zero(), Rat::one(), Rat::zero())
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one()
            && self.b.is_zero()
            && self.c.is_zero()
            && self.e.is_one()
            && self.f.is_zero()
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.e
    }

    /// Group product `self . rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &Tail) -> Tail {
        Tail {
            a: &self.a * &rhs.a,
            b: &self.a * &rhs.b + &self.b * &rhs.e,
            c: &self.a * &rhs.c + &self.b * &rhs.f + &self.c,
            e: &self.e * &rhs.e,
            f: &self.e * &rhs.f + &self.f,
        }
    }

    pub fn inverse(&self) -> Tail {
        let ai = self.a.recip();
        let ei = self.e.recip();
        // x = X/a - b/(a e) Y + (b f/(a e) - c/a), y = Y/e - f/e
        Tail {
            a: ai.clone(),
            b: -(&self.b * (&ai * &ei)),
            c: (&self.b * &self.f) * (&ai * &ei) - &self.c * &ai,
            e: ei.clone(),
            f: -(&self.f * &ei),
        }
    }

    pub fn to_affine(&self) -> Affine {
        Affine {
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: Rat::zero(),
            e: self.e.clone(),
            f: self.f.clone(),
        }
    }

    /// Whether this is a nontrivial translation `(x + c, y)`, returning `c`.
    pub fn as_x_translation(&self) -> Option<Rat> {
        if self.a.is_one()
            && self.b.is_zero()
            && self.e.is_one()
            && self.f.is_zero()
            && !self.c.is_zero()
        {
            Some(self.c.clone())
        } else {
            None
        }
    }
}

/// General affine map `(a*x + b*y + c, d*x + e*y + f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub e: Rat,
    pub f: Rat,
}

impl Affine {
    pub fn det(&self) -> Rat {
        &self.a * &self.e - &self.b * &self.d
    }

    /// Group product `self . rhs`.
    pub fn mul(&self, rhs: &Affine) -> Affine {
        Affine {
            a: &self.a * &rhs.a + &self.b * &rhs.d,
            b: &self.a * &rhs.b + &self.b * &rhs.e,
            c: &self.a * &rhs.c + &self.b * &rhs.f + &self.c,
            d: &self.d * &rhs.a + &self.e * &rhs.d,
            e: &self.d * &rhs.b + &self.e * &rhs.e,
            f: &self.d * &rhs.c + &self.e * &rhs.f + &self.f,
        }
    }

    /// Splits off the coset representative: `self = a(l) . tail` when the
    /// lower-left entry is nonzero, else `self` is already in the amalgam.
    pub fn decompose(&self) -> Result<(Option<Token>, Tail)> {
        if self.det().is_zero() {
            return Err(Error::NotAnAutomorphism("singular affine map"));
        }
        if self.d.is_zero() {
            return Ok((None, Tail::new(
                self.a.clone(),
                self.b.clone(),
                self.c.clone(),
                self.e.clone(),
                self.f.clone(),
            )));
        }
        let lambda = -(&self.a / &self.d);
        let tail = Tail::new(
            -self.d.clone(),
            -self.e.clone(),
            -self.f.clone(),
            &self.b + &lambda * &self.e,
            &self.c + &lambda * &self.f,
        );
        Ok((Some(Token::A(lambda)), tail))
    }
}

/// Elementary map `(alpha*x + R(y), eps*y + zeta)`; splits as `e(Q) . tail`
/// with `Q` the degree->=2 part of `R((u - zeta)/eps)`.
pub fn decompose_elementary(
    alpha: &Rat,
    r: &UPoly,
    eps: &Rat,
    zeta: &Rat,
) -> Result<(Option<Token>, Tail)> {
    if alpha.is_zero() || eps.is_zero() {
        return Err(Error::NotAnAutomorphism("degenerate elementary map"));
    }
    let t = r.compose_affine(&eps.recip(), &(-(zeta / eps)));
    let (q, t1, t0) = t.split_linear();
    let tail = Tail::new(
        alpha.clone(),
        &t1 * eps,
        &t1 * zeta + &t0,
        eps.clone(),
        zeta.clone(),
    );
    if q.is_zero() {
        Ok((None, tail))
    } else {
        Ok((Some(Token::E(q)), tail))
    }
}

/// Coset representative: `A(l)` is `a(l) = (l*x + y, -x)`, `E(Q)` is
/// `e(Q) = (x + Q(y), y)` with `Q` in `y^2 Q[y] \ {0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    A(Rat),
    E(UPoly),
}

/// The two factors of the amalgam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Affine,
    Elementary,
}

impl Token {
    pub fn factor(&self) -> Factor {
        match self {
            Token::A(_) => Factor::Affine,
            Token::E(_) => Factor::Elementary,
        }
    }

    /// Degree of the elementary polynomial; tokens `a(l)` have degree 1.
    pub fn degree(&self) -> usize {
        match self {
            Token::A(_) => 1,
            Token::E(q) => match q.degree() {
                Degree::Fin(d) => d,
                Degree::NegInf => unreachable!("EToken is nonzero"),
            },
        }
    }
}

/// Canonical normal form `t_1 ... t_k . tail` of an automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    tokens: Vec<Token>,
    tail: Tail,
}

impl Word {
    pub fn identity() -> Self {
        Word {
            tokens: Vec::new(),
            tail: Tail::identity(),
        }
    }

    pub fn from_tail(tail: Tail) -> Self {
        Word {
            tokens: Vec::new(),
            tail,
        }
    }

    pub fn from_token(token: Token) -> Self {
        if let Token::E(q) = &token {
            debug_assert!(q.coeff(0).is_zero() && q.coeff(1).is_zero());
            debug_assert!(q.degree() >= Degree::Fin(2));
        }
        Word {
            tokens: vec![token],
            tail: Tail::identity(),
        }
    }

    /// `a(l)` generator.
    pub fn a_gen(lambda: Rat) -> Self {
        Word::from_token(Token::A(lambda))
    }

    /// `e(Q)` generator; `Q` may have arbitrary low-degree terms, which are
    /// absorbed into the tail.
    pub fn e_gen(q: UPoly) -> Self {
        let (high, t1, t0) = q.split_linear();
        let mut w = if high.is_zero() {
            Word::identity()
        } else {
            Word::from_token(Token::E(high))
        };
        w.tail = w.tail.mul(&Tail::new(Rat::one(), t1, t0, Rat::one(), Rat::zero()));
        w
    }

    /// Translation `(x + cx, y + cy)`.
    pub fn translation(cx: Rat, cy: Rat) -> Self {
        Word::from_tail(Tail::translation(cx, cy))
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_identity(&self) -> bool {
        self.tokens.is_empty() && self.tail.is_identity()
    }

    /// Number of amalgam letters; zero iff the element is in `A n E`.
    pub fn algebraic_length(&self) -> usize {
        self.tokens.len()
    }

    /// Jacobian determinant (constant, multiplicative).
    pub fn jacobian(&self) -> Rat {
        // every token has Jacobian 1
        self.tail.det()
    }

    pub fn in_g(&self) -> bool {
        self.jacobian().is_one()
    }

    fn push_tail_through(tail: &Tail, token: &Token) -> (Token, Tail) {
        match token {
            Token::A(lambda) => {
                // s . a(l) is affine with nonzero lower-left entry
                let al = Affine {
                    a: lambda.clone(),
                    b: Rat::one(),
                    c: Rat::zero(),
                    d: -Rat::one(),
                    e: Rat::zero(),
                    f: Rat::zero(),
                };
                let prod = tail.to_affine().mul(&al);
                let (tok, t) = prod.decompose().expect("tail*a(l) is invertible");
                (tok.expect("tail*a(l) never lies in the amalgam"), t)
            }
            Token::E(q) => {
                // s . e(Q) = (a x + a Q(y) + b y + c, e y + f)
                let r = {
                    let aq = q.scale(&tail.a);
                    let lin = UPoly::from_coeffs(vec![tail.c.clone(), tail.b.clone()]);
                    &aq + &lin
                };
                let (tok, t) = decompose_elementary(&tail.a, &r, &tail.e, &tail.f)
                    .expect("tail*e(Q) is invertible");
                (tok.expect("tail*e(Q) never lies in the amalgam"), t)
            }
        }
    }

    /// Multiplies on the right by a single canonical token.
    pub fn mul_token(&mut self, token: &Token) {
        let (tok, new_tail) = Word::push_tail_through(&self.tail, token);
        self.tail = new_tail;
        match (self.tokens.last(), &tok) {
            (Some(Token::A(_)), Token::A(_)) => {
                let Some(Token::A(l1)) = self.tokens.pop() else {
                    unreachable!()
                };
                let Token::A(l2) = tok else { unreachable!() };
                let prod = Affine {
                    a: &l1 * &l2 - rat(1),
                    b: l1.clone(),
                    c: Rat::zero(),
                    d: -l2.clone(),
                    e: -Rat::one(),
                    f: Rat::zero(),
                };
                let (t, s) = prod.decompose().expect("a(l1)a(l2) invertible");
                if let Some(t) = t {
                    self.tokens.push(t);
                }
                self.tail = s.mul(&self.tail);
            }
            (Some(Token::E(_)), Token::E(_)) => {
                let Some(Token::E(q1)) = self.tokens.pop() else {
                    unreachable!()
                };
                let Token::E(q2) = tok else { unreachable!() };
                let sum = &q1 + &q2;
                if !sum.is_zero() {
                    self.tokens.push(Token::E(sum));
                }
            }
            _ => self.tokens.push(tok),
        }
        debug_assert!(self.alternates());
    }

    fn alternates(&self) -> bool {
        self.tokens
            .windows(2)
            .all(|w| w[0].factor() != w[1].factor())
    }

    pub fn mul_tail(&mut self, tail: &Tail) {
        self.tail = self.tail.mul(tail);
    }

    /// Group product `self . rhs` (composition: apply `rhs` first).
    pub fn mul(&self, rhs: &Word) -> Word {
        let mut out = self.clone();
        for t in &rhs.tokens {
            out.mul_token(t);
        }
        out.mul_tail(&rhs.tail);
        out
    }

    pub fn inverse(&self) -> Word {
        let mut out = Word::from_tail(self.tail.inverse());
        for t in self.tokens.iter().rev() {
            match t {
                Token::A(lambda) => {
                    // a(l)^{-1} = (-y, x + l y)
                    let inv = Affine {
                        a: Rat::zero(),
                        b: -Rat::one(),
                        c: Rat::zero(),
                        d: Rat::one(),
                        e: lambda.clone(),
                        f: Rat::zero(),
                    };
                    let (tok, s) = inv.decompose().expect("a(l)^{-1} invertible");
                    out.mul_token(&tok.expect("a(l)^{-1} not in amalgam"));
                    out.mul_tail(&s);
                }
                Token::E(q) => {
                    out.mul_token(&Token::E(-q));
                }
            }
        }
        out
    }

    pub fn conjugate(&self, by: &Word) -> Word {
        by.mul(self).mul(&by.inverse())
    }

    pub fn commutator(&self, rhs: &Word) -> Word {
        self.mul(rhs).mul(&self.inverse()).mul(&rhs.inverse())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Whether the word is a nontrivial translation `(x + c, y)`.
    pub fn as_x_translation(&self) -> Option<Rat> {
        if self.tokens.is_empty() {
            self.tail.as_x_translation()
        } else {
            None
        }
    }

    /// Membership in the amalgamated part `A n E`.
    pub fn in_amalgam(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Membership in the given factor (`A`: affine, `E`: elementary).
    pub fn in_factor(&self, factor: Factor) -> bool {
        match self.tokens.as_slice() {
            [] => true,
            [t] => t.factor() == factor,
            _ => false,
        }
    }

    /// The factors this element belongs to, if any.
    pub fn factor_membership(&self) -> (bool, bool) {
        (
            self.in_factor(Factor::Affine),
            self.in_factor(Factor::Elementary),
        )
    }

    pub(crate) fn from_parts(tokens: Vec<Token>, tail: Tail) -> Word {
        let w = Word { tokens, tail };
        debug_assert!(w.alternates());
        w
    }
}
