//! The expression grammar: parsing and printing of polynomials,
//! automorphism expressions, vertices and paths.
//!
//! Grammar (whitespace-insensitive, rationals as `p/q`):
//!
//! ```text
//! auto := pair | 'a(' rat ')' | 'e(' poly ')' | 'id'
//!       | auto '*' auto | auto '^-1' | auto '^' int
//!       | '[' auto ',' auto ']' | '(' auto ')'
//! pair := '(' poly ',' poly ')'
//! poly := signed sums of rat * x^i * y^j
//! ```
//!
//! `*` is left-associative composition in the `(f o g)(p) = f(g(p))`
//! convention.  Printing always produces canonical forms that reparse to the
//! same value.

use crate::algebra::{BPoly, Rat, UPoly};
use crate::auto::{Tail, Token, Word};
use crate::error::Error;
use crate::tree::{TreePath, TreeVertex, VertexKind};
use crate::Result;
use num_traits::{One, Signed, Zero};

/// Abstract syntax of an automorphism expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AutoExpr {
    Id,
    Pair(BPoly, BPoly),
    AGen(Rat),
    EGen(UPoly),
    Compose(Vec<AutoExpr>),
    Inverse(Box<AutoExpr>),
    Commutator(Box<AutoExpr>, Box<AutoExpr>),
    Power(Box<AutoExpr>, i64),
}

impl AutoExpr {
    /// Evaluates to a normal form.  Never materializes the polynomial pair,
    /// so long products such as `(e*a)^13` stay cheap.
    pub fn eval(&self) -> Result<Word> {
        match self {
            AutoExpr::Id => Ok(Word::identity()),
            AutoExpr::Pair(fx, fy) => crate::auto::PolyAuto::new(fx.clone(), fy.clone())?.to_word(),
            AutoExpr::AGen(l) => Ok(Word::a_gen(l.clone())),
            AutoExpr::EGen(q) => Ok(Word::e_gen(q.clone())),
            AutoExpr::Compose(parts) => {
                let mut acc = Word::identity();
                for p in parts {
                    acc = acc.mul(&p.eval()?);
                }
                Ok(acc)
            }
            AutoExpr::Inverse(e) => Ok(e.eval()?.inverse()),
            AutoExpr::Commutator(f, g) => Ok(f.eval()?.commutator(&g.eval()?)),
            AutoExpr::Power(e, k) => Ok(e.eval()?.pow(*k)),
        }
    }
}

// ---------------------------------------------------------------- printing

fn push_signed_term(out: &mut String, first: bool, c: &Rat, vars: &str) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if vars.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(vars);
    } else {
        out.push_str(&abs.to_string());
        out.push('*');
        out.push_str(vars);
    }
}

fn var_power(name: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

pub fn upoly_to_string(p: &UPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        push_signed_term(&mut out, first, c, &var_power("y", i as u32));
        first = false;
    }
    out
}

pub fn bpoly_to_string(p: &BPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&(u32, u32), &Rat)> = p.terms().collect();
    terms.sort_by(|a, b| {
        let ka = (a.0 .0 + a.0 .1, a.0 .0);
        let kb = (b.0 .0 + b.0 .1, b.0 .0);
        kb.cmp(&ka)
    });
    let mut out = String::new();
    let mut first = true;
    for (&(i, j), c) in terms {
        let mut vars = var_power("x", i);
        let vy = var_power("y", j);
        if !vars.is_empty() && !vy.is_empty() {
            vars.push('*');
        }
        vars.push_str(&vy);
        push_signed_term(&mut out, first, c, &vars);
        first = false;
    }
    out
}

pub fn tail_to_string(t: &Tail) -> String {
    let mut fx = BPoly::zero();
    fx.add_term(1, 0, t.a.clone());
    fx.add_term(0, 1, t.b.clone());
    fx.add_term(0, 0, t.c.clone());
    let mut fy = BPoly::zero();
    fy.add_term(0, 1, t.e.clone());
    fy.add_term(0, 0, t.f.clone());
    format!("({}, {})", bpoly_to_string(&fx), bpoly_to_string(&fy))
}

pub fn token_to_string(t: &Token) -> String {
    match t {
        Token::A(l) => format!("a({l})"),
        Token::E(q) => format!("e({})", upoly_to_string(q)),
    }
}

/// Canonical rendering of a normal form: the token word followed by the
/// amalgam tail as a pair, `id` for the identity.
pub fn word_to_string(w: &Word) -> String {
    let mut parts: Vec<String> = w.tokens().iter().map(token_to_string).collect();
    if !w.tail().is_identity() {
        parts.push(tail_to_string(w.tail()));
    }
    if parts.is_empty() {
        "id".to_string()
    } else {
        parts.join(" * ")
    }
}

pub fn vertex_to_string(v: &TreeVertex) -> String {
    let w = if v.word().is_empty() {
        "id".to_string()
    } else {
        v.word()
            .iter()
            .map(token_to_string)
            .collect::<Vec<_>>()
            .join(" * ")
    };
    format!("{} {}", w, v.kind())
}

pub fn path_to_string(p: &TreePath) -> String {
    p.vertices
        .iter()
        .map(vertex_to_string)
        .collect::<Vec<_>>()
        .join(" ; ")
}

// ----------------------------------------------------------------- parsing

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn parse_uint(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "integer out of range".to_string(),
            })
    }

    fn parse_int(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let n = self.parse_uint()?;
        Ok(if neg { -n } else { n })
    }

    fn parse_rat(&mut self) -> Result<Rat> {
        let n = self.parse_int()?;
        if self.eat(b'/') {
            let d = self.parse_int()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            Ok(Rat::new(n.into(), d.into()))
        } else {
            Ok(Rat::from_integer(n.into()))
        }
    }

    /// One multiplicative factor of a monomial: a rational constant or a
    /// variable power.
    fn parse_factor(&mut self) -> Result<BPoly> {
        match self.peek() {
            Some(b'x') | Some(b'y') => {
                let var = self.bytes[self.pos];
                self.pos += 1;
                let e = if self.eat(b'^') { self.parse_uint()? } else { 1 };
                let e: u32 = e.try_into().map_err(|_| Error::Syntax {
                    pos: self.pos,
                    msg: "exponent out of range".to_string(),
                })?;
                Ok(if var == b'x' {
                    BPoly::monomial(Rat::one(), e, 0)
                } else {
                    BPoly::monomial(Rat::one(), 0, e)
                })
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.parse_rat()?;
                Ok(BPoly::constant(r))
            }
            _ => self.err("expected a monomial factor"),
        }
    }

    fn parse_monomial(&mut self) -> Result<BPoly> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = &acc * &f;
                }
                // juxtaposition like `2x` or `x y`
                Some(b'x') | Some(b'y') => {
                    let f = self.parse_factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_poly(&mut self) -> Result<BPoly> {
        let mut acc = BPoly::zero();
        let mut sign = Rat::one();
        if self.eat(b'-') {
            sign = -sign;
        } else {
            let _ = self.eat(b'+');
        }
        loop {
            let m = self.parse_monomial()?;
            acc = &acc + &m.scale(&sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Rat::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<AutoExpr> {
        match self.peek() {
            Some(b'a') => {
                self.pos += 1;
                self.expect(b'(')?;
                let r = self.parse_rat()?;
                self.expect(b')')?;
                Ok(AutoExpr::AGen(r))
            }
            Some(b'e') => {
                self.pos += 1;
                self.expect(b'(')?;
                let p = self.parse_poly()?;
                self.expect(b')')?;
                Ok(AutoExpr::EGen(bpoly_to_upoly(&p, self.pos)?))
            }
            Some(b'i') => {
                if self.bytes[self.pos..].starts_with(b"id") {
                    self.pos += 2;
                    Ok(AutoExpr::Id)
                } else {
                    self.err("unknown identifier")
                }
            }
            Some(b'[') => {
                self.pos += 1;
                let f = self.parse_auto()?;
                self.expect(b',')?;
                let g = self.parse_auto()?;
                self.expect(b']')?;
                Ok(AutoExpr::Commutator(Box::new(f), Box::new(g)))
            }
            Some(b'(') => {
                let save = self.pos;
                self.pos += 1;
                // try a component pair first, then a parenthesized expression
                let as_pair = (|| -> Result<AutoExpr> {
                    let fx = self.parse_poly()?;
                    self.expect(b',')?;
                    let fy = self.parse_poly()?;
                    self.expect(b')')?;
                    Ok(AutoExpr::Pair(fx, fy))
                })();
                match as_pair {
                    Ok(e) => Ok(e),
                    Err(_) => {
                        self.pos = save + 1;
                        let e = self.parse_auto()?;
                        self.expect(b')')?;
                        Ok(e)
                    }
                }
            }
            _ => self.err("expected an automorphism expression"),
        }
    }

    fn parse_power(&mut self) -> Result<AutoExpr> {
        let mut acc = self.parse_atom()?;
        while self.eat(b'^') {
            let k = self.parse_int()?;
            acc = if k == -1 {
                AutoExpr::Inverse(Box::new(acc))
            } else {
                AutoExpr::Power(Box::new(acc), k)
            };
        }
        Ok(acc)
    }

    fn parse_auto(&mut self) -> Result<AutoExpr> {
        let mut parts = vec![self.parse_power()?];
        while self.eat(b'*') {
            parts.push(self.parse_power()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            AutoExpr::Compose(parts)
        })
    }
}

fn bpoly_to_upoly(p: &BPoly, pos: usize) -> Result<UPoly> {
    let mut coeffs: Vec<Rat> = Vec::new();
    for (&(i, j), c) in p.terms() {
        if i != 0 {
            return Err(Error::Syntax {
                pos,
                msg: "expected a polynomial in y only".to_string(),
            });
        }
        if coeffs.len() <= j as usize {
            coeffs.resize(j as usize + 1, Rat::zero());
        }
        coeffs[j as usize] = c.clone();
    }
    Ok(UPoly::from_coeffs(coeffs))
}

/// Parses a full automorphism expression.
pub fn parse_auto(s: &str) -> Result<AutoExpr> {
    let mut p = Parser::new(s);
    let e = p.parse_auto()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses and evaluates to a normal form.
pub fn parse_word(s: &str) -> Result<Word> {
    parse_auto(s)?.eval()
}

/// Parses a univariate polynomial in `y`.
pub fn parse_upoly(s: &str) -> Result<UPoly> {
    let mut p = Parser::new(s);
    let poly = p.parse_poly()?;
    if !p.at_end() {
        return p.err("trailing input");
    }
    bpoly_to_upoly(&poly, 0)
}

/// Parses a vertex `"<auto-expr> A"` / `"<auto-expr> E"`.
pub fn parse_vertex(s: &str) -> Result<TreeVertex> {
    let t = s.trim();
    let (word_part, kind) = match t.char_indices().last() {
        Some((i, 'A')) => (&t[..i], VertexKind::A),
        Some((i, 'E')) => (&t[..i], VertexKind::E),
        _ => {
            return Err(Error::Syntax {
                pos: t.len(),
                msg: "vertex must end with A or E".to_string(),
            })
        }
    };
    Ok(TreeVertex::new(&parse_word(word_part)?, kind))
}

/// Parses a path of vertices separated by `;`.
pub fn parse_path(s: &str) -> Result<TreePath> {
    let vertices: Vec<TreeVertex> = s
        .split(';')
        .map(parse_vertex)
        .collect::<Result<_>>()?;
    if vertices.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty path".to_string(),
        });
    }
    Ok(TreePath { vertices })
}
