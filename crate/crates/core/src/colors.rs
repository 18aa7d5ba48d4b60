//! The color calculus.
//!
//! A path of type `A-E-A` carries a double coset `(AnE) e1^{-1} e2 (AnE)`,
//! its color.  Two polynomials represent the same color iff one is
//! `alpha P(beta y + gamma) + delta y + eps` of the other; the decision
//! procedure below settles that over ℂ for rational inputs.  On top of it sit
//! generality, the mixture verifier, the degree-gap independence criterion,
//! the C1/C2 condition reports, and seeded genericness sampling.

use crate::algebra::{rat, rat_pow, Degree, Rat, UPoly};
use crate::auto::{Token, Word};
use crate::error::Error;
use crate::rng::Rng;
use crate::tree::{cyclic_reduce, geometric_length, TreePath, VertexKind};
use crate::Result;
use num_traits::Zero;

/// Normalized representative of a color: mean-shifted, no terms of degree
/// <= 1, monic.  Two `ColorRep`s may still denote the same color; equality
/// of colors is decided by [`same_color`], never structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorRep {
    rep: UPoly,
}

impl ColorRep {
    pub fn new(p: &UPoly) -> Result<ColorRep> {
        if p.degree() < Degree::Fin(2) {
            return Err(Error::DegreeTooLow("a color needs degree >= 2"));
        }
        let (_, shifted) = p.mean_shift()?;
        let (stripped, _, _) = shifted.split_linear();
        Ok(ColorRep {
            rep: stripped.monic(),
        })
    }

    pub fn poly(&self) -> &UPoly {
        &self.rep
    }

    pub fn degree(&self) -> usize {
        self.rep.degree().fin().expect("color rep is nonzero")
    }
}

/// Color of a path `psi e1 A - psi E - psi e2 A`.
pub fn color_of_path(p: &TreePath) -> Result<ColorRep> {
    if p.vertices.len() != 3 {
        return Err(Error::WrongPathType("expected a 3-vertex path"));
    }
    let [v1, v2, v3] = [&p.vertices[0], &p.vertices[1], &p.vertices[2]];
    if v1.kind() != VertexKind::A || v2.kind() != VertexKind::E || v3.kind() != VertexKind::A {
        return Err(Error::WrongPathType("expected type A-E-A"));
    }
    let psi_inv = v2.rep().inverse();
    let side = |v: &crate::tree::TreeVertex| -> Result<UPoly> {
        let u = crate::tree::TreeVertex::new(&psi_inv.mul(&v.rep()), VertexKind::A);
        match u.word() {
            [] => Ok(UPoly::zero()),
            [Token::E(q)] => Ok(q.clone()),
            _ => Err(Error::WrongPathType("outer vertex not adjacent to center")),
        }
    };
    let q1 = side(v1)?;
    let q2 = side(v3)?;
    let diff = &q2 - &q1;
    if diff.is_zero() {
        return Err(Error::DegeneratePath);
    }
    ColorRep::new(&diff)
}

/// Decides whether `Q(y) = alpha P(beta y + gamma) + delta y + eps` has a
/// solution over ℂ with `alpha beta != 0`.
///
/// Degrees must match.  Degree 2 is always a single color.  For degree >= 3
/// the inner shift is forced to align the root means, so after mean-shifting
/// both sides the relation reads `q_i = alpha beta^i p_i` for all `i >= 2`;
/// supports must agree and the coefficient ratios must be consistent powers
/// of `t = beta^g`, `g` the gcd of the support gaps, which Bezout pins to an
/// explicit rational.
pub fn same_color(p: &UPoly, q: &UPoly) -> Result<bool> {
    let dp = match p.degree() {
        Degree::Fin(d) if d >= 2 => d,
        _ => return Err(Error::DegreeTooLow("same_color needs degree >= 2")),
    };
    let dq = match q.degree() {
        Degree::Fin(d) if d >= 2 => d,
        _ => return Err(Error::DegreeTooLow("same_color needs degree >= 2")),
    };
    if dp != dq {
        return Ok(false);
    }
    if dp == 2 {
        return Ok(true);
    }
    let d = dp;
    let (_, ps) = p.mean_shift()?;
    let (_, qs) = q.mean_shift()?;
    let sup: Vec<usize> = ps
        .support()
        .into_iter()
        .filter(|&i| i >= 2)
        .collect();
    let sup_q: Vec<usize> = qs.support().into_iter().filter(|&i| i >= 2).collect();
    if sup != sup_q {
        return Ok(false);
    }
    // ratios r_i = q_i / p_i; constraints beta^{d-i} = r_d / r_i
    let r_d = qs.coeff(d) / ps.coeff(d);
    let mut constraints: Vec<(i64, Rat)> = Vec::new();
    for &i in &sup {
        if i == d {
            continue;
        }
        let r_i = qs.coeff(i) / ps.coeff(i);
        constraints.push(((d - i) as i64, &r_d / &r_i));
    }
    if constraints.is_empty() {
        return Ok(true);
    }
    // t = beta^g through an extended-gcd combination of the gaps
    let (mut g, mut t) = constraints[0].clone();
    for (gap, ratio) in &constraints[1..] {
        let (ng, u, v) = ext_gcd(g, *gap);
        t = rat_pow(&t, u) * rat_pow(ratio, v);
        g = ng;
    }
    for (gap, ratio) in &constraints {
        if rat_pow(&t, gap / g) != *ratio {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(g, u, v)` with `g = gcd(a, b) = u a + v b`, `g > 0`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        return (a * s, s, 0);
    }
    let (g, u, v) = ext_gcd(b, a % b);
    (g, v, u - (a / b) * v)
}

/// Weak generality: fails exactly when some shift puts the support into an
/// arithmetic progression `k + nZ` with `n >= 2`, and the only shift that can
/// do it is the mean shift.  Degree <= 2 is never weakly general.
pub fn is_weakly_general(q: &UPoly) -> bool {
    let d = match q.degree() {
        Degree::Fin(d) if d >= 3 => d,
        _ => return false,
    };
    let _ = d;
    let (_, shifted) = q.mean_shift().expect("degree >= 3");
    let sup: Vec<usize> = shifted.support().into_iter().collect();
    if sup.len() <= 1 {
        return false;
    }
    let top = *sup.last().unwrap();
    let mut g: usize = 0;
    for &i in &sup {
        g = num_integer::gcd(g, top - i);
    }
    g == 1
}

/// Generality: degree >= 5 and the (d-3)-rd derivative is weakly general.
pub fn is_general(p: &UPoly) -> Result<bool> {
    let d = match p.degree() {
        Degree::Fin(d) if d >= 5 => d,
        _ => return Err(Error::DegreeTooLow("is_general needs degree >= 5")),
    };
    Ok(is_weakly_general(&p.derivative(d - 3)))
}

fn general_or_false(p: &UPoly) -> bool {
    is_general(p).unwrap_or(false)
}

/// Arithmetic-mean criterion: if two consecutive derivatives are nonzero at
/// the mean of the roots, the polynomial is weakly general.  Sufficient only.
pub fn mean_general_criterion(p: &UPoly) -> Result<bool> {
    let d = match p.degree() {
        Degree::Fin(d) if d >= 3 => d,
        _ => return Err(Error::DegreeTooLow("criterion needs degree >= 3")),
    };
    let (c, _) = p.mean_shift()?;
    let m = c; // mean of the roots is the shift
    for k in 0..d {
        if !p.derivative(k).evaluate(&m).is_zero() && !p.derivative(k + 1).evaluate(&m).is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Verifies an explicit mixture witness:
/// `deg(P3 - a1 P1(b1 y + g1) - a2 P2(b2 y + g2)) <= 1`.
#[allow(clippy::too_many_arguments)]
pub fn verify_mixture_witness(
    p1: &UPoly,
    p2: &UPoly,
    p3: &UPoly,
    a1: &Rat,
    b1: &Rat,
    g1: &Rat,
    a2: &Rat,
    b2: &Rat,
    g2: &Rat,
) -> Result<bool> {
    if a1.is_zero() || b1.is_zero() || a2.is_zero() || b2.is_zero() {
        return Err(Error::ZeroParameter("mixture scalars must be nonzero"));
    }
    if p1.degree() < Degree::Fin(2) || p2.degree() < Degree::Fin(2) || p3.degree() < Degree::Fin(2)
    {
        return Err(Error::DegreeTooLow("mixture needs degrees >= 2"));
    }
    let t1 = p1.compose_affine(b1, g1).scale(a1);
    let t2 = p2.compose_affine(b2, g2).scale(a2);
    let rest = &(p3 - &t1) - &t2;
    Ok(rest.degree() <= Degree::Fin(1))
}

/// Sufficient independence criterion: every polynomial general and pairwise
/// degree gaps strictly greater than 3.
pub fn independent_by_degree_gap(ps: &[UPoly]) -> bool {
    if ps.iter().any(|p| !general_or_false(p)) {
        return false;
    }
    for (i, p) in ps.iter().enumerate() {
        for q in &ps[i + 1..] {
            let (Some(dp), Some(dq)) = (p.degree().fin(), q.degree().fin()) else {
                return false;
            };
            if dp.abs_diff(dq) <= 3 {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    C1,
    C2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(String),
    Unknown(String),
}

/// Per-color diagnostics backing a condition verdict.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: Condition,
    pub verdict: Verdict,
    /// Colors carried by the axis, in order.
    pub colors: Vec<ColorRep>,
    pub general: Vec<bool>,
    /// First pair of indices carrying the same color, if any.
    pub same_color_pair: Option<(usize, usize)>,
    pub degree_gap_independent: bool,
}

/// Extracts the axis colors of a hyperbolic `f` and checks condition C1
/// (general and distinct) or C2 (general and independent; the independence
/// side uses the degree-gap criterion, so the verdict may be `Unknown`).
pub fn check_condition(f: &Word, which: Condition) -> Result<ConditionReport> {
    if geometric_length(f) < 2 {
        return Err(Error::EllipticInput);
    }
    let (_, core) = cyclic_reduce(f);
    let polys: Vec<UPoly> = core
        .tokens()
        .iter()
        .filter_map(|t| match t {
            Token::E(q) => Some(q.clone()),
            Token::A(_) => None,
        })
        .collect();
    let colors: Vec<ColorRep> = polys
        .iter()
        .map(ColorRep::new)
        .collect::<Result<_>>()?;
    let general: Vec<bool> = polys.iter().map(general_or_false).collect();
    let mut same_pair = None;
    'outer: for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if same_color(&polys[i], &polys[j])? {
                same_pair = Some((i, j));
                break 'outer;
            }
        }
    }
    let gap_ok = independent_by_degree_gap(&polys);
    let verdict = if let Some(k) = general.iter().position(|g| !g) {
        Verdict::Fails(format!("color {k} is not general"))
    } else if let Some((i, j)) = same_pair {
        Verdict::Fails(format!("colors {i} and {j} coincide"))
    } else {
        match which {
            Condition::C1 => Verdict::Holds,
            Condition::C2 => {
                if gap_ok {
                    Verdict::Holds
                } else {
                    Verdict::Unknown(
                        "degree-gap criterion inconclusive; no mixture witness searched"
                            .to_string(),
                    )
                }
            }
        }
    };
    Ok(ConditionReport {
        condition: which,
        verdict,
        colors,
        general,
        same_color_pair: same_pair,
        degree_gap_independent: gap_ok,
    })
}

/// Fraction of `count` seeded-random degree-`d` integer polynomials with
/// coefficients in `[-bound, bound]` that are general.  Deterministic in the
/// seed; the generator is the SplitMix64 of [`crate::rng`].
pub fn sample_genericness(d: usize, count: usize, bound: u32, seed: u64) -> Result<Rat> {
    if d < 5 {
        return Err(Error::DegreeTooLow("genericness sampling needs degree >= 5"));
    }
    assert!(count >= 1);
    let mut rng = Rng::new(seed);
    let mut hits = 0usize;
    for _ in 0..count {
        let p = random_int_poly(&mut rng, d, bound);
        if general_or_false(&p) {
            hits += 1;
        }
    }
    Ok(Rat::new(hits.into(), count.into()))
}

/// Random integer polynomial of exact degree `d`, coefficients in
/// `[-bound, bound]`, leading coefficient nonzero.
pub fn random_int_poly(rng: &mut Rng, d: usize, bound: u32) -> UPoly {
    let b = bound as i64;
    let mut coeffs: Vec<Rat> = (0..d).map(|_| rat(rng.int(-b, b))).collect();
    coeffs.push(rat(rng.nonzero_int(b)));
    UPoly::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::tree::{vertex_of, TreeVertex};

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_ints(cs)
    }

    fn yk(k: usize) -> UPoly {
        UPoly::monomial(rat(1), k)
    }

    #[test]
    fn color_of_simple_path() {
        // id A - id E - e(y^3) A carries the color of y^3
        let path = TreePath {
            vertices: vec![
                TreeVertex::id_a(),
                TreeVertex::id_e(),
                vertex_of(&[Token::E(yk(3))], VertexKind::A),
            ],
        };
        let c = color_of_path(&path).unwrap();
        assert_eq!(c.poly(), &yk(3));
    }

    #[test]
    fn color_is_translation_invariant() {
        // e(P)A - e(P)a(l)E - e(P)a(l)e(Q)A carries color Q
        let p_tok = Token::E(p(&[0, 0, 5, 1]));
        let l_tok = Token::A(rat(2));
        let q = p(&[0, 0, 0, 7]);
        let path = TreePath {
            vertices: vec![
                vertex_of(&[p_tok.clone()], VertexKind::A),
                vertex_of(&[p_tok.clone(), l_tok.clone()], VertexKind::E),
                vertex_of(&[p_tok, l_tok, Token::E(q.clone())], VertexKind::A),
            ],
        };
        let c = color_of_path(&path).unwrap();
        assert!(same_color(c.poly(), &q).unwrap());
    }

    #[test]
    fn degenerate_path_detected() {
        // e1 = e(P), e2 = e(P + a y + b) give the same A-vertex
        let q = p(&[0, 0, 1]);
        let path = TreePath {
            vertices: vec![
                vertex_of(&[Token::E(q.clone())], VertexKind::A),
                TreeVertex::id_e(),
                vertex_of(&[Token::E(q)], VertexKind::A),
            ],
        };
        assert_eq!(color_of_path(&path), Err(Error::DegeneratePath));
    }

    #[test]
    fn same_color_basic() {
        // built in the allowed form: 2 P(y+1) - y + 5 with P = y^3
        let q = &(&p(&[0, -1, 0, 0]) + &p(&[5])) + &yk(3).compose_affine(&rat(1), &rat(1)).scale(&rat(2));
        assert!(same_color(&yk(3), &q).unwrap());
        assert!(!same_color(&yk(3), &yk(4)).unwrap());
        // any two quadratics
        assert!(same_color(&p(&[3, 1, 2]), &p(&[0, 0, -5])).unwrap());
        assert!(same_color(&p(&[0, 0, 1]), &p(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn same_color_ratio_procedure() {
        // y^5 + y^4 vs y^5 + y^3: different shifted supports
        assert!(!same_color(&p(&[0, 0, 0, 0, 1, 1]), &p(&[0, 0, 0, 1, 0, 1])).unwrap());
        // P vs alpha P(beta y + gamma) + delta y + eps for random rationals
        let base = p(&[0, 1, 0, 2, 0, 0, 1]);
        let (alpha, beta, gamma, delta, eps) =
            (ratio(3, 2), ratio(-2, 5), ratio(1, 3), rat(4), ratio(-7, 2));
        let img = {
            let s = base.compose_affine(&beta, &gamma).scale(&alpha);
            &(&s + &UPoly::monomial(delta, 1)) + &UPoly::constant(eps)
        };
        assert!(same_color(&base, &img).unwrap());
        // perturbing a support coefficient breaks it
        let bad = &img + &yk(3);
        // (bad may coincidentally share the color; for this base it does not)
        assert!(!same_color(&base, &bad).unwrap());
    }

    #[test]
    fn same_color_needs_consistent_power() {
        // p = y^4 + y^2 (mean shift is trivial, even gaps): q = y^4 + 2y^2
        // solves q = alpha p(beta y) with beta^2 = 1/2, alpha = 4 -- beta is
        // irrational but t = beta^2 is rationally pinned, so this is a color
        // match over C.
        let a = p(&[0, 0, 1, 0, 1]);
        let b = p(&[0, 0, 2, 0, 1]);
        assert!(same_color(&a, &b).unwrap());
        // support {5,3,2}, mean shift trivial, gaps 2 and 3 with gcd 1:
        // t = beta is pinned by Bezout and must satisfy both ratios
        let c = p(&[0, 0, 1, 1, 0, 1]);
        // consistent image: c(2y) has ratios beta = 2 throughout
        let d = c.compose_affine(&rat(2), &rat(0));
        assert!(same_color(&c, &d).unwrap());
        // inconsistent ratios: beta^2 = 1/2 but beta^3 = 1/3 is impossible
        let e = p(&[0, 0, 3, 2, 0, 1]);
        assert!(!same_color(&c, &e).unwrap());
    }

    #[test]
    fn weakly_general_examples() {
        assert!(!is_weakly_general(&p(&[0, 1, 0, 1]))); // y^3 + y
        assert!(is_weakly_general(&p(&[0, 0, 1, 1]))); // y^3 + y^2
        assert!(!is_weakly_general(&p(&[1, 2, 3]))); // degree 2 never
        assert!(!is_weakly_general(&p(&[4])));
        assert!(!is_weakly_general(&UPoly::zero()));
        assert!(!is_weakly_general(&yk(3)));
        // shifted progression: (y-1)^2 (y^2 ...) style, support k + nZ after shift
        let q = yk(4).shift(&rat(5)); // (y+5)^4: support of shifted-back is {4}
        assert!(!is_weakly_general(&q));
    }

    #[test]
    fn general_examples() {
        assert!(is_general(&p(&[0, 0, 0, 0, 1, 1])).unwrap()); // y^5 + y^4
        assert!(!is_general(&yk(5)).unwrap());
        assert!(is_general(&yk(5).shift(&rat(2))).is_ok());
        assert!(is_general(&p(&[0, 0, 1, 0])).is_err()); // degree too low
        // p_{d-1} = 0, p_{d-2} p_{d-3} != 0 is general
        let q = &(&yk(7) + &yk(5)) + &yk(4);
        assert!(is_general(&q).unwrap());
        // p_{d-1} != 0 and p_{d-2} = p_{d-3} = 0 is general
        let r = &(&yk(9) + &yk(8)) + &yk(2);
        assert!(is_general(&r).unwrap());
    }

    #[test]
    fn mean_criterion_examples() {
        assert!(mean_general_criterion(&p(&[0, 0, 1, 1])).unwrap()); // y^3 + y^2
        assert!(!mean_general_criterion(&yk(3)).unwrap());
        assert!(mean_general_criterion(&p(&[1, 2])).is_err());
    }

    #[test]
    fn mean_criterion_sound_for_weak_generality() {
        let mut rng = Rng::new(9);
        let mut checked = 0;
        for _ in 0..200 {
            let d = rng.int(3, 9) as usize;
            let q = random_int_poly(&mut rng, d, 10);
            if mean_general_criterion(&q).unwrap() {
                assert!(is_weakly_general(&q), "criterion unsound on {q:?}");
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn mixture_witness_examples() {
        let p1 = yk(3);
        let p2 = &yk(4) + &yk(2);
        // P3 = P1 + P2
        let p3 = &p1 + &p2;
        assert!(verify_mixture_witness(
            &p1, &p2, &p3,
            &rat(1), &rat(1), &rat(0),
            &rat(1), &rat(1), &rat(0)
        )
        .unwrap());
        // P3 = P1(2y) + 3 P2(y-1) + 7y
        let p3 = &(&p1.compose_affine(&rat(2), &rat(0)) + &p2.compose_affine(&rat(1), &rat(-1)).scale(&rat(3)))
            + &UPoly::monomial(rat(7), 1);
        assert!(verify_mixture_witness(
            &p1, &p2, &p3,
            &rat(1), &rat(2), &rat(0),
            &rat(3), &rat(1), &rat(-1)
        )
        .unwrap());
        // unrelated P3
        assert!(!verify_mixture_witness(
            &p1, &p2, &yk(6),
            &rat(1), &rat(1), &rat(0),
            &rat(1), &rat(1), &rat(0)
        )
        .unwrap());
        assert!(verify_mixture_witness(
            &p1, &p2, &yk(6),
            &rat(0), &rat(1), &rat(0),
            &rat(1), &rat(1), &rat(0)
        )
        .is_err());
    }

    #[test]
    fn degree_gap_examples() {
        let fam: Vec<UPoly> = [5usize, 9, 13]
            .iter()
            .map(|&d| &yk(d) + &yk(d - 1))
            .collect();
        assert!(independent_by_degree_gap(&fam));
        let close: Vec<UPoly> = [5usize, 7].iter().map(|&d| &yk(d) + &yk(d - 1)).collect();
        assert!(!independent_by_degree_gap(&close));
        assert!(!independent_by_degree_gap(&[yk(5)]));
    }

    #[test]
    fn condition_reports() {
        // l = 2 with general distinct colors: C1 holds
        let f = Word::a_gen(rat(0))
            .mul(&Word::e_gen(&yk(5) + &yk(4)))
            .mul(&Word::a_gen(rat(1)))
            .mul(&Word::e_gen(&yk(9) + &yk(8)));
        let rep = check_condition(&f, Condition::C1).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);
        // same f under C2: gap is 4 > 3, holds
        let rep = check_condition(&f, Condition::C2).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);

        // repeated colors fail C1
        let g = Word::a_gen(rat(0))
            .mul(&Word::e_gen(&yk(5) + &yk(4)))
            .mul(&Word::a_gen(rat(1)))
            .mul(&Word::e_gen(&yk(5) + &yk(4)));
        let rep = check_condition(&g, Condition::C1).unwrap();
        assert!(matches!(rep.verdict, Verdict::Fails(_)));
        assert_eq!(rep.same_color_pair, Some((0, 1)));

        // general, distinct, but gap <= 3: C2 unknown
        let h = Word::a_gen(rat(0))
            .mul(&Word::e_gen(&yk(5) + &yk(4)))
            .mul(&Word::a_gen(rat(1)))
            .mul(&Word::e_gen(&yk(7) + &yk(6)));
        let rep = check_condition(&h, Condition::C2).unwrap();
        assert!(matches!(rep.verdict, Verdict::Unknown(_)));

        // elliptic input refused
        assert!(matches!(
            check_condition(&Word::e_gen(yk(2)), Condition::C1),
            Err(Error::EllipticInput)
        ));
    }

    #[test]
    fn condition_invariant_under_conjugation() {
        let f = Word::a_gen(rat(0))
            .mul(&Word::e_gen(&yk(5) + &yk(4)))
            .mul(&Word::a_gen(rat(1)))
            .mul(&Word::e_gen(&yk(9) + &yk(8)));
        let psi = Word::e_gen(yk(3)).mul(&Word::a_gen(rat(2)));
        let g = psi.mul(&f).mul(&psi.inverse());
        let rf = check_condition(&f, Condition::C2).unwrap();
        let rg = check_condition(&g, Condition::C2).unwrap();
        assert_eq!(rf.verdict, rg.verdict);
    }

    #[test]
    fn sampling_is_deterministic() {
        let r1 = sample_genericness(5, 40, 20, 123).unwrap();
        let r2 = sample_genericness(5, 40, 20, 123).unwrap();
        assert_eq!(r1, r2);
        let single = sample_genericness(5, 1, 20, 7).unwrap();
        assert!(single.is_zero() || single == rat(1));
        assert!(sample_genericness(4, 10, 5, 1).is_err());
    }
}
