//! Diagram constructors: polyhedral diagrams from face lists, the initial
//! diagram of a product of conjugates, and the identification driver.

use super::{Diagram, DartId, Surface, VKind, VertId};
use crate::auto::Word;
use crate::error::Error;
use crate::tree::cyclic_reduce;
use crate::Result;
use std::collections::HashMap;

/// Face specification for [`from_faces`]: cyclic vertex lists, each directed
/// edge traversed by exactly one face.
#[derive(Debug, Clone)]
pub struct FaceSpec {
    pub faces: Vec<Vec<usize>>,
    /// Index of the outer face for plane diagrams.
    pub outer: Option<usize>,
}

impl Diagram {
    /// Derives every rotation from a complete set of face cycles (each alive
    /// dart in exactly one cycle).  Fails if some vertex does not get a
    /// single rotation cycle.
    pub fn set_rotations_from_faces(&mut self, faces: &[Vec<DartId>]) -> Result<()> {
        let mut sigma: HashMap<DartId, DartId> = HashMap::new();
        let mut covered = vec![false; self.darts.len()];
        for cycle in faces {
            for (i, &d) in cycle.iter().enumerate() {
                if covered[d] {
                    return Err(Error::InvalidDiagram(format!(
                        "dart {d} appears in two faces"
                    )));
                }
                covered[d] = true;
                let next = cycle[(i + 1) % cycle.len()];
                if self.darts[d].to != self.darts[next].from {
                    return Err(Error::InvalidDiagram(format!(
                        "face cycle breaks between darts {d} and {next}"
                    )));
                }
                sigma.insert(self.darts[d].inv, next);
            }
        }
        for d in self.alive_darts() {
            if !covered[d] {
                return Err(Error::InvalidDiagram(format!("dart {d} not in any face")));
            }
        }
        let vert_ids: Vec<VertId> = self.alive_verts().collect();
        for v in vert_ids {
            let out: Vec<DartId> = self
                .alive_darts()
                .filter(|&d| self.darts[d].from == v)
                .collect();
            if out.is_empty() {
                return Err(Error::InvalidDiagram(format!("isolated vertex {v}")));
            }
            let mut rotation = vec![out[0]];
            loop {
                let &next = sigma.get(rotation.last().unwrap()).ok_or_else(|| {
                    Error::InvalidDiagram("face cycles do not determine rotations".to_string())
                })?;
                if next == rotation[0] {
                    break;
                }
                rotation.push(next);
                if rotation.len() > out.len() {
                    return Err(Error::InvalidDiagram(format!(
                        "rotation at vertex {v} is not a single cycle"
                    )));
                }
            }
            if rotation.len() != out.len() {
                return Err(Error::InvalidDiagram(format!(
                    "rotation at vertex {v} splits into several cycles"
                )));
            }
            self.verts[v].rotation = rotation;
        }
        Ok(())
    }
}

/// Builds a diagram from a polyhedral face list: vertices are primary, every
/// edge is subdivided by a secondary vertex, and labels are attached to
/// directed vertex pairs (`id` by default).
pub fn from_faces(
    n_vertices: usize,
    spec: &FaceSpec,
    labels: &[((usize, usize), Word)],
    surface: Surface,
) -> Result<Diagram> {
    let mut diag = Diagram::new(surface);
    for _ in 0..n_vertices {
        diag.add_vertex(VKind::Primary);
    }
    let label_of = |u: usize, v: usize| -> Word {
        for ((a, b), w) in labels {
            if (*a, *b) == (u, v) {
                return w.clone();
            }
            if (*a, *b) == (v, u) {
                return w.inverse();
            }
        }
        Word::identity()
    };
    // subdivide each undirected edge once
    let mut halves: HashMap<(usize, usize), (DartId, DartId)> = HashMap::new();
    for face in &spec.faces {
        for i in 0..face.len() {
            let (u, v) = (face[i], face[(i + 1) % face.len()]);
            let key = (u.min(v), u.max(v));
            if halves.contains_key(&key) {
                continue;
            }
            let s = diag.add_vertex(VKind::Secondary);
            let lab = label_of(key.0, key.1);
            let (d1, _) = diag.add_dart_pair(key.0, s, lab);
            let (d2, _) = diag.add_dart_pair(s, key.1, Word::identity());
            halves.insert(key, (d1, d2));
        }
    }
    // expand vertex faces into dart cycles
    let mut dart_faces: Vec<Vec<DartId>> = Vec::new();
    for face in &spec.faces {
        let mut cycle = Vec::new();
        for i in 0..face.len() {
            let (u, v) = (face[i], face[(i + 1) % face.len()]);
            let key = (u.min(v), u.max(v));
            let &(d1, d2) = halves.get(&key).unwrap();
            if u <= v && u != v {
                cycle.push(d1);
                cycle.push(d2);
            } else {
                cycle.push(diag.darts[d2].inv);
                cycle.push(diag.darts[d1].inv);
            }
        }
        dart_faces.push(cycle);
    }
    diag.set_rotations_from_faces(&dart_faces)?;
    if surface == Surface::Plane {
        let outer = spec.outer.ok_or_else(|| {
            Error::InvalidDiagram("plane diagram needs an outer face".to_string())
        })?;
        diag.outer = Some(dart_faces[outer][0]);
    }
    diag.validate()?;
    Ok(diag)
}

/// The letters of a normal form: one factor element per token, with the
/// amalgam tail folded into the last letter.
fn letters(w: &Word) -> Vec<Word> {
    let mut out: Vec<Word> = w
        .tokens()
        .iter()
        .map(|t| Word::from_token(t.clone()))
        .collect();
    if let Some(last) = out.last_mut() {
        last.mul_tail(w.tail());
    } else {
        out.push(Word::from_tail(w.tail().clone()));
    }
    out
}

/// Weak cyclic reduction: peels cancelling conjugation pairs until the wrap
/// product leaves the amalgam (or the ends are in different factors).
pub fn weakly_cyclic_reduce(w: &Word) -> (Word, Word) {
    let mut psi = Word::identity();
    let mut r = w.clone();
    loop {
        let toks = r.tokens();
        let n = toks.len();
        if n < 2 || toks[0].factor() != toks[n - 1].factor() {
            break;
        }
        // wrap product: last letter (with tail) times first letter
        let mut wrap = Word::from_token(toks[n - 1].clone());
        wrap.mul_tail(r.tail());
        wrap.mul_token(&toks[0]);
        if !wrap.in_amalgam() {
            break;
        }
        let t = Word::from_token(toks[0].clone());
        psi = psi.mul(&t);
        r = t.inverse().mul(&r).mul(&t);
    }
    debug_assert_eq!(psi.mul(&r).mul(&psi.inverse()), *w);
    (psi, r)
}

struct SubDiagram {
    region: Vec<DartId>,
    outer_run: Vec<DartId>,
    /// The two darts of the sub-diagram meeting the base point: the first
    /// dart of the outer run and the last (an in-dart at the base).
    entry: DartId,
}

/// Initial diagram of `prod_i psi_i f^{eps_i} psi_i^{-1}` (Steps 1 and 2 of
/// the construction): one loop per conjugate arranged around a base point.
/// Region boundary labels are the weakly cyclically reduced conjugates.
pub fn build_initial_diagram(f: &Word, conjugates: &[(Word, i64)]) -> Result<Diagram> {
    let (_, core) = cyclic_reduce(f);
    if core.tokens().len() < 2 {
        return Err(Error::PreconditionViolated(
            "the element must be hyperbolic to have a symmetrized set".to_string(),
        ));
    }
    let mut diag = Diagram::new(Surface::Plane);
    let base = diag.add_vertex(VKind::Primary);
    let mut subs: Vec<SubDiagram> = Vec::new();
    for (psi, eps) in conjugates {
        let target = if *eps >= 0 { core.clone() } else { core.inverse() };
        let w = psi.mul(&target).mul(&psi.inverse());
        let (conj, r) = weakly_cyclic_reduce(&w);
        let r_letters = letters(&r);
        let m = r_letters.len();
        if m < 2 {
            return Err(Error::PreconditionViolated(
                "conjugate reduced into the amalgam".to_string(),
            ));
        }
        let strict = {
            let toks = r.tokens();
            toks[0].factor() != toks[toks.len() - 1].factor()
        };
        let sub = if strict {
            build_loop_sub(&mut diag, base, &letters(&conj), &r_letters)
        } else {
            build_odd_loop_sub(&mut diag, base, &letters(&conj), &r_letters)
        };
        subs.push(sub);
    }
    // outer face: weave the sub-diagrams around the base point in order
    let mut outer: Vec<DartId> = Vec::new();
    for sub in &subs {
        outer.extend_from_slice(&sub.outer_run);
    }
    let mut faces: Vec<Vec<DartId>> = subs.iter().map(|s| s.region.clone()).collect();
    faces.push(outer.clone());
    diag.set_rotations_from_faces(&faces)?;
    diag.outer = Some(subs[0].entry);
    diag.validate()?;
    Ok(diag)
}

/// Loop of `m` segments at `base`, preceded by a path spelling `conj` when
/// the conjugator is nontrivial.
fn build_loop_sub(
    diag: &mut Diagram,
    base: VertId,
    conj: &[Word],
    xs: &[Word],
) -> SubDiagram {
    let trivial_conj = conj.len() == 1 && conj[0].is_identity();
    // path base -> anchor
    let mut path: Vec<DartId> = Vec::new();
    let mut anchor = base;
    if !trivial_conj {
        for z in conj {
            let s = diag.add_vertex(VKind::Secondary);
            let p = diag.add_vertex(VKind::Primary);
            let (c, _) = diag.add_dart_pair(anchor, s, z.clone());
            let (d, _) = diag.add_dart_pair(s, p, Word::identity());
            path.push(c);
            path.push(d);
            anchor = p;
        }
    }
    // loop at the anchor
    let m = xs.len();
    let mut region: Vec<DartId> = Vec::new();
    let mut cur = anchor;
    for (j, x) in xs.iter().enumerate() {
        let s = diag.add_vertex(VKind::Secondary);
        let next = if j + 1 == m {
            anchor
        } else {
            diag.add_vertex(VKind::Primary)
        };
        let (a, _) = diag.add_dart_pair(cur, s, x.clone());
        let (b, _) = diag.add_dart_pair(s, next, Word::identity());
        region.push(a);
        region.push(b);
        cur = next;
    }
    // outer run: out the path, clockwise around the loop, back
    let mut outer_run: Vec<DartId> = path.clone();
    for &d in region.iter().rev() {
        outer_run.push(diag.darts[d].inv);
    }
    for &d in path.iter().rev() {
        outer_run.push(diag.darts[d].inv);
    }
    SubDiagram {
        region,
        outer_run: outer_run.clone(),
        entry: outer_run[0],
    }
}

/// Non-strict case: path to a secondary vertex `v` via a final id-labeled
/// half-segment, then a loop of `2m-2` half-segments at `v` whose wrap
/// letters sit on the darts at `v`.
fn build_odd_loop_sub(
    diag: &mut Diagram,
    base: VertId,
    conj: &[Word],
    xs: &[Word],
) -> SubDiagram {
    let m = xs.len();
    debug_assert!(m >= 3);
    let trivial_conj = conj.len() == 1 && conj[0].is_identity();
    let mut path: Vec<DartId> = Vec::new();
    let mut cur = base;
    if !trivial_conj {
        for z in conj {
            let s = diag.add_vertex(VKind::Secondary);
            let p = diag.add_vertex(VKind::Primary);
            let (c, _) = diag.add_dart_pair(cur, s, z.clone());
            let (d, _) = diag.add_dart_pair(s, p, Word::identity());
            path.push(c);
            path.push(d);
            cur = p;
        }
    }
    let v = diag.add_vertex(VKind::Secondary);
    let (e, _) = diag.add_dart_pair(cur, v, Word::identity());
    path.push(e);
    // loop at v: dart b with x_1, segments x_2..x_{m-1}, dart c with x_m
    let mut region: Vec<DartId> = Vec::new();
    let first_p = diag.add_vertex(VKind::Primary);
    let (b, _) = diag.add_dart_pair(v, first_p, xs[0].clone());
    region.push(b);
    let mut p = first_p;
    for x in &xs[1..m - 1] {
        let s = diag.add_vertex(VKind::Secondary);
        let np = diag.add_vertex(VKind::Primary);
        let (g, _) = diag.add_dart_pair(p, s, x.clone());
        let (h, _) = diag.add_dart_pair(s, np, Word::identity());
        region.push(g);
        region.push(h);
        p = np;
    }
    let (c, _) = diag.add_dart_pair(p, v, xs[m - 1].clone());
    region.push(c);
    // outer: out the path (ending with e), around the loop clockwise, back
    let mut outer_run: Vec<DartId> = path.clone();
    for &d in region.iter().rev() {
        outer_run.push(diag.darts[d].inv);
    }
    for &d in path.iter().rev() {
        outer_run.push(diag.darts[d].inv);
    }
    SubDiagram {
        region,
        outer_run: outer_run.clone(),
        entry: outer_run[0],
    }
}

/// Step 3/4 driver: repeatedly identifies adjacent same-factor boundary
/// segments until the boundary length is at most 1, enforcing the
/// construction's guards (an inapplicable state is an error, never a silent
/// skip).
pub fn run_identifications(diag: &mut Diagram) -> Result<()> {
    loop {
        let segments = diag.boundary_segments()?;
        if segments.len() <= 1 {
            return Ok(());
        }
        let n = segments.len();
        let mut applied = false;
        for i in 0..n {
            let s1 = &segments[i];
            let s2 = &segments[(i + 1) % n];
            let (a1, e1) = diag.segment_label(s1).factor_membership();
            let (a2, e2) = diag.segment_label(s2).factor_membership();
            if !((a1 && a2) || (e1 && e2)) {
                continue;
            }
            let prod = diag.segment_label(s1).mul(&diag.segment_label(s2));
            let args = (s1.first, s1.second, s2.first, s2.second);
            let res = if !prod.in_amalgam() {
                diag.identify_case1(args.0, args.1, args.2, args.3)
            } else {
                match diag.identify_case2(args.0, args.1, args.2, args.3) {
                    Err(Error::VerticesCoincide) if n <= 2 => {
                        diag.identify_final(args.0, args.1, args.2, args.3)
                    }
                    other => other,
                }
            };
            match res {
                Ok(()) => {
                    applied = true;
                    break;
                }
                Err(Error::VerticesCoincide) => continue,
                Err(e) => return Err(e),
            }
        }
        if !applied {
            if segments.len() <= 2 {
                return Ok(());
            }
            return Err(Error::PreconditionViolated(
                "no identification applies; the expression is not minimal".to_string(),
            ));
        }
    }
}
