//! Labeled combinatorial diagrams in the Lyndon-Schupp sense.
//!
//! A diagram is stored as a rotation system: every vertex carries the cyclic
//! counterclockwise order of its outgoing darts (half-segments), darts come
//! in involutive pairs, and faces are derived as orbits of
//! `d -> rotation_next(head(d), inv(d))` -- the face to the left of each
//! dart.  On the plane the outer face is marked by one of its darts; regions
//! are all other faces.
//!
//! Darts join a primary to a secondary vertex and carry automorphism labels
//! with `phi(inv d) = phi(d)^{-1}`; all labels meeting at a secondary vertex
//! lie in a common factor.

mod build;
mod io;
mod moves;

pub use build::{build_initial_diagram, from_faces, run_identifications, FaceSpec};
pub use io::{diagram_from_string, diagram_to_string};

use crate::algebra::{rat, ratio, Rat};
use crate::auto::Word;
use crate::error::Error;
use crate::Result;
use num_traits::Zero;

pub type DartId = usize;
pub type VertId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VKind {
    Primary,
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    Sphere,
    Plane,
}

#[derive(Debug, Clone)]
pub(crate) struct VertData {
    pub kind: VKind,
    pub rotation: Vec<DartId>,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct DartData {
    pub from: VertId,
    pub to: VertId,
    pub inv: DartId,
    pub label: Word,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    pub(crate) verts: Vec<VertData>,
    pub(crate) darts: Vec<DartData>,
    pub surface: Surface,
    /// A dart on the outer face (plane diagrams).
    pub outer: Option<DartId>,
    /// Set when the final identification left one boundary segment with an
    /// amalgam label (the allowed exception of the construction).
    pub amalgam_boundary_exception: bool,
}

impl Diagram {
    pub fn new(surface: Surface) -> Diagram {
        Diagram {
            verts: Vec::new(),
            darts: Vec::new(),
            surface,
            outer: None,
            amalgam_boundary_exception: false,
        }
    }

    pub fn add_vertex(&mut self, kind: VKind) -> VertId {
        self.verts.push(VertData {
            kind,
            rotation: Vec::new(),
            alive: true,
        });
        self.verts.len() - 1
    }

    /// Adds an involutive dart pair `u -> v` labeled `label` (and `v -> u`
    /// labeled by the inverse), appending to both rotations.
    pub fn add_dart_pair(&mut self, u: VertId, v: VertId, label: Word) -> (DartId, DartId) {
        debug_assert_ne!(self.verts[u].kind, self.verts[v].kind);
        let d = self.darts.len();
        let dinv = d + 1;
        self.darts.push(DartData {
            from: u,
            to: v,
            inv: dinv,
            label: label.clone(),
            alive: true,
        });
        self.darts.push(DartData {
            from: v,
            to: u,
            inv: d,
            label: label.inverse(),
            alive: true,
        });
        self.verts[u].rotation.push(d);
        self.verts[v].rotation.push(dinv);
        (d, dinv)
    }

    pub fn set_rotation(&mut self, v: VertId, rotation: Vec<DartId>) {
        self.verts[v].rotation = rotation;
    }

    pub fn vertex_kind(&self, v: VertId) -> VKind {
        self.verts[v].kind
    }

    pub fn dart_from(&self, d: DartId) -> VertId {
        self.darts[d].from
    }

    pub fn dart_to(&self, d: DartId) -> VertId {
        self.darts[d].to
    }

    pub fn dart_inv(&self, d: DartId) -> DartId {
        self.darts[d].inv
    }

    pub fn label(&self, d: DartId) -> &Word {
        &self.darts[d].label
    }

    pub(crate) fn set_label(&mut self, d: DartId, label: Word) {
        let inv = self.darts[d].inv;
        self.darts[inv].label = label.inverse();
        self.darts[d].label = label;
    }

    /// Left-multiplies the labels of every dart leaving `v` by `by`
    /// (equivalently right-multiplies arriving labels by `by^{-1}`),
    /// skipping the darts in `except`.
    pub(crate) fn shift_labels_at(&mut self, v: VertId, by: &Word, except: &[DartId]) {
        let rotation = self.verts[v].rotation.clone();
        for d in rotation {
            if except.contains(&d) || !self.darts[d].alive {
                continue;
            }
            let new = by.mul(&self.darts[d].label);
            self.set_label(d, new);
        }
    }

    pub fn alive_darts(&self) -> impl Iterator<Item = DartId> + '_ {
        (0..self.darts.len()).filter(|&d| self.darts[d].alive)
    }

    pub fn alive_verts(&self) -> impl Iterator<Item = VertId> + '_ {
        (0..self.verts.len()).filter(|&v| self.verts[v].alive)
    }

    /// Valence: number of oriented edges leaving the vertex.
    pub fn valence(&self, v: VertId) -> usize {
        self.verts[v].rotation.len()
    }

    fn rotation_next(&self, v: VertId, d: DartId) -> DartId {
        let rot = &self.verts[v].rotation;
        let i = rot
            .iter()
            .position(|&x| x == d)
            .expect("dart missing from rotation");
        rot[(i + 1) % rot.len()]
    }

    /// The dart following `d` along the face on its left.
    pub fn next_in_face(&self, d: DartId) -> DartId {
        self.rotation_next(self.darts[d].to, self.darts[d].inv)
    }

    /// The face orbit containing `d`.
    pub fn face_of(&self, d: DartId) -> Vec<DartId> {
        let mut cycle = vec![d];
        let mut cur = self.next_in_face(d);
        while cur != d {
            cycle.push(cur);
            cur = self.next_in_face(cur);
        }
        cycle
    }

    /// All face orbits.
    pub fn faces(&self) -> Vec<Vec<DartId>> {
        let mut seen = vec![false; self.darts.len()];
        let mut out = Vec::new();
        for d in self.alive_darts() {
            if seen[d] {
                continue;
            }
            let cycle = self.face_of(d);
            for &x in &cycle {
                seen[x] = true;
            }
            out.push(cycle);
        }
        out
    }

    /// The outer face cycle (plane diagrams).
    pub fn outer_face(&self) -> Result<Vec<DartId>> {
        let d = self
            .outer
            .filter(|&d| self.darts[d].alive)
            .ok_or_else(|| Error::InvalidDiagram("no outer face marked".to_string()))?;
        Ok(self.face_of(d))
    }

    /// Bounded faces: everything except the outer face on the plane, every
    /// face on the sphere.
    pub fn regions(&self) -> Result<Vec<Vec<DartId>>> {
        let faces = self.faces();
        match self.surface {
            Surface::Sphere => Ok(faces),
            Surface::Plane => {
                let outer = self.outer_face()?;
                Ok(faces.into_iter().filter(|f| !f.contains(&outer[0])).collect())
            }
        }
    }

    /// Curvature `delta(D) = 2 - d(D) + sum_v 2/d(v)` of a face given by its
    /// dart cycle; corners count with multiplicity.
    pub fn face_curvature(&self, face: &[DartId]) -> Rat {
        let mut sum = rat(2) - rat(face.len() as i64);
        for &d in face {
            let v = self.darts[d].to;
            sum += ratio(2, self.valence(v) as i64);
        }
        sum
    }

    /// Matches `face_curvature` on the dart cycle of a stored region.
    pub fn region_curvature(&self, region_dart: DartId) -> Rat {
        self.face_curvature(&self.face_of(region_dart))
    }

    /// Sphere: passes iff the total curvature is exactly 4.  Plane: passes
    /// iff the sum over the regions is at least 2.
    pub fn total_curvature_check(&self) -> Result<(Rat, bool)> {
        let sum: Rat = self
            .regions()?
            .iter()
            .map(|f| self.face_curvature(f))
            .fold(Rat::zero(), |a, b| a + b);
        let pass = match self.surface {
            Surface::Sphere => sum == rat(4),
            Surface::Plane => sum >= rat(2),
        };
        Ok((sum, pass))
    }

    /// Product of the labels along the boundary cycle of the face of
    /// `region_dart`, starting at `start`.
    pub fn boundary_label(&self, region_dart: DartId, start: VertId) -> Result<Word> {
        let face = self.face_of(region_dart);
        let pos = face
            .iter()
            .position(|&d| self.darts[d].from == start)
            .ok_or(Error::StartNotOnBoundary)?;
        let mut acc = Word::identity();
        for i in 0..face.len() {
            let d = face[(pos + i) % face.len()];
            acc = acc.mul(&self.darts[d].label);
        }
        Ok(acc)
    }

    /// Number of alive half-segments.
    pub fn edge_count(&self) -> usize {
        self.alive_darts().count() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.alive_verts().count()
    }

    /// Boundary length of the diagram in segment units (a half-segment
    /// counts 1/2).
    pub fn boundary_length(&self) -> Result<Rat> {
        Ok(ratio(self.outer_face()?.len() as i64, 2))
    }

    fn connected(&self) -> bool {
        let Some(start) = self.alive_verts().next() else {
            return true;
        };
        let mut seen = vec![false; self.verts.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &d in &self.verts[v].rotation {
                let w = self.darts[d].to;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        self.alive_verts().all(|v| seen[v])
    }

    /// Structural validation: involution, bipartite darts, label coherence,
    /// rotation consistency and the Euler count of the surface.
    pub fn validate(&self) -> Result<()> {
        for d in self.alive_darts() {
            let dd = &self.darts[d];
            let inv = &self.darts[dd.inv];
            if !inv.alive || inv.inv != d || inv.from != dd.to || inv.to != dd.from {
                return Err(Error::InvalidDiagram(format!("broken involution at dart {d}")));
            }
            if inv.label != dd.label.inverse() {
                return Err(Error::InvalidDiagram(format!(
                    "label of dart {d} is not inverted on the inverse dart"
                )));
            }
            if self.verts[dd.from].kind == self.verts[dd.to].kind {
                return Err(Error::InvalidDiagram(format!(
                    "dart {d} joins two vertices of the same type"
                )));
            }
        }
        for v in self.alive_verts() {
            let vd = &self.verts[v];
            for &d in &vd.rotation {
                if !self.darts[d].alive || self.darts[d].from != v {
                    return Err(Error::InvalidDiagram(format!(
                        "rotation of vertex {v} lists a foreign dart"
                    )));
                }
            }
            let mut listed: Vec<DartId> = vd.rotation.clone();
            listed.sort_unstable();
            let mut incident: Vec<DartId> = self
                .alive_darts()
                .filter(|&d| self.darts[d].from == v)
                .collect();
            incident.sort_unstable();
            if listed != incident {
                return Err(Error::InvalidDiagram(format!(
                    "rotation of vertex {v} is not a permutation of its darts"
                )));
            }
            if vd.kind == VKind::Secondary {
                let mut aff = true;
                let mut ele = true;
                for &d in &vd.rotation {
                    let (a, e) = self.darts[d].label.factor_membership();
                    aff &= a;
                    ele &= e;
                }
                if !(aff || ele) {
                    return Err(Error::InvalidDiagram(format!(
                        "labels at secondary vertex {v} do not share a factor"
                    )));
                }
            }
        }
        if !self.connected() {
            return Err(Error::InvalidDiagram("diagram is disconnected".to_string()));
        }
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces().len() as i64;
        if v - e + f != 2 {
            return Err(Error::InvalidDiagram(format!(
                "Euler count V-E+F = {} != 2",
                v - e + f
            )));
        }
        if self.surface == Surface::Plane {
            self.outer_face()?;
        }
        Ok(())
    }

    /// Conjugator chain of the recomposition: removes boundary-adjacent
    /// regions one at a time, recording `u_i` and the region label `b_i`
    /// used, and verifies the product identity
    /// `phi(alpha) = prod u_i b_i u_i^{-1}` exactly.
    pub fn recompose_check(&self) -> Result<bool> {
        self.validate().map_err(|_| Error::NotSimplyConnected)?;
        if self.surface != Surface::Plane {
            return Err(Error::NotSimplyConnected);
        }
        let mut work = self.clone();
        let outer0 = work.outer_face()?;
        let base = work.darts[outer0[0]].from;
        let alpha = work.cycle_label_from(&outer0, base)?;
        let mut product = Word::identity();
        loop {
            let outer = work.outer_face()?;
            let outer_set: std::collections::HashSet<DartId> = outer.iter().copied().collect();
            // find a boundary dart whose other side is a region
            let mut found = None;
            let cycle = rotate_to_vertex(&work, &outer, base)?;
            let mut prefix = Word::identity();
            for &d in &cycle {
                let other = work.darts[d].inv;
                if !outer_set.contains(&other) {
                    found = Some((d, prefix.clone()));
                    break;
                }
                prefix = prefix.mul(&work.darts[d].label);
            }
            let Some((d, prefix)) = found else {
                // no regions left: the remaining tree telescopes to id
                let rest = work.cycle_label_from(&work.outer_face()?, base)?;
                return Ok(product.mul(&rest) == alpha && rest.is_identity());
            };
            let region_cycle = work.face_of(work.darts[d].inv);
            let b: Word = region_cycle
                .iter()
                .fold(Word::identity(), |acc, &x| acc.mul(&work.darts[x].label));
            let u = prefix.mul(&work.darts[d].label);
            product = product.mul(&u).mul(&b.inverse()).mul(&u.inverse());
            // the merged face keeps every other dart of both old faces
            let dinv = work.darts[d].inv;
            let new_outer = cycle
                .iter()
                .copied()
                .chain(region_cycle.iter().copied())
                .find(|&x| x != d && x != dinv)
                .expect("faces cannot both be single darts");
            work.remove_dart_pair(d);
            work.outer = Some(new_outer);
        }
    }

    fn cycle_label_from(&self, cycle: &[DartId], base: VertId) -> Result<Word> {
        let rotated = rotate_to_vertex(self, cycle, base)?;
        Ok(rotated
            .iter()
            .fold(Word::identity(), |acc, &d| acc.mul(&self.darts[d].label)))
    }

    pub(crate) fn remove_dart_pair(&mut self, d: DartId) {
        let inv = self.darts[d].inv;
        for x in [d, inv] {
            let from = self.darts[x].from;
            self.verts[from].rotation.retain(|&y| y != x);
            self.darts[x].alive = false;
        }
        if self.outer == Some(d) || self.outer == Some(inv) {
            self.outer = None;
        }
    }

    /// Dictionary-lemma data for two adjacent regions: boundary labels read
    /// from a primary vertex at the start of the shared path, plus the
    /// length of the shared boundary (half-segments count 1/2).
    pub fn adjacency_to_geodesics(
        &self,
        r1: DartId,
        r2: DartId,
    ) -> Result<(Word, Word, Rat)> {
        let f1 = self.face_of(r1);
        let f2 = self.face_of(r2);
        let in_f2: std::collections::HashSet<DartId> = f2.iter().copied().collect();
        let shared: Vec<bool> = f1.iter().map(|&d| in_f2.contains(&self.darts[d].inv)).collect();
        let count = shared.iter().filter(|&&s| s).count();
        if count == 0 {
            return Err(Error::NotAdjacent);
        }
        let shared_len = ratio(count as i64, 2);
        // longest run of shared darts in f1's cyclic order
        let n = f1.len();
        let mut best: Option<(usize, usize)> = None; // (start, len)
        if count == n {
            best = Some((0, n));
        } else {
            let mut i = 0;
            while i < n {
                if shared[i] && !shared[(i + n - 1) % n] {
                    let mut len = 0;
                    while shared[(i + len) % n] {
                        len += 1;
                    }
                    if best.is_none_or(|(_, l)| len > l) {
                        best = Some((i, len));
                    }
                    i += len.max(1);
                } else {
                    i += 1;
                }
            }
        }
        let (start, len) = best.unwrap();
        // first primary vertex along the run
        let mut v = self.darts[f1[start]].from;
        if self.verts[v].kind != VKind::Primary {
            v = self.darts[f1[(start + 1) % n]].from;
            debug_assert!(len >= 1);
        }
        if self.verts[v].kind != VKind::Primary {
            return Err(Error::InvalidDiagram(
                "shared boundary contains no primary vertex".to_string(),
            ));
        }
        let g1 = self.boundary_label(r1, v)?;
        let g2 = self.boundary_label(r2, v)?;
        Ok((g1, g2, shared_len))
    }
}

fn rotate_to_vertex(diag: &Diagram, cycle: &[DartId], base: VertId) -> Result<Vec<DartId>> {
    let pos = cycle
        .iter()
        .position(|&d| diag.darts[d].from == base)
        .ok_or(Error::StartNotOnBoundary)?;
    Ok(cycle.iter().cycle().skip(pos).take(cycle.len()).copied().collect())
}

/// The pairwise small-cancellation inequality
/// `|r1 r2| > |r1| + |r2| - 2 lambda min(|r1|, |r2|) + 1`.
pub fn pair_cancellation_check(r1: &Word, r2: &Word, lambda: &Rat) -> Result<bool> {
    if lambda <= &Rat::zero() || lambda >= &rat(1) {
        return Err(Error::ZeroParameter("lambda must lie in (0, 1)"));
    }
    let prod = r1.mul(r2);
    if prod.is_identity() {
        return Err(Error::TrivialProduct);
    }
    let l1 = rat(r1.algebraic_length() as i64);
    let l2 = rat(r2.algebraic_length() as i64);
    let lp = rat(prod.algebraic_length() as i64);
    let min = if l1 <= l2 { l1.clone() } else { l2.clone() };
    Ok(lp > l1 + l2 - rat(2) * lambda * min + rat(1))
}

#[cfg(test)]
mod tests;
