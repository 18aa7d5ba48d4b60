//! The identification moves of the diagram construction.
//!
//! Both moves act on two consecutive segments `e e'` and `f f'` of the outer
//! boundary whose labels lie in a common factor.  Case 1 applies when the
//! product is outside the amalgam and folds one half-segment (boundary drops
//! by 1); case 2 applies when the product is in the amalgam and folds the
//! whole pair of segments (boundary drops by 2).  The final-step variant
//! allows the outer endpoints to coincide and may leave a single boundary
//! segment with an amalgam label.

use super::{Diagram, DartId};
use crate::auto::Word;
use crate::error::Error;
use crate::Result;

impl Diagram {
    fn segment_checks(&self, e: DartId, ep: DartId, f: DartId, fp: DartId) -> Result<()> {
        for &d in &[e, ep, f, fp] {
            if !self.darts[d].alive {
                return Err(Error::PreconditionViolated("dead dart".to_string()));
            }
        }
        if self.darts[e].to != self.darts[ep].from || self.darts[f].to != self.darts[fp].from {
            return Err(Error::PreconditionViolated(
                "darts do not form segments".to_string(),
            ));
        }
        if self.darts[ep].to != self.darts[f].from {
            return Err(Error::PreconditionViolated(
                "segments are not consecutive".to_string(),
            ));
        }
        // both segments must lie on the outer boundary in order
        let outer = self.outer_face()?;
        let pos = outer
            .iter()
            .position(|&d| d == e)
            .ok_or_else(|| Error::PreconditionViolated("segments not on the boundary".to_string()))?;
        let n = outer.len();
        if outer[(pos + 1) % n] != ep || outer[(pos + 2) % n] != f || outer[(pos + 3) % n] != fp {
            return Err(Error::PreconditionViolated(
                "segments not consecutive on the boundary".to_string(),
            ));
        }
        Ok(())
    }

    fn segment_product(&self, e: DartId, ep: DartId, f: DartId, fp: DartId) -> Result<Word> {
        let s = self
            .label(e)
            .mul(self.label(ep))
            .mul(self.label(f))
            .mul(self.label(fp));
        let (aff, ele) = s.factor_membership();
        if !aff && !ele {
            return Err(Error::PreconditionViolated(
                "segment labels do not lie in a common factor".to_string(),
            ));
        }
        let (a1, e1) = self.label(e).mul(self.label(ep)).factor_membership();
        let (a2, e2) = self.label(f).mul(self.label(fp)).factor_membership();
        if !((a1 && a2) || (e1 && e2)) {
            return Err(Error::PreconditionViolated(
                "the two segment labels are in different factors".to_string(),
            ));
        }
        Ok(s)
    }

    /// Splices `v2`'s rotation into `v1`'s along the identified darts `d1`
    /// (at `v1`) and `d2` (at `v2`); afterwards `d2`'s pair is dead and every
    /// dart of `v2` hangs off `v1`.
    fn glue_darts(&mut self, d1: DartId, d2: DartId) {
        debug_assert_eq!(self.darts[d1].to, self.darts[d2].to);
        let v1 = self.darts[d1].from;
        let v2 = self.darts[d2].from;
        debug_assert_ne!(v1, v2);
        debug_assert_eq!(self.darts[d1].label, self.darts[d2].label);
        let rot1 = rotate_at(&self.verts[v1].rotation, d1);
        let rot2 = rotate_at(&self.verts[v2].rotation, d2);
        let mut merged = rot1;
        merged.extend_from_slice(&rot2[1..]);
        // retarget v2's darts to v1
        for &d in &rot2[1..] {
            self.darts[d].from = v1;
            let inv = self.darts[d].inv;
            self.darts[inv].to = v1;
        }
        self.verts[v1].rotation = merged;
        self.verts[v2].rotation.clear();
        self.verts[v2].alive = false;
        // the far endpoint keeps one of the two parallel darts
        let p = self.darts[d1].to;
        let d2inv = self.darts[d2].inv;
        self.verts[p].rotation.retain(|&x| x != d2inv);
        self.darts[d2].alive = false;
        self.darts[d2inv].alive = false;
    }

    /// Case 1: `s = phi(ee')phi(ff')` in a factor but not in the amalgam.
    /// Relabels per the construction and identifies `e'` with `f^{-1}`.
    /// Boundary length drops by exactly 1.
    pub fn identify_case1(&mut self, e: DartId, ep: DartId, f: DartId, fp: DartId) -> Result<()> {
        self.segment_checks(e, ep, f, fp)?;
        let s = self.segment_product(e, ep, f, fp)?;
        if s.in_amalgam() {
            return Err(Error::PreconditionViolated(
                "product lies in the amalgam; use case 2".to_string(),
            ));
        }
        let v1 = self.darts[e].to;
        let v2 = self.darts[f].to;
        if v1 == v2 {
            return Err(Error::PreconditionViolated(
                "secondary vertices coincide".to_string(),
            ));
        }
        // label of e' becomes id, other darts at v1 absorb it
        let lep = self.label(ep).clone();
        self.shift_labels_at(v1, &lep.inverse(), &[]);
        // label of f becomes id, darts at v2 absorb it
        let lf = self.label(f).clone();
        self.shift_labels_at(v2, &lf, &[]);
        debug_assert!(self.label(ep).is_identity());
        debug_assert!(self.label(f).is_identity());
        self.glue_darts(ep, self.darts[f].inv);
        // fp stays on the outer boundary
        self.outer = Some(fp);
        Ok(())
    }

    /// Case 2: `s` in the amalgam, the three outer vertices distinct.
    /// Identifies the oriented segments `ee'` and `f'^{-1}f^{-1}`; boundary
    /// length drops by exactly 2.
    pub fn identify_case2(&mut self, e: DartId, ep: DartId, f: DartId, fp: DartId) -> Result<()> {
        self.segment_checks(e, ep, f, fp)?;
        let s = self.segment_product(e, ep, f, fp)?;
        if !s.in_amalgam() {
            return Err(Error::PreconditionViolated(
                "product is not in the amalgam; use case 1".to_string(),
            ));
        }
        let u = self.darts[e].from;
        let mid = self.darts[ep].to;
        let w = self.darts[fp].to;
        if u == w {
            return Err(Error::VerticesCoincide);
        }
        if u == mid || mid == w {
            return Err(Error::PreconditionViolated(
                "degenerate segment endpoints".to_string(),
            ));
        }
        let outer = self.outer_face()?;
        if outer.len() == 4 {
            return Err(Error::PreconditionViolated(
                "identification would close the boundary".to_string(),
            ));
        }
        let pos = outer.iter().position(|&d| d == e).unwrap();
        let next_boundary = outer[(pos + 4) % outer.len()];
        self.case2_relabel(e, ep, f, fp, &s)?;
        // set phi(f') = phi(e)^{-1} and shift the surviving darts at w by s
        let le = self.label(e).clone();
        self.set_label(fp, le.inverse());
        let fp_inv = self.darts[fp].inv;
        self.shift_labels_at(w, &s, &[fp_inv]);
        debug_assert_eq!(self.label(ep), &self.label(f).inverse());
        self.glue_darts(ep, self.darts[f].inv);
        self.glue_darts(e, self.darts[fp].inv);
        self.outer = Some(next_boundary);
        Ok(())
    }

    /// Final-step variant of case 2 for the last identification: the outer
    /// endpoints may coincide; only `e'` and `f` are identified and one
    /// boundary segment with an amalgam label may remain.
    pub fn identify_final(&mut self, e: DartId, ep: DartId, f: DartId, fp: DartId) -> Result<()> {
        self.segment_checks(e, ep, f, fp)?;
        let s = self.segment_product(e, ep, f, fp)?;
        if !s.in_amalgam() {
            return Err(Error::PreconditionViolated(
                "product is not in the amalgam".to_string(),
            ));
        }
        self.case2_relabel(e, ep, f, fp, &s)?;
        // phi(f') stays phi(e)^{-1} s; the new boundary segment e f' carries s
        self.glue_darts(ep, self.darts[f].inv);
        self.outer = Some(fp);
        if self.label(e).mul(self.label(fp)).in_amalgam() {
            self.amalgam_boundary_exception = true;
        }
        Ok(())
    }

    /// Common relabeling at the secondary vertex between `f` and `f'`:
    /// afterwards `phi(f) = phi(e')^{-1}` and `phi(f') = phi(e)^{-1} s`.
    fn case2_relabel(
        &mut self,
        e: DartId,
        ep: DartId,
        f: DartId,
        fp: DartId,
        s: &Word,
    ) -> Result<()> {
        let v2 = self.darts[f].to;
        let shift = self.label(ep).mul(self.label(f));
        self.shift_labels_at(v2, &shift, &[]);
        debug_assert_eq!(self.label(f), &self.label(ep).inverse());
        debug_assert_eq!(
            self.label(fp),
            &self.label(e).inverse().mul(s),
            "f' label after readjustment"
        );
        Ok(())
    }
}

fn rotate_at(rotation: &[DartId], d: DartId) -> Vec<DartId> {
    let i = rotation
        .iter()
        .position(|&x| x == d)
        .expect("dart not in rotation");
    rotation
        .iter()
        .cycle()
        .skip(i)
        .take(rotation.len())
        .copied()
        .collect()
}

/// A boundary segment: two darts through a secondary vertex.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySegment {
    pub first: DartId,
    pub second: DartId,
}

impl Diagram {
    /// The outer boundary split into segments (pairs of darts between
    /// primary vertices).  Fails if the boundary has odd dart count.
    pub fn boundary_segments(&self) -> Result<Vec<BoundarySegment>> {
        let outer = self.outer_face()?;
        if outer.len() % 2 != 0 {
            return Err(Error::InvalidDiagram(
                "outer boundary has an odd number of half-segments".to_string(),
            ));
        }
        let start = outer
            .iter()
            .position(|&d| self.verts[self.darts[d].from].kind == super::VKind::Primary)
            .ok_or_else(|| Error::InvalidDiagram("no primary vertex on boundary".to_string()))?;
        let rotated: Vec<DartId> = outer
            .iter()
            .cycle()
            .skip(start)
            .take(outer.len())
            .copied()
            .collect();
        Ok(rotated
            .chunks(2)
            .map(|c| BoundarySegment {
                first: c[0],
                second: c[1],
            })
            .collect())
    }

    pub fn segment_label(&self, s: &BoundarySegment) -> Word {
        self.label(s.first).mul(self.label(s.second))
    }
}
