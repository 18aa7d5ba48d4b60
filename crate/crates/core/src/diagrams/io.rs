//! Line-oriented text serialization of diagrams.
//!
//! ```text
//! paut-diagram v1
//! surface sphere|plane
//! exception 0|1
//! outer <dart-id>            (plane only)
//! vertex <id> P|S
//! dart <id> <from> <to> <inv> <label expression>
//! rot <vertex-id> <dart-id>...
//! ```
//!
//! Serialization compacts ids; writing is canonical, so a serialized string
//! round-trips bit for bit.

use super::{Diagram, Surface, VKind};
use crate::error::Error;
use crate::expr::{parse_word, word_to_string};
use crate::Result;
use std::fmt::Write as _;

pub fn diagram_to_string(diag: &Diagram) -> String {
    let verts: Vec<usize> = diag.alive_verts().collect();
    let darts: Vec<usize> = diag.alive_darts().collect();
    let vmap: std::collections::HashMap<usize, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let dmap: std::collections::HashMap<usize, usize> =
        darts.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut out = String::new();
    out.push_str("paut-diagram v1\n");
    let _ = writeln!(
        out,
        "surface {}",
        match diag.surface {
            Surface::Sphere => "sphere",
            Surface::Plane => "plane",
        }
    );
    let _ = writeln!(
        out,
        "exception {}",
        if diag.amalgam_boundary_exception { 1 } else { 0 }
    );
    if diag.surface == Surface::Plane {
        if let Some(d) = diag.outer {
            let _ = writeln!(out, "outer {}", dmap[&d]);
        }
    }
    for (i, &v) in verts.iter().enumerate() {
        let _ = writeln!(
            out,
            "vertex {} {}",
            i,
            match diag.verts[v].kind {
                VKind::Primary => "P",
                VKind::Secondary => "S",
            }
        );
    }
    for &d in &darts {
        let dd = &diag.darts[d];
        let _ = writeln!(
            out,
            "dart {} {} {} {} {}",
            dmap[&d],
            vmap[&dd.from],
            vmap[&dd.to],
            dmap[&dd.inv],
            word_to_string(&dd.label)
        );
    }
    for &v in &verts {
        let rot: Vec<String> = diag.verts[v].rotation.iter().map(|d| dmap[d].to_string()).collect();
        let _ = writeln!(out, "rot {} {}", vmap[&v], rot.join(" "));
    }
    out
}

pub fn diagram_from_string(s: &str) -> Result<Diagram> {
    let mut surface = None;
    let mut exception = false;
    let mut outer: Option<usize> = None;
    let mut verts: Vec<(usize, VKind)> = Vec::new();
    let mut darts: Vec<(usize, usize, usize, usize, String)> = Vec::new();
    let mut rots: Vec<(usize, Vec<usize>)> = Vec::new();
    let bad = |msg: &str| Error::InvalidDiagram(format!("parse: {msg}"));
    for (lineno, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if lineno == 0 {
            if line != "paut-diagram v1" {
                return Err(bad("missing header"));
            }
            continue;
        }
        let mut it = line.splitn(2, ' ');
        let key = it.next().unwrap();
        let rest = it.next().unwrap_or("");
        match key {
            "surface" => {
                surface = Some(match rest {
                    "sphere" => Surface::Sphere,
                    "plane" => Surface::Plane,
                    _ => return Err(bad("unknown surface")),
                })
            }
            "exception" => exception = rest == "1",
            "outer" => outer = Some(rest.parse().map_err(|_| bad("bad outer id"))?),
            "vertex" => {
                let mut parts = rest.split_whitespace();
                let id: usize = parts
                    .next()
                    .ok_or_else(|| bad("vertex id"))?
                    .parse()
                    .map_err(|_| bad("vertex id"))?;
                let kind = match parts.next() {
                    Some("P") => VKind::Primary,
                    Some("S") => VKind::Secondary,
                    _ => return Err(bad("vertex kind")),
                };
                verts.push((id, kind));
            }
            "dart" => {
                let mut parts = rest.splitn(5, ' ');
                let mut next_num = || -> Result<usize> {
                    parts
                        .next()
                        .ok_or_else(|| bad("dart fields"))?
                        .parse()
                        .map_err(|_| bad("dart fields"))
                };
                let id = next_num()?;
                let from = next_num()?;
                let to = next_num()?;
                let inv = next_num()?;
                let label = parts.next().ok_or_else(|| bad("dart label"))?.to_string();
                darts.push((id, from, to, inv, label));
            }
            "rot" => {
                let mut parts = rest.split_whitespace();
                let v: usize = parts
                    .next()
                    .ok_or_else(|| bad("rot vertex"))?
                    .parse()
                    .map_err(|_| bad("rot vertex"))?;
                let ds: Vec<usize> = parts
                    .map(|p| p.parse().map_err(|_| bad("rot dart")))
                    .collect::<Result<_>>()?;
                rots.push((v, ds));
            }
            _ => return Err(bad("unknown line")),
        }
    }
    let surface = surface.ok_or_else(|| bad("no surface line"))?;
    let mut diag = Diagram::new(surface);
    verts.sort_by_key(|&(id, _)| id);
    for (i, &(id, kind)) in verts.iter().enumerate() {
        if id != i {
            return Err(bad("vertex ids not dense"));
        }
        diag.add_vertex(kind);
    }
    darts.sort_by_key(|d| d.0);
    for (i, (id, from, to, inv, label)) in darts.iter().enumerate() {
        if *id != i {
            return Err(bad("dart ids not dense"));
        }
        let w = parse_word(label)?;
        diag.darts.push(super::DartData {
            from: *from,
            to: *to,
            inv: *inv,
            label: w,
            alive: true,
        });
    }
    for (v, ds) in rots {
        if v >= diag.verts.len() {
            return Err(bad("rotation for unknown vertex"));
        }
        diag.verts[v].rotation = ds;
    }
    diag.outer = outer;
    diag.amalgam_boundary_exception = exception;
    diag.validate()?;
    Ok(diag)
}
