//! Element and face classification relative to the interface.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::cutquad::{probe_element, Probe};
use super::{LevelSet, Phase};
use crate::error::{Error, Result};
use crate::mesh::TriMesh;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    /// The element lies inside one phase.
    Interior(Phase),
    /// The element meets the interface and belongs to both phases.
    Cut,
}

/// Cut elements whose two-ring vertex neighbourhood contains no interior
/// element of a phase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResolutionReport {
    pub violations: Vec<(usize, Phase)>,
}

impl ResolutionReport {
    pub fn is_satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct CutClassification {
    depth: usize,
    tags: Vec<Tag>,
    cut: Vec<usize>,
    ghost_faces: [Vec<usize>; 2],
    interior_faces: [Vec<usize>; 2],
    resolution: ResolutionReport,
}

impl CutClassification {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn tags(&self) -> &[Tag] {
        &self.tags
    }

    pub fn tag(&self, t: usize) -> Tag {
        self.tags[t]
    }

    /// Whether `t` belongs to the set of elements meeting `Ω^phase`.
    pub fn is_active(&self, t: usize, phase: Phase) -> bool {
        match self.tags[t] {
            Tag::Cut => true,
            Tag::Interior(p) => p == phase,
        }
    }

    pub fn is_cut(&self, t: usize) -> bool {
        self.tags[t] == Tag::Cut
    }

    pub fn cut_elements(&self) -> &[usize] {
        &self.cut
    }

    /// Elements meeting `Ω^phase` (interior plus cut), ascending.
    pub fn active_elements(&self, phase: Phase) -> Vec<usize> {
        (0..self.tags.len()).filter(|&t| self.is_active(t, phase)).collect()
    }

    pub fn interior_elements(&self, phase: Phase) -> Vec<usize> {
        (0..self.tags.len())
            .filter(|&t| self.tags[t] == Tag::Interior(phase))
            .collect()
    }

    /// Interior faces joining two active elements of `phase`, at least one of
    /// them cut: the faces carrying the ghost penalty.
    pub fn ghost_faces(&self, phase: Phase) -> &[usize] {
        &self.ghost_faces[phase.index()]
    }

    /// Faces of elements lying inside `Ω^phase`.
    pub fn interior_faces(&self, phase: Phase) -> &[usize] {
        &self.interior_faces[phase.index()]
    }

    pub fn resolution(&self) -> &ResolutionReport {
        &self.resolution
    }
}

/// Classifies every element of `mesh` against the zero set of `phi`, using
/// the vertices of the depth-`depth` subdivision as sign probes.
pub fn classify(mesh: &TriMesh, phi: &LevelSet, depth: usize) -> Result<CutClassification> {
    if depth > 10 {
        return Err(Error::InvalidParameter {
            name: "depth",
            msg: format!("subdivision depth {depth} exceeds 10"),
        });
    }
    let tags = (0..mesh.num_elements())
        .into_par_iter()
        .map(|t| {
            let tri = mesh.element_vertices(t);
            Ok(match probe_element(t, &tri, phi, depth)? {
                Probe::Uniform(p) => Tag::Interior(p),
                Probe::Mixed(d) => {
                    let (am, ap) = (d.area(Phase::Minus), d.area(Phase::Plus));
                    if (am > 0.0 && ap > 0.0) || d.interface_length() > 0.0 {
                        Tag::Cut
                    } else if am > 0.0 {
                        Tag::Interior(Phase::Minus)
                    } else {
                        Tag::Interior(Phase::Plus)
                    }
                }
            })
        })
        .collect::<Result<Vec<Tag>>>()?;
    let cut: Vec<usize> = (0..tags.len()).filter(|&t| tags[t] == Tag::Cut).collect();

    let active = |t: usize, p: Phase| tags[t] == Tag::Cut || tags[t] == Tag::Interior(p);
    let mut ghost_faces = [Vec::new(), Vec::new()];
    let mut interior_faces = [Vec::new(), Vec::new()];
    for (f, face) in mesh.faces().iter().enumerate() {
        let (a, b) = face.elements;
        for p in Phase::BOTH {
            let interior_a = tags[a] == Tag::Interior(p);
            let interior_b = b.is_some_and(|b| tags[b] == Tag::Interior(p));
            if interior_a || interior_b {
                interior_faces[p.index()].push(f);
            }
            if let Some(b) = b {
                if active(a, p) && active(b, p) && (tags[a] == Tag::Cut || tags[b] == Tag::Cut) {
                    ghost_faces[p.index()].push(f);
                }
            }
        }
    }

    let mut violations = Vec::new();
    for &t in &cut {
        let ring = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
            set.iter()
                .flat_map(|&e| mesh.triangles()[e])
                .flat_map(|v| mesh.vertex_elements(v).iter().copied())
                .collect()
        };
        let two_ring = ring(&ring(&BTreeSet::from([t])));
        for p in Phase::BOTH {
            if !two_ring.iter().any(|&e| tags[e] == Tag::Interior(p)) {
                violations.push((t, p));
            }
        }
    }

    Ok(CutClassification {
        depth,
        tags,
        cut,
        ghost_faces,
        interior_faces,
        resolution: ResolutionReport { violations },
    })
}
