//! Discrete extension of plus-phase finite element functions to the whole
//! mesh, and a sweep that measures its boundedness constant.
//!
//! The piecewise linear part is extended discrete-harmonically: vertices of
//! the plus patch keep their values, the remaining interior vertices solve the
//! P1 Laplace system, and vertices on the outer boundary are set to zero. The
//! higher-order remainder `v - I_h v` keeps its nodal values on the plus patch
//! and is zero elsewhere.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use faer::linalg::solvers::Solve;
use faer::Side;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cases::inclusion_radius;
use crate::error::{Error, Result};
use crate::fespace::{build_space, DofMap, ElementMap, ElementPair, Slot};
use crate::geometry::{classify, CutClassification, LevelSet, Phase};
use crate::mesh::{build_uniform_diagonal_mesh, Rect, TriMesh};
use crate::quadrature::TriangleRule;
use crate::sparse::TripletBuilder;

/// How the P1 part of the extension is computed, for report headers.
pub const EXTENSION_NOTE: &str = "E_h^1 is the discrete-harmonic P1 extension (zero on the outer boundary); \
Q_h keeps the nodal values of v - I_h v on the plus patch and zero-extends them";

/// Elements and velocity nodes of the plus patch, the union of the elements
/// active in the plus phase.
#[derive(Debug, Clone)]
pub struct PlusPatch {
    elements: Vec<bool>,
    nodes: Vec<bool>,
}

impl PlusPatch {
    pub fn new(classification: &CutClassification, dofs: &DofMap) -> Self {
        let elements: Vec<bool> = (0..dofs.num_elements())
            .map(|t| classification.is_active(t, Phase::Plus))
            .collect();
        let nodes = dofs.velocity_slots(Phase::Plus).iter().map(|s| s.is_active()).collect();
        Self { elements, nodes }
    }

    pub fn contains_element(&self, t: usize) -> bool {
        self.elements[t]
    }

    /// Whether the velocity node lies in the closure of the patch.
    pub fn contains_node(&self, node: usize) -> bool {
        self.nodes[node]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().enumerate().filter(|(_, &a)| a).map(|(t, _)| t)
    }
}

/// Extends vertex values given on the closure of the plus patch to every mesh
/// vertex. Entries of `values` at vertices outside the patch are ignored.
pub fn extend_p1(mesh: &TriMesh, classification: &CutClassification, values: &[f64]) -> Result<Vec<f64>> {
    let nv = mesh.num_vertices();
    if values.len() != nv {
        return Err(Error::InvalidParameter {
            name: "values",
            msg: format!("expected {nv} vertex values, got {}", values.len()),
        });
    }
    let mut kept = vec![false; nv];
    for t in 0..mesh.num_elements() {
        if classification.is_active(t, Phase::Plus) {
            for v in mesh.triangles()[t] {
                kept[v] = true;
            }
        }
    }
    let mut out: Vec<f64> = (0..nv).map(|v| if kept[v] { values[v] } else { 0.0 }).collect();

    let mut index = vec![usize::MAX; nv];
    let mut unknowns = 0;
    for v in 0..nv {
        if !kept[v] && !mesh.vertex_on_boundary(v) {
            index[v] = unknowns;
            unknowns += 1;
        }
    }
    if unknowns == 0 {
        return Ok(out);
    }

    let mut stiffness = TripletBuilder::new(unknowns, unknowns);
    let mut rhs = vec![0.0; unknowns];
    for t in 0..mesh.num_elements() {
        let tri = mesh.triangles()[t];
        if tri.iter().all(|&v| index[v] == usize::MAX) {
            continue;
        }
        let local = p1_stiffness(&mesh.element_vertices(t));
        for (i, &a) in tri.iter().enumerate() {
            if index[a] == usize::MAX {
                continue;
            }
            for (j, &b) in tri.iter().enumerate() {
                if index[b] == usize::MAX {
                    rhs[index[a]] -= local[i][j] * out[b];
                } else {
                    stiffness.push(index[a], index[b], local[i][j]);
                }
            }
        }
    }
    let matrix = stiffness.build().to_faer();
    let llt = matrix
        .sp_cholesky(Side::Lower)
        .map_err(|e| Error::Factorization(format!("harmonic extension: {e:?}")))?;
    let x = llt.solve(faer::Mat::<f64>::from_fn(unknowns, 1, |i, _| rhs[i]));
    for v in 0..nv {
        if index[v] != usize::MAX {
            out[v] = x[(index[v], 0)];
        }
    }
    Ok(out)
}

fn p1_stiffness(tri: &[[f64; 2]; 3]) -> [[f64; 3]; 3] {
    let map = ElementMap::new(tri);
    let grads = [[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]].map(|g| map.gradient(g));
    let area = 0.5 * map.det.abs();
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * (grads[i][0] * grads[j][0] + grads[i][1] * grads[j][1]);
        }
    }
    k
}

/// Coefficients in the velocity basis of the piecewise linear function with
/// the given vertex values.
pub fn p1_in_velocity_basis(dofs: &DofMap, mesh: &TriMesh, vertex_values: &[f64]) -> Vec<f64> {
    let element = dofs.velocity_element();
    let mut out = vec![0.0; dofs.velocity_nodes().len()];
    for t in 0..dofs.num_elements() {
        let tri = mesh.triangles()[t];
        let nodal: Vec<f64> = element
            .nodes()
            .iter()
            .map(|xi| {
                (1.0 - xi[0] - xi[1]) * vertex_values[tri[0]] + xi[0] * vertex_values[tri[1]] + xi[1] * vertex_values[tri[2]]
            })
            .collect();
        let c = element.coefficients_from_nodal(&nodal);
        for (&n, ck) in dofs.element_velocity_nodes(t).iter().zip(c) {
            out[n] = ck;
        }
    }
    out
}

/// Extends one plus-phase velocity component, given as coefficients per
/// velocity node, by `E_h v = E_h^1(I_h v) + Q_h(v - I_h v)`.
pub fn extend_general(mesh: &TriMesh, classification: &CutClassification, dofs: &DofMap, v: &[f64]) -> Result<Vec<f64>> {
    let nv = mesh.num_vertices();
    let patch = PlusPatch::new(classification, dofs);
    let linear = extend_p1(mesh, classification, &v[..nv])?;
    let base = p1_in_velocity_basis(dofs, mesh, &linear);
    // On the patch E_h^1(I_h v) = I_h v, so the sum is v there; off the patch
    // Q_h contributes nothing.
    Ok((0..v.len())
        .map(|n| if patch.contains_node(n) { v[n] } else { base[n] })
        .collect())
}

/// `(|w|^2 + |grad w|^2)^(1/2)` over the listed elements for a scalar field
/// with coefficients per velocity node.
pub fn h1_norm(mesh: &TriMesh, dofs: &DofMap, w: &[f64], elements: impl Iterator<Item = usize>) -> f64 {
    let element = dofs.velocity_element();
    let rule = TriangleRule::new(2 * element.degree());
    let mut total = 0.0;
    for t in elements {
        let tri = mesh.element_vertices(t);
        let map = ElementMap::new(&tri);
        let nodes = dofs.element_velocity_nodes(t);
        for (x, weight) in rule.map_to(&tri) {
            let s = element.eval_physical(&map, x);
            let mut value = 0.0;
            let mut grad = [0.0; 2];
            for (k, &n) in nodes.iter().enumerate() {
                value += w[n] * s.values[k];
                grad[0] += w[n] * s.gradients[k][0];
                grad[1] += w[n] * s.gradients[k][1];
            }
            total += weight * (value * value + grad[0] * grad[0] + grad[1] * grad[1]);
        }
    }
    total.sqrt()
}

/// Scalar space whose functions are extended in the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionSpace {
    P1,
    Mini,
    P2,
}

impl ExtensionSpace {
    pub const ALL: [ExtensionSpace; 3] = [ExtensionSpace::P1, ExtensionSpace::Mini, ExtensionSpace::P2];

    pub fn name(self) -> &'static str {
        match self {
            ExtensionSpace::P1 => "p1",
            ExtensionSpace::Mini => "mini",
            ExtensionSpace::P2 => "p2",
        }
    }

    /// Element pair whose velocity numbering hosts the space; P1 functions
    /// live in the Mini space with zero bubbles.
    fn pair(self) -> ElementPair {
        match self {
            ExtensionSpace::P1 | ExtensionSpace::Mini => ElementPair::Mini,
            ExtensionSpace::P2 => ElementPair::P2P0,
        }
    }
}

impl fmt::Display for ExtensionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|space| space.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter {
                name: "space",
                msg: format!("unknown extension space '{s}' (expected p1, mini or p2)"),
            })
    }
}

/// Settings of the boundedness sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub space: ExtensionSpace,
    pub levels: Vec<usize>,
    pub trials: usize,
    /// Circle centres are drawn uniformly from `[-max_offset, max_offset]^2`.
    pub max_offset: f64,
    pub seed: u64,
    pub depth: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            space: ExtensionSpace::P1,
            levels: vec![16, 32, 64],
            trials: 20,
            max_offset: 0.25,
            seed: 2024,
            depth: 4,
        }
    }
}

/// One extension of one random function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Trial {
    pub level: usize,
    pub offset_x: f64,
    pub offset_y: f64,
    #[serde(skip)]
    pub seed: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionReport {
    pub space: ExtensionSpace,
    pub trials: Vec<Trial>,
    /// Offsets redrawn because the interface was unresolved on some level.
    pub rejected_offsets: usize,
}

impl ExtensionReport {
    /// `(level, max ratio)` in level order.
    pub fn max_ratios(&self) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for trial in &self.trials {
            match out.iter_mut().find(|(level, _)| *level == trial.level) {
                Some((_, max)) => *max = max.max(trial.ratio),
                None => out.push((trial.level, trial.ratio)),
            }
        }
        out
    }

    /// Max ratio at each level divided by the one at the previous level.
    pub fn level_quotients(&self) -> Vec<f64> {
        self.max_ratios().windows(2).map(|w| w[1].1 / w[0].1).collect()
    }

    /// CSV with columns `level,offset_x,offset_y,ratio`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for trial in &self.trials {
            csv.serialize(trial)?;
        }
        csv.flush()?;
        Ok(())
    }
}

/// Extends random plus-phase functions for circular inclusions at random
/// offsets and records `|E_h v|_{1,Ω} / |v|_{1,Ω_h^+}`. The same offsets are
/// used on every level.
pub fn extension_sweep(config: &SweepConfig) -> Result<ExtensionReport> {
    if config.trials == 0 || config.levels.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sweep",
            msg: "at least one level and one trial are required".into(),
        });
    }
    let meshes: Vec<TriMesh> = config
        .levels
        .iter()
        .map(|&n| build_uniform_diagonal_mesh(Rect::reference_square(), n))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut offsets: Vec<[f64; 2]> = Vec::with_capacity(config.trials);
    let mut rejected = 0;
    while offsets.len() < config.trials {
        let offset = [
            rng.random_range(-config.max_offset..=config.max_offset),
            rng.random_range(-config.max_offset..=config.max_offset),
        ];
        // A circle grazing an element edge cuts it twice, which the
        // classification cannot resolve; such offsets are redrawn.
        let level_set = LevelSet::circle(offset, inclusion_radius());
        if meshes.iter().all(|mesh| classify(mesh, &level_set, config.depth).is_ok()) {
            offsets.push(offset);
        } else {
            rejected += 1;
            if rejected > 10 * config.trials {
                return Err(Error::InvalidParameter {
                    name: "max_offset",
                    msg: format!("{rejected} circle offsets were unresolved on some level"),
                });
            }
        }
    }
    let mut trials = Vec::with_capacity(config.levels.len() * config.trials);
    for (&n, mesh) in config.levels.iter().zip(&meshes) {
        let level: Vec<Trial> = offsets
            .par_iter()
            .enumerate()
            .map(|(i, &offset)| {
                let seed = config.seed.wrapping_add(1 + i as u64);
                let ratio = trial_ratio(mesh, config, offset, seed)?;
                Ok(Trial {
                    level: n,
                    offset_x: offset[0],
                    offset_y: offset[1],
                    seed,
                    ratio,
                })
            })
            .collect::<Result<_>>()
            .map_err(|e| Error::Level { n, source: Box::new(e) })?;
        trials.extend(level);
    }
    Ok(ExtensionReport {
        space: config.space,
        trials,
        rejected_offsets: rejected,
    })
}

fn trial_ratio(mesh: &TriMesh, config: &SweepConfig, offset: [f64; 2], seed: u64) -> Result<f64> {
    let level_set = LevelSet::circle(offset, inclusion_radius());
    let classification = classify(mesh, &level_set, config.depth)?;
    let dofs = build_space(mesh, &classification, config.space.pair());
    let v = random_plus_function(mesh, &dofs, config.space, seed);
    let patch = PlusPatch::new(&classification, &dofs);
    let norm = h1_norm(mesh, &dofs, &v, patch.elements());
    let v: Vec<f64> = v.iter().map(|x| x / norm).collect();
    let extended = extend_general(mesh, &classification, &dofs, &v)?;
    let inside = h1_norm(mesh, &dofs, &v, patch.elements());
    Ok(h1_norm(mesh, &dofs, &extended, 0..mesh.num_elements()) / inside)
}

/// Uniform random coefficients in `[-1, 1]` on the free plus-phase nodes,
/// zero on the outer boundary.
fn random_plus_function(mesh: &TriMesh, dofs: &DofMap, space: ExtensionSpace, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    dofs.velocity_slots(Phase::Plus)
        .iter()
        .enumerate()
        .map(|(node, slot)| match slot {
            Slot::Free(_) if space != ExtensionSpace::P1 || node < mesh.num_vertices() => rng.random_range(-1.0..=1.0),
            _ => 0.0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::rigid_body_projection;

    struct Setup {
        mesh: TriMesh,
        classification: CutClassification,
        dofs: DofMap,
    }

    fn setup(n: usize, pair: ElementPair, level_set: LevelSet) -> Setup {
        let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), n).unwrap();
        let classification = classify(&mesh, &level_set, 3).unwrap();
        let dofs = build_space(&mesh, &classification, pair);
        Setup {
            mesh,
            classification,
            dofs,
        }
    }

    fn inclusion(n: usize, pair: ElementPair) -> Setup {
        setup(n, pair, LevelSet::circle([0.04, -0.07], inclusion_radius()))
    }

    #[test]
    fn identity_on_the_plus_patch() {
        for pair in ElementPair::ALL {
            let s = inclusion(8, pair);
            let v = random_plus_function(&s.mesh, &s.dofs, ExtensionSpace::Mini, 7);
            let e = extend_general(&s.mesh, &s.classification, &s.dofs, &v).unwrap();
            let patch = PlusPatch::new(&s.classification, &s.dofs);
            for n in 0..v.len() {
                if patch.contains_node(n) {
                    assert_eq!(e[n], v[n]);
                }
            }
        }
    }

    #[test]
    fn linearity() {
        let s = inclusion(8, ElementPair::P2P0);
        let v = random_plus_function(&s.mesh, &s.dofs, ExtensionSpace::P2, 1);
        let w = random_plus_function(&s.mesh, &s.dofs, ExtensionSpace::P2, 2);
        let alpha = -2.5;
        let combo: Vec<f64> = v.iter().zip(&w).map(|(a, b)| alpha * a + b).collect();
        let ev = extend_general(&s.mesh, &s.classification, &s.dofs, &v).unwrap();
        let ew = extend_general(&s.mesh, &s.classification, &s.dofs, &w).unwrap();
        let ec = extend_general(&s.mesh, &s.classification, &s.dofs, &combo).unwrap();
        for i in 0..v.len() {
            assert!((ec[i] - (alpha * ev[i] + ew[i])).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_data_is_reproduced_in_the_fill() {
        let s = inclusion(16, ElementPair::Mini);
        let affine = |p: [f64; 2]| 0.3 + 1.5 * p[0] - 0.7 * p[1];
        let values: Vec<f64> = s.mesh.vertices().iter().map(|&p| affine(p)).collect();
        let e = extend_p1(&s.mesh, &s.classification, &values).unwrap();
        // The fill region is the interior of the inclusion, which does not
        // touch the outer boundary.
        for (v, &p) in s.mesh.vertices().iter().enumerate() {
            assert!((e[v] - affine(p)).abs() < 1e-12, "vertex {v}");
        }
    }

    #[test]
    fn constant_is_not_preserved_when_the_fill_touches_the_boundary() {
        // Plus phase is the disk, so the fill region reaches the outer boundary.
        let s = setup(8, ElementPair::Mini, LevelSet::circle([0.0, 0.0], inclusion_radius()).negated());
        let values = vec![1.0; s.mesh.num_vertices()];
        let e = extend_p1(&s.mesh, &s.classification, &values).unwrap();
        let boundary: Vec<usize> = (0..s.mesh.num_vertices()).filter(|&v| s.mesh.vertex_on_boundary(v)).collect();
        assert!(boundary.iter().all(|&v| e[v] == 0.0));
        assert!(e.iter().any(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn empty_fill_is_the_identity() {
        let s = setup(4, ElementPair::Mini, LevelSet::Constant(1.0));
        let values: Vec<f64> = (0..s.mesh.num_vertices()).map(|v| v as f64).collect();
        let e = extend_p1(&s.mesh, &s.classification, &values).unwrap();
        for v in 0..values.len() {
            if !s.mesh.vertex_on_boundary(v) {
                assert_eq!(e[v], values[v]);
            }
        }
    }

    #[test]
    fn p1_fields_ignore_the_remainder_term() {
        let s = inclusion(8, ElementPair::P2P0);
        let vertex: Vec<f64> = s.mesh.vertices().iter().map(|p| (3.0 * p[0]).sin() * p[1]).collect();
        let v = p1_in_velocity_basis(&s.dofs, &s.mesh, &vertex);
        let e = extend_general(&s.mesh, &s.classification, &s.dofs, &v).unwrap();
        let e1 = extend_p1(&s.mesh, &s.classification, &vertex).unwrap();
        let expected = p1_in_velocity_basis(&s.dofs, &s.mesh, &e1);
        for i in 0..v.len() {
            assert!((e[i] - expected[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn remainder_is_local_to_the_patch_boundary() {
        for pair in ElementPair::ALL {
            let s = inclusion(8, pair);
            let nv = s.mesh.num_vertices();
            let mut v = random_plus_function(&s.mesh, &s.dofs, ExtensionSpace::P2, 3);
            v[..nv].iter_mut().for_each(|x| *x = 0.0);
            let e = extend_general(&s.mesh, &s.classification, &s.dofs, &v).unwrap();
            let patch = PlusPatch::new(&s.classification, &s.dofs);
            for t in 0..s.mesh.num_elements() {
                if patch.contains_element(t) {
                    continue;
                }
                let touches_patch = s.mesh.element_faces(t).iter().any(|&f| {
                    let (a, b) = s.mesh.face_neighbors(f);
                    [Some(a), b].into_iter().flatten().any(|u| u != t && patch.contains_element(u))
                });
                let nodes = s.dofs.element_velocity_nodes(t);
                if !touches_patch {
                    assert!(nodes.iter().all(|&n| e[n] == 0.0), "{pair} element {t}");
                }
            }
        }
    }

    #[test]
    fn harmonic_fill_has_minimal_energy() {
        // Perturbing the fill values cannot lower the Dirichlet energy.
        let s = inclusion(8, ElementPair::Mini);
        let values: Vec<f64> = s.mesh.vertices().iter().map(|p| p[0] * p[0] - p[1]).collect();
        let e = extend_p1(&s.mesh, &s.classification, &values).unwrap();
        let energy = |f: &[f64]| -> f64 {
            (0..s.mesh.num_elements())
                .map(|t| {
                    let k = p1_stiffness(&s.mesh.element_vertices(t));
                    let tri = s.mesh.triangles()[t];
                    (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| f[tri[i]] * k[i][j] * f[tri[j]]).sum::<f64>()
                })
                .sum()
        };
        let patch = PlusPatch::new(&s.classification, &s.dofs);
        let free = (0..s.mesh.num_vertices()).find(|&v| !patch.contains_node(v) && !s.mesh.vertex_on_boundary(v)).unwrap();
        let mut perturbed = e.clone();
        perturbed[free] += 1e-3;
        assert!(energy(&perturbed) > energy(&e));
    }

    #[test]
    fn rigid_motion_is_reproduced_in_the_fill() {
        let s = inclusion(16, ElementPair::Mini);
        let motion = |p: [f64; 2]| [0.2 - 0.5 * p[1], -0.1 + 0.5 * p[0]];
        let extended = [0, 1].map(|c| {
            let vertex: Vec<f64> = s.mesh.vertices().iter().map(|&p| motion(p)[c]).collect();
            extend_p1(&s.mesh, &s.classification, &vertex).unwrap()
        });
        let patch = PlusPatch::new(&s.classification, &s.dofs);
        let rule = TriangleRule::new(2);
        let mut points = Vec::new();
        let mut values = Vec::new();
        for t in (0..s.mesh.num_elements()).filter(|&t| !patch.contains_element(t)) {
            let tri = s.mesh.element_vertices(t);
            let map = ElementMap::new(&tri);
            let ids = s.mesh.triangles()[t];
            for (x, w) in rule.map_to(&tri) {
                let xi = map.to_reference(x);
                let l = [1.0 - xi[0] - xi[1], xi[0], xi[1]];
                points.push((x, w));
                values.push([0, 1].map(|c| (0..3).map(|k| l[k] * extended[c][ids[k]]).sum::<f64>()));
            }
        }
        assert!(!points.is_empty());
        let [a, b, c] = rigid_body_projection(&points, &values).unwrap();
        assert!((a - 0.2).abs() < 1e-10 && (b + 0.1).abs() < 1e-10 && (c - 0.5).abs() < 1e-10);
    }

    #[test]
    fn sweep_ratios_are_at_least_one() {
        let config = SweepConfig {
            levels: vec![8, 16],
            trials: 3,
            ..SweepConfig::default()
        };
        for space in ExtensionSpace::ALL {
            let report = extension_sweep(&SweepConfig { space, ..config.clone() }).unwrap();
            assert_eq!(report.trials.len(), 6);
            assert!(report.trials.iter().all(|t| t.ratio >= 1.0 - 1e-12 && t.ratio.is_finite()));
            assert_eq!(report.max_ratios().len(), 2);
            let mut buf = Vec::new();
            report.write_csv(&mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            assert!(text.starts_with("level,offset_x,offset_y,ratio\n"));
        }
    }

    #[test]
    fn space_names_round_trip() {
        for space in ExtensionSpace::ALL {
            assert_eq!(space.name().parse::<ExtensionSpace>().unwrap(), space);
        }
        assert!("q1".parse::<ExtensionSpace>().is_err());
    }
}
