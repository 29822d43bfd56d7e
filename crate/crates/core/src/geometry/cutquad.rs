//! Cut-cell decomposition by recursive midpoint subdivision and the resulting
//! quadrature rules on `T ∩ Ω-`, `T ∩ Ω+` and `T ∩ Γ`.

use rayon::prelude::*;

use super::classify::{CutClassification, Tag};
use super::{LevelSet, Phase};
use crate::error::{Error, Result};
use crate::mesh::{dist, Point, TriMesh};
use crate::quadrature::{gauss_legendre, TriangleRule};

/// A polygonal approximation of one element split by the interface.
#[derive(Debug, Clone, Default)]
pub(crate) struct Decomposition {
    pub minus: Vec<[Point; 3]>,
    pub plus: Vec<[Point; 3]>,
    pub segments: Vec<[Point; 2]>,
}

pub(crate) fn tri_area(t: &[Point; 3]) -> f64 {
    0.5 * ((t[1][0] - t[0][0]) * (t[2][1] - t[0][1]) - (t[1][1] - t[0][1]) * (t[2][0] - t[0][0]))
        .abs()
}

impl Decomposition {
    pub fn area(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Minus => self.minus.iter().map(tri_area).sum(),
            Phase::Plus => self.plus.iter().map(tri_area).sum(),
        }
    }

    pub fn interface_length(&self) -> f64 {
        self.segments.iter().map(|s| dist(s[0], s[1])).sum()
    }
}

/// Outcome of probing one element.
#[derive(Debug, Clone)]
pub(crate) enum Probe {
    /// Every lattice vertex has the same strict sign.
    Uniform(Phase),
    Mixed(Decomposition),
}

type Lp = (i64, i64);

/// Level-set values on the `2^depth`-refined barycentric lattice of one
/// element.
struct Lattice {
    m: i64,
    origin: Point,
    e1: Point,
    e2: Point,
    values: Vec<f64>,
    signs: Vec<i8>,
}

impl Lattice {
    fn new(tri: &[Point; 3], phi: &LevelSet, depth: usize) -> Self {
        let m = 1i64 << depth;
        let origin = tri[0];
        let e1 = [tri[1][0] - tri[0][0], tri[1][1] - tri[0][1]];
        let e2 = [tri[2][0] - tri[0][0], tri[2][1] - tri[0][1]];
        let centroid = [
            (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
            (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
        ];
        let g = phi.gradient(centroid);
        let h = dist(tri[0], tri[1])
            .max(dist(tri[1], tri[2]))
            .max(dist(tri[2], tri[0]));
        let tol = 1e-12 * h * (g[0] * g[0] + g[1] * g[1]).sqrt();
        let n = (m + 1) as usize;
        let mut lat = Lattice {
            m,
            origin,
            e1,
            e2,
            values: vec![0.0; n * n],
            signs: vec![0; n * n],
        };
        for i in 0..=m {
            for j in 0..=(m - i) {
                let k = lat.idx((i, j));
                let mut v = phi.value(lat.point((i, j)));
                if v.abs() <= tol {
                    v = 0.0;
                }
                lat.values[k] = v;
                lat.signs[k] = if v < 0.0 {
                    -1
                } else if v > 0.0 {
                    1
                } else {
                    0
                };
            }
        }
        lat
    }

    fn idx(&self, p: Lp) -> usize {
        (p.0 * (self.m + 1) + p.1) as usize
    }

    fn point(&self, p: Lp) -> Point {
        let (s, t) = (p.0 as f64 / self.m as f64, p.1 as f64 / self.m as f64);
        [
            self.origin[0] + s * self.e1[0] + t * self.e2[0],
            self.origin[1] + s * self.e1[1] + t * self.e2[1],
        ]
    }

    fn sign(&self, p: Lp) -> i8 {
        self.signs[self.idx(p)]
    }

    /// Common strict sign of all lattice points in the sub-triangle, if any.
    fn uniform_sign(&self, v: &[Lp; 3], size: i64) -> Option<i8> {
        let d1 = ((v[1].0 - v[0].0) / size, (v[1].1 - v[0].1) / size);
        let d2 = ((v[2].0 - v[0].0) / size, (v[2].1 - v[0].1) / size);
        let s0 = self.sign(v[0]);
        if s0 == 0 {
            return None;
        }
        for a in 0..=size {
            for b in 0..=(size - a) {
                let p = (v[0].0 + a * d1.0 + b * d2.0, v[0].1 + a * d1.1 + b * d2.1);
                if self.sign(p) != s0 {
                    return None;
                }
            }
        }
        Some(s0)
    }

    /// Sign changes along the element boundary, ignoring zero values.
    fn perimeter_sign_changes(&self) -> usize {
        let m = self.m;
        let ring = (0..m)
            .map(|k| (k, 0))
            .chain((0..m).map(|k| (m - k, k)))
            .chain((0..m).map(|k| (0, m - k)));
        let signs: Vec<i8> = ring.map(|p| self.sign(p)).filter(|&s| s != 0).collect();
        if signs.is_empty() {
            return 0;
        }
        (0..signs.len())
            .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
            .count()
    }

    fn recurse(&self, v: [Lp; 3], size: i64, out: &mut Decomposition) -> std::result::Result<(), String> {
        let phys = [self.point(v[0]), self.point(v[1]), self.point(v[2])];
        match self.uniform_sign(&v, size) {
            Some(s) if s < 0 => out.minus.push(phys),
            Some(_) => out.plus.push(phys),
            None if size == 1 => {
                let vals = [
                    self.values[self.idx(v[0])],
                    self.values[self.idx(v[1])],
                    self.values[self.idx(v[2])],
                ];
                clip_leaf(phys, vals, out)?;
            }
            None => {
                let mid = |a: Lp, b: Lp| ((a.0 + b.0) / 2, (a.1 + b.1) / 2);
                let (ab, bc, ca) = (mid(v[0], v[1]), mid(v[1], v[2]), mid(v[2], v[0]));
                let half = size / 2;
                self.recurse([v[0], ab, ca], half, out)?;
                self.recurse([ab, v[1], bc], half, out)?;
                self.recurse([ca, bc, v[2]], half, out)?;
                self.recurse([ab, bc, ca], half, out)?;
            }
        }
        Ok(())
    }
}

/// Splits a leaf triangle against the zero line of the linear interpolant of
/// its vertex values.
fn clip_leaf(p: [Point; 3], v: [f64; 3], out: &mut Decomposition) -> std::result::Result<(), String> {
    let s: Vec<i8> = v
        .iter()
        .map(|&x| if x < 0.0 { -1 } else if x > 0.0 { 1 } else { 0 })
        .collect();
    let zeros: Vec<usize> = (0..3).filter(|&i| s[i] == 0).collect();
    let has_neg = s.iter().any(|&x| x < 0);
    let has_pos = s.iter().any(|&x| x > 0);
    match (has_neg, has_pos) {
        (false, false) => Err("level set vanishes on a whole leaf triangle".into()),
        (false, true) => {
            out.plus.push(p);
            Ok(())
        }
        (true, false) => {
            out.minus.push(p);
            // An interface edge shared by two leaves is claimed by the minus side
            // only, so it is counted once.
            if zeros.len() == 2 {
                out.segments.push([p[zeros[0]], p[zeros[1]]]);
            }
            Ok(())
        }
        (true, true) => {
            let mut minus: Vec<Point> = Vec::with_capacity(4);
            let mut plus: Vec<Point> = Vec::with_capacity(4);
            let mut iface: Vec<Point> = Vec::with_capacity(2);
            for i in 0..3 {
                let j = (i + 1) % 3;
                if s[i] <= 0 {
                    minus.push(p[i]);
                }
                if s[i] >= 0 {
                    plus.push(p[i]);
                }
                if s[i] == 0 {
                    iface.push(p[i]);
                }
                if s[i] * s[j] < 0 {
                    let t = v[i] / (v[i] - v[j]);
                    let x = [
                        p[i][0] + t * (p[j][0] - p[i][0]),
                        p[i][1] + t * (p[j][1] - p[i][1]),
                    ];
                    minus.push(x);
                    plus.push(x);
                    iface.push(x);
                }
            }
            if iface.len() != 2 {
                return Err(format!("leaf has {} zero points", iface.len()));
            }
            let leaf_area = tri_area(&p);
            fan(&minus, leaf_area, &mut out.minus);
            fan(&plus, leaf_area, &mut out.plus);
            out.segments.push([iface[0], iface[1]]);
            Ok(())
        }
    }
}

fn fan(poly: &[Point], reference_area: f64, out: &mut Vec<[Point; 3]>) {
    for k in 1..poly.len().saturating_sub(1) {
        let t = [poly[0], poly[k], poly[k + 1]];
        if tri_area(&t) > 1e-14 * reference_area {
            out.push(t);
        }
    }
}

/// Probes element `element` with vertices `tri` at subdivision depth `depth`.
pub(crate) fn probe_element(
    element: usize,
    tri: &[Point; 3],
    phi: &LevelSet,
    depth: usize,
) -> Result<Probe> {
    let lat = Lattice::new(tri, phi, depth);
    let top = [(0, 0), (lat.m, 0), (0, lat.m)];
    if let Some(s) = lat.uniform_sign(&top, lat.m) {
        return Ok(Probe::Uniform(if s < 0 { Phase::Minus } else { Phase::Plus }));
    }
    let changes = lat.perimeter_sign_changes();
    let has_neg = lat.signs.iter().any(|&s| s < 0);
    let has_pos = lat.signs.iter().any(|&s| s > 0);
    if changes > 2 {
        return Err(Error::UnresolvedInterface {
            element,
            msg: format!("{changes} sign changes along the element boundary"),
        });
    }
    if has_neg && has_pos && changes == 0 {
        return Err(Error::UnresolvedInterface {
            element,
            msg: "closed interface component inside the element".into(),
        });
    }
    let mut out = Decomposition::default();
    lat.recurse(top, lat.m, &mut out)
        .map_err(|msg| Error::DegenerateCut { element, msg })?;
    Ok(Probe::Mixed(out))
}

/// A quadrature node on the interface with its unit normal (plus to minus).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfacePoint {
    pub x: Point,
    pub weight: f64,
    pub normal: Point,
}

/// Quadrature data of one cut element. Points are physical coordinates.
#[derive(Debug, Clone, Default)]
pub struct CutCell {
    pub minus: Vec<(Point, f64)>,
    pub plus: Vec<(Point, f64)>,
    pub interface: Vec<InterfacePoint>,
}

impl CutCell {
    pub fn side(&self, phase: Phase) -> &[(Point, f64)] {
        match phase {
            Phase::Minus => &self.minus,
            Phase::Plus => &self.plus,
        }
    }
}

/// Per-element quadrature for both phases and the interface. Uncut elements
/// use the mapped reference rule, which is not stored per element.
#[derive(Debug, Clone)]
pub struct CutQuadrature {
    depth: usize,
    order: usize,
    reference: TriangleRule,
    tags: Vec<Tag>,
    cells: Vec<Option<CutCell>>,
}

impl CutQuadrature {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn reference_rule(&self) -> &TriangleRule {
        &self.reference
    }

    pub fn cell(&self, t: usize) -> Option<&CutCell> {
        self.cells[t].as_ref()
    }

    /// Physical points and weights for `T ∩ Ω^phase`; empty when the element
    /// lies entirely in the other phase.
    pub fn side(&self, mesh: &TriMesh, t: usize, phase: Phase) -> Vec<(Point, f64)> {
        match (&self.cells[t], self.tags[t]) {
            (Some(cell), _) => cell.side(phase).to_vec(),
            (None, Tag::Interior(p)) if p == phase => {
                self.reference.map_to(&mesh.element_vertices(t)).collect()
            }
            _ => Vec::new(),
        }
    }

    pub fn interface(&self, t: usize) -> &[InterfacePoint] {
        match &self.cells[t] {
            Some(c) => &c.interface,
            None => &[],
        }
    }

    /// `∫_{Ω^phase} f`.
    pub fn integrate(&self, mesh: &TriMesh, phase: Phase, f: impl Fn(Point) -> f64) -> f64 {
        (0..mesh.num_elements())
            .map(|t| self.side(mesh, t, phase).iter().map(|&(x, w)| w * f(x)).sum::<f64>())
            .sum()
    }

    /// `∫_Γ f`.
    pub fn integrate_interface(&self, f: impl Fn(&InterfacePoint) -> f64) -> f64 {
        self.cells
            .iter()
            .flatten()
            .flat_map(|c| c.interface.iter())
            .map(|q| q.weight * f(q))
            .sum()
    }

    pub fn volume(&self, mesh: &TriMesh, phase: Phase) -> f64 {
        self.integrate(mesh, phase, |_| 1.0)
    }

    pub fn interface_length(&self) -> f64 {
        self.integrate_interface(|_| 1.0)
    }
}

/// Builds order-`order` quadrature on both sides of the interface for every
/// element, using the same subdivision depth as the classification.
pub fn cut_quadrature(
    mesh: &TriMesh,
    classification: &CutClassification,
    phi: &LevelSet,
    depth: usize,
    order: usize,
) -> Result<CutQuadrature> {
    if depth != classification.depth() {
        return Err(Error::InvalidParameter {
            name: "depth",
            msg: format!(
                "quadrature depth {depth} differs from classification depth {}",
                classification.depth()
            ),
        });
    }
    let reference = TriangleRule::new(order);
    let (gx, gw) = gauss_legendre((order + 2).div_ceil(2));
    let cells = (0..mesh.num_elements())
        .into_par_iter()
        .map(|t| {
            if classification.tag(t) != Tag::Cut {
                return Ok(None);
            }
            let tri = mesh.element_vertices(t);
            let dec = match probe_element(t, &tri, phi, depth)? {
                Probe::Mixed(d) => d,
                Probe::Uniform(_) => unreachable!("cut element with uniform sign"),
            };
            let map = |tris: &[[Point; 3]]| -> Vec<(Point, f64)> {
                tris.iter().flat_map(|s| reference.map_to(s)).collect()
            };
            let mut interface = Vec::with_capacity(dec.segments.len() * gx.len());
            for seg in &dec.segments {
                let len = dist(seg[0], seg[1]);
                for (s, w) in gx.iter().zip(&gw) {
                    let x = [
                        seg[0][0] + s * (seg[1][0] - seg[0][0]),
                        seg[0][1] + s * (seg[1][1] - seg[0][1]),
                    ];
                    let normal = phi.normal(x).ok_or_else(|| Error::DegenerateCut {
                        element: t,
                        msg: format!("vanishing level-set gradient at {x:?}"),
                    })?;
                    interface.push(InterfacePoint {
                        x,
                        weight: w * len,
                        normal,
                    });
                }
            }
            Ok(Some(CutCell {
                minus: map(&dec.minus),
                plus: map(&dec.plus),
                interface,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CutQuadrature {
        depth,
        order,
        reference,
        tags: classification.tags().to_vec(),
        cells,
    })
}
