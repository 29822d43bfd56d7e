//! Background triangulations and their face adjacency.
//!
//! Faces are stored once, with the adjacent element pair ordered by element
//! index. The face normal points out of the first (lower-index) element.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Axis-aligned rectangle `[min.0, max.0] x [min.1, max.1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    /// The square `(-1, 1)^2` used by all the bundled experiments.
    pub fn reference_square() -> Self {
        Self::new([-1.0, -1.0], [1.0, 1.0])
    }

    pub fn area(&self) -> f64 {
        (self.max[0] - self.min[0]) * (self.max[1] - self.min[1])
    }
}

/// An edge of the triangulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub vertices: [usize; 2],
    /// Adjacent elements; the second is `None` on the domain boundary.
    /// For interior faces `elements.0 < elements.1`.
    pub elements: (usize, Option<usize>),
    pub length: f64,
    /// Unit normal pointing out of `elements.0`.
    pub normal: Point,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.elements.1.is_none()
    }
}

/// Immutable shape-regular triangulation of a polygonal domain.
#[derive(Debug, Clone)]
pub struct TriMesh {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    faces: Vec<Face>,
    /// `element_faces[t][k]` is the face opposite local vertex `k`.
    element_faces: Vec<[usize; 3]>,
    areas: Vec<f64>,
    diameters: Vec<f64>,
    vertex_on_boundary: Vec<bool>,
    vertex_elements: Vec<Vec<usize>>,
}

impl TriMesh {
    /// Builds a mesh from raw vertex coordinates and counter-clockwise triangles.
    pub fn from_parts(vertices: Vec<Point>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        let nv = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references a vertex out of range"
                )));
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            let area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
            if !(area > 0.0) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} has non-positive signed area {area:e}"
                )));
            }
            areas.push(area);
            diameters.push(dist(a, b).max(dist(b, c)).max(dist(c, a)));
        }

        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut faces: Vec<Face> = Vec::new();
        let mut element_faces = vec![[0usize; 3]; triangles.len()];
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let key = (a.min(b), a.max(b));
                match lookup.get(&key) {
                    Some(&f) => {
                        let face = &mut faces[f];
                        if face.elements.1.is_some() {
                            return Err(Error::InvalidMesh(format!(
                                "edge ({}, {}) shared by more than two triangles",
                                key.0, key.1
                            )));
                        }
                        face.elements.1 = Some(t);
                        element_faces[t][k] = f;
                    }
                    None => {
                        let (pa, pb) = (vertices[a], vertices[b]);
                        let length = dist(pa, pb);
                        // CCW orientation: the outward normal of edge a->b is (dy, -dx).
                        let normal = [(pb[1] - pa[1]) / length, -(pb[0] - pa[0]) / length];
                        lookup.insert(key, faces.len());
                        element_faces[t][k] = faces.len();
                        faces.push(Face {
                            vertices: [key.0, key.1],
                            elements: (t, None),
                            length,
                            normal,
                        });
                    }
                }
            }
        }

        let mut vertex_on_boundary = vec![false; nv];
        for f in faces.iter().filter(|f| f.is_boundary()) {
            vertex_on_boundary[f.vertices[0]] = true;
            vertex_on_boundary[f.vertices[1]] = true;
        }
        let mut vertex_elements = vec![Vec::new(); nv];
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                vertex_elements[v].push(t);
            }
        }

        Ok(Self {
            vertices,
            triangles,
            faces,
            element_faces,
            areas,
            diameters,
            vertex_on_boundary,
            vertex_elements,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn element_vertices(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn element_faces(&self, t: usize) -> [usize; 3] {
        self.element_faces[t]
    }

    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    /// Element diameter `h_T` (longest edge).
    pub fn diameter(&self, t: usize) -> f64 {
        self.diameters[t]
    }

    /// Global mesh size `h = max h_T`.
    pub fn h(&self) -> f64 {
        self.diameters.iter().cloned().fold(0.0, f64::max)
    }

    pub fn vertex_on_boundary(&self, v: usize) -> bool {
        self.vertex_on_boundary[v]
    }

    /// Elements sharing vertex `v`, in increasing index order.
    pub fn vertex_elements(&self, v: usize) -> &[usize] {
        &self.vertex_elements[v]
    }

    /// The two sides of a face: `(element, Some(neighbor))` or `(element, None)`
    /// on the boundary.
    pub fn face_neighbors(&self, face: usize) -> (usize, Option<usize>) {
        self.faces[face].elements
    }

    /// Inscribed circle radius `rho_T = 2 |T| / perimeter`.
    pub fn inradius(&self, t: usize) -> f64 {
        let [a, b, c] = self.element_vertices(t);
        2.0 * self.areas[t] / (dist(a, b) + dist(b, c) + dist(c, a))
    }

    /// Shape-regularity constant `kappa = max_T h_T / rho_T`.
    pub fn shape_regularity(&self) -> f64 {
        (0..self.num_elements())
            .map(|t| self.diameters[t] / self.inradius(t))
            .fold(0.0, f64::max)
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.element_vertices(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Parses the plain-text mesh format: `NV NT`, then `NV` lines `x y`,
    /// then `NT` lines `v0 v1 v2` (0-based, counter-clockwise).
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let fmt_err = |line: usize, msg: String| Error::MeshFormat {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| fmt_err(1, "empty file".into()))?;
        let counts: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| fmt_err(hl, format!("bad header: {e}")))?;
        let [nv, nt] = counts[..] else {
            return Err(fmt_err(hl, "header must be `NV NT`".into()));
        };
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| fmt_err(hl, "unexpected end of file in vertex block".into()))?;
            let xy: Vec<f64> = l
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| fmt_err(ln, format!("bad vertex: {e}")))?;
            let [x, y] = xy[..] else {
                return Err(fmt_err(ln, "vertex line must be `x y`".into()));
            };
            vertices.push([x, y]);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| fmt_err(hl, "unexpected end of file in triangle block".into()))?;
            let idx: Vec<usize> = l
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| fmt_err(ln, format!("bad triangle: {e}")))?;
            let [a, b, c] = idx[..] else {
                return Err(fmt_err(ln, "triangle line must be `v0 v1 v2`".into()));
            };
            triangles.push([a, b, c]);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(fmt_err(ln, "trailing content after triangle block".into()));
        }
        Self::from_parts(vertices, triangles)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.num_vertices(), self.num_elements());
        for v in &self.vertices {
            let _ = writeln!(out, "{:?} {:?}", v[0], v[1]);
        }
        for t in &self.triangles {
            let _ = writeln!(out, "{} {} {}", t[0], t[1], t[2]);
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// `n x n` squares, each split along the same (lower-left to upper-right)
/// diagonal into two right isosceles triangles.
pub fn build_uniform_diagonal_mesh(domain: Rect, n: usize) -> Result<TriMesh> {
    if n == 0 {
        return Err(Error::InvalidMesh("n must be at least 1".into()));
    }
    let (w, h) = (domain.max[0] - domain.min[0], domain.max[1] - domain.min[1]);
    if !(w > 0.0 && h > 0.0) || !w.is_finite() || !h.is_finite() {
        return Err(Error::InvalidMesh(format!("degenerate rectangle {domain:?}")));
    }
    let stride = n + 1;
    let mut vertices = Vec::with_capacity(stride * stride);
    for j in 0..=n {
        for i in 0..=n {
            vertices.push([
                domain.min[0] + w * i as f64 / n as f64,
                domain.min[1] + h * j as f64 / n as f64,
            ]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            let v00 = j * stride + i;
            let v10 = v00 + 1;
            let v01 = v00 + stride;
            let v11 = v01 + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    TriMesh::from_parts(vertices, triangles)
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}
