//! An independent fitted Stokes assembly on the uniform diagonal mesh,
//! built from closed-form barycentric bases and a seven-point rule.

use std::collections::HashMap;

use cutstokes::fespace::ElementPair;
use cutstokes::forms::{FormParams, ProblemData};
use cutstokes::geometry::{LevelSet, Phase};
use cutstokes::mesh::{build_uniform_diagonal_mesh, Point, Rect, TriMesh};
use cutstokes::problem::Problem;
use cutstokes::solver::Solution;
use cutstokes::sparse::SparseMatrix;
use faer::linalg::solvers::Solve;
use faer::Mat;

/// Polynomial force, integrated exactly by both quadratures.
pub struct Force;

impl ProblemData for Force {
    fn force(&self, _phase: Phase, x: Point) -> [f64; 2] {
        [x[0] * x[1] + 1.0, x[0] * x[0] - x[1]]
    }
}

/// Radon's degree-5 rule: barycentric points and weights summing to one.
fn seven_point_rule() -> Vec<([f64; 3], f64)> {
    let r = 15f64.sqrt();
    let (a1, b1, w1) = ((9.0 - 2.0 * r) / 21.0, (6.0 + r) / 21.0, (155.0 + r) / 1200.0);
    let (a2, b2, w2) = ((9.0 + 2.0 * r) / 21.0, (6.0 - r) / 21.0, (155.0 - r) / 1200.0);
    let mut rule = vec![([1.0 / 3.0; 3], 9.0 / 40.0)];
    for (a, b, w) in [(a1, b1, w1), (a2, b2, w2)] {
        rule.push(([a, b, b], w));
        rule.push(([b, a, b], w));
        rule.push(([b, b, a], w));
    }
    rule
}

/// A local shape function: its position, value and physical gradient.
struct Shape {
    at: Point,
    value: f64,
    grad: [f64; 2],
}

/// Velocity shape functions of one element at barycentric point `l`, where
/// `g[i]` is the gradient of `l[i]`.
fn velocity_shapes(pair: ElementPair, tri: &[Point; 3], l: [f64; 3], g: &[[f64; 2]; 3]) -> Vec<Shape> {
    let mid = |i: usize, j: usize| [(tri[i][0] + tri[j][0]) / 2.0, (tri[i][1] + tri[j][1]) / 2.0];
    let mut out = Vec::new();
    match pair {
        ElementPair::Mini => {
            for i in 0..3 {
                out.push(Shape {
                    at: tri[i],
                    value: l[i],
                    grad: g[i],
                });
            }
            let centroid = [
                (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
                (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
            ];
            let grad = [0, 1].map(|c| g[0][c] * l[1] * l[2] + l[0] * g[1][c] * l[2] + l[0] * l[1] * g[2][c]);
            out.push(Shape {
                at: centroid,
                value: l[0] * l[1] * l[2],
                grad,
            });
        }
        ElementPair::P2P0 => {
            for i in 0..3 {
                out.push(Shape {
                    at: tri[i],
                    value: l[i] * (2.0 * l[i] - 1.0),
                    grad: [0, 1].map(|c| (4.0 * l[i] - 1.0) * g[i][c]),
                });
            }
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                out.push(Shape {
                    at: mid(i, j),
                    value: 4.0 * l[i] * l[j],
                    grad: [0, 1].map(|c| 4.0 * (g[i][c] * l[j] + l[i] * g[j][c])),
                });
            }
        }
    }
    out
}

fn pressure_shapes(pair: ElementPair, tri: &[Point; 3], l: [f64; 3]) -> Vec<(Point, f64)> {
    match pair {
        ElementPair::Mini => (0..3).map(|i| (tri[i], l[i])).collect(),
        ElementPair::P2P0 => vec![(
            [
                (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
                (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
            ],
            1.0,
        )],
    }
}

fn key(x: Point) -> (i64, i64) {
    ((x[0] * 1e9).round() as i64, (x[1] * 1e9).round() as i64)
}

/// Fitted matrices indexed like the cut code's free unknowns.
pub struct Fitted {
    pub a: Mat<f64>,
    pub b: Mat<f64>,
    pub c: Vec<f64>,
    pub f: Vec<f64>,
}

pub fn assemble_fitted(mesh: &TriMesh, pair: ElementPair, nu: f64, p: &Problem) -> Fitted {
    let mut velocity = HashMap::new();
    for (node, slot) in p.dofs.velocity_slots(Phase::Minus).iter().enumerate() {
        if let Some(i) = slot.free() {
            velocity.insert(key(p.dofs.velocity_nodes()[node]), i);
        }
    }
    let mut pressure = HashMap::new();
    for (node, slot) in p.dofs.pressure_slots(Phase::Minus).iter().enumerate() {
        let k = slot.free().unwrap() - p.dofs.num_velocity();
        pressure.insert(key(p.dofs.pressure_nodes()[node]), k);
    }
    let (nv, np) = (p.dofs.num_velocity(), p.dofs.num_pressure());
    let mut out = Fitted {
        a: Mat::zeros(nv, nv),
        b: Mat::zeros(np, nv),
        c: vec![0.0; np],
        f: vec![0.0; nv],
    };
    let rule = seven_point_rule();
    for tri in mesh.triangles() {
        let x: [Point; 3] = tri.map(|v| mesh.vertices()[v]);
        let det = (x[1][0] - x[0][0]) * (x[2][1] - x[0][1]) - (x[2][0] - x[0][0]) * (x[1][1] - x[0][1]);
        let area = det.abs() / 2.0;
        // grad l_i = perp(x_{i+2} - x_{i+1}) / det.
        let g: [[f64; 2]; 3] = [0, 1, 2].map(|i| {
            let (p1, p2) = (x[(i + 1) % 3], x[(i + 2) % 3]);
            [(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det]
        });
        for &(l, w) in &rule {
            let w = w * area;
            let pt = [0, 1].map(|c| l[0] * x[0][c] + l[1] * x[1][c] + l[2] * x[2][c]);
            let vs = velocity_shapes(pair, &x, l, &g);
            let ps = pressure_shapes(pair, &x, l);
            let force = Force.force(Phase::Minus, pt);
            for (at, q) in &ps {
                let k = pressure[&key(*at)];
                out.c[k] += w * q;
                for v in &vs {
                    let Some(&j) = velocity.get(&key(v.at)) else { continue };
                    for comp in 0..2 {
                        out.b[(k, j + comp)] -= w * q * v.grad[comp];
                    }
                }
            }
            for vi in &vs {
                let Some(&i) = velocity.get(&key(vi.at)) else { continue };
                for comp in 0..2 {
                    out.f[i + comp] += w * force[comp] * vi.value;
                }
                for vj in &vs {
                    let Some(&j) = velocity.get(&key(vj.at)) else { continue };
                    let dot = vi.grad[0] * vj.grad[0] + vi.grad[1] * vj.grad[1];
                    // (nu D(phi_j e_b), D(phi_i e_a)).
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut v = vj.grad[a] * vi.grad[b];
                            if a == b {
                                v += dot;
                            }
                            out.a[(i + a, j + b)] += 0.5 * nu * w * v;
                        }
                    }
                }
            }
        }
    }
    out
}

fn max_dense_diff(code: &SparseMatrix, mine: &Mat<f64>) -> (f64, f64) {
    let d = code.to_dense();
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 0..mine.nrows() {
        for j in 0..mine.ncols() {
            diff = diff.max((d[i][j] - mine[(i, j)]).abs());
            scale = scale.max(mine[(i, j)].abs());
        }
    }
    (diff, scale)
}

/// Largest deviations of the uncut cut-code system from the fitted one.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReductionReport {
    /// Relative entry-wise differences of `A` and `B`.
    pub a: f64,
    pub b: f64,
    /// Largest entry of the pressure ghost penalty, which must be empty.
    pub j: f64,
    /// Absolute differences of the constraint and load vectors.
    pub c: f64,
    pub f: f64,
    /// Absolute difference of the solution vectors.
    pub solution: f64,
}

impl ReductionReport {
    pub fn matrices_match(&self, tol: f64) -> bool {
        self.a <= tol && self.b <= tol && self.j == 0.0
    }
}

/// Compares the cut discretization with `phi = -1` and equal viscosities to
/// the fitted one on the `n x n` mesh, returning the code's own solution too.
pub fn compare_with_fitted(pair: ElementPair, n: usize, nu: f64) -> (ReductionReport, Solution) {
    let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), n).unwrap();
    let p = Problem::new(mesh.clone(), LevelSet::Constant(-1.0), pair, 3, None).unwrap();
    let params = FormParams::new(nu, nu, 20.0, 10.0, 15.0);
    let sys = p.assemble(&params, &Force).unwrap();
    let fitted = assemble_fitted(&mesh, pair, nu, &p);
    let max_diff = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let (da, sa) = max_dense_diff(&sys.a, &fitted.a);
    let (db, sb) = max_dense_diff(&sys.b, &fitted.b);
    let mut report = ReductionReport {
        a: da / sa,
        b: db / sb,
        j: sys.j.max_abs(),
        c: max_diff(&sys.c, &fitted.c),
        f: max_diff(&sys.f, &fitted.f),
        solution: 0.0,
    };

    // Bordered fitted system solved by dense LU.
    let (nv, np) = (fitted.a.nrows(), fitted.b.nrows());
    let size = nv + np + 1;
    let mut k = Mat::<f64>::zeros(size, size);
    let mut rhs = Mat::<f64>::zeros(size, 1);
    for i in 0..nv {
        rhs[(i, 0)] = fitted.f[i];
        for j in 0..nv {
            k[(i, j)] = fitted.a[(i, j)];
        }
    }
    for r in 0..np {
        for j in 0..nv {
            k[(nv + r, j)] = fitted.b[(r, j)];
            k[(j, nv + r)] = fitted.b[(r, j)];
        }
        k[(nv + r, size - 1)] = fitted.c[r];
        k[(size - 1, nv + r)] = fitted.c[r];
    }
    let x = k.partial_piv_lu().solve(&rhs);
    let solved = p.solve(&params, &Force).unwrap();
    let s = solved.solution;
    report.solution = s
        .velocity
        .iter()
        .chain(&s.pressure)
        .enumerate()
        .map(|(i, v)| (v - x[(i, 0)]).abs())
        .fold(0.0, f64::max);
    (report, s)
}
