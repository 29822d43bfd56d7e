//! Block-level checks of the assembled forms against hand computations.

use cutstokes::cases::{inclusion_radius, CaseKind, ManufacturedCase};
use cutstokes::fespace::{ElementPair, Slot};
use cutstokes::field::VelocityField;
use cutstokes::forms::{
    assemble_a, assemble_b, assemble_f, assemble_g, assemble_jp, assemble_nitsche, assemble_system,
    assemble_velocity_ghost, boundary_values, BoundaryValues, ExactSolution, FormParams, ProblemData,
};
use cutstokes::geometry::{LevelSet, Phase};
use cutstokes::mesh::{build_uniform_diagonal_mesh, Point, Rect, TriMesh};
use cutstokes::problem::Problem;
use cutstokes::sparse::SparseMatrix;
use faer::{Mat, Side};

fn problem(n: usize, phi: LevelSet, pair: ElementPair, depth: usize) -> Problem {
    let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), n).unwrap();
    Problem::new(mesh, phi, pair, depth, None).unwrap()
}

fn disk() -> LevelSet {
    LevelSet::circle([0.03, -0.02], inclusion_radius())
}

fn dense(m: &SparseMatrix) -> Mat<f64> {
    let d = m.to_dense();
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| d[i][j])
}

fn quad_form(m: &SparseMatrix, x: &[f64]) -> f64 {
    m.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Data given by closures, with everything else zero.
struct Data<F, G, L> {
    force: F,
    divergence: G,
    lambda: L,
}

impl<F, G, L> ProblemData for Data<F, G, L>
where
    F: Fn(Point) -> [f64; 2] + Sync,
    G: Fn(Point) -> f64 + Sync,
    L: Fn(Point) -> [f64; 2] + Sync,
{
    fn force(&self, _phase: Phase, x: Point) -> [f64; 2] {
        (self.force)(x)
    }

    fn divergence(&self, _phase: Phase, x: Point) -> f64 {
        (self.divergence)(x)
    }

    fn interface_force(&self, x: Point) -> [f64; 2] {
        (self.lambda)(x)
    }
}

fn zero_data() -> Data<impl Fn(Point) -> [f64; 2] + Sync, impl Fn(Point) -> f64 + Sync, impl Fn(Point) -> [f64; 2] + Sync> {
    Data {
        force: |_| [0.0; 2],
        divergence: |_| 0.0,
        lambda: |_| [0.0; 2],
    }
}

/// Constant boundary velocity in every phase.
struct ConstantFlow([f64; 2]);

impl ProblemData for ConstantFlow {
    fn force(&self, _phase: Phase, _x: Point) -> [f64; 2] {
        [0.0; 2]
    }

    fn boundary_velocity(&self, _phase: Phase, _x: Point) -> [f64; 2] {
        self.0
    }
}

/// The divergence-free field `u = (x2, x1)` with zero pressure.
struct Shear;

impl ExactSolution for Shear {
    fn velocity(&self, _phase: Phase, x: Point) -> [f64; 2] {
        [x[1], x[0]]
    }

    fn velocity_gradient(&self, _phase: Phase, _x: Point) -> [[f64; 2]; 2] {
        [[0.0, 1.0], [1.0, 0.0]]
    }

    fn pressure(&self, _phase: Phase, _x: Point) -> f64 {
        0.0
    }
}

impl ProblemData for Shear {
    fn force(&self, _phase: Phase, _x: Point) -> [f64; 2] {
        [0.0; 2]
    }

    fn boundary_velocity(&self, phase: Phase, x: Point) -> [f64; 2] {
        self.velocity(phase, x)
    }
}

fn params() -> FormParams {
    FormParams::new(0.3, 7.0, 25.0, 10.0, 15.0)
}

/// Whether a constant field has a nonzero coefficient at velocity node `n`;
/// bubble coefficients of constants vanish.
fn constant_node(p: &Problem, n: usize) -> bool {
    p.dofs.is_vertex_node(n) || p.dofs.pair() == ElementPair::P2P0
}

fn pressure_index(p: &Problem, phase: Phase, node: usize) -> usize {
    p.dofs.pressure_slot(phase, node).free().unwrap() - p.dofs.num_velocity()
}

#[test]
fn full_system_is_symmetric_with_a_zero_multiplier_diagonal() {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(8, disk(), pair, 3);
        let case = ManufacturedCase::new(CaseKind::PressureJump, 0.5, 20.0);
        let sys = p.assemble(&params(), &case).unwrap();
        assert!(sys.symmetry_error() <= 1e-12, "{pair}: {}", sys.symmetry_error());
        let last = sys.size() - 1;
        assert_eq!(sys.matrix.get(last, last), 0.0);
        assert!(sys.c.iter().any(|&c| c != 0.0));
    }
}

#[test]
fn velocity_block_is_positive_definite_at_default_gamma() {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(8, disk(), pair, 3);
        let bv = BoundaryValues::zero(&p.dofs);
        let a = assemble_a(&p.discretization(), &params(), &bv);
        assert!(dense(&a.matrix).llt(Side::Lower).is_ok(), "{pair}");
    }
}

/// Length of the zero segment of the linear interpolant of `phi` on `tri`.
fn straight_cut_length(tri: &[Point; 3], phi: &LevelSet) -> f64 {
    let v: Vec<f64> = tri.iter().map(|&x| phi.value(x)).collect();
    let mut zeros = Vec::new();
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        if (v[a] < 0.0) != (v[b] < 0.0) {
            let s = v[a] / (v[a] - v[b]);
            zeros.push([
                tri[a][0] + s * (tri[b][0] - tri[a][0]),
                tri[a][1] + s * (tri[b][1] - tri[a][1]),
            ]);
        }
    }
    assert_eq!(zeros.len(), 2);
    ((zeros[0][0] - zeros[1][0]).powi(2) + (zeros[0][1] - zeros[1][1]).powi(2)).sqrt()
}

fn longest_edge(tri: &[Point; 3]) -> f64 {
    [(0, 1), (1, 2), (2, 0)]
        .iter()
        .map(|&(a, b)| ((tri[a][0] - tri[b][0]).powi(2) + (tri[a][1] - tri[b][1]).powi(2)).sqrt())
        .fold(0.0, f64::max)
}

#[test]
fn interface_penalty_of_a_constant_jump_matches_segment_lengths() {
    // Without subdivision every interface piece is the straight zero segment
    // of the linear interpolant, so the penalty is a sum of segment lengths.
    let phi = disk();
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(16, phi.clone(), pair, 0);
        let disc = p.discretization();
        let params = params();
        let c = [0.6, -1.3];
        let mut u = vec![0.0; p.dofs.num_velocity()];
        for (n, slot) in p.dofs.velocity_slots(Phase::Plus).iter().enumerate() {
            if let (Slot::Free(i), true) = (*slot, constant_node(&p, n)) {
                u[i] = c[0];
                u[i + 1] = c[1];
            }
        }
        // The field is constant on every element the interface and ghost
        // terms see, because none of them reaches the outer boundary.
        let ghost_elements = p.classification.ghost_faces(Phase::Plus).iter().flat_map(|&f| {
            let (a, b) = p.mesh.faces()[f].elements;
            [Some(a), b].into_iter().flatten()
        });
        for t in p.classification.cut_elements().iter().copied().chain(ghost_elements) {
            for &n in p.dofs.element_velocity_nodes(t) {
                assert!(matches!(p.dofs.velocity_slot(Phase::Plus, n), Slot::Free(_)));
            }
        }
        let expected: f64 = p
            .classification
            .cut_elements()
            .iter()
            .map(|&t| {
                let tri = p.mesh.element_vertices(t);
                params.gamma / longest_edge(&tri) * params.nu[0] * straight_cut_length(&tri, &phi)
            })
            .sum::<f64>()
            * (c[0] * c[0] + c[1] * c[1]);
        let bv = BoundaryValues::zero(&p.dofs);
        let got = quad_form(&assemble_nitsche(&disc, &params, &bv).matrix, &u);
        assert!((got - expected).abs() <= 1e-12 * expected, "{pair}: {got} vs {expected}");
        let ghost = quad_form(&assemble_velocity_ghost(&disc, &params, &bv).matrix, &u);
        assert!(ghost.abs() <= 1e-12 * expected, "{pair}: ghost {ghost}");
    }
}

#[test]
fn divergence_of_constant_velocity_vanishes_without_interface() {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(4, LevelSet::Constant(-1.0), pair, 3);
        let data = ConstantFlow([1.0, -2.0]);
        let bv = boundary_values(&p.dofs, &data);
        let b = assemble_b(&p.discretization(), &bv);
        let mut u = vec![0.0; p.dofs.num_velocity()];
        for (n, slot) in p.dofs.velocity_slots(Phase::Minus).iter().enumerate() {
            if let (Slot::Free(i), true) = (*slot, constant_node(&p, n)) {
                u[i] = 1.0;
                u[i + 1] = -2.0;
            }
        }
        let bu = b.matrix.mul_vec(&u);
        let rows: Vec<f64> = bu.iter().zip(&b.lift).map(|(x, l)| x - l).collect();
        assert!(max_abs(&rows) <= 1e-13, "{pair}: {}", max_abs(&rows));
    }
}

#[test]
fn divergence_free_affine_field_is_in_the_kernel_of_b() {
    let p = problem(8, disk(), ElementPair::P2P0, 3);
    let bv = boundary_values(&p.dofs, &Shear);
    let b = assemble_b(&p.discretization(), &bv);
    let u = VelocityField::interpolate(&p.dofs, &Shear).free_coefficients(&p.dofs);
    let bu = b.matrix.mul_vec(&u);
    let rows: Vec<f64> = bu.iter().zip(&b.lift).map(|(x, l)| x - l).collect();
    assert!(max_abs(&rows) <= 1e-12, "{}", max_abs(&rows));
}

#[test]
fn p0_ghost_penalty_of_a_unit_jump() {
    let mesh = TriMesh::from_parts(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        vec![[0, 1, 2], [0, 2, 3]],
    )
    .unwrap();
    let p = Problem::new(mesh, LevelSet::half_plane(1.0, 0.0, -0.3), ElementPair::P2P0, 3, None).unwrap();
    assert_eq!(p.classification.cut_elements().len(), 2);
    let params = params();
    let j = assemble_jp(&p.discretization(), &params);
    let len = 2f64.sqrt();
    for phase in Phase::BOTH {
        let a = pressure_index(&p, phase, p.dofs.element_pressure_nodes(0)[0]);
        let b = pressure_index(&p, phase, p.dofs.element_pressure_nodes(1)[0]);
        // |e| times the integral of a unit jump over e.
        let expected = params.gamma_p[phase.index()] / params.nu(phase) * len * len;
        assert!((j.get(a, a) - expected).abs() <= 1e-13 * expected, "{phase:?}");
        assert!((j.get(a, b) + expected).abs() <= 1e-13 * expected, "{phase:?}");
        let mut q = vec![0.0; j.nrows()];
        q[a] = 1.0;
        assert!((quad_form(&j, &q) - expected).abs() <= 1e-13 * expected);
    }
}

#[test]
fn continuous_linear_pressure_has_no_ghost_penalty() {
    let p = problem(8, disk(), ElementPair::Mini, 3);
    let j = assemble_jp(&p.discretization(), &params());
    let mut q = vec![0.0; j.nrows()];
    for phase in Phase::BOTH {
        for (node, slot) in p.dofs.pressure_slots(phase).iter().enumerate() {
            if slot.is_active() {
                let x = p.dofs.pressure_nodes()[node];
                q[pressure_index(&p, phase, node)] = 0.7 - 1.1 * x[0] + 2.3 * x[1];
            }
        }
    }
    let jq = j.mul_vec(&q);
    assert!(max_abs(&jq) <= 1e-12 * j.max_abs(), "{}", max_abs(&jq));
}

#[test]
fn pressure_ghost_penalty_is_positive_semidefinite() {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(8, disk(), pair, 3);
        let j = assemble_jp(&p.discretization(), &params());
        assert!(j.asymmetry() <= 1e-14 * j.max_abs());
        let eig = dense(&j).self_adjoint_eigenvalues(Side::Lower).unwrap();
        let max = eig.iter().fold(0.0f64, |m, &e| m.max(e.abs()));
        assert!(eig.iter().all(|&e| e >= -1e-12 * max), "{pair}");
    }
}

#[test]
fn zero_data_gives_zero_loads() {
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(8, disk(), pair, 3);
        let disc = p.discretization();
        assert!(assemble_f(&disc, &zero_data()).iter().all(|&v| v == 0.0));
        assert!(assemble_g(&disc, &zero_data()).iter().all(|&v| v == 0.0));
    }
}

#[test]
fn unit_force_on_a_vertex_function_integrates_to_a_third_of_its_support() {
    let n = 4;
    let p = problem(n, LevelSet::Constant(-1.0), ElementPair::Mini, 3);
    let data = Data {
        force: |_| [1.0, 0.0],
        divergence: |_| 0.0,
        lambda: |_| [0.0; 2],
    };
    let f = assemble_f(&p.discretization(), &data);
    let h = 2.0 / n as f64;
    // Interior vertices of the diagonal mesh touch six triangles.
    let support = 6.0 * h * h / 2.0;
    let vertex = 2 * (n + 1) + 2;
    let i = p.dofs.velocity_slot(Phase::Minus, vertex).free().unwrap();
    assert!((f[i] - support / 3.0).abs() <= 1e-14);
    assert_eq!(f[i + 1], 0.0);
}

#[test]
fn interface_force_loads_only_plus_unknowns_of_cut_elements() {
    let p = problem(8, LevelSet::circle([0.0, 0.0], inclusion_radius()), ElementPair::P2P0, 3);
    let case = ManufacturedCase::new(CaseKind::PressureJump, 0.5, 2.0);
    let data = Data {
        force: |_| [0.0; 2],
        divergence: |_| 0.0,
        lambda: |x| case.interface_force(x),
    };
    let f = assemble_f(&p.discretization(), &data);
    let mut allowed = vec![false; f.len()];
    for &t in p.classification.cut_elements() {
        for &n in p.dofs.element_velocity_nodes(t) {
            if let Slot::Free(i) = p.dofs.velocity_slot(Phase::Plus, n) {
                allowed[i] = true;
                allowed[i + 1] = true;
            }
        }
    }
    assert!(f.iter().any(|&v| v != 0.0));
    for (i, &v) in f.iter().enumerate() {
        assert!(allowed[i] || v == 0.0, "entry {i} = {v}");
    }
}

#[test]
fn divergence_load_of_x1_on_p0_pressures() {
    let g = |x: Point| x[0];
    let data = Data {
        force: |_| [0.0; 2],
        divergence: g,
        lambda: |_| [0.0; 2],
    };
    let p = problem(4, LevelSet::Constant(-1.0), ElementPair::P2P0, 3);
    let loads = assemble_g(&p.discretization(), &data);
    for t in 0..p.mesh.num_elements() {
        let k = pressure_index(&p, Phase::Minus, p.dofs.element_pressure_nodes(t)[0]);
        let expected = -p.mesh.area(t) * g(p.mesh.centroid(t));
        assert!((loads[k] - expected).abs() <= 1e-14, "element {t}");
    }
    // The constant pressure sees the mean of g, which is zero, with or
    // without an interface.
    let cut = problem(8, disk(), ElementPair::P2P0, 3);
    let loads = assemble_g(&cut.discretization(), &data);
    assert!(loads.iter().sum::<f64>().abs() <= 1e-13);
}

#[test]
fn blocks_scale_with_the_viscosities() {
    let t = 3.7;
    for pair in [ElementPair::Mini, ElementPair::P2P0] {
        let p = problem(8, disk(), pair, 3);
        let base = params();
        let scaled = base.with_viscosity(t * base.nu[0], t * base.nu[1]);
        let data = zero_data();
        let s0 = assemble_system(&p.discretization(), &base, &data).unwrap();
        let s1 = assemble_system(&p.discretization(), &scaled, &data).unwrap();
        let a_diff = s1.a.max_abs_diff(&s0.a.scale(t));
        assert!(a_diff <= 1e-12 * s1.a.max_abs(), "{pair}: A {a_diff}");
        let j_diff = s1.j.max_abs_diff(&s0.j.scale(1.0 / t));
        assert!(j_diff <= 1e-12 * s1.j.max_abs(), "{pair}: J {j_diff}");
        assert_eq!(s1.b.max_abs_diff(&s0.b), 0.0, "{pair}: B");
    }
}
