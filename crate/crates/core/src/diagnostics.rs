//! Robustness and stability measurements: viscosity sweeps, a data-normalized
//! stability ratio, and the discrete inf-sup constant of the fitted pair.

use std::io::Write;

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cases::{inclusion_radius, CaseKind, ManufacturedCase};
use crate::error::{Error, Result};
use crate::fespace::{ElementMap, ElementPair, Slot};
use crate::forms::{assemble_b, BoundaryValues, ExactSolution, FormParams, ProblemData};
use crate::geometry::{LevelSet, Phase};
use crate::mesh::{build_uniform_diagonal_mesh, Point, Rect};
use crate::norms::compute_errors;
use crate::problem::{Problem, Solved};
use crate::quadrature::TriangleRule;

/// Contract quantities of one solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveContracts {
    pub symmetry: f64,
    pub residual: f64,
    pub constraint: f64,
}

impl SolveContracts {
    pub fn of(solved: &Solved) -> Self {
        Self {
            symmetry: solved.system.symmetry_error(),
            residual: solved.solution.relative_residual,
            constraint: solved.solution.constraint_error,
        }
    }

    /// Symmetry within 1e-12 and residual and constraint within 1e-10.
    pub fn hold(&self) -> bool {
        self.symmetry <= 1e-12 && self.residual <= 1e-10 && self.constraint <= 1e-10
    }
}

/// One row of a viscosity sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscosityRow {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub dofs: usize,
    pub e_u: f64,
    pub e_p: f64,
    pub contracts: SolveContracts,
}

/// Fixed mesh and stabilization for a viscosity sweep of a manufactured case.
#[derive(Debug, Clone, PartialEq)]
pub struct ViscosityStudy {
    pub kind: CaseKind,
    pub pair: ElementPair,
    pub n: usize,
    /// Penalty parameters; the viscosities are replaced per row.
    pub params: FormParams,
    pub depth: usize,
    pub order: Option<usize>,
}

/// Solves the case once per viscosity pair on a shared discretization.
pub fn viscosity_sweep(study: &ViscosityStudy, pairs: &[(f64, f64)]) -> Result<Vec<ViscosityRow>> {
    let probe = ManufacturedCase::new(study.kind, 1.0, 1.0);
    let mesh = build_uniform_diagonal_mesh(probe.domain(), study.n)?;
    let problem = Problem::new(mesh, probe.level_set(), study.pair, study.depth, study.order)
        .map_err(|e| Error::Level {
            n: study.n,
            source: Box::new(e),
        })?;
    pairs
        .iter()
        .map(|&(nu_minus, nu_plus)| {
            let case = ManufacturedCase::new(study.kind, nu_minus, nu_plus);
            let params = study.params.with_viscosity(nu_minus, nu_plus);
            let solved = problem.solve(&params, &case)?;
            let errors = compute_errors(&problem, &solved.velocity, &solved.pressure, Some(&case), params.nu)?;
            Ok(ViscosityRow {
                nu_minus,
                nu_plus,
                dofs: errors.dofs,
                e_u: errors.e_u,
                e_p: errors.e_p,
                contracts: SolveContracts::of(&solved),
            })
        })
        .collect()
}

/// Writes `nu_minus,nu_plus,dofs,e_u,e_p,symmetry,residual,constraint`
/// with every float at full precision.
pub fn write_viscosity_csv<W: Write>(rows: &[ViscosityRow], writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["nu_minus", "nu_plus", "dofs", "e_u", "e_p", "symmetry", "residual", "constraint"])?;
    for r in rows {
        let c = r.contracts;
        csv.write_record([
            r.nu_minus.to_string(),
            r.nu_plus.to_string(),
            r.dofs.to_string(),
            r.e_u.to_string(),
            r.e_p.to_string(),
            c.symmetry.to_string(),
            c.residual.to_string(),
            c.constraint.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Writes `nu_minus,nu_plus,offset_x,offset_y,ratio,residual`.
pub fn write_stability_csv<W: Write>(rows: &[StabilityRow], writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["nu_minus", "nu_plus", "offset_x", "offset_y", "ratio", "residual"])?;
    for r in rows {
        csv.write_record([
            r.nu_minus.to_string(),
            r.nu_plus.to_string(),
            r.offset_x.to_string(),
            r.offset_y.to_string(),
            r.ratio.to_string(),
            r.contracts.residual.to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Largest relative deviation of `values` from their first entry.
pub fn relative_spread(values: &[f64]) -> f64 {
    let Some(&first) = values.first() else {
        return 0.0;
    };
    values.iter().map(|v| ((v - first) / first).abs()).fold(0.0, f64::max)
}

/// Smooth viscosity-independent data used by the stability probe.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProbeData;

impl ProblemData for ProbeData {
    fn force(&self, _phase: Phase, x: Point) -> [f64; 2] {
        [(std::f64::consts::PI * x[1]).sin() + x[0], 1.0 - x[0] * x[1]]
    }

    fn interface_force(&self, x: Point) -> [f64; 2] {
        [0.5 * x[0], 0.5 * x[1] + 0.25]
    }
}

/// The zero field, so that errors against it are norms of the discrete
/// solution.
struct Zero;

impl ExactSolution for Zero {
    fn velocity(&self, _phase: Phase, _x: Point) -> [f64; 2] {
        [0.0; 2]
    }

    fn velocity_gradient(&self, _phase: Phase, _x: Point) -> [[f64; 2]; 2] {
        [[0.0; 2]; 2]
    }

    fn pressure(&self, _phase: Phase, _x: Point) -> f64 {
        0.0
    }
}

/// Settings of the stability probe.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityProbe {
    pub pair: ElementPair,
    pub n: usize,
    pub params: FormParams,
    pub viscosities: Vec<(f64, f64)>,
    pub offsets: Vec<[f64; 2]>,
    pub depth: usize,
}

impl StabilityProbe {
    /// `count` circle offsets drawn uniformly from `[-max, max]^2`.
    pub fn random_offsets(count: usize, max: f64, seed: u64) -> Vec<[f64; 2]> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| [rng.random_range(-max..=max), rng.random_range(-max..=max)])
            .collect()
    }
}

/// One cell of the stability grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityRow {
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub offset_x: f64,
    pub offset_y: f64,
    pub ratio: f64,
    pub contracts: SolveContracts,
}

/// Computes `(|nu D(u_h)| + |p_h|) / (|f| + |lambda|_Γ + |nu g|)` for a
/// circular minus inclusion at every offset and viscosity pair.
pub fn stability_probe(probe: &StabilityProbe) -> Result<Vec<StabilityRow>> {
    let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), probe.n)?;
    let data = ProbeData;
    let mut rows = Vec::with_capacity(probe.offsets.len() * probe.viscosities.len());
    for &offset in &probe.offsets {
        let level_set = LevelSet::circle(offset, inclusion_radius());
        let problem = Problem::new(mesh.clone(), level_set, probe.pair, probe.depth, None)
            .map_err(|e| Error::Level {
                n: probe.n,
                source: Box::new(e),
            })?;
        let force = data_norm(&problem, &data);
        for &(nu_minus, nu_plus) in &probe.viscosities {
            let params = probe.params.with_viscosity(nu_minus, nu_plus);
            let solved = problem.solve(&params, &data)?;
            let norms = compute_errors(&problem, &solved.velocity, &solved.pressure, Some(&Zero), params.nu)?;
            rows.push(StabilityRow {
                nu_minus,
                nu_plus,
                offset_x: offset[0],
                offset_y: offset[1],
                ratio: (norms.e_u + norms.e_p) / force,
                contracts: SolveContracts::of(&solved),
            });
        }
    }
    Ok(rows)
}

/// `|f|_Ω + |lambda|_Γ`; the probe data has `g = 0`.
fn data_norm(problem: &Problem, data: &dyn ProblemData) -> f64 {
    let q = &problem.quadrature;
    let f2: f64 = Phase::BOTH
        .iter()
        .map(|&phase| {
            q.integrate(&problem.mesh, phase, |x| {
                let f = data.force(phase, x);
                f[0] * f[0] + f[1] * f[1]
            })
        })
        .sum();
    let l2 = q.integrate_interface(|p| {
        let l = data.interface_force(p.x);
        l[0] * l[0] + l[1] * l[1]
    });
    f2.sqrt() + l2.sqrt()
}

/// Result of the discrete inf-sup computation.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct InfSupEstimate {
    pub n: usize,
    pub pair: ElementPair,
    /// Smallest nonzero generalized singular value of `B`.
    pub xi: f64,
    /// Generalized eigenvalues of `B H^-1 B^T` below `1e-10` times the
    /// largest; the constant pressure gives exactly one.
    pub zero_modes: usize,
}

/// Largest fitted system (velocity plus pressure unknowns) accepted by the
/// dense eigensolve.
pub const MAX_INFSUP_DOFS: usize = 5000;

/// Inf-sup constant of the pair on the uniform mesh of the unit-area square
/// `(-1, 1)^2` without interface, from the dense generalized eigenproblem
/// `B H^-1 B^T q = sigma^2 M q` with the H1 velocity Gram `H` and the L2
/// pressure Gram `M`.
pub fn infsup_estimate(n: usize, pair: ElementPair) -> Result<InfSupEstimate> {
    let mesh = build_uniform_diagonal_mesh(Rect::reference_square(), n)?;
    let problem = Problem::new(mesh, LevelSet::Constant(-1.0), pair, 1, None)?;
    let dofs = &problem.dofs;
    let (nv, np) = (dofs.num_velocity(), dofs.num_pressure());
    if nv + np > MAX_INFSUP_DOFS {
        return Err(Error::InvalidParameter {
            name: "n",
            msg: format!("{} unknowns exceed the dense limit {MAX_INFSUP_DOFS}", nv + np),
        });
    }
    let b = assemble_b(&problem.discretization(), &BoundaryValues::zero(dofs)).matrix;
    let (h1, l2) = gram_matrices(&problem);

    let h1 = h1.llt(Side::Lower).map_err(|e| Error::Eigen(format!("velocity Gram: {e:?}")))?;
    let bt = Mat::<f64>::from_fn(nv, np, |i, j| b.get(j, i));
    let y = h1.solve(&bt);
    let bd = Mat::<f64>::from_fn(np, nv, |i, j| b.get(i, j));
    let s = &bd * &y;
    let m = l2.llt(Side::Lower).map_err(|e| Error::Eigen(format!("pressure Gram: {e:?}")))?;
    let l = m.L();
    // C = L^-1 S L^-T shares the generalized eigenvalues.
    let mut c = s.clone();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, c.as_mut(), faer::Par::Seq);
    let mut ct = c.transpose().to_owned();
    faer::linalg::triangular_solve::solve_lower_triangular_in_place(l, ct.as_mut(), faer::Par::Seq);
    let sym = Mat::<f64>::from_fn(np, np, |i, j| 0.5 * (ct[(i, j)] + ct[(j, i)]));
    let eig = sym
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let largest = eig.last().copied().unwrap_or(0.0);
    let threshold = 1e-10 * largest;
    let zero_modes = eig.iter().filter(|&&v| v.abs() <= threshold).count();
    let xi = eig
        .iter()
        .find(|&&v| v > threshold)
        .map(|v| v.sqrt())
        .ok_or_else(|| Error::Eigen("no nonzero eigenvalue".into()))?;
    Ok(InfSupEstimate {
        n,
        pair,
        xi,
        zero_modes,
    })
}

/// Dense H1 Gram of the free velocity unknowns and L2 Gram of the pressures
/// of a problem without interface.
fn gram_matrices(problem: &Problem) -> (Mat<f64>, Mat<f64>) {
    let dofs = &problem.dofs;
    let mesh = &problem.mesh;
    let (nv, np) = (dofs.num_velocity(), dofs.num_pressure());
    let ve = dofs.velocity_element();
    let pe = dofs.pressure_element();
    let rule = TriangleRule::new(2 * ve.degree());
    let vslots = dofs.velocity_slots(Phase::Minus);
    let pslots = dofs.pressure_slots(Phase::Minus);
    let mut h1 = Mat::<f64>::zeros(nv, nv);
    let mut l2 = Mat::<f64>::zeros(np, np);
    for t in 0..mesh.num_elements() {
        let tri = mesh.element_vertices(t);
        let map = ElementMap::new(&tri);
        let vn = dofs.element_velocity_nodes(t);
        let pn = dofs.element_pressure_nodes(t);
        for (x, w) in rule.map_to(&tri) {
            let s = ve.eval_physical(&map, x);
            for (a, &na) in vn.iter().enumerate() {
                let Slot::Free(i) = vslots[na] else { continue };
                for (b, &nb) in vn.iter().enumerate() {
                    let Slot::Free(j) = vslots[nb] else { continue };
                    let v = w * (s.values[a] * s.values[b]
                        + s.gradients[a][0] * s.gradients[b][0]
                        + s.gradients[a][1] * s.gradients[b][1]);
                    h1[(i, j)] += v;
                    h1[(i + 1, j + 1)] += v;
                }
            }
            let q = pe.values(map.to_reference(x));
            for (a, &na) in pn.iter().enumerate() {
                let Slot::Free(i) = pslots[na] else { continue };
                for (b, &nb) in pn.iter().enumerate() {
                    let Slot::Free(j) = pslots[nb] else { continue };
                    l2[(i - nv, j - nv)] += w * q[a] * q[b];
                }
            }
        }
    }
    (h1, l2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_of_constant_values_is_zero() {
        assert_eq!(relative_spread(&[2.0, 2.0, 2.0]), 0.0);
        assert!((relative_spread(&[1.0, 1.1, 0.95]) - 0.1).abs() < 1e-12);
        assert_eq!(relative_spread(&[]), 0.0);
    }

    #[test]
    fn mini_infsup_is_positive_with_one_zero_mode() {
        let e = infsup_estimate(4, ElementPair::Mini).unwrap();
        assert_eq!(e.zero_modes, 1);
        assert!(e.xi > 0.05, "xi = {}", e.xi);
    }

    #[test]
    fn infsup_is_mesh_uniform() {
        for pair in ElementPair::ALL {
            let coarse = infsup_estimate(4, pair).unwrap();
            let fine = infsup_estimate(8, pair).unwrap();
            assert_eq!(fine.zero_modes, 1, "{pair}");
            let change = (fine.xi - coarse.xi).abs() / coarse.xi;
            assert!(change < 0.25, "{pair}: {} -> {}", coarse.xi, fine.xi);
        }
    }

    #[test]
    fn dense_limit_is_enforced() {
        assert!(matches!(infsup_estimate(64, ElementPair::P2P0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn viscosity_sweep_rows_are_close() {
        let study = ViscosityStudy {
            kind: CaseKind::Rotational { inclusion: Phase::Minus },
            pair: ElementPair::P2P0,
            n: 16,
            params: FormParams::new(1.0, 1.0, 20.0, 10.0, 15.0),
            depth: 4,
            order: None,
        };
        let rows = viscosity_sweep(&study, &[(0.1, 10.0), (0.01, 100.0)]).unwrap();
        assert_eq!(rows.len(), 2);
        let e_u: Vec<f64> = rows.iter().map(|r| r.e_u).collect();
        assert!(relative_spread(&e_u) < 1e-2);
        assert!(rows.iter().all(|r| r.contracts.hold()));
    }

    #[test]
    fn stability_ratio_is_viscosity_robust() {
        let probe = StabilityProbe {
            pair: ElementPair::P2P0,
            n: 16,
            params: FormParams::new(1.0, 1.0, 20.0, 10.0, 15.0),
            viscosities: vec![(1.0, 1.0), (1e-2, 1e2)],
            offsets: vec![[0.0, 0.0]],
            depth: 4,
        };
        let rows = stability_probe(&probe).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0));
        assert!(rows[1].ratio < 2.0 * rows[0].ratio);
    }
}
