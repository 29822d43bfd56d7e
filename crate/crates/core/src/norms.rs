//! Error quantities, discrete norms and empirical convergence rates.

use faer::linalg::solvers::Solve;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{PressureField, VelocityField};
use crate::forms::{face_jump_matrix, ExactSolution};
use crate::geometry::Phase;
use crate::mesh::Point;
use crate::problem::Problem;

/// Errors against an exact solution. The `e_inf_*` entries are maxima over
/// all subdomain quadrature points, with the Frobenius norm for the stress.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ErrorReport {
    /// `|nu D(u - u_h)|_{L2(Ω)}`.
    pub e_u: f64,
    /// `|p - p_h|_{L2(Ω)}`.
    pub e_p: f64,
    /// `sqrt(e_u^2 + e_p^2)`.
    pub e_up: f64,
    /// `|div(u - u_h)|_{L2(Ω)}`.
    pub e_div: f64,
    /// `max |nu D(u - u_h)|`.
    pub e_inf_u: f64,
    /// `max |p - p_h|`.
    pub e_inf_p: f64,
    pub dofs: usize,
    pub h: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    u: f64,
    p: f64,
    div: f64,
    inf_u: f64,
    inf_p: f64,
}

impl Partial {
    fn merge(self, o: Partial) -> Partial {
        Partial {
            u: self.u + o.u,
            p: self.p + o.p,
            div: self.div + o.div,
            inf_u: self.inf_u.max(o.inf_u),
            inf_p: self.inf_p.max(o.inf_p),
        }
    }
}

fn sym_frobenius2(g: [[f64; 2]; 2]) -> f64 {
    let off = 0.5 * (g[0][1] + g[1][0]);
    g[0][0] * g[0][0] + g[1][1] * g[1][1] + 2.0 * off * off
}

/// Accumulates every error quantity phase by phase: the minus polynomial on
/// `Ω-` quadrature and the plus polynomial on `Ω+` quadrature.
pub fn compute_errors(
    problem: &Problem,
    velocity: &VelocityField,
    pressure: &PressureField,
    exact: Option<&dyn ExactSolution>,
    nu: [f64; 2],
) -> Result<ErrorReport> {
    let exact = exact.ok_or(Error::MissingExactSolution)?;
    let mesh = &problem.mesh;
    let dofs = &problem.dofs;
    let elements: Vec<usize> = (0..mesh.num_elements()).collect();
    // Fixed chunking keeps the summation order independent of the thread
    // count.
    let parts: Vec<Partial> = elements
        .par_chunks(256)
        .map(|chunk| {
            let mut acc = Partial::default();
            for &t in chunk {
                for phase in Phase::BOTH {
                    if !problem.classification.is_active(t, phase) {
                        continue;
                    }
                    let nu = nu[phase.index()];
                    for (x, w) in problem.quadrature.side(mesh, t, phase) {
                        let uh = velocity.sample(dofs, mesh, t, phase, x);
                        let gu = exact.velocity_gradient(phase, x);
                        let mut g = [[0.0; 2]; 2];
                        for i in 0..2 {
                            for j in 0..2 {
                                g[i][j] = gu[i][j] - uh.gradient[i][j];
                            }
                        }
                        let d2 = nu * nu * sym_frobenius2(g);
                        let div = g[0][0] + g[1][1];
                        let dp = exact.pressure(phase, x) - pressure.sample(dofs, mesh, t, phase, x);
                        acc.u += w * d2;
                        acc.div += w * div * div;
                        acc.p += w * dp * dp;
                        acc.inf_u = acc.inf_u.max(d2.sqrt());
                        acc.inf_p = acc.inf_p.max(dp.abs());
                    }
                }
            }
            acc
        })
        .collect();
    let total = parts.into_iter().fold(Partial::default(), Partial::merge);
    let (e_u, e_p) = (total.u.sqrt(), total.p.sqrt());
    Ok(ErrorReport {
        e_u,
        e_p,
        e_up: (e_u * e_u + e_p * e_p).sqrt(),
        e_div: total.div.sqrt(),
        e_inf_u: total.inf_u,
        e_inf_p: total.inf_p,
        dofs: dofs.num_dofs(),
        h: mesh.h(),
    })
}

/// Empirical rates `log(e_j / e_{j-1}) / log(h_j / h_{j-1})`. The first level
/// has no rate, nor does any level where either error is not positive.
pub fn convergence_rates(values: &[f64], hs: &[f64]) -> Result<Vec<Option<f64>>> {
    if values.len() != hs.len() || values.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "levels",
            msg: format!("need at least two levels with one h each, got {} and {}", values.len(), hs.len()),
        });
    }
    if hs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidParameter {
            name: "h",
            msg: "mesh sizes must be strictly decreasing".into(),
        });
    }
    let mut out = vec![None];
    for j in 1..values.len() {
        let (a, b) = (values[j - 1], values[j]);
        out.push((a > 0.0 && b > 0.0).then(|| (b / a).ln() / (hs[j] / hs[j - 1]).ln()));
    }
    Ok(out)
}

/// Squared contributions of each layer of a velocity norm.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct VelocityLayers {
    /// `|D(v)|^2_Ω`, weighted by `nu^2` in the scaled norm.
    pub bulk: f64,
    /// `sum_T |[v]|^2_{T_Γ} / h_T`, weighted by `(nu-)^2` in the scaled norm.
    pub interface: f64,
    /// Ghost-penalty layers `[minus, plus]`.
    pub ghost: [f64; 2],
    /// `sum_T h_T |nu- D(v-)|^2_{T_Γ}`; only part of the augmented norm.
    pub flux: f64,
}

/// Squared contributions of the pressure norm of one phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct PressureLayers {
    pub bulk: f64,
    pub ghost: f64,
}

/// All discrete norms of a velocity/pressure pair, with their layers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct DiscreteNorms {
    /// `|v|_{1,h}`.
    pub one_h: f64,
    /// `|v|_{1,h,nu}`.
    pub one_h_nu: f64,
    /// `|v|_{1,h,nu,*}`.
    pub one_h_nu_star: f64,
    /// `[|q-|_{-,h}, |q+|_{+,h}]`.
    pub pressure: [f64; 2],
    /// `(|q-|^2_{-,h} + |q+|^2_{+,h})^{1/2}`.
    pub pressure_total: f64,
    pub unscaled: VelocityLayers,
    pub scaled: VelocityLayers,
    pub pressure_layers: [PressureLayers; 2],
}

/// Evaluates the discrete velocity norms (`nu` weights the scaled ones) and
/// the discrete pressure norms.
pub fn discrete_norms(problem: &Problem, v: &VelocityField, q: &PressureField, nu: [f64; 2]) -> DiscreteNorms {
    let mesh = &problem.mesh;
    let dofs = &problem.dofs;
    let cls = &problem.classification;
    let disc = problem.discretization();
    let pair = dofs.pair();

    let mut bulk = [0.0; 2];
    let mut pbulk = [0.0; 2];
    for t in 0..mesh.num_elements() {
        for phase in Phase::BOTH {
            if !cls.is_active(t, phase) {
                continue;
            }
            for (x, w) in problem.quadrature.side(mesh, t, phase) {
                bulk[phase.index()] += w * sym_frobenius2(v.sample(dofs, mesh, t, phase, x).gradient);
                let qv = q.sample(dofs, mesh, t, phase, x);
                pbulk[phase.index()] += w * qv * qv;
            }
        }
    }

    let mut interface = 0.0;
    let mut flux = 0.0;
    for &t in cls.cut_elements() {
        let h = mesh.diameter(t);
        for ip in problem.quadrature.interface(t) {
            let vm = v.sample(dofs, mesh, t, Phase::Minus, ip.x);
            let vp = v.sample(dofs, mesh, t, Phase::Plus, ip.x);
            let jump = [vp.value[0] - vm.value[0], vp.value[1] - vm.value[1]];
            interface += ip.weight * (jump[0] * jump[0] + jump[1] * jump[1]) / h;
            flux += ip.weight * h * nu[0] * nu[0] * sym_frobenius2(vm.gradient);
        }
    }

    let face_form = |phase: Phase, element: &crate::fespace::ReferenceElement, orders: &[usize], exponent: i32, npts: usize, coeffs: &dyn Fn(usize) -> Vec<Vec<f64>>| -> f64 {
        let mut total = 0.0;
        for &f in cls.ghost_faces(phase) {
            let face = &mesh.faces()[f];
            let len = face.length;
            let m = face_jump_matrix(&disc, element, f, orders, |l| len.powi(2 * l as i32 + exponent), npts);
            let (t1, t2) = (face.elements.0, face.elements.1.expect("ghost face is interior"));
            let mut c1 = coeffs(t1);
            c1.extend(coeffs(t2));
            let n = c1.len();
            let ncomp = c1[0].len();
            for comp in 0..ncomp {
                for a in 0..n {
                    for b in 0..n {
                        total += c1[a][comp] * m[a * n + b] * c1[b][comp];
                    }
                }
            }
        }
        total
    };

    let mut ghost = [0.0; 2];
    let mut pghost = [0.0; 2];
    for phase in Phase::BOTH {
        let vel = |t: usize| -> Vec<Vec<f64>> {
            dofs.element_velocity_nodes(t)
                .iter()
                .map(|&n| v.values[phase.index()][n].to_vec())
                .collect()
        };
        let orders: Vec<usize> = (1..=pair.s()).collect();
        ghost[phase.index()] = face_form(phase, dofs.velocity_element(), &orders, -1, pair.s() + 1, &vel);
        let pre = |t: usize| -> Vec<Vec<f64>> {
            dofs.element_pressure_nodes(t)
                .iter()
                .map(|&n| vec![q.values[phase.index()][n]])
                .collect()
        };
        let porders: Vec<usize> = (0..=pair.k_p()).collect();
        pghost[phase.index()] = face_form(phase, dofs.pressure_element(), &porders, 1, pair.s() + 1, &pre);
    }

    let unscaled = VelocityLayers {
        bulk: bulk[0] + bulk[1],
        interface,
        ghost,
        flux,
    };
    let scaled = VelocityLayers {
        bulk: nu[0] * nu[0] * bulk[0] + nu[1] * nu[1] * bulk[1],
        interface: nu[0] * nu[0] * interface,
        ghost: [nu[0] * nu[0] * ghost[0], nu[1] * nu[1] * ghost[1]],
        flux,
    };
    let sum = |l: &VelocityLayers| l.bulk + l.interface + l.ghost[0] + l.ghost[1];
    let pressure_layers = [0, 1].map(|i| PressureLayers {
        bulk: pbulk[i],
        ghost: pghost[i],
    });
    let pressure = pressure_layers.map(|l| (l.bulk + l.ghost).sqrt());
    DiscreteNorms {
        one_h: sum(&unscaled).sqrt(),
        one_h_nu: sum(&scaled).sqrt(),
        one_h_nu_star: (sum(&scaled) + flux).sqrt(),
        pressure,
        pressure_total: (pressure[0] * pressure[0] + pressure[1] * pressure[1]).sqrt(),
        unscaled,
        scaled,
        pressure_layers,
    }
}

/// Coefficients `(a, b, c)` of the L2 projection of `values` onto the rigid
/// motions `(a - c y, b + c x)` with respect to the weighted points.
pub fn rigid_body_projection(points: &[(Point, f64)], values: &[[f64; 2]]) -> Result<[f64; 3]> {
    let mut gram = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&(x, w), v) in points.iter().zip(values) {
        let basis = [[1.0, 0.0], [0.0, 1.0], [-x[1], x[0]]];
        for i in 0..3 {
            rhs[i] += w * (basis[i][0] * v[0] + basis[i][1] * v[1]);
            for j in 0..3 {
                gram[i][j] += w * (basis[i][0] * basis[j][0] + basis[i][1] * basis[j][1]);
            }
        }
    }
    let g = faer::Mat::<f64>::from_fn(3, 3, |i, j| gram[i][j]);
    let lu = g.partial_piv_lu();
    let b = lu.solve(faer::Mat::<f64>::from_fn(3, 1, |i, _| rhs[i]));
    let out = [b[(0, 0)], b[(1, 0)], b[(2, 0)]];
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "points",
            msg: "rigid-motion Gram matrix is singular".into(),
        });
    }
    Ok(out)
}
