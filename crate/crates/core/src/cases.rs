//! Manufactured solutions on the square `(-1, 1)^2` with a circular interface
//! of radius `1/sqrt(pi)`, so the inclusion has unit area.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forms::{ExactSolution, ProblemData};
use crate::geometry::{LevelSet, Phase};
use crate::mesh::{Point, Rect};

/// Radius of the unit-area circular inclusion.
pub fn inclusion_radius() -> f64 {
    1.0 / PI.sqrt()
}

/// The family of closed-form solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    /// Rotational flow `u = (R^2 - |x|^2) / nu (-x2, x1)`, `p = x2^2 - x1^2`,
    /// with continuous velocity and normal stress. The inclusion belongs to
    /// `inclusion`; the stress `nu D(u)` does not depend on the viscosities.
    Rotational { inclusion: Phase },
    /// Trigonometric velocity with a pressure jump across the inclusion
    /// (minus phase), giving a nonzero stress jump `lambda`.
    PressureJump,
}

/// Exact solution together with the data it generates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedCase {
    pub kind: CaseKind,
    /// `[nu-, nu+]`.
    pub nu: [f64; 2],
}

impl ManufacturedCase {
    pub fn new(kind: CaseKind, nu_minus: f64, nu_plus: f64) -> Self {
        Self {
            kind,
            nu: [nu_minus, nu_plus],
        }
    }

    pub fn domain(&self) -> Rect {
        Rect::reference_square()
    }

    /// Level set that is negative in the minus phase.
    pub fn level_set(&self) -> LevelSet {
        let circle = LevelSet::circle([0.0, 0.0], inclusion_radius());
        match self.kind {
            CaseKind::Rotational { inclusion: Phase::Plus } => circle.negated(),
            _ => circle,
        }
    }

    /// Phase that contains `x` for the exact geometry.
    pub fn phase_at(&self, x: Point) -> Phase {
        if self.level_set().value(x) < 0.0 {
            Phase::Minus
        } else {
            Phase::Plus
        }
    }

    fn nu(&self, phase: Phase) -> f64 {
        self.nu[phase.index()]
    }

    /// `nu D(u)` in `phase`.
    pub fn stress(&self, phase: Phase, x: Point) -> [[f64; 2]; 2] {
        let g = self.velocity_gradient(phase, x);
        let nu = self.nu(phase);
        let off = 0.5 * nu * (g[0][1] + g[1][0]);
        [[nu * g[0][0], off], [off, nu * g[1][1]]]
    }

    /// Closed-form `[sigma n]` on the exact interface, with `n` pointing from
    /// the plus phase into the minus phase.
    fn lambda(&self, x: Point) -> [f64; 2] {
        match self.kind {
            CaseKind::Rotational { .. } => [0.0, 0.0],
            CaseKind::PressureJump => {
                let r = inclusion_radius();
                let c = (PI * x[0]).cos() * (PI * x[1]).sin();
                let a = -(self.nu[1] - self.nu[0]) * c / r;
                let b = -(6.0 * PI * r * r + 1.0) / (6.0 * PI * r);
                [a * x[0] + b * x[0], -a * x[1] + b * x[1]]
            }
        }
    }
}

impl ExactSolution for ManufacturedCase {
    fn velocity(&self, phase: Phase, x: Point) -> [f64; 2] {
        match self.kind {
            CaseKind::Rotational { .. } => {
                let r = inclusion_radius();
                let s = (r * r - x[0] * x[0] - x[1] * x[1]) / self.nu(phase);
                [-s * x[1], s * x[0]]
            }
            CaseKind::PressureJump => {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                [sx * sy / PI, cx * cy / PI]
            }
        }
    }

    fn velocity_gradient(&self, phase: Phase, x: Point) -> [[f64; 2]; 2] {
        match self.kind {
            CaseKind::Rotational { .. } => {
                let r = inclusion_radius();
                let (a, b) = (x[0], x[1]);
                let s = r * r - a * a - b * b;
                let nu = self.nu(phase);
                [
                    [2.0 * a * b / nu, (2.0 * b * b - s) / nu],
                    [(s - 2.0 * a * a) / nu, -2.0 * a * b / nu],
                ]
            }
            CaseKind::PressureJump => {
                let (sx, cx) = (PI * x[0]).sin_cos();
                let (sy, cy) = (PI * x[1]).sin_cos();
                [[cx * sy, sx * cy], [-sx * cy, -cx * sy]]
            }
        }
    }

    fn pressure(&self, phase: Phase, x: Point) -> f64 {
        match self.kind {
            CaseKind::Rotational { .. } => x[1] * x[1] - x[0] * x[0],
            CaseKind::PressureJump => match phase {
                Phase::Minus => x[0] * x[0] + x[1] * x[1],
                Phase::Plus => -1.0 / (6.0 * PI),
            },
        }
    }
}

impl ProblemData for ManufacturedCase {
    fn force(&self, phase: Phase, x: Point) -> [f64; 2] {
        match self.kind {
            CaseKind::Rotational { .. } => [-4.0 * x[1] - 2.0 * x[0], 4.0 * x[0] + 2.0 * x[1]],
            CaseKind::PressureJump => {
                let u = self.velocity(phase, x);
                let k = self.nu(phase) * PI * PI;
                match phase {
                    Phase::Minus => [k * u[0] + 2.0 * x[0], k * u[1] + 2.0 * x[1]],
                    Phase::Plus => [k * u[0], k * u[1]],
                }
            }
        }
    }

    fn interface_force(&self, x: Point) -> [f64; 2] {
        self.lambda(x)
    }

    fn boundary_velocity(&self, phase: Phase, x: Point) -> [f64; 2] {
        self.velocity(phase, x)
    }
}

/// Largest residuals found by [`validate_case`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseReport {
    pub samples: usize,
    pub divergence: f64,
    pub momentum: f64,
    pub velocity_jump: f64,
    /// `|[sigma n] - lambda|` with one-sided finite-difference stresses.
    pub stress_jump: f64,
    /// `|∫_Ω p|`.
    pub pressure_mean: f64,
}

/// Tolerance on the finite-difference momentum residual.
pub const MOMENTUM_TOLERANCE: f64 = 1e-5;
/// Tolerance on the finite-difference stress jump.
pub const STRESS_JUMP_TOLERANCE: f64 = 1e-4;
/// Tolerance on the pressure mean.
pub const PRESSURE_MEAN_TOLERANCE: f64 = 1e-8;

fn fd_gradient(f: impl Fn(Point) -> [f64; 2], x: Point, h: f64) -> [[f64; 2]; 2] {
    let mut g = [[0.0; 2]; 2];
    for j in 0..2 {
        let (mut xp, mut xm) = (x, x);
        xp[j] += h;
        xm[j] -= h;
        let (fp, fm) = (f(xp), f(xm));
        for i in 0..2 {
            g[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    g
}

/// Checks the manufactured data with finite differences at `samples` seeded
/// random points: `div u = 0`, `-div(nu D(u)) + grad p = f` in both phases,
/// `[u] = 0` and `[sigma n] = lambda` on the interface, and `∫_Ω p = 0`.
pub fn validate_case(case: &ManufacturedCase, samples: usize, seed: u64) -> Result<CaseReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = inclusion_radius();
    let h = 1e-4;
    let mut report = CaseReport {
        samples,
        divergence: 0.0,
        momentum: 0.0,
        velocity_jump: 0.0,
        stress_jump: 0.0,
        pressure_mean: 0.0,
    };
    for _ in 0..samples {
        // Bulk points stay 4h away from the interface so the stencils do not
        // straddle it.
        let x = loop {
            let x: Point = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            if ((x[0] * x[0] + x[1] * x[1]).sqrt() - r).abs() > 4.0 * h {
                break x;
            }
        };
        let phase = case.phase_at(x);
        let g = fd_gradient(|y| case.velocity(phase, y), x, h);
        report.divergence = report.divergence.max((g[0][0] + g[1][1]).abs());
        let ds = [0, 1].map(|j| fd_gradient(|y| case.stress(phase, y)[j], x, h));
        let grad_p = {
            let p = |y: Point| case.pressure(phase, y);
            [
                (p([x[0] + h, x[1]]) - p([x[0] - h, x[1]])) / (2.0 * h),
                (p([x[0], x[1] + h]) - p([x[0], x[1] - h])) / (2.0 * h),
            ]
        };
        let f = case.force(phase, x);
        for i in 0..2 {
            // div of the symmetric stress: sum_j d(sigma_ij)/dx_j.
            let div = ds[i][0][0] + ds[i][1][1];
            let res = -div + grad_p[i] - f[i];
            report.momentum = report.momentum.max(res.abs());
        }

        let theta = rng.random_range(0.0..2.0 * PI);
        let y: Point = [r * theta.cos(), r * theta.sin()];
        let um = case.velocity(Phase::Minus, y);
        let up = case.velocity(Phase::Plus, y);
        report.velocity_jump = report.velocity_jump.max((um[0] - up[0]).abs().max((um[1] - up[1]).abs()));
        let n = case.level_set().normal(y).unwrap_or([0.0, 0.0]);
        // Each phase's closed form is smooth across the interface, so its
        // stress is differenced on a centered stencil at the interface point.
        let traction = |phase: Phase| {
            let g = fd_gradient(|w| case.velocity(phase, w), y, h);
            let nu = case.nu(phase);
            let p = case.pressure(phase, y);
            let off = 0.5 * nu * (g[0][1] + g[1][0]);
            [
                (nu * g[0][0] - p) * n[0] + off * n[1],
                off * n[0] + (nu * g[1][1] - p) * n[1],
            ]
        };
        let (tp, tm) = (traction(Phase::Plus), traction(Phase::Minus));
        let lam = case.lambda(y);
        for i in 0..2 {
            report.stress_jump = report.stress_jump.max((tp[i] - tm[i] - lam[i]).abs());
        }
    }
    report.pressure_mean = pressure_mean(case).abs();

    let fail = |what: &str, v: f64, tol: f64| -> Result<()> {
        if v <= tol {
            Ok(())
        } else {
            Err(Error::CaseValidation(format!("{what} residual {v:.3e} exceeds {tol:.0e}")))
        }
    };
    fail("divergence", report.divergence, MOMENTUM_TOLERANCE)?;
    fail("momentum", report.momentum, MOMENTUM_TOLERANCE)?;
    fail("velocity jump", report.velocity_jump, MOMENTUM_TOLERANCE)?;
    fail("stress jump", report.stress_jump, STRESS_JUMP_TOLERANCE)?;
    fail("pressure mean", report.pressure_mean, PRESSURE_MEAN_TOLERANCE)?;
    Ok(report)
}

/// `∫_Ω p` in polar coordinates inside the inclusion plus the outside part
/// by tensor Gauss quadrature on the square minus the disk integral of the
/// outer expression.
fn pressure_mean(case: &ManufacturedCase) -> f64 {
    let (x, w) = crate::quadrature::gauss_legendre(24);
    let r = inclusion_radius();
    let inside = case.phase_at([0.0, 0.0]);
    let outside = inside.other();
    let mut total = 0.0;
    // Square integral of the outer pressure, on 8x8 panels.
    let panels = 8;
    for pi in 0..panels {
        for pj in 0..panels {
            for (xa, wa) in x.iter().zip(&w) {
                for (xb, wb) in x.iter().zip(&w) {
                    let p = [
                        -1.0 + 2.0 * (pi as f64 + xa) / panels as f64,
                        -1.0 + 2.0 * (pj as f64 + xb) / panels as f64,
                    ];
                    let jac = (2.0 / panels as f64).powi(2);
                    total += wa * wb * jac * case.pressure(outside, p);
                }
            }
        }
    }
    // Disk integral of (inner - outer) pressure in polar coordinates.
    for (xr, wr) in x.iter().zip(&w) {
        for pt in 0..panels {
            for (xt, wt) in x.iter().zip(&w) {
                let rho = r * xr;
                let theta = 2.0 * PI * (pt as f64 + xt) / panels as f64;
                let p = [rho * theta.cos(), rho * theta.sin()];
                let jac = r * rho * 2.0 * PI / panels as f64;
                total += wr * wt * jac * (case.pressure(inside, p) - case.pressure(outside, p));
            }
        }
    }
    total
}
