//! Bilinear and linear forms of the Nitsche/ghost-penalty discretization and
//! the bordered saddle-point system.

mod builder;
mod bulk;
mod ghost;
mod interface;
mod system;

pub use bulk::{assemble_b_bulk, assemble_f, assemble_g, assemble_viscous, mean_constraint};
pub use ghost::{assemble_jp, assemble_velocity_ghost};
pub(crate) use ghost::face_jump_matrix;
pub use interface::{assemble_b_interface, assemble_nitsche};
pub use system::{assemble_a, assemble_b, assemble_system, boundary_values, BoundaryValues, Block, StokesSystem};

use crate::error::{Error, Result};
use crate::fespace::DofMap;
use crate::geometry::{CutClassification, CutQuadrature, Phase};
use crate::mesh::{Point, TriMesh};

/// Viscosities and stabilization parameters.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FormParams {
    /// `[nu-, nu+]`.
    pub nu: [f64; 2],
    /// Nitsche interface penalty.
    pub gamma: f64,
    /// Velocity ghost-penalty weights `[minus, plus]`.
    pub gamma_u: [f64; 2],
    /// Pressure ghost-penalty weights `[minus, plus]`.
    pub gamma_p: [f64; 2],
}

impl FormParams {
    pub fn new(nu_minus: f64, nu_plus: f64, gamma: f64, gamma_u: f64, gamma_p: f64) -> Self {
        Self {
            nu: [nu_minus, nu_plus],
            gamma,
            gamma_u: [gamma_u; 2],
            gamma_p: [gamma_p; 2],
        }
    }

    pub fn nu(&self, phase: Phase) -> f64 {
        self.nu[phase.index()]
    }

    pub fn with_viscosity(mut self, nu_minus: f64, nu_plus: f64) -> Self {
        self.nu = [nu_minus, nu_plus];
        self
    }

    /// Rejects non-positive or non-finite parameters. Returns a warning when
    /// `nu- > nu+`, since the interface fluxes are weighted by `nu-` on the
    /// assumption that it is the smaller viscosity.
    pub fn validate(&self) -> Result<Option<String>> {
        let check = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    msg: format!("must be positive and finite, got {v}"),
                })
            }
        };
        check("nu_minus", self.nu[0])?;
        check("nu_plus", self.nu[1])?;
        check("gamma", self.gamma)?;
        check("gamma_u_minus", self.gamma_u[0])?;
        check("gamma_u_plus", self.gamma_u[1])?;
        check("gamma_p_minus", self.gamma_p[0])?;
        check("gamma_p_plus", self.gamma_p[1])?;
        Ok((self.nu[0] > self.nu[1]).then(|| {
            format!(
                "nu- = {} exceeds nu+ = {}; the interface fluxes assume nu- <= nu+",
                self.nu[0], self.nu[1]
            )
        }))
    }
}

/// Right-hand-side data of the interface problem.
pub trait ProblemData: Sync {
    /// Body force `f` in `phase`.
    fn force(&self, phase: Phase, x: Point) -> [f64; 2];

    /// Prescribed divergence `g`.
    fn divergence(&self, _phase: Phase, _x: Point) -> f64 {
        0.0
    }

    /// Jump of the normal Cauchy stress across the interface.
    fn interface_force(&self, _x: Point) -> [f64; 2] {
        [0.0, 0.0]
    }

    /// Velocity prescribed on the outer boundary.
    fn boundary_velocity(&self, _phase: Phase, _x: Point) -> [f64; 2] {
        [0.0, 0.0]
    }
}

/// Closed-form solution used for error measurement.
pub trait ExactSolution: Sync {
    fn velocity(&self, phase: Phase, x: Point) -> [f64; 2];
    /// `grad[i][j] = d u_i / d x_j`.
    fn velocity_gradient(&self, phase: Phase, x: Point) -> [[f64; 2]; 2];
    fn pressure(&self, phase: Phase, x: Point) -> f64;
}

/// The mesh-level objects every form needs.
#[derive(Debug, Clone, Copy)]
pub struct Discretization<'a> {
    pub mesh: &'a TriMesh,
    pub classification: &'a CutClassification,
    pub quadrature: &'a CutQuadrature,
    pub dofs: &'a DofMap,
}
