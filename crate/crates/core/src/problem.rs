//! A discretized interface problem: mesh, interface, quadrature and space.

use crate::error::Result;
use crate::fespace::{build_space, DofMap, ElementPair};
use crate::field::{fields, PressureField, VelocityField};
use crate::forms::{assemble_system, Discretization, FormParams, ProblemData, StokesSystem};
use crate::geometry::{classify, cut_quadrature, CutClassification, CutQuadrature, LevelSet};
use crate::mesh::TriMesh;
use crate::solver::{solve, Solution};

/// Everything that depends on the mesh and the interface but not on the
/// viscosities or the data.
#[derive(Debug, Clone)]
pub struct Problem {
    pub mesh: TriMesh,
    pub level_set: LevelSet,
    pub classification: CutClassification,
    pub quadrature: CutQuadrature,
    pub dofs: DofMap,
}

/// A solved system together with its fields.
#[derive(Debug, Clone)]
pub struct Solved {
    pub system: StokesSystem,
    pub solution: Solution,
    pub velocity: VelocityField,
    pub pressure: PressureField,
}

impl Problem {
    /// Classifies the mesh, builds the cut quadrature of order `order`
    /// (defaulting to the pair's) at subdivision `depth`, and numbers the
    /// space.
    pub fn new(mesh: TriMesh, level_set: LevelSet, pair: ElementPair, depth: usize, order: Option<usize>) -> Result<Self> {
        let classification = classify(&mesh, &level_set, depth)?;
        let order = order.unwrap_or_else(|| pair.default_quadrature_order());
        let quadrature = cut_quadrature(&mesh, &classification, &level_set, depth, order)?;
        let dofs = build_space(&mesh, &classification, pair);
        Ok(Self {
            mesh,
            level_set,
            classification,
            quadrature,
            dofs,
        })
    }

    pub fn discretization(&self) -> Discretization<'_> {
        Discretization {
            mesh: &self.mesh,
            classification: &self.classification,
            quadrature: &self.quadrature,
            dofs: &self.dofs,
        }
    }

    pub fn assemble(&self, params: &FormParams, data: &dyn ProblemData) -> Result<StokesSystem> {
        assemble_system(&self.discretization(), params, data)
    }

    pub fn solve(&self, params: &FormParams, data: &dyn ProblemData) -> Result<Solved> {
        let system = self.assemble(params, data)?;
        let solution = solve(&system)?;
        let (velocity, pressure) = fields(&self.dofs, &system.boundary, &solution);
        Ok(Solved {
            system,
            solution,
            velocity,
            pressure,
        })
    }
}
