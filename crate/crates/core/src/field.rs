//! Discrete velocity and pressure fields stored as expansion coefficients per
//! phase, including prescribed boundary values.

use crate::fespace::{DofMap, ElementMap, Slot};
use crate::forms::{BoundaryValues, ExactSolution};
use crate::geometry::Phase;
use crate::mesh::{Point, TriMesh};
use crate::solver::Solution;

/// Velocity coefficients `[phase][node]`; zero on inactive nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    pub values: [Vec<[f64; 2]>; 2],
}

/// Pressure coefficients `[phase][node]`; zero on inactive nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureField {
    pub values: [Vec<f64>; 2],
}

/// Value and gradient (`grad[i][j] = d u_i / d x_j`) of a velocity field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocitySample {
    pub value: [f64; 2],
    pub gradient: [[f64; 2]; 2],
}

impl VelocityField {
    pub fn zero(dofs: &DofMap) -> Self {
        let n = dofs.velocity_nodes().len();
        Self {
            values: [vec![[0.0; 2]; n], vec![[0.0; 2]; n]],
        }
    }

    /// Scatters free unknowns and boundary values into per-node arrays.
    pub fn from_coefficients(dofs: &DofMap, boundary: &BoundaryValues, free: &[f64]) -> Self {
        let mut out = Self::zero(dofs);
        for phase in Phase::BOTH {
            for (node, slot) in dofs.velocity_slots(phase).iter().enumerate() {
                out.values[phase.index()][node] = match *slot {
                    Slot::Free(i) => [free[i], free[i + 1]],
                    Slot::Dirichlet => boundary.value(phase, node),
                    Slot::Inactive => [0.0; 2],
                };
            }
        }
        out
    }

    /// Interpolant of `exact` through every active node of each phase.
    pub fn interpolate(dofs: &DofMap, exact: &dyn ExactSolution) -> Self {
        let mut out = Self::zero(dofs);
        for phase in Phase::BOTH {
            for (node, slot) in dofs.velocity_slots(phase).iter().enumerate() {
                if slot.is_active() {
                    out.values[phase.index()][node] = exact.velocity(phase, dofs.velocity_nodes()[node]);
                }
            }
        }
        out.nodal_to_coefficients(dofs);
        out
    }

    /// Converts nodal values to expansion coefficients in place; only the
    /// element-interior nodes of a non-Lagrange basis change.
    fn nodal_to_coefficients(&mut self, dofs: &DofMap) {
        let element = dofs.velocity_element();
        if !element.has_interior_correction() {
            return;
        }
        for phase in Phase::BOTH {
            let slots = dofs.velocity_slots(phase);
            let values = &mut self.values[phase.index()];
            for t in 0..dofs.num_elements() {
                let nodes = dofs.element_velocity_nodes(t);
                if !nodes.iter().all(|&n| slots[n].is_active()) {
                    continue;
                }
                for i in 0..2 {
                    let nodal: Vec<f64> = nodes.iter().map(|&n| values[n][i]).collect();
                    let c = element.coefficients_from_nodal(&nodal);
                    for (&n, ck) in nodes.iter().zip(c) {
                        values[n][i] = ck;
                    }
                }
            }
        }
    }

    /// Free unknowns in degree-of-freedom order.
    pub fn free_coefficients(&self, dofs: &DofMap) -> Vec<f64> {
        let mut out = vec![0.0; dofs.num_velocity()];
        for phase in Phase::BOTH {
            for (node, slot) in dofs.velocity_slots(phase).iter().enumerate() {
                if let Slot::Free(i) = slot {
                    let v = self.values[phase.index()][node];
                    out[*i] = v[0];
                    out[i + 1] = v[1];
                }
            }
        }
        out
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            values: self.values.clone().map(|v| v.into_iter().map(|[a, b]| [t * a, t * b]).collect()),
        }
    }

    /// Evaluates the `phase` polynomial of element `t` at `x`, which may lie
    /// outside the element.
    pub fn sample(&self, dofs: &DofMap, mesh: &TriMesh, t: usize, phase: Phase, x: Point) -> VelocitySample {
        let map = ElementMap::new(&mesh.element_vertices(t));
        let s = dofs.velocity_element().eval_physical(&map, x);
        let mut out = VelocitySample {
            value: [0.0; 2],
            gradient: [[0.0; 2]; 2],
        };
        for (k, &node) in dofs.element_velocity_nodes(t).iter().enumerate() {
            let c = self.values[phase.index()][node];
            for i in 0..2 {
                out.value[i] += c[i] * s.values[k];
                for j in 0..2 {
                    out.gradient[i][j] += c[i] * s.gradients[k][j];
                }
            }
        }
        out
    }
}

impl PressureField {
    pub fn zero(dofs: &DofMap) -> Self {
        let n = dofs.pressure_nodes().len();
        Self {
            values: [vec![0.0; n], vec![0.0; n]],
        }
    }

    /// Scatters pressure unknowns (indexed within the pressure block).
    pub fn from_coefficients(dofs: &DofMap, pressure: &[f64]) -> Self {
        let mut out = Self::zero(dofs);
        let nv = dofs.num_velocity();
        for phase in Phase::BOTH {
            for (node, slot) in dofs.pressure_slots(phase).iter().enumerate() {
                if let Slot::Free(i) = slot {
                    out.values[phase.index()][node] = pressure[i - nv];
                }
            }
        }
        out
    }

    pub fn interpolate(dofs: &DofMap, exact: &dyn ExactSolution) -> Self {
        let mut out = Self::zero(dofs);
        for phase in Phase::BOTH {
            for (node, slot) in dofs.pressure_slots(phase).iter().enumerate() {
                if slot.is_active() {
                    out.values[phase.index()][node] = exact.pressure(phase, dofs.pressure_nodes()[node]);
                }
            }
        }
        out
    }

    /// Unknowns in pressure-block order.
    pub fn coefficients(&self, dofs: &DofMap) -> Vec<f64> {
        let nv = dofs.num_velocity();
        let mut out = vec![0.0; dofs.num_pressure()];
        for phase in Phase::BOTH {
            for (node, slot) in dofs.pressure_slots(phase).iter().enumerate() {
                if let Slot::Free(i) = slot {
                    out[i - nv] = self.values[phase.index()][node];
                }
            }
        }
        out
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            values: self.values.clone().map(|v| v.into_iter().map(|a| t * a).collect()),
        }
    }

    pub fn sample(&self, dofs: &DofMap, mesh: &TriMesh, t: usize, phase: Phase, x: Point) -> f64 {
        let map = ElementMap::new(&mesh.element_vertices(t));
        let q = dofs.pressure_element().values(map.to_reference(x));
        dofs.element_pressure_nodes(t)
            .iter()
            .zip(&q)
            .map(|(&node, qk)| self.values[phase.index()][node] * qk)
            .sum()
    }
}

/// Velocity and pressure fields of a solve.
pub fn fields(dofs: &DofMap, boundary: &BoundaryValues, solution: &Solution) -> (VelocityField, PressureField) {
    (
        VelocityField::from_coefficients(dofs, boundary, &solution.velocity),
        PressureField::from_coefficients(dofs, &solution.pressure),
    )
}
