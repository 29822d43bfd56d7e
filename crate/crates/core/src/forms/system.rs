//! Block assembly of the bordered saddle-point system.

use super::builder::BlockBuilder;
use super::bulk::{assemble_b_bulk, assemble_f, assemble_g, assemble_viscous, mean_constraint};
use super::ghost::{assemble_jp, assemble_velocity_ghost};
use super::interface::{assemble_b_interface, assemble_nitsche};
use super::{Discretization, FormParams, ProblemData};
use crate::error::{Error, Result};
use crate::fespace::{DofMap, Slot};
use crate::geometry::Phase;
use crate::sparse::{SparseMatrix, TripletBuilder};

/// Prescribed velocity at every Dirichlet node, per phase.
#[derive(Debug, Clone)]
pub struct BoundaryValues {
    values: [Vec<[f64; 2]>; 2],
}

impl BoundaryValues {
    /// Homogeneous boundary data.
    pub fn zero(dofs: &DofMap) -> Self {
        let n = dofs.velocity_nodes().len();
        Self {
            values: [vec![[0.0; 2]; n], vec![[0.0; 2]; n]],
        }
    }

    pub fn value(&self, phase: Phase, node: usize) -> [f64; 2] {
        self.values[phase.index()][node]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| v[0] == 0.0 && v[1] == 0.0)
    }
}

/// Nodal interpolation of the boundary velocity of `data`.
pub fn boundary_values(dofs: &DofMap, data: &dyn ProblemData) -> BoundaryValues {
    let mut bv = BoundaryValues::zero(dofs);
    for phase in Phase::BOTH {
        for (n, slot) in dofs.velocity_slots(phase).iter().enumerate() {
            if *slot == Slot::Dirichlet {
                bv.values[phase.index()][n] = data.boundary_velocity(phase, dofs.velocity_nodes()[n]);
            }
        }
    }
    bv
}

/// A matrix block on free unknowns together with the right-hand-side lifting
/// `-M_{free, boundary} g` of the eliminated boundary columns.
#[derive(Debug, Clone)]
pub struct Block {
    pub matrix: SparseMatrix,
    pub lift: Vec<f64>,
}

impl Block {
    pub(crate) fn from_builder(b: BlockBuilder, nrows: usize) -> Self {
        let lift = b.dense_lift(nrows);
        Self {
            matrix: b.triplets.build(),
            lift,
        }
    }
}

fn merge(parts: Vec<Block>) -> Block {
    let (nr, nc) = (parts[0].matrix.nrows(), parts[0].matrix.ncols());
    let mut t = TripletBuilder::new(nr, nc);
    let mut lift = vec![0.0; nr];
    for p in parts {
        for (i, j, v) in p.matrix.iter() {
            t.push(i, j, v);
        }
        for (l, v) in lift.iter_mut().zip(&p.lift) {
            *l += v;
        }
    }
    Block {
        matrix: t.build(),
        lift,
    }
}

/// Velocity block: viscous term, Nitsche coupling and velocity ghost penalty.
pub fn assemble_a(disc: &Discretization, params: &FormParams, bv: &BoundaryValues) -> Block {
    merge(vec![
        assemble_viscous(disc, params, bv),
        assemble_nitsche(disc, params, bv),
        assemble_velocity_ghost(disc, params, bv),
    ])
}

/// Pressure-velocity block (rows pressures).
pub fn assemble_b(disc: &Discretization, bv: &BoundaryValues) -> Block {
    merge(vec![assemble_b_bulk(disc, bv), assemble_b_interface(disc, bv)])
}

/// The assembled discrete problem
/// `[[A, B^T, 0], [B, -J, c], [0, c^T, 0]] (u, p, mu) = (F, G, 0)`
/// on free unknowns, with boundary values lifted into the right-hand side.
#[derive(Debug, Clone)]
pub struct StokesSystem {
    pub a: SparseMatrix,
    pub b: SparseMatrix,
    pub j: SparseMatrix,
    pub c: Vec<f64>,
    /// Velocity right-hand side including the boundary lifting.
    pub f: Vec<f64>,
    /// Pressure right-hand side including the boundary lifting.
    pub g: Vec<f64>,
    pub boundary: BoundaryValues,
    pub matrix: SparseMatrix,
    pub rhs: Vec<f64>,
    pub warning: Option<String>,
}

impl StokesSystem {
    pub fn num_velocity(&self) -> usize {
        self.a.nrows()
    }

    pub fn num_pressure(&self) -> usize {
        self.j.nrows()
    }

    /// Size of the bordered system, including the multiplier.
    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |K - K^T| / max |K|`.
    pub fn symmetry_error(&self) -> f64 {
        let m = self.matrix.max_abs();
        if m == 0.0 {
            0.0
        } else {
            self.matrix.asymmetry() / m
        }
    }
}

/// Assembles all blocks and the bordered matrix.
pub fn assemble_system(disc: &Discretization, params: &FormParams, data: &dyn ProblemData) -> Result<StokesSystem> {
    let warning = params.validate()?;
    let bv = boundary_values(disc.dofs, data);
    let a = assemble_a(disc, params, &bv);
    let b = assemble_b(disc, &bv);
    let j = assemble_jp(disc, params);
    let c = mean_constraint(disc);
    if c.iter().all(|&v| v == 0.0) {
        return Err(Error::SingularConstraint);
    }
    let mut f = assemble_f(disc, data);
    for (fi, li) in f.iter_mut().zip(&a.lift) {
        *fi += li;
    }
    let mut g = assemble_g(disc, data);
    for (gi, li) in g.iter_mut().zip(&b.lift) {
        *gi += li;
    }

    let (nv, np) = (a.matrix.nrows(), j.nrows());
    let n = nv + np + 1;
    let mut t = TripletBuilder::new(n, n);
    for (r, col, v) in a.matrix.iter() {
        t.push(r, col, v);
    }
    for (r, col, v) in b.matrix.iter() {
        t.push(nv + r, col, v);
        t.push(col, nv + r, v);
    }
    for (r, col, v) in j.iter() {
        t.push(nv + r, nv + col, -v);
    }
    for (k, &ck) in c.iter().enumerate() {
        if ck != 0.0 {
            t.push(nv + k, n - 1, ck);
            t.push(n - 1, nv + k, ck);
        }
    }
    let matrix = t.build();
    let mut rhs = Vec::with_capacity(n);
    rhs.extend_from_slice(&f);
    rhs.extend_from_slice(&g);
    rhs.push(0.0);
    Ok(StokesSystem {
        a: a.matrix,
        b: b.matrix,
        j,
        c,
        f,
        g,
        boundary: bv,
        matrix,
        rhs,
        warning,
    })
}
