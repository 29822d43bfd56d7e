//! Deterministic parallel accumulation of matrix blocks with boundary
//! lifting.

use rayon::prelude::*;

use super::system::BoundaryValues;
use crate::fespace::{DofMap, Slot};
use crate::geometry::Phase;
use crate::sparse::TripletBuilder;

/// Items per parallel work unit. Fixed so that the merge order, and hence the
/// floating-point summation order, does not depend on the thread count.
const CHUNK: usize = 256;

/// Column reference of a local degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Col {
    Free(usize),
    /// Prescribed value; contributions move to the right-hand side.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub(crate) struct BlockBuilder {
    pub triplets: TripletBuilder,
    /// Sparse right-hand-side lifting `(row, value)`.
    pub lift: Vec<(usize, f64)>,
}

impl BlockBuilder {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            triplets: TripletBuilder::new(nrows, ncols),
            lift: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, row: Option<usize>, col: Col, val: f64) {
        let Some(i) = row else { return };
        match col {
            Col::Free(j) => self.triplets.push(i, j, val),
            Col::Fixed(g) => {
                if g != 0.0 {
                    self.lift.push((i, -val * g));
                }
            }
        }
    }

    pub fn append(&mut self, other: BlockBuilder) {
        self.triplets.extend_from(other.triplets);
        self.lift.extend(other.lift);
    }

    pub fn dense_lift(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(i, v) in &self.lift {
            out[i] += v;
        }
        out
    }
}

/// Runs `f` over `items` in fixed-size chunks and concatenates the chunk
/// builders in order.
pub(crate) fn par_assemble<F>(items: &[usize], nrows: usize, ncols: usize, f: F) -> BlockBuilder
where
    F: Fn(usize, &mut BlockBuilder) + Sync,
{
    let parts: Vec<BlockBuilder> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut b = BlockBuilder::new(nrows, ncols);
            for &item in chunk {
                f(item, &mut b);
            }
            b
        })
        .collect();
    let mut out = BlockBuilder::new(nrows, ncols);
    for p in parts {
        out.append(p);
    }
    out
}

/// Same as [`par_assemble`] for dense vectors.
pub(crate) fn par_vector<F>(items: &[usize], n: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut Vec<(usize, f64)>) + Sync,
{
    let parts: Vec<Vec<(usize, f64)>> = items
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut v = Vec::new();
            for &item in chunk {
                f(item, &mut v);
            }
            v
        })
        .collect();
    let mut out = vec![0.0; n];
    for p in parts {
        for (i, v) in p {
            out[i] += v;
        }
    }
    out
}

/// Row index and column reference of velocity component `comp` at `node`.
#[inline]
pub(crate) fn velocity_dof(
    dofs: &DofMap,
    bv: &BoundaryValues,
    phase: Phase,
    node: usize,
    comp: usize,
) -> (Option<usize>, Col) {
    match dofs.velocity_slot(phase, node) {
        Slot::Free(i) => (Some(i + comp), Col::Free(i + comp)),
        Slot::Dirichlet => (None, Col::Fixed(bv.value(phase, node)[comp])),
        Slot::Inactive => unreachable!("inactive velocity node {node} on an active element"),
    }
}

/// Local index (within the pressure block) of a pressure node.
#[inline]
pub(crate) fn pressure_dof(dofs: &DofMap, phase: Phase, node: usize) -> usize {
    match dofs.pressure_slot(phase, node) {
        Slot::Free(i) => i - dofs.num_velocity(),
        _ => unreachable!("inactive pressure node {node} on an active element"),
    }
}
