//! Degree-of-freedom numbering with one copy per phase on every active
//! element, so cut elements carry two independent copies.

use super::{ElementPair, Family, ReferenceElement};
use crate::geometry::{CutClassification, Phase};
use crate::mesh::{Point, TriMesh};

/// Status of a global node in one phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    /// The node does not belong to any active element of the phase.
    Inactive,
    /// Velocity node on the outer boundary; its value is prescribed.
    Dirichlet,
    /// First unknown of the node. Velocity components are `i` and `i + 1`.
    Free(usize),
}

impl Slot {
    pub fn free(self) -> Option<usize> {
        match self {
            Slot::Free(i) => Some(i),
            _ => None,
        }
    }

    pub fn is_active(self) -> bool {
        self != Slot::Inactive
    }
}

/// Unknowns are ordered as all velocities (minus phase, then plus phase),
/// then all pressures (minus, then plus). Pressure indices are offset by
/// [`DofMap::num_velocity`].
#[derive(Debug, Clone)]
pub struct DofMap {
    pair: ElementPair,
    velocity_element: ReferenceElement,
    pressure_element: ReferenceElement,
    num_vertices: usize,
    velocity_nodes: Vec<Point>,
    pressure_nodes: Vec<Point>,
    v_stride: usize,
    p_stride: usize,
    v_local: Vec<usize>,
    p_local: Vec<usize>,
    v_slots: [Vec<Slot>; 2],
    p_slots: [Vec<Slot>; 2],
    num_velocity: usize,
    num_pressure: usize,
}

/// Numbers the doubled space for `pair` on the active elements of each phase.
pub fn build_space(mesh: &TriMesh, classification: &CutClassification, pair: ElementPair) -> DofMap {
    let nv = mesh.num_vertices();
    let ne = mesh.num_elements();
    let velocity_element = ReferenceElement::new(pair.velocity_family());
    let pressure_element = ReferenceElement::new(pair.pressure_family());

    let mut velocity_nodes: Vec<Point> = mesh.vertices().to_vec();
    let mut v_boundary: Vec<bool> = (0..nv).map(|v| mesh.vertex_on_boundary(v)).collect();
    let v_stride = velocity_element.len();
    let mut v_local = Vec::with_capacity(ne * v_stride);
    match pair.velocity_family() {
        Family::P2 => {
            for f in mesh.faces() {
                let [a, b] = f.vertices;
                let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
                velocity_nodes.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                v_boundary.push(f.is_boundary());
            }
            for t in 0..ne {
                v_local.extend_from_slice(&mesh.triangles()[t]);
                v_local.extend(mesh.element_faces(t).iter().map(|&f| nv + f));
            }
        }
        Family::P1Bubble => {
            for t in 0..ne {
                velocity_nodes.push(mesh.centroid(t));
                v_boundary.push(false);
                v_local.extend_from_slice(&mesh.triangles()[t]);
                v_local.push(nv + t);
            }
        }
        other => unreachable!("velocity family {other:?}"),
    }

    let (pressure_nodes, p_stride, p_local): (Vec<Point>, usize, Vec<usize>) =
        match pair.pressure_family() {
            Family::P1 => (
                mesh.vertices().to_vec(),
                3,
                mesh.triangles().iter().flatten().copied().collect(),
            ),
            Family::P0 => ((0..ne).map(|t| mesh.centroid(t)).collect(), 1, (0..ne).collect()),
            other => unreachable!("pressure family {other:?}"),
        };

    let mut v_active = [vec![false; velocity_nodes.len()], vec![false; velocity_nodes.len()]];
    let mut p_active = [vec![false; pressure_nodes.len()], vec![false; pressure_nodes.len()]];
    for phase in Phase::BOTH {
        for t in 0..ne {
            if classification.is_active(t, phase) {
                for &n in &v_local[t * v_stride..(t + 1) * v_stride] {
                    v_active[phase.index()][n] = true;
                }
                for &n in &p_local[t * p_stride..(t + 1) * p_stride] {
                    p_active[phase.index()][n] = true;
                }
            }
        }
    }

    let mut next = 0;
    let v_slots = Phase::BOTH.map(|phase| {
        (0..velocity_nodes.len())
            .map(|n| {
                if !v_active[phase.index()][n] {
                    Slot::Inactive
                } else if v_boundary[n] {
                    Slot::Dirichlet
                } else {
                    next += 2;
                    Slot::Free(next - 2)
                }
            })
            .collect::<Vec<_>>()
    });
    let num_velocity = next;
    let p_slots = Phase::BOTH.map(|phase| {
        (0..pressure_nodes.len())
            .map(|n| {
                if p_active[phase.index()][n] {
                    next += 1;
                    Slot::Free(next - 1)
                } else {
                    Slot::Inactive
                }
            })
            .collect::<Vec<_>>()
    });
    let num_pressure = next - num_velocity;

    DofMap {
        pair,
        velocity_element,
        pressure_element,
        num_vertices: nv,
        velocity_nodes,
        pressure_nodes,
        v_stride,
        p_stride,
        v_local,
        p_local,
        v_slots,
        p_slots,
        num_velocity,
        num_pressure,
    }
}

impl DofMap {
    pub fn pair(&self) -> ElementPair {
        self.pair
    }

    pub fn velocity_element(&self) -> &ReferenceElement {
        &self.velocity_element
    }

    pub fn pressure_element(&self) -> &ReferenceElement {
        &self.pressure_element
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Free velocity unknowns (both components, both phases).
    pub fn num_velocity(&self) -> usize {
        self.num_velocity
    }

    pub fn num_pressure(&self) -> usize {
        self.num_pressure
    }

    /// Free velocity plus pressure unknowns, excluding the mean-value
    /// multiplier.
    pub fn num_dofs(&self) -> usize {
        self.num_velocity + self.num_pressure
    }

    /// Velocity degrees of freedom of `phase` before boundary elimination
    /// (two per active node).
    pub fn num_velocity_with_boundary(&self, phase: Phase) -> usize {
        2 * self.v_slots[phase.index()].iter().filter(|s| s.is_active()).count()
    }

    pub fn num_pressure_in(&self, phase: Phase) -> usize {
        self.p_slots[phase.index()].iter().filter(|s| s.is_active()).count()
    }

    pub fn velocity_nodes(&self) -> &[Point] {
        &self.velocity_nodes
    }

    pub fn pressure_nodes(&self) -> &[Point] {
        &self.pressure_nodes
    }

    /// Global velocity nodes of element `t`, in local shape-function order.
    pub fn num_elements(&self) -> usize {
        self.v_local.len() / self.v_stride
    }

    pub fn element_velocity_nodes(&self, t: usize) -> &[usize] {
        &self.v_local[t * self.v_stride..(t + 1) * self.v_stride]
    }

    pub fn element_pressure_nodes(&self, t: usize) -> &[usize] {
        &self.p_local[t * self.p_stride..(t + 1) * self.p_stride]
    }

    pub fn velocity_slot(&self, phase: Phase, node: usize) -> Slot {
        self.v_slots[phase.index()][node]
    }

    pub fn pressure_slot(&self, phase: Phase, node: usize) -> Slot {
        self.p_slots[phase.index()][node]
    }

    pub fn velocity_slots(&self, phase: Phase) -> &[Slot] {
        &self.v_slots[phase.index()]
    }

    pub fn pressure_slots(&self, phase: Phase) -> &[Slot] {
        &self.p_slots[phase.index()]
    }

    /// Whether the velocity node is a vertex of the mesh (as opposed to an
    /// edge or bubble node).
    pub fn is_vertex_node(&self, node: usize) -> bool {
        node < self.num_vertices
    }
}
