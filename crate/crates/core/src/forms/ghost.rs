//! Ghost-penalty face terms on the faces of the cut layer.
//!
//! Both sides of a face are differentiated along the same unit normal (the
//! one pointing out of the lower-index element), and the jump is taken
//! component-wise, so `[d^l_n v] = d^l_n v|_{T1} - d^l_n v|_{T2}`.

use super::builder::{par_assemble, pressure_dof, BlockBuilder, Col};
use super::bulk::push_vv;
use super::system::{BoundaryValues, Block};
use super::{Discretization, FormParams};
use crate::fespace::{ElementMap, ReferenceElement};
use crate::geometry::Phase;
use crate::mesh::Point;
use crate::quadrature::gauss_legendre;
use crate::sparse::SparseMatrix;

/// Scalar jump matrices `sum_l weight(l) ∫_e [d^l_n phi_p][d^l_n phi_q]` on one
/// face, over the concatenated local bases of its two elements.
pub(crate) fn face_jump_matrix(
    disc: &Discretization,
    element: &ReferenceElement,
    face: usize,
    orders: &[usize],
    weight: impl Fn(usize) -> f64,
    npts: usize,
) -> Vec<f64> {
    let f = &disc.mesh.faces()[face];
    let (t1, t2) = (f.elements.0, f.elements.1.expect("ghost face on boundary"));
    let [va, vb] = f.vertices;
    let (pa, pb) = (disc.mesh.vertices()[va], disc.mesh.vertices()[vb]);
    let n = f.normal;
    let nb = element.len();
    let m = 2 * nb;
    let (gx, gw) = gauss_legendre(npts);
    let maps = [t1, t2].map(|t| ElementMap::new(&disc.mesh.element_vertices(t)));
    let mut out = vec![0.0; m * m];
    for &l in orders {
        let polys = maps.map(|map| {
            element
                .directional_polys(map.reference_direction(n), l)
                .expect("derivative order within the element degree")
        });
        let wl = weight(l) * f.length;
        for (s, w) in gx.iter().zip(&gw) {
            let x: Point = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
            let mut jump = vec![0.0; m];
            for side in 0..2 {
                let xi = maps[side].to_reference(x);
                let sign = if side == 0 { 1.0 } else { -1.0 };
                for (k, p) in polys[side].iter().enumerate() {
                    jump[side * nb + k] = sign * p.eval(xi);
                }
            }
            for p in 0..m {
                if jump[p] == 0.0 {
                    continue;
                }
                for q in 0..m {
                    out[p * m + q] += wl * w * jump[p] * jump[q];
                }
            }
        }
    }
    out
}

/// `sum_± sum_{l=1..s} gamma_u± nu± |e|^{2l-1} ([d^l_n u±], [d^l_n v±])_e`.
pub fn assemble_velocity_ghost(disc: &Discretization, params: &FormParams, bv: &BoundaryValues) -> Block {
    let nv = disc.dofs.num_velocity();
    let vel = disc.dofs.velocity_element();
    let s = disc.dofs.pair().s();
    let orders: Vec<usize> = (1..=s).collect();
    let mut out = BlockBuilder::new(nv, nv);
    for phase in Phase::BOTH {
        let scale = params.gamma_u[phase.index()] * params.nu(phase);
        let b = par_assemble(disc.classification.ghost_faces(phase), nv, nv, |f, out| {
            let face = &disc.mesh.faces()[f];
            let len = face.length;
            let scalar = face_jump_matrix(disc, vel, f, &orders, |l| scale * len.powi(2 * l as i32 - 1), s + 1);
            let (t1, t2) = (face.elements.0, face.elements.1.unwrap());
            let nodes: Vec<usize> = disc
                .dofs
                .element_velocity_nodes(t1)
                .iter()
                .chain(disc.dofs.element_velocity_nodes(t2))
                .copied()
                .collect();
            let m = nodes.len();
            let mut local = vec![0.0; 4 * m * m];
            for p in 0..m {
                for q in 0..m {
                    let v = scalar[p * m + q];
                    for a in 0..2 {
                        local[(2 * p + a) * 2 * m + 2 * q + a] = v;
                    }
                }
            }
            push_vv(out, disc, bv, phase, &nodes, phase, &nodes, &local);
        });
        out.append(b);
    }
    Block::from_builder(out, nv)
}

/// `sum_± (gamma_p± / nu±) sum_{l} |e|^{2l+1} ([d^l_n p±], [d^l_n q±])_e` with
/// `l = 0..k_p`, skipping `l = 0` for continuous pressures.
pub fn assemble_jp(disc: &Discretization, params: &FormParams) -> SparseMatrix {
    let np = disc.dofs.num_pressure();
    let pre = disc.dofs.pressure_element();
    let pair = disc.dofs.pair();
    let first = usize::from(pair.pressure_continuous());
    let orders: Vec<usize> = (first..=pair.k_p()).collect();
    let mut out = BlockBuilder::new(np, np);
    for phase in Phase::BOTH {
        let scale = params.gamma_p[phase.index()] / params.nu(phase);
        let b = par_assemble(disc.classification.ghost_faces(phase), np, np, |f, out| {
            let face = &disc.mesh.faces()[f];
            let len = face.length;
            let scalar = face_jump_matrix(disc, pre, f, &orders, |l| scale * len.powi(2 * l as i32 + 1), pair.s() + 1);
            let (t1, t2) = (face.elements.0, face.elements.1.unwrap());
            let nodes: Vec<usize> = disc
                .dofs
                .element_pressure_nodes(t1)
                .iter()
                .chain(disc.dofs.element_pressure_nodes(t2))
                .map(|&n| pressure_dof(disc.dofs, phase, n))
                .collect();
            let m = nodes.len();
            for p in 0..m {
                for q in 0..m {
                    let v = scalar[p * m + q];
                    if v != 0.0 {
                        out.add(Some(nodes[p]), Col::Free(nodes[q]), v);
                    }
                }
            }
        });
        out.append(b);
    }
    out.triplets.build()
}
