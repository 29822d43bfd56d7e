//! Subdomain integrals: viscous term, divergence coupling, loads and the
//! pressure mean-value constraint.

use super::builder::{par_assemble, par_vector, pressure_dof, velocity_dof};
use super::system::{BoundaryValues, Block};
use super::{Discretization, FormParams, ProblemData};
use crate::fespace::ElementMap;
use crate::geometry::Phase;

fn all_elements(disc: &Discretization) -> Vec<usize> {
    (0..disc.mesh.num_elements()).collect()
}

/// `sum_± (nu± D(u±), D(v±))_{Ω±}`.
pub fn assemble_viscous(disc: &Discretization, params: &FormParams, bv: &BoundaryValues) -> Block {
    let nv = disc.dofs.num_velocity();
    let vel = disc.dofs.velocity_element();
    let nb = vel.len();
    let b = par_assemble(&all_elements(disc), nv, nv, |t, out| {
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let nodes = disc.dofs.element_velocity_nodes(t);
        for phase in Phase::BOTH {
            if !disc.classification.is_active(t, phase) {
                continue;
            }
            let pts = disc.quadrature.side(disc.mesh, t, phase);
            if pts.is_empty() {
                continue;
            }
            let nu = params.nu(phase);
            // local[(i, a), (j, b)], row-major with index 2 * i + a.
            let n2 = 2 * nb;
            let mut local = vec![0.0; n2 * n2];
            for &(x, w) in &pts {
                let s = vel.eval_physical(&map, x);
                for i in 0..nb {
                    let gi = s.gradients[i];
                    for j in 0..nb {
                        let gj = s.gradients[j];
                        let dot = gi[0] * gj[0] + gi[1] * gj[1];
                        for a in 0..2 {
                            for bb in 0..2 {
                                let mut v = gj[a] * gi[bb];
                                if a == bb {
                                    v += dot;
                                }
                                local[(2 * i + a) * n2 + 2 * j + bb] += 0.5 * nu * w * v;
                            }
                        }
                    }
                }
            }
            push_vv(out, disc, bv, phase, nodes, phase, nodes, &local);
        }
    });
    Block::from_builder(b, nv)
}

/// Pushes a dense local velocity-velocity matrix with rows from
/// `(row_phase, row_nodes)` and columns from `(col_phase, col_nodes)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn push_vv(
    out: &mut super::builder::BlockBuilder,
    disc: &Discretization,
    bv: &BoundaryValues,
    row_phase: Phase,
    row_nodes: &[usize],
    col_phase: Phase,
    col_nodes: &[usize],
    local: &[f64],
) {
    let nc = 2 * col_nodes.len();
    for (i, &ni) in row_nodes.iter().enumerate() {
        for a in 0..2 {
            let (row, _) = velocity_dof(disc.dofs, bv, row_phase, ni, a);
            if row.is_none() {
                continue;
            }
            for (j, &nj) in col_nodes.iter().enumerate() {
                for b in 0..2 {
                    let v = local[(2 * i + a) * nc + 2 * j + b];
                    if v != 0.0 {
                        let (_, col) = velocity_dof(disc.dofs, bv, col_phase, nj, b);
                        out.add(row, col, v);
                    }
                }
            }
        }
    }
}

/// `-sum_± (q±, div v±)_{Ω±}`; rows are pressures, columns velocities.
pub fn assemble_b_bulk(disc: &Discretization, bv: &BoundaryValues) -> Block {
    let (nv, np) = (disc.dofs.num_velocity(), disc.dofs.num_pressure());
    let vel = disc.dofs.velocity_element();
    let pre = disc.dofs.pressure_element();
    let b = par_assemble(&all_elements(disc), np, nv, |t, out| {
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let vnodes = disc.dofs.element_velocity_nodes(t);
        let pnodes = disc.dofs.element_pressure_nodes(t);
        for phase in Phase::BOTH {
            if !disc.classification.is_active(t, phase) {
                continue;
            }
            let pts = disc.quadrature.side(disc.mesh, t, phase);
            if pts.is_empty() {
                continue;
            }
            let mut local = vec![0.0; pnodes.len() * 2 * vnodes.len()];
            let nc = 2 * vnodes.len();
            for &(x, w) in &pts {
                let s = vel.eval_physical(&map, x);
                let q = pre.values(map.to_reference(x));
                for (k, qk) in q.iter().enumerate() {
                    for j in 0..vnodes.len() {
                        for c in 0..2 {
                            local[k * nc + 2 * j + c] -= w * qk * s.gradients[j][c];
                        }
                    }
                }
            }
            for (k, &pk) in pnodes.iter().enumerate() {
                let row = Some(pressure_dof(disc.dofs, phase, pk));
                for (j, &nj) in vnodes.iter().enumerate() {
                    for c in 0..2 {
                        let (_, col) = velocity_dof(disc.dofs, bv, phase, nj, c);
                        out.add(row, col, local[k * nc + 2 * j + c]);
                    }
                }
            }
        }
    });
    Block::from_builder(b, np)
}

/// `sum_± (f±, v±)_{Ω±}` plus `(λ, v+)_Γ`.
pub fn assemble_f(disc: &Discretization, data: &dyn ProblemData) -> Vec<f64> {
    let nv = disc.dofs.num_velocity();
    let vel = disc.dofs.velocity_element();
    par_vector(&all_elements(disc), nv, |t, out| {
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let nodes = disc.dofs.element_velocity_nodes(t);
        let mut push = |phase: Phase, x, w: f64, f: [f64; 2]| {
            let phi = vel.values(map.to_reference(x));
            for (i, &ni) in nodes.iter().enumerate() {
                if let Some(r) = disc.dofs.velocity_slot(phase, ni).free() {
                    out.push((r, w * f[0] * phi[i]));
                    out.push((r + 1, w * f[1] * phi[i]));
                }
            }
        };
        for phase in Phase::BOTH {
            if !disc.classification.is_active(t, phase) {
                continue;
            }
            for (x, w) in disc.quadrature.side(disc.mesh, t, phase) {
                push(phase, x, w, data.force(phase, x));
            }
        }
        for ip in disc.quadrature.interface(t) {
            push(Phase::Plus, ip.x, ip.weight, data.interface_force(ip.x));
        }
    })
}

/// `-sum_± (g, q±)_{Ω±}`, indexed within the pressure block.
pub fn assemble_g(disc: &Discretization, data: &dyn ProblemData) -> Vec<f64> {
    pressure_load(disc, |phase, x| -data.divergence(phase, x))
}

/// `c_k = ∫_{Ω^σ(k)} ψ_k`, so that `c . p = (p-, 1)_{Ω-} + (p+, 1)_{Ω+}`.
pub fn mean_constraint(disc: &Discretization) -> Vec<f64> {
    pressure_load(disc, |_, _| 1.0)
}

fn pressure_load(disc: &Discretization, g: impl Fn(Phase, crate::mesh::Point) -> f64 + Sync) -> Vec<f64> {
    let np = disc.dofs.num_pressure();
    let pre = disc.dofs.pressure_element();
    par_vector(&all_elements(disc), np, |t, out| {
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let pnodes = disc.dofs.element_pressure_nodes(t);
        for phase in Phase::BOTH {
            if !disc.classification.is_active(t, phase) {
                continue;
            }
            for (x, w) in disc.quadrature.side(disc.mesh, t, phase) {
                let q = pre.values(map.to_reference(x));
                let gx = g(phase, x);
                for (k, &pk) in pnodes.iter().enumerate() {
                    out.push((pressure_dof(disc.dofs, phase, pk), w * gx * q[k]));
                }
            }
        }
    })
}
