//! Interface terms on `T ∩ Γ` for every cut element.

use super::builder::{par_assemble, pressure_dof, velocity_dof};
use super::bulk::push_vv;
use super::system::{BoundaryValues, Block};
use super::{Discretization, FormParams};
use crate::fespace::ElementMap;
use crate::geometry::Phase;

/// Nitsche coupling with one-sided minus-phase fluxes:
/// `-(nu- D(u-) n, [v]) - (nu- D(v-) n, [u]) + (gamma / h_T) nu- ([u], [v])`.
pub fn assemble_nitsche(disc: &Discretization, params: &FormParams, bv: &BoundaryValues) -> Block {
    let nv = disc.dofs.num_velocity();
    let vel = disc.dofs.velocity_element();
    let nb = vel.len();
    let n2 = 2 * nb;
    let nu_m = params.nu(Phase::Minus);
    let b = par_assemble(disc.classification.cut_elements(), nv, nv, |t, out| {
        let ipts = disc.quadrature.interface(t);
        if ipts.is_empty() {
            return;
        }
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let nodes = disc.dofs.element_velocity_nodes(t);
        let pen = params.gamma / disc.mesh.diameter(t) * nu_m;
        // local[sigma][tau] is the (test phase, trial phase) block.
        let mut local = vec![vec![vec![0.0; n2 * n2]; 2]; 2];
        for ip in ipts {
            let s = vel.eval_physical(&map, ip.x);
            let n = ip.normal;
            let w = ip.weight;
            let dn: Vec<f64> = s.gradients.iter().map(|g| g[0] * n[0] + g[1] * n[1]).collect();
            for sigma in Phase::BOTH {
                for tau in Phase::BOTH {
                    let ss = sigma.jump_sign();
                    let st = tau.jump_sign();
                    let blk = &mut local[sigma.index()][tau.index()];
                    for i in 0..nb {
                        for j in 0..nb {
                            for a in 0..2 {
                                for bb in 0..2 {
                                    let d_ab = if a == bb { 1.0 } else { 0.0 };
                                    let mut v = pen * ss * st * s.values[i] * s.values[j] * d_ab;
                                    if tau == Phase::Minus {
                                        // (D(phi_j e_b) n)_a
                                        let flux = 0.5 * (d_ab * dn[j] + n[bb] * s.gradients[j][a]);
                                        v -= nu_m * ss * s.values[i] * flux;
                                    }
                                    if sigma == Phase::Minus {
                                        let flux = 0.5 * (d_ab * dn[i] + n[a] * s.gradients[i][bb]);
                                        v -= nu_m * st * s.values[j] * flux;
                                    }
                                    blk[(2 * i + a) * n2 + 2 * j + bb] += w * v;
                                }
                            }
                        }
                    }
                }
            }
        }
        for sigma in Phase::BOTH {
            for tau in Phase::BOTH {
                push_vv(out, disc, bv, sigma, nodes, tau, nodes, &local[sigma.index()][tau.index()]);
            }
        }
    });
    Block::from_builder(b, nv)
}

/// `(q-, [v] . n)_Γ`; rows are pressures, columns velocities.
pub fn assemble_b_interface(disc: &Discretization, bv: &BoundaryValues) -> Block {
    let (nv, np) = (disc.dofs.num_velocity(), disc.dofs.num_pressure());
    let vel = disc.dofs.velocity_element();
    let pre = disc.dofs.pressure_element();
    let b = par_assemble(disc.classification.cut_elements(), np, nv, |t, out| {
        let ipts = disc.quadrature.interface(t);
        if ipts.is_empty() {
            return;
        }
        let map = ElementMap::new(&disc.mesh.element_vertices(t));
        let vnodes = disc.dofs.element_velocity_nodes(t);
        let pnodes = disc.dofs.element_pressure_nodes(t);
        let nc = 2 * vnodes.len();
        let mut local = vec![vec![0.0; pnodes.len() * nc]; 2];
        for ip in ipts {
            let xi = map.to_reference(ip.x);
            let phi = vel.values(xi);
            let q = pre.values(xi);
            for tau in Phase::BOTH {
                let st = tau.jump_sign();
                for (k, qk) in q.iter().enumerate() {
                    for (j, pj) in phi.iter().enumerate() {
                        for c in 0..2 {
                            local[tau.index()][k * nc + 2 * j + c] += ip.weight * qk * st * pj * ip.normal[c];
                        }
                    }
                }
            }
        }
        for tau in Phase::BOTH {
            for (k, &pk) in pnodes.iter().enumerate() {
                let row = Some(pressure_dof(disc.dofs, Phase::Minus, pk));
                for (j, &nj) in vnodes.iter().enumerate() {
                    for c in 0..2 {
                        let (_, col) = velocity_dof(disc.dofs, bv, tau, nj, c);
                        out.add(row, col, local[tau.index()][k * nc + 2 * j + c]);
                    }
                }
            }
        }
    });
    Block::from_builder(b, np)
}
