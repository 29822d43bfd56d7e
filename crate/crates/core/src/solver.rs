//! Sparse direct solution of the bordered saddle-point system.

use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::cholesky::ldlt::factor::{LdltError, LdltRegularization};
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, CholeskySymbolicParams, LdltRef, SymbolicCholesky, SymmetricOrdering,
};
use faer::{Conj, Mat, Par, Side};

use crate::error::{Error, Result};
use crate::forms::StokesSystem;
use crate::sparse::{SparseMatrix, TripletBuilder};

/// Largest accepted relative residual `|K x - rhs| / |rhs|`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Largest accepted `|c . p| / |p|`.
pub const CONSTRAINT_TOLERANCE: f64 = 1e-10;
/// Residual at which refinement stops.
const TARGET_RESIDUAL: f64 = 1e-3 * RESIDUAL_TOLERANCE;
const MAX_KRYLOV_ITERATIONS: usize = 200;
const RESTART: usize = 30;
/// Relative size of the pressure regularization of the factorized matrix.
const REGULARIZATION: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub size: usize,
    pub nnz: usize,
    /// Preconditioned GMRES iterations spent on refinement.
    pub krylov_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Free velocity unknowns, in the order of the degree-of-freedom map.
    pub velocity: Vec<f64>,
    /// Pressure unknowns.
    pub pressure: Vec<f64>,
    /// Lagrange multiplier of the mean-value constraint.
    pub multiplier: f64,
    pub relative_residual: f64,
    /// `|c . p| / |p|` (zero for a zero pressure).
    pub constraint_error: f64,
    pub stats: SolveStats,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Factorizes a regularized copy of the system matrix with a fill-reducing
/// sparse `LDL^T`, refines against the exact matrix with preconditioned
/// GMRES, and checks the residual and the mean-value constraint.
pub fn solve(system: &StokesSystem) -> Result<Solution> {
    let n = system.size();
    let (nv, np) = (system.num_velocity(), system.num_pressure());
    let stats = |krylov_iterations| SolveStats {
        size: n,
        nnz: system.matrix.nnz(),
        krylov_iterations,
    };
    let rhs_norm = norm(&system.rhs);
    if rhs_norm == 0.0 {
        return Ok(Solution {
            velocity: vec![0.0; nv],
            pressure: vec![0.0; np],
            multiplier: 0.0,
            relative_residual: 0.0,
            constraint_error: 0.0,
            stats: stats(0),
        });
    }

    let bordered = BorderedSolver::new(system)?;
    let solve_with = |b: &[f64]| bordered.solve(b);
    let residual = |x: &[f64]| -> Vec<f64> {
        let kx = system.matrix.mul_vec(x);
        system.rhs.iter().zip(&kx).map(|(b, y)| b - y).collect()
    };

    let mut x = solve_with(&system.rhs);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Factorization(
            "non-finite solution: numerically singular pivot (unstable parameters or degenerate cut)".into(),
        ));
    }
    let mut r = residual(&x);
    let mut rel = norm(&r) / rhs_norm;
    let mut iterations = 0;
    while rel > TARGET_RESIDUAL && iterations < MAX_KRYLOV_ITERATIONS {
        let tol = TARGET_RESIDUAL * rhs_norm;
        let (dx, its) = gmres_cycle(|v| system.matrix.mul_vec(v), solve_with, &r, tol);
        iterations += its;
        let trial: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
        let rt = residual(&trial);
        let rel_t = norm(&rt) / rhs_norm;
        if !(rel_t < rel) {
            break;
        }
        x = trial;
        r = rt;
        rel = rel_t;
    }
    if !(rel <= RESIDUAL_TOLERANCE) {
        return Err(Error::SolveCheck(format!(
            "relative residual {rel:.3e} exceeds {RESIDUAL_TOLERANCE:.0e}"
        )));
    }
    let pressure = x[nv..nv + np].to_vec();
    let cp: f64 = system.c.iter().zip(&pressure).map(|(c, p)| c * p).sum();
    let p_norm = norm(&pressure);
    let constraint_error = if p_norm > 0.0 { cp.abs() / p_norm } else { cp.abs() };
    if !(constraint_error <= CONSTRAINT_TOLERANCE) {
        return Err(Error::SolveCheck(format!(
            "pressure mean constraint {constraint_error:.3e} exceeds {CONSTRAINT_TOLERANCE:.0e}"
        )));
    }
    Ok(Solution {
        velocity: x[..nv].to_vec(),
        pressure,
        multiplier: x[n - 1],
        relative_residual: rel,
        constraint_error,
        stats: stats(iterations),
    })
}

/// Solves `K = [[K0, c], [c^T, 0]]` without factorizing the dense border.
///
/// The factorized matrix is the quasi-definite `K1 = K0 - diag(0, D)`, where
/// `D` is a small positive multiple of the diagonal of `B diag(A)^{-1} B^T`.
/// Quasi-definite matrices admit a sparse `LDL^T` factorization for any
/// symmetric ordering, so the fill-reducing ordering need not keep pressure
/// pivots away from the front. Solves with `M = [[K1, c], [c^T, 0]]` reduce to
/// one `K1` solve by a Schur complement on the multiplier; the gap between
/// `M` and `K` is removed by the GMRES refinement in [`solve`].
struct BorderedSolver {
    symbolic: SymbolicCholesky<usize>,
    values: Vec<f64>,
    solve_scratch: StackReq,
    c: Vec<f64>,
    /// `K1^{-1} c`.
    w: Vec<f64>,
    /// `c . w`.
    cw: f64,
}

impl BorderedSolver {
    fn new(system: &StokesSystem) -> Result<Self> {
        let n = system.size();
        let m = n - 1;
        let nv = system.num_velocity();
        let mut a_diag = vec![0.0; nv];
        for (i, j, v) in system.a.iter() {
            if i == j {
                a_diag[i] = v;
            }
        }
        let mut t = TripletBuilder::new(m, m);
        for (i, j, v) in system.matrix.iter() {
            if i < m && j <= i {
                t.push(i, j, v);
            }
        }
        for (p, d) in pressure_regularization(&system.b, &a_diag).into_iter().enumerate() {
            t.push(nv + p, nv + p, -d);
        }
        // The lower triangle in CSR is the upper triangle in CSC.
        let k1 = t.build().to_faer_transpose();
        let symbolic = factorize_symbolic_cholesky(
            k1.symbolic(),
            Side::Upper,
            SymmetricOrdering::Amd,
            CholeskySymbolicParams::default(),
        )
        .map_err(|e| Error::Factorization(format!("symbolic analysis failed: {e:?}")))?;
        let mut values = vec![0.0; symbolic.len_val()];
        let params = Default::default();
        let mut buffer = MemBuffer::new(symbolic.factorize_numeric_ldlt_scratch::<f64>(Par::Seq, params));
        symbolic
            .factorize_numeric_ldlt(
                &mut values,
                k1.as_ref(),
                Side::Upper,
                LdltRegularization::default(),
                Par::Seq,
                MemStack::new(&mut buffer),
                params,
            )
            .map_err(|e| match e {
                LdltError::ZeroPivot { index } => Error::Factorization(format!(
                    "zero pivot at {index} of {n}: numerically singular system (unstable parameters or degenerate cut)"
                )),
            })?;
        let solve_scratch = symbolic.solve_in_place_scratch::<f64>(1, Par::Seq);
        let mut c = vec![0.0; m];
        c[nv..].copy_from_slice(&system.c);
        let mut out = Self {
            symbolic,
            values,
            solve_scratch,
            w: Vec::new(),
            cw: 0.0,
            c,
        };
        out.w = out.solve_k1(&out.c);
        out.cw = dot(&out.c, &out.w);
        if !(out.cw.is_finite() && out.cw != 0.0) {
            return Err(Error::Factorization(
                "singular bordered system: numerically singular pivot (unstable parameters or degenerate cut)".into(),
            ));
        }
        Ok(out)
    }

    fn solve_k1(&self, b: &[f64]) -> Vec<f64> {
        let m = b.len();
        let mut x = Mat::<f64>::from_fn(m, 1, |i, _| b[i]);
        let mut buffer = MemBuffer::new(self.solve_scratch);
        LdltRef::new(&self.symbolic, &self.values).solve_in_place_with_conj(
            Conj::No,
            x.as_mut(),
            Par::Seq,
            MemStack::new(&mut buffer),
        );
        (0..m).map(|i| x[(i, 0)]).collect()
    }

    fn solve(&self, r: &[f64]) -> Vec<f64> {
        let m = r.len() - 1;
        let z = self.solve_k1(&r[..m]);
        let mu = (dot(&self.c, &z) - r[m]) / self.cw;
        let mut y: Vec<f64> = z.iter().zip(&self.w).map(|(a, b)| a - mu * b).collect();
        y.push(mu);
        y
    }
}

/// `REGULARIZATION * sum_j B_ij^2 / A_jj` per pressure row.
fn pressure_regularization(b: &SparseMatrix, a_diag: &[f64]) -> Vec<f64> {
    (0..b.nrows())
        .map(|i| REGULARIZATION * b.row(i).map(|(j, v)| v * v / a_diag[j].abs().max(f64::MIN_POSITIVE)).sum::<f64>())
        .collect()
}

/// One restarted cycle of right-preconditioned GMRES for `K d = r`, started
/// from `d = 0`. Stops when the estimated residual drops below `tol` or after
/// `RESTART` iterations; returns the correction and the iteration count.
fn gmres_cycle(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    precondition: impl Fn(&[f64]) -> Vec<f64>,
    r: &[f64],
    tol: f64,
) -> (Vec<f64>, usize) {
    let beta = norm(r);
    let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
    let mut preconditioned: Vec<Vec<f64>> = Vec::new();
    let mut hessenberg: Vec<Vec<f64>> = Vec::new();
    let mut rotations: Vec<(f64, f64)> = Vec::new();
    let mut g = vec![beta];
    for k in 0..RESTART {
        let z = precondition(&basis[k]);
        let mut w = apply(&z);
        preconditioned.push(z);
        let mut h = vec![0.0; k + 2];
        for (i, v) in basis.iter().enumerate() {
            h[i] = dot(&w, v);
            for (wj, vj) in w.iter_mut().zip(v) {
                *wj -= h[i] * vj;
            }
        }
        h[k + 1] = norm(&w);
        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, b) = (h[i], h[i + 1]);
            h[i] = c * a + s * b;
            h[i + 1] = -s * a + c * b;
        }
        let denom = h[k].hypot(h[k + 1]);
        let (c, s) = if denom == 0.0 { (1.0, 0.0) } else { (h[k] / denom, h[k + 1] / denom) };
        h[k] = denom;
        let breakdown = h[k + 1] == 0.0;
        h[k + 1] = 0.0;
        rotations.push((c, s));
        g.push(-s * g[k]);
        g[k] *= c;
        hessenberg.push(h);
        if g[k + 1].abs() <= tol || breakdown || !g[k + 1].is_finite() {
            break;
        }
        let inv = 1.0 / norm(&w);
        basis.push(w.into_iter().map(|v| v * inv).collect());
    }
    let m = hessenberg.len();
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let tail: f64 = (i + 1..m).map(|j| hessenberg[j][i] * y[j]).sum();
        y[i] = (g[i] - tail) / hessenberg[i][i];
    }
    let mut d = vec![0.0; r.len()];
    for (yi, z) in y.iter().zip(&preconditioned) {
        for (dj, zj) in d.iter_mut().zip(z) {
            *dj += yi * zj;
        }
    }
    (d, m)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
