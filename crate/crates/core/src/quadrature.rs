//! Gauss rules on the unit interval and on triangles.

use std::f64::consts::PI;

use crate::mesh::Point;

/// Gauss-Legendre rule with `n` points on `[0, 1]`; exact for degree `2n - 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for k in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) as f64 * z * p1 - k as f64 * p2) / (k + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    // Map [-1, 1] -> [0, 1].
    let x = x.into_iter().map(|t| 0.5 * (t + 1.0)).collect();
    let w = w.into_iter().map(|t| 0.5 * t).collect();
    (x, w)
}

/// A quadrature rule on the reference triangle `(0,0), (1,0), (0,1)`.
#[derive(Debug, Clone)]
pub struct TriangleRule {
    pub order: usize,
    pub points: Vec<Point>,
    /// Weights sum to the reference area `1/2`.
    pub weights: Vec<f64>,
}

impl TriangleRule {
    /// Collapsed (Duffy) tensor Gauss rule exact for polynomials of total
    /// degree `order`.
    pub fn new(order: usize) -> Self {
        let k = (order + 2).div_ceil(2).max(1);
        let (x, w) = gauss_legendre(k);
        let mut points = Vec::with_capacity(k * k);
        let mut weights = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let u = x[i];
                let v = x[j] * (1.0 - u);
                points.push([u, v]);
                weights.push(w[i] * w[j] * (1.0 - u));
            }
        }
        Self {
            order,
            points,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Physical points and weights on the triangle `tri`.
    pub fn map_to(&self, tri: &[Point; 3]) -> impl Iterator<Item = (Point, f64)> + '_ {
        let [a, b, c] = *tri;
        let det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        let scale = det.abs();
        self.points.iter().zip(&self.weights).map(move |(p, &w)| {
            (
                [
                    a[0] + p[0] * (b[0] - a[0]) + p[1] * (c[0] - a[0]),
                    a[1] + p[0] * (b[1] - a[1]) + p[1] * (c[1] - a[1]),
                ],
                w * scale,
            )
        })
    }
}
