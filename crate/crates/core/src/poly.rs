//! Bivariate polynomials stored as monomial coefficients, with exact
//! differentiation.

use std::ops::{Add, Mul};

/// `sum c_ij x^i y^j` over `i + j <= degree`, graded ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    degree: usize,
    coeffs: Vec<f64>,
}

fn index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn len(degree: usize) -> usize {
    (degree + 1) * (degree + 2) / 2
}

impl Poly {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; len(degree)],
        }
    }

    pub fn constant(c: f64) -> Self {
        Self {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn x() -> Self {
        let mut p = Self::zero(1);
        p.coeffs[index(1, 0)] = 1.0;
        p
    }

    pub fn y() -> Self {
        let mut p = Self::zero(1);
        p.coeffs[index(0, 1)] = 1.0;
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.degree {
            0.0
        } else {
            self.coeffs[index(i, j)]
        }
    }

    fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..=self.degree).flat_map(move |d| {
            (0..=d).map(move |j| (d - j, j, self.coeffs[index(d - j, j)]))
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Partial derivative in the first variable.
    pub fn dx(&self) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (i, j, c) in self.terms() {
            if i > 0 {
                out.coeffs[index(i - 1, j)] += i as f64 * c;
            }
        }
        out
    }

    /// Partial derivative in the second variable.
    pub fn dy(&self) -> Self {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (i, j, c) in self.terms() {
            if j > 0 {
                out.coeffs[index(i, j - 1)] += j as f64 * c;
            }
        }
        out
    }

    /// Directional derivative `d . grad p`.
    pub fn directional(&self, d: [f64; 2]) -> Self {
        &self.dx().scale(d[0]) + &self.dy().scale(d[1])
    }

    /// `k`-th directional derivative along `d`.
    pub fn directional_k(&self, d: [f64; 2], k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.directional(d);
        }
        p
    }

    pub fn eval(&self, p: [f64; 2]) -> f64 {
        // Horner in y inside Horner in x.
        let mut acc = 0.0;
        for i in (0..=self.degree).rev() {
            let mut inner = 0.0;
            for j in (0..=(self.degree - i)).rev() {
                inner = inner * p[1] + self.coeffs[index(i, j)];
            }
            acc = acc * p[0] + inner;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.degree.max(rhs.degree));
        for (i, j, c) in self.terms().chain(rhs.terms()) {
            out.coeffs[index(i, j)] += c;
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero(self.degree + rhs.degree);
        for (i, j, a) in self.terms() {
            if a == 0.0 {
                continue;
            }
            for (k, l, b) in rhs.terms() {
                out.coeffs[index(i + k, j + l)] += a * b;
            }
        }
        out
    }
}
