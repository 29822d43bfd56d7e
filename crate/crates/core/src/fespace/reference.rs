//! Reference shape functions stored as exact polynomials, and the affine map
//! to physical elements.

use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::poly::Poly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    P0,
    P1,
    P2,
    /// P1 enriched with the cubic bubble, in the hierarchical basis
    /// `lambda_i`, `lambda_0 lambda_1 lambda_2`.
    P1Bubble,
}

/// Shape functions on the triangle `(0,0), (1,0), (0,1)`. All families are
/// Lagrange bases except the hierarchical bubble, whose coefficients follow
/// from nodal values through [`ReferenceElement::coefficients_from_nodal`].
#[derive(Debug, Clone)]
pub struct ReferenceElement {
    family: Family,
    basis: Vec<Poly>,
    dx: Vec<Poly>,
    dy: Vec<Poly>,
    nodes: Vec<Point>,
    degree: usize,
}

fn barycentric() -> [Poly; 3] {
    let one = Poly::constant(1.0);
    let l0 = &(&one + &Poly::x().scale(-1.0)) + &Poly::y().scale(-1.0);
    [l0, Poly::x(), Poly::y()]
}

impl ReferenceElement {
    pub fn new(family: Family) -> Self {
        let l = barycentric();
        let one = Poly::constant(1.0);
        let (basis, nodes, degree): (Vec<Poly>, Vec<Point>, usize) = match family {
            Family::P0 => (vec![one], vec![[1.0 / 3.0, 1.0 / 3.0]], 0),
            Family::P1 => (
                l.to_vec(),
                vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
                1,
            ),
            Family::P2 => {
                let mut b: Vec<Poly> = l
                    .iter()
                    .map(|li| li * &(&li.scale(2.0) + &one.scale(-1.0)))
                    .collect();
                // Edge k is opposite vertex k.
                for k in 0..3 {
                    b.push((&l[(k + 1) % 3] * &l[(k + 2) % 3]).scale(4.0));
                }
                (
                    b,
                    vec![
                        [0.0, 0.0],
                        [1.0, 0.0],
                        [0.0, 1.0],
                        [0.5, 0.5],
                        [0.0, 0.5],
                        [0.5, 0.0],
                    ],
                    2,
                )
            }
            Family::P1Bubble => {
                // The nodal variant (27 l0 l1 l2 with the vertex functions
                // corrected by a third of it) spreads the cubic ghost terms
                // over every vertex row and worsens the conditioning.
                let mut b = l.to_vec();
                b.push(&(&l[0] * &l[1]) * &l[2]);
                (
                    b,
                    vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0 / 3.0, 1.0 / 3.0]],
                    3,
                )
            }
        };
        let dx = basis.iter().map(Poly::dx).collect();
        let dy = basis.iter().map(Poly::dy).collect();
        Self {
            family,
            basis,
            dx,
            dy,
            nodes,
            degree,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Highest polynomial degree in the basis, which bounds the nonzero
    /// derivative orders.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    /// Whether [`ReferenceElement::coefficients_from_nodal`] differs from the
    /// identity.
    pub fn has_interior_correction(&self) -> bool {
        self.family == Family::P1Bubble
    }

    /// Expansion coefficients of the interpolant with the given values at
    /// [`ReferenceElement::nodes`].
    pub fn coefficients_from_nodal(&self, nodal: &[f64]) -> Vec<f64> {
        let mut c = nodal.to_vec();
        if self.family == Family::P1Bubble {
            c[3] = 27.0 * (nodal[3] - (nodal[0] + nodal[1] + nodal[2]) / 3.0);
        }
        c
    }

    pub fn values(&self, xi: Point) -> Vec<f64> {
        self.basis.iter().map(|p| p.eval(xi)).collect()
    }

    pub fn reference_gradients(&self, xi: Point) -> Vec<Point> {
        self.dx
            .iter()
            .zip(&self.dy)
            .map(|(a, b)| [a.eval(xi), b.eval(xi)])
            .collect()
    }

    /// All partial derivatives of order `order` at `xi`: for each shape
    /// function, `d^order / dxi^(order-j) deta^j` for `j = 0..=order`.
    pub fn derivatives(&self, xi: Point, order: usize) -> Result<Vec<Vec<f64>>> {
        if order > self.degree {
            return Err(Error::DerivativeOrder {
                order,
                max: self.degree,
            });
        }
        Ok(self
            .basis
            .iter()
            .map(|p| {
                (0..=order)
                    .map(|j| {
                        let mut q = p.clone();
                        for _ in 0..(order - j) {
                            q = q.dx();
                        }
                        for _ in 0..j {
                            q = q.dy();
                        }
                        q.eval(xi)
                    })
                    .collect()
            })
            .collect())
    }

    /// `order`-th derivative of every shape function along the reference
    /// direction `d`, as polynomials.
    pub fn directional_polys(&self, d: Point, order: usize) -> Result<Vec<Poly>> {
        if order > self.degree {
            return Err(Error::DerivativeOrder {
                order,
                max: self.degree,
            });
        }
        Ok(self.basis.iter().map(|p| p.directional_k(d, order)).collect())
    }
}

/// Affine map `x = x0 + J xi` of the reference triangle onto an element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementMap {
    pub x0: Point,
    pub jac: [[f64; 2]; 2],
    pub inv: [[f64; 2]; 2],
    pub det: f64,
}

impl ElementMap {
    pub fn new(tri: &[Point; 3]) -> Self {
        let jac = [
            [tri[1][0] - tri[0][0], tri[2][0] - tri[0][0]],
            [tri[1][1] - tri[0][1], tri[2][1] - tri[0][1]],
        ];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        Self {
            x0: tri[0],
            jac,
            inv,
            det,
        }
    }

    pub fn to_physical(&self, xi: Point) -> Point {
        [
            self.x0[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.x0[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn to_reference(&self, x: Point) -> Point {
        let d = [x[0] - self.x0[0], x[1] - self.x0[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    /// Physical gradient `J^{-T} g` from a reference gradient `g`.
    #[inline]
    pub fn gradient(&self, g: Point) -> Point {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }

    /// Reference direction `J^{-1} n`, so that `d/dn = (J^{-1} n) . grad_xi`.
    pub fn reference_direction(&self, n: Point) -> Point {
        [
            self.inv[0][0] * n[0] + self.inv[0][1] * n[1],
            self.inv[1][0] * n[0] + self.inv[1][1] * n[1],
        ]
    }
}

/// Values and physical gradients of all shape functions at one point.
#[derive(Debug, Clone, Default)]
pub struct ShapeValues {
    pub values: Vec<f64>,
    pub gradients: Vec<Point>,
}

impl ReferenceElement {
    /// Values and physical gradients at the physical point `x`, which may lie
    /// anywhere (polynomials extend beyond the element).
    pub fn eval_physical(&self, map: &ElementMap, x: Point) -> ShapeValues {
        let xi = map.to_reference(x);
        ShapeValues {
            values: self.values(xi),
            gradients: self
                .reference_gradients(xi)
                .into_iter()
                .map(|g| map.gradient(g))
                .collect(),
        }
    }

    /// `order`-th derivative along the physical unit vector `n` at `x`.
    pub fn eval_normal_derivative(
        &self,
        map: &ElementMap,
        x: Point,
        n: Point,
        order: usize,
    ) -> Result<Vec<f64>> {
        let d = map.reference_direction(n);
        let xi = map.to_reference(x);
        Ok(self
            .directional_polys(d, order)?
            .iter()
            .map(|p| p.eval(xi))
            .collect())
    }
}
