//! Implicit interface descriptions `phi(x) = 0` with `phi < 0` in the minus
//! phase.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::Point;

#[derive(Debug, Clone, PartialEq)]
pub enum LevelSet {
    /// `|x - center| - radius`: the disk is the minus phase.
    Circle { center: Point, radius: f64 },
    /// `a x1 + b x2 + c`.
    HalfPlane { a: f64, b: f64, c: f64 },
    /// No interface in the domain when the value is nonzero.
    Constant(f64),
    /// `-phi`, swapping the phases.
    Negated(Box<LevelSet>),
    /// `phi(x - offset)`.
    Shifted { inner: Box<LevelSet>, offset: Point },
    /// `phi(R(-angle) (x - about) + about)`: the zero set rotated by `angle`.
    Rotated {
        inner: Box<LevelSet>,
        angle: f64,
        about: Point,
    },
}

impl LevelSet {
    pub fn circle(center: Point, radius: f64) -> Self {
        LevelSet::Circle { center, radius }
    }

    pub fn half_plane(a: f64, b: f64, c: f64) -> Self {
        LevelSet::HalfPlane { a, b, c }
    }

    pub fn negated(self) -> Self {
        match self {
            LevelSet::Negated(inner) => *inner,
            other => LevelSet::Negated(Box::new(other)),
        }
    }

    pub fn shifted(self, offset: Point) -> Self {
        LevelSet::Shifted {
            inner: Box::new(self),
            offset,
        }
    }

    pub fn rotated(self, angle: f64, about: Point) -> Self {
        LevelSet::Rotated {
            inner: Box::new(self),
            angle,
            about,
        }
    }

    pub fn value(&self, x: Point) -> f64 {
        match self {
            LevelSet::Circle { center, radius } => {
                ((x[0] - center[0]).powi(2) + (x[1] - center[1]).powi(2)).sqrt() - radius
            }
            LevelSet::HalfPlane { a, b, c } => a * x[0] + b * x[1] + c,
            LevelSet::Constant(v) => *v,
            LevelSet::Negated(inner) => -inner.value(x),
            LevelSet::Shifted { inner, offset } => {
                inner.value([x[0] - offset[0], x[1] - offset[1]])
            }
            LevelSet::Rotated {
                inner,
                angle,
                about,
            } => inner.value(rotate(x, -angle, *about)),
        }
    }

    pub fn gradient(&self, x: Point) -> Point {
        match self {
            LevelSet::Circle { center, .. } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = (d[0] * d[0] + d[1] * d[1]).sqrt();
                if r == 0.0 {
                    [0.0, 0.0]
                } else {
                    [d[0] / r, d[1] / r]
                }
            }
            LevelSet::HalfPlane { a, b, .. } => [*a, *b],
            LevelSet::Constant(_) => [0.0, 0.0],
            LevelSet::Negated(inner) => {
                let g = inner.gradient(x);
                [-g[0], -g[1]]
            }
            LevelSet::Shifted { inner, offset } => {
                inner.gradient([x[0] - offset[0], x[1] - offset[1]])
            }
            LevelSet::Rotated {
                inner,
                angle,
                about,
            } => {
                let g = inner.gradient(rotate(x, -angle, *about));
                rotate(g, *angle, [0.0, 0.0])
            }
        }
    }

    /// Unit normal `-grad phi / |grad phi|`, pointing from the plus phase into
    /// the minus phase. `None` where the gradient vanishes.
    pub fn normal(&self, x: Point) -> Option<Point> {
        let g = self.gradient(x);
        let m = (g[0] * g[0] + g[1] * g[1]).sqrt();
        (m > 0.0).then(|| [-g[0] / m, -g[1] / m])
    }
}

fn rotate(x: Point, angle: f64, about: Point) -> Point {
    let (s, c) = angle.sin_cos();
    let d = [x[0] - about[0], x[1] - about[1]];
    [about[0] + c * d[0] - s * d[1], about[1] + s * d[0] + c * d[1]]
}

impl fmt::Display for LevelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSet::Circle { center, radius } => {
                write!(f, "circle{{{},{},{}}}", center[0], center[1], radius)
            }
            LevelSet::HalfPlane { a, b, c } => write!(f, "halfplane{{{a},{b},{c}}}"),
            LevelSet::Constant(v) => write!(f, "constant{{{v}}}"),
            LevelSet::Negated(inner) => write!(f, "-{inner}"),
            LevelSet::Shifted { inner, offset } => {
                write!(f, "shift{{{},{}}}({inner})", offset[0], offset[1])
            }
            LevelSet::Rotated {
                inner,
                angle,
                about,
            } => write!(f, "rotate{{{angle},{},{}}}({inner})", about[0], about[1]),
        }
    }
}

/// Parses `circle{cx,cy,R}`, `halfplane{a,b,c}` and `constant{v}`. A leading
/// `-` swaps the phases.
impl FromStr for LevelSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix('-') {
            return Ok(rest.parse::<LevelSet>()?.negated());
        }
        let bad = |msg: String| Error::InvalidParameter {
            name: "level_set",
            msg,
        };
        let open = s
            .find('{')
            .ok_or_else(|| bad(format!("expected name{{...}}, got {s:?}")))?;
        if !s.ends_with('}') {
            return Err(bad(format!("missing closing brace in {s:?}")));
        }
        let name = s[..open].trim();
        let args = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("argument {a:?} in {s:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!("{name} takes {n} arguments, got {}", args.len())))
            }
        };
        match name {
            "circle" => {
                arity(3)?;
                if args[2] <= 0.0 {
                    return Err(bad(format!("circle radius must be positive, got {}", args[2])));
                }
                Ok(LevelSet::circle([args[0], args[1]], args[2]))
            }
            "halfplane" => {
                arity(3)?;
                if args[0] == 0.0 && args[1] == 0.0 {
                    return Err(bad("halfplane needs (a, b) != (0, 0)".into()));
                }
                Ok(LevelSet::half_plane(args[0], args[1], args[2]))
            }
            "constant" => {
                arity(1)?;
                Ok(LevelSet::Constant(args[0]))
            }
            other => Err(bad(format!("unknown level set {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_sign_and_normal() {
        let phi = LevelSet::circle([0.0, 0.0], 0.5);
        assert!(phi.value([0.0, 0.0]) < 0.0);
        assert!(phi.value([1.0, 0.0]) > 0.0);
        let n = phi.normal([0.5, 0.0]).unwrap();
        // Points into the disk, i.e. from the plus phase to the minus phase.
        assert!((n[0] + 1.0).abs() < 1e-15 && n[1].abs() < 1e-15);
        let swapped = phi.clone().negated();
        assert_eq!(swapped.value([0.2, 0.1]), -phi.value([0.2, 0.1]));
        assert_eq!(swapped.negated(), phi);
    }

    #[test]
    fn composites_match_finite_differences() {
        let phi = LevelSet::circle([0.1, -0.2], 0.4)
            .shifted([0.05, 0.02])
            .rotated(0.3, [0.2, 0.1]);
        let x = [0.37, 0.11];
        let g = phi.gradient(x);
        let eps = 1e-6;
        let gx = (phi.value([x[0] + eps, x[1]]) - phi.value([x[0] - eps, x[1]])) / (2.0 * eps);
        let gy = (phi.value([x[0], x[1] + eps]) - phi.value([x[0], x[1] - eps])) / (2.0 * eps);
        assert!((g[0] - gx).abs() < 1e-8 && (g[1] - gy).abs() < 1e-8);
    }

    #[test]
    fn parse_round_trip() {
        let phi: LevelSet = "circle{0, 0, 0.5}".parse().unwrap();
        assert_eq!(phi, LevelSet::circle([0.0, 0.0], 0.5));
        let hp: LevelSet = "-halfplane{1,0,-0.25}".parse().unwrap();
        assert_eq!(hp, LevelSet::half_plane(1.0, 0.0, -0.25).negated());
        assert_eq!(hp.to_string().parse::<LevelSet>().unwrap(), hp);
        assert!("circle{0,0}".parse::<LevelSet>().is_err());
        assert!("ellipse{0,0,1}".parse::<LevelSet>().is_err());
        assert!("circle{0,0,-1}".parse::<LevelSet>().is_err());
    }
}
