//! Reference elements, velocity/pressure pairs and doubled degree-of-freedom
//! maps over the two phase patches.

mod dofmap;
mod reference;

use std::fmt;
use std::str::FromStr;

pub use dofmap::{build_space, DofMap, Slot};
pub use reference::{ElementMap, Family, ReferenceElement, ShapeValues};

use crate::error::Error;

/// The two velocity/pressure pairs of the method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementPair {
    /// P1 plus cubic bubble velocity, continuous P1 pressure.
    Mini,
    /// Continuous P2 velocity, piecewise-constant pressure.
    P2P0,
}

impl ElementPair {
    pub const ALL: [ElementPair; 2] = [ElementPair::Mini, ElementPair::P2P0];

    pub fn velocity_family(self) -> Family {
        match self {
            ElementPair::Mini => Family::P1Bubble,
            ElementPair::P2P0 => Family::P2,
        }
    }

    pub fn pressure_family(self) -> Family {
        match self {
            ElementPair::Mini => Family::P1,
            ElementPair::P2P0 => Family::P0,
        }
    }

    /// Degree of the full polynomial space contained in the velocity space.
    pub fn k_u(self) -> usize {
        match self {
            ElementPair::Mini => 1,
            ElementPair::P2P0 => 2,
        }
    }

    /// Degree of the polynomial space containing the velocity space; the
    /// highest normal derivative penalized across faces.
    pub fn s(self) -> usize {
        match self {
            ElementPair::Mini => 3,
            ElementPair::P2P0 => 2,
        }
    }

    pub fn k_p(self) -> usize {
        match self {
            ElementPair::Mini => 1,
            ElementPair::P2P0 => 0,
        }
    }

    pub fn pressure_continuous(self) -> bool {
        matches!(self, ElementPair::Mini)
    }

    pub fn name(self) -> &'static str {
        match self {
            ElementPair::Mini => "mini",
            ElementPair::P2P0 => "p2p0",
        }
    }

    /// Default subdomain quadrature order `2 * velocity degree + 2`.
    pub fn default_quadrature_order(self) -> usize {
        2 * self.s() + 2
    }
}

impl fmt::Display for ElementPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mini" => Ok(ElementPair::Mini),
            "p2p0" | "p2-p0" => Ok(ElementPair::P2P0),
            other => Err(Error::InvalidParameter {
                name: "pair",
                msg: format!("unknown element pair {other:?} (expected mini or p2p0)"),
            }),
        }
    }
}
