//! Interface representation, element/face classification and cut-cell
//! quadrature.

mod classify;
mod cutquad;
mod levelset;

pub use classify::{classify, ResolutionReport, CutClassification, Tag};
pub use cutquad::{cut_quadrature, CutCell, CutQuadrature, InterfacePoint};
pub use levelset::LevelSet;

/// One of the two fluid phases. `Minus` is where the level set is negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Minus,
    Plus,
}

impl Phase {
    pub const BOTH: [Phase; 2] = [Phase::Minus, Phase::Plus];

    pub fn index(self) -> usize {
        match self {
            Phase::Minus => 0,
            Phase::Plus => 1,
        }
    }

    /// Sign in the interface jump `[v] = v+ - v-`.
    pub fn jump_sign(self) -> f64 {
        match self {
            Phase::Minus => -1.0,
            Phase::Plus => 1.0,
        }
    }

    pub fn other(self) -> Phase {
        match self {
            Phase::Minus => Phase::Plus,
            Phase::Plus => Phase::Minus,
        }
    }
}

/// Default recursion depth of the cut-cell subdivision.
pub const DEFAULT_DEPTH: usize = 3;
