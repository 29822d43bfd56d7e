//! Unfitted finite elements for the stationary two-phase Stokes interface
//! problem with piecewise-constant viscosity.

pub mod cases;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod extension;
pub mod fespace;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod mesh;
pub mod norms;
pub mod poly;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
