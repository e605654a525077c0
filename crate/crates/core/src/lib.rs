//! k-bonacci vector Zeckendorf representations.
//!
//! Every `v` in `Z^{k-1}` is a unique sum of distinct k-bonacci vectors
//! `X_{-i}` with no `k` consecutive indices (its satisfying representation).
//! This crate computes those representations by several independent routes
//! and checks their structural and statistical properties.

pub mod bench;
pub mod error;
pub mod genfunc;
pub mod minimality;
pub mod representation;
pub mod scalar_greedy;
pub mod sequences;
pub mod solver;
pub mod spectral;
pub mod statistics;

pub use error::{Error, Result};
pub use representation::{CoefficientVector, IndexSet, ScalarIndexSet};
pub use sequences::{KBonacciContext, Norms, VecZ};
pub use solver::{BoundStrategy, Decomposition, JBound, Solver};
