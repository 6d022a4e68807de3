//! Exact-arithmetic workbench for discrete Gram polynomials, best discrete
//! polynomial approximation, and extremal (k-1)-wise indistinguishable
//! symmetric distributions.
//!
//! Every computation is carried out over arbitrary-precision rationals;
//! floating point only appears when rendering reports.

pub mod approx;
pub mod arith;
pub mod cli;
pub mod distributions;
pub mod error;
pub mod extremal;
pub mod gram;
pub mod report;
pub mod simplex;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
