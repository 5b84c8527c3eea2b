//! Exact-arithmetic toolkit for simultaneous Diophantine approximation on
//! polynomial curves `(X, P_2(X), ..., P_k(X))` over the rationals.

pub mod arith;
pub mod contfrac;
pub mod engine;
pub mod error;
pub mod factory;
pub mod format;
pub mod polycurve;
pub mod report;

pub use error::{Error, Result};
