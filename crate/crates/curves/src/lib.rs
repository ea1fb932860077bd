//! Elliptic curves over prime fields.
//!
//! Traces are computed by summing the quadratic character of the cubic
//! `4x^3 + b2 x^2 + 2 b4 x + b6` over the field, which is `O(l)`.

mod catalog;
mod model;
mod trace;

pub use catalog::{j_invariant, Catalog, CatalogCurve};
pub use model::{frey_fib, frey_lucas, CurveModL, Reduction};
pub use trace::{count_points_naive, trace_euler, trace_of_frobenius, TraceEngine, TraceResult};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve is singular modulo {0}")]
    Singular(u64),
    #[error("modulus {0} must be an odd prime")]
    BadModulus(u64),
    #[error("catalog error: {0}")]
    Catalog(String),
}
