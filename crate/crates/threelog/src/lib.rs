//! Lower bounds for linear forms in three logarithms through an interpolation
//! determinant, the parameter recipe used for `F_n = y^p`, the two-logarithm
//! fallback for the degenerate case, and the iterated reduction of the
//! exponent bound.

mod dec;
mod fib;
mod lemmas;
mod maurice;
mod recipe;
mod reduce;
mod twolog;

pub use fib::{fib_a, fib_params, h_omega, h_sqrt5, ln_omega, main_case_bound, FibSetup, MainCase};
pub use lemmas::{factorial_bound, g_r, theta_greedy, theta_lower};
pub use maurice::{maurice_check, Condition, DegenerateWindows, MauriceVerdict, ZeroLemmaReading};
pub use recipe::{param_recipe, ThreeLogParams};
pub use reduce::{
    fib_p_reduction, matveev_first_bound, recheck_round, search_parameters, Grid, Reduction, ReductionOptions, Round,
};
pub use twolog::{c3_bound, c3_log_a2, t2_window, two_log_lower, C3Bound, TwoLogInput};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ThreeLogError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

/// An exact integer as an error-free real.
pub(crate) fn int(x: u128) -> bounds::Approx {
    bounds::Approx::exact(bounds::Real::parse(&x.to_string()))
}

/// `floor(x)` when the error interval does not straddle an integer.
pub(crate) fn floor_u128(x: &bounds::Approx) -> Result<u128, ThreeLogError> {
    let lo = (&x.v - &x.err).floor_biguint();
    let hi = (&x.v + &x.err).floor_biguint();
    if lo != hi {
        return Err(bounds::BoundsError::Precision(format!("floor undecided near {}", x.v.to_sci(20))).into());
    }
    u128::try_from(lo).map_err(|_| ThreeLogError::Domain("integer parameter exceeds 128 bits".into()))
}

/// Upper end of the error interval.
pub(crate) fn upper(x: &bounds::Approx) -> bounds::Real {
    &x.v + &x.err
}
