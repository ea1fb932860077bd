//! Congruence sieve on the index `n`.
//!
//! For each prime `l` the Frey curve of a solution must have the same trace
//! as a fixed curve modulo every prime `p > q`. That pins `n` to a set of
//! classes `N(l, q)`. Intersecting many of these over a common smooth modulus
//! leaves a handful of classes and hence an explicit lower bound `n >= a`.

pub mod nset;
pub mod residue;
pub mod session;

pub use nset::{k_of, n_set_fib, n_set_lucas, NSetOracle, SievePair};
pub use residue::ResidueClassSet;
pub use session::{run_sieve, Checkpoint, Outcome, Progress, SieveSession, StageRecord, Strategy};

#[derive(Debug, thiserror::Error)]
pub enum SieveError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
    #[error(transparent)]
    Bounds(#[from] bounds::BoundsError),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
