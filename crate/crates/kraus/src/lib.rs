//! For a prime `p`, a prime `l = 2kp + 1` can show that every solution has
//! `n = +-1 (mod p)`. The curve attached to a solution reduces mod `l` to one
//! of a few explicit curves `E^zeta`, and if none of them has the same trace
//! as `E` modulo `p`, the remaining possibility forces `n = +-1 (mod p)`.

mod certificate;
mod eliminate;
mod zeta;

pub use certificate::{
    check_conditions, kraus_search, kraus_search_fib, kraus_search_lucas, sweep, twisted_curve, verify_certificate,
    Checks, KrausCertificate, NotFound, RootChoice, DEFAULT_K_MAX,
};
pub use eliminate::{eliminate_newforms, EliminationReport, LocalReport};
pub use zeta::{zeta_set, ZetaSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum KrausError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
}
