//! Analytic upper bounds evaluated in log space.
//!
//! Quantities such as `10^8733` never exist as numbers here. They are carried
//! as natural logarithms with an explicit error bound, and every decision
//! compares values only when the margin is at least ten times that bound.

pub mod approx;
pub mod lgamma;
pub mod logmag;
pub mod real;

pub use approx::Approx;
pub use lgamma::{ln_factorial_exact, ln_factorial_sum, ln_gamma};
pub use logmag::LogMagnitude;
pub use real::{precision, with_precision, Real, DEFAULT_PRECISION};

use serde::Serialize;
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum BoundsError {
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub const MAX_PRECISION: usize = 8192;

/// Runs `f` at the working precision, doubling it after each precision failure.
pub fn escalate<T>(f: impl Fn() -> Result<T, BoundsError>) -> Result<T, BoundsError> {
    let mut bits = precision();
    loop {
        match with_precision(bits, &f) {
            Err(BoundsError::Precision(_)) if bits < MAX_PRECISION => bits *= 2,
            other => return other,
        }
    }
}

/// Signature of a number field as far as the regulator bound needs it.
#[derive(Clone, Debug)]
pub struct FieldShape {
    pub d: u64,
    pub r1: u64,
    pub r2: u64,
    pub w: u64,
    /// Upper bound for `|disc|`.
    pub disc_bound: LogMagnitude,
}

impl FieldShape {
    pub fn new(d: u64, r1: u64, r2: u64, w: u64, disc_bound: LogMagnitude) -> Result<Self, BoundsError> {
        if d != r1 + 2 * r2 {
            return Err(BoundsError::Domain(format!("d = {d} but r1 + 2 r2 = {}", r1 + 2 * r2)));
        }
        if r1 > 0 && w != 2 {
            return Err(BoundsError::Domain("a field with a real place has w = 2".into()));
        }
        if d < 2 {
            return Err(BoundsError::Domain("degree must be at least 2".into()));
        }
        if disc_bound.ln_value().v.is_negative() {
            return Err(BoundsError::Domain("discriminant bound must be at least 1".into()));
        }
        Ok(FieldShape { d, r1, r2, w, disc_bound })
    }
}

/// Field-independent terms of the Landau objective on the grid
/// `s = 2 - t/1000`: `(s, ln Gamma(s/2), ln Gamma(s), ln s, ln(s-1))`.
struct GridPoint {
    s: Approx,
    lg_half: Approx,
    lg: Approx,
    ln_s: Approx,
    ln_s1: Approx,
}

static LANDAU_GRID: Mutex<Vec<(usize, Arc<Vec<GridPoint>>)>> = Mutex::new(Vec::new());

fn landau_grid() -> Result<Arc<Vec<GridPoint>>, BoundsError> {
    let prec = real::precision();
    if let Some((_, g)) = LANDAU_GRID.lock().unwrap_or_else(|e| e.into_inner()).iter().find(|(p, _)| *p == prec) {
        return Ok(g.clone());
    }
    let half = Approx::exact(Real::ratio(1, 2));
    let one = Approx::int(1);
    let mut pts = Vec::with_capacity(1000);
    for t in 0..1000i64 {
        let s = Approx::exact(Real::ratio(2000 - t, 1000));
        pts.push(GridPoint {
            lg_half: ln_gamma(&(&s * &half))?,
            lg: ln_gamma(&s)?,
            ln_s: s.ln()?,
            ln_s1: (&s - &one).ln()?,
            s,
        });
    }
    let g = Arc::new(pts);
    LANDAU_GRID.lock().unwrap_or_else(|e| e.into_inner()).push((prec, g.clone()));
    Ok(g)
}

/// Landau's regulator bound `C_K(L)`: the minimum over `s = 2 - t/1000`,
/// `t = 0..999`, of `2^-r1 w a^s Gamma(s/2)^r1 Gamma(s)^r2 s^(d+1) (s-1)^(1-d)`
/// with `a = 2^-r2 pi^(-d/2) sqrt(L)`.
pub fn landau_c(shape: &FieldShape) -> Result<LogMagnitude, BoundsError> {
    let int = |v: u64| Approx::int(v as i64);
    let ln2 = int(2).ln()?;
    let half = Approx::exact(Real::ratio(1, 2));
    let ln_a = &(shape.disc_bound.ln_value() * &half)
        - &(&(&int(shape.r2) * &ln2) + &(&(&int(shape.d) * &half) * &Approx::pi().ln()?));
    let base = &int(shape.w).ln()? - &(&int(shape.r1) * &ln2);
    let (r1, r2, d1, dm1) = (int(shape.r1), int(shape.r2), int(shape.d + 1), int(shape.d - 1));
    let mut best: Option<Approx> = None;
    for pt in landau_grid()?.iter() {
        let mut f = &base + &(&pt.s * &ln_a);
        f = &f + &(&r1 * &pt.lg_half);
        f = &f + &(&r2 * &pt.lg);
        f = &f + &(&d1 * &pt.ln_s);
        f = &f - &(&dm1 * &pt.ln_s1);
        best = Some(match best {
            None => f,
            Some(b) => b.min(f),
        });
    }
    Ok(LogMagnitude::from_ln(best.expect("non-empty grid")))
}

/// How factorials inside the Theta formulas are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorialPath {
    LogGamma,
    DirectSum,
}

#[derive(Clone, Debug)]
pub struct ThetaBound {
    pub p: u64,
    pub theta: LogMagnitude,
    pub n_max: LogMagnitude,
}

#[derive(Serialize)]
pub struct ThetaSummary {
    pub p: u64,
    pub log10_theta: f64,
    pub log10_n_max: f64,
}

impl ThetaBound {
    pub fn summary(&self) -> ThetaSummary {
        ThetaSummary { p: self.p, log10_theta: self.theta.log10().to_f64(), log10_n_max: self.n_max.log10().to_f64() }
    }
}

fn ln_fact(n: u64, path: FactorialPath) -> Result<Approx, BoundsError> {
    match path {
        FactorialPath::LogGamma => ln_gamma(&Approx::int(n as i64 + 1)),
        FactorialPath::DirectSum => Ok(ln_factorial_sum(n)),
    }
}

fn check_p(p: u64) -> Result<(), BoundsError> {
    if p < 7 || !is_prime_small(p) {
        return Err(BoundsError::Domain(format!("p must be a prime >= 7, got {p}")));
    }
    Ok(())
}

fn is_prime_small(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn n_max_from_theta(p: u64, theta: &LogMagnitude) -> Result<LogMagnitude, BoundsError> {
    // n < 2.5 p Theta ln Theta
    let ln_theta = theta.ln_value();
    let ln = &(&(&Approx::lit("2.5") * &Approx::int(p as i64)).ln()? + ln_theta) + &ln_theta.ln()?;
    Ok(LogMagnitude::from_ln(ln))
}

pub fn theta_fib(p: u64) -> Result<ThetaBound, BoundsError> {
    theta_fib_with(p, FactorialPath::LogGamma)
}

/// `Theta = 3.9 * 30^(p+3) * p^6.5 * (p-1)^(p+1) * ((p-1)!)^2 * (3p+2)
/// * (1 + log(p(p-1))) * C_K(10^(p-1) p^p)` for a totally real field of degree `p`.
pub fn theta_fib_with(p: u64, path: FactorialPath) -> Result<ThetaBound, BoundsError> {
    check_p(p)?;
    let int = |v: u64| Approx::int(v as i64);
    let lnp = int(p).ln()?;
    let disc = &(&int(p - 1) * &int(10).ln()?) + &(&int(p) * &lnp);
    let shape = FieldShape::new(p, p, 0, 2, LogMagnitude::from_ln(disc))?;
    let c = landau_c(&shape)?;
    let mut ln = Approx::lit("3.9").ln()?;
    ln = &ln + &(&int(p + 3) * &int(30).ln()?);
    ln = &ln + &(&Approx::lit("6.5") * &lnp);
    ln = &ln + &(&int(p + 1) * &int(p - 1).ln()?);
    ln = &ln + &(&int(2) * &ln_fact(p - 1, path)?);
    ln = &ln + &int(3 * p + 2).ln()?;
    ln = &ln + &(&int(1) + &int(p * (p - 1)).ln()?).ln()?;
    ln = &ln + c.ln_value();
    let theta = LogMagnitude::from_ln(ln);
    let n_max = n_max_from_theta(p, &theta)?;
    Ok(ThetaBound { p, theta, n_max })
}

pub fn theta_lucas(p: u64) -> Result<ThetaBound, BoundsError> {
    theta_lucas_with(p, FactorialPath::LogGamma)
}

/// `Theta = 67 * 30^(p+5) * (p-1)^(p+2) * p^3 * (p+2)^5.5 * (p!)^2 *
/// (1 + log(2p(p-1))) * C_K(5^p p^(2p))` for a field of degree `2p`
/// with two real places.
pub fn theta_lucas_with(p: u64, path: FactorialPath) -> Result<ThetaBound, BoundsError> {
    check_p(p)?;
    let int = |v: u64| Approx::int(v as i64);
    let lnp = int(p).ln()?;
    let disc = &(&int(p) * &int(5).ln()?) + &(&int(2 * p) * &lnp);
    let shape = FieldShape::new(2 * p, 2, p - 1, 2, LogMagnitude::from_ln(disc))?;
    let c = landau_c(&shape)?;
    let mut ln = int(67).ln()?;
    ln = &ln + &(&int(p + 5) * &int(30).ln()?);
    ln = &ln + &(&int(p + 2) * &int(p - 1).ln()?);
    ln = &ln + &(&int(3) * &lnp);
    ln = &ln + &(&Approx::lit("5.5") * &int(p + 2).ln()?);
    ln = &ln + &(&int(2) * &ln_fact(p, path)?);
    ln = &ln + &(&int(1) + &int(2 * p * (p - 1)).ln()?).ln()?;
    ln = &ln + c.ln_value();
    let theta = LogMagnitude::from_ln(ln);
    let n_max = n_max_from_theta(p, &theta)?;
    Ok(ThetaBound { p, theta, n_max })
}

/// Matveev's lower bound for a nonzero linear form in `n = a.len()` logarithms.
///
/// Returns the positive quantity `X` with `log |Lambda| > -X`:
/// `X = 3 * 30^(n+4) (n+1)^5.5 D^2 (1 + log D)(1 + log nB) A_1...A_n`, or in
/// the real case `X = 1.4 * 30^(n+3) n^4.5 D^2 (1 + log D)(1 + log B) A_1...A_n`.
pub fn matveev_lower(d: u64, real_case: bool, a: &[Approx], b: &Approx) -> Result<LogMagnitude, BoundsError> {
    let n = a.len() as u64;
    if n == 0 {
        return Err(BoundsError::Domain("need at least one logarithm".into()));
    }
    let floor = Approx::lit("0.16");
    for aj in a {
        if aj.compare(&floor) == Ok(std::cmp::Ordering::Less) {
            return Err(BoundsError::Domain("each A_j must be at least 0.16".into()));
        }
    }
    let int = |v: u64| Approx::int(v as i64);
    let one = int(1);
    let dd = int(d);
    let mut ln = if real_case {
        let mut x = Approx::lit("1.4").ln()?;
        x = &x + &(&int(n + 3) * &int(30).ln()?);
        x = &x + &(&Approx::lit("4.5") * &int(n).ln()?);
        x = &x + &(&one + &b.ln()?).ln()?;
        x
    } else {
        let mut x = int(3).ln()?;
        x = &x + &(&int(n + 4) * &int(30).ln()?);
        x = &x + &(&Approx::lit("5.5") * &int(n + 1).ln()?);
        x = &x + &(&one + &(&int(n) * b).ln()?).ln()?;
        x
    };
    ln = &ln + &(&int(2) * &dd.ln()?);
    ln = &ln + &(&one + &dd.ln()?).ln()?;
    for aj in a {
        ln = &ln + &aj.ln()?;
    }
    Ok(LogMagnitude::from_ln(ln))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_validation() {
        let l = LogMagnitude::from_u64(5);
        assert!(FieldShape::new(2, 2, 0, 2, l.clone()).is_ok());
        assert!(FieldShape::new(3, 2, 0, 2, l.clone()).is_err());
        assert!(FieldShape::new(2, 2, 0, 4, l).is_err());
    }

    #[test]
    fn theta_domain() {
        assert!(theta_fib(5).is_err());
        assert!(theta_lucas(9).is_err());
    }
}
