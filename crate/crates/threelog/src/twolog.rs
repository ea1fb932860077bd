use crate::fib::{h_omega, h_sqrt5, FibSetup};
use crate::maurice::DegenerateWindows;
use crate::{int, upper, ThreeLogError};
use bounds::{Approx, Real};
use serde::Serialize;
use std::cmp::Ordering;

/// Data for a linear form `b1 log alpha1 - b2 log alpha2` in two logarithms.
#[derive(Clone, Debug)]
pub struct TwoLogInput {
    pub d: u64,
    pub log_a1: Approx,
    pub log_a2: Approx,
    pub b1: Approx,
    pub b2: Approx,
}

impl TwoLogInput {
    pub fn new(d: u64, log_a1: Approx, log_a2: Approx, b1: Approx, b2: Approx) -> Result<Self, ThreeLogError> {
        if d == 0 {
            return Err(ThreeLogError::Domain("D must be positive".into()));
        }
        let floor = Approx::exact(Real::from_u64(1) / Real::from_u64(d));
        for la in [&log_a1, &log_a2] {
            if la.v < floor.v {
                return Err(ThreeLogError::Domain("log A_i must be at least 1/D".into()));
            }
        }
        if !b1.is_certainly_positive() || !b2.is_certainly_positive() {
            return Err(ThreeLogError::Domain("b_i must be positive".into()));
        }
        Ok(TwoLogInput { d, log_a1, log_a2, b1, b2 })
    }

    /// `b' = b1/(D log A2) + b2/(D log A1)`.
    pub fn b_prime(&self) -> Approx {
        let d = Approx::int(self.d as i64);
        &(&self.b1 / &(&d * &self.log_a2)) + &(&self.b2 / &(&d * &self.log_a1))
    }
}

/// `-25.55 D^4 (max{log b' + 0.19, 18/D, 1})^2 log A1 log A2`.
pub fn two_log_lower(input: &TwoLogInput) -> Result<Approx, ThreeLogError> {
    let d = Approx::int(input.d as i64);
    let x = (&input.b_prime().ln()? + &Approx::lit("0.19")).max(&Approx::int(18) / &d).max(Approx::int(1));
    let c = &Approx::lit("25.55") * &d.powi(4);
    Ok(-(&(&(&c * &(&x * &x)) * &input.log_a1) * &input.log_a2))
}

/// Bound on `t2` in `t' b' + t2 p + 1 = 0`, where `b' <= b1 <= p - 1`, so
/// `|t2| <= (|t'| (p - 1) + 1) / p`.
pub fn t2_window(w: &DegenerateWindows, p: u64) -> u128 {
    (w.t_prime * (p as u128 - 1) + 1) / p as u128
}

/// `log A2 = t' h(sqrt5) + r' h(omega) + 1` from the degenerate windows.
pub fn c3_log_a2(w: &DegenerateWindows) -> Approx {
    let a = &int(w.t_prime) * &h_sqrt5();
    let b = &int(w.r_prime) * &h_omega();
    &(&a + &b) + &Approx::int(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct C3Bound {
    pub log_a2: f64,
    /// `1/(D log A2) + 1/(D log A1)`, so that `b' <= p` times this.
    pub b_prime_ratio: f64,
    /// Largest `p` with `2p log y - 1 <= -two_log_lower(..)`.
    pub bound: u64,
}

/// Exponent bound in the degenerate case, from the form
/// `p log(alpha2 sqrt5^t2) - b' log(omega^r' sqrt5^t')` with `b' < p`
/// and `log A1 = 1.001 log y`.
pub fn c3_bound(log_a2: &Approx, setup: &FibSetup) -> Result<C3Bound, ThreeLogError> {
    let log_a1 = &Approx::lit("1.001") * &setup.log_y;
    let two_log_y = &Approx::int(2) * &setup.log_y;
    let violates = |p: u64| -> Result<bool, ThreeLogError> {
        let pp = int(p as u128);
        let input = TwoLogInput::new(2, log_a1.clone(), log_a2.clone(), pp.clone(), pp.clone())?;
        let upper_side = &(&two_log_y * &pp) - &Approx::int(1);
        let lower_side = -two_log_lower(&input)?;
        Ok(upper_side.compare(&lower_side)? == Ordering::Greater)
    };
    let (mut lo, mut hi) = (1u64, 2u64);
    if violates(lo)? {
        return Err(ThreeLogError::Domain("two-log bound excludes every exponent".into()));
    }
    while !violates(hi)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| ThreeLogError::NoConvergence("two-log bound overflow".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if violates(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let d = Approx::int(2);
    let ratio = &(&Approx::int(1) / &(&d * log_a2)) + &(&Approx::int(1) / &(&d * &log_a1));
    Ok(C3Bound { log_a2: log_a2.to_f64(), b_prime_ratio: upper(&ratio).to_f64(), bound: lo })
}
