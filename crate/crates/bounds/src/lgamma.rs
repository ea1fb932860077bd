//! `ln Gamma` by the Stirling series after shifting the argument upwards.

use crate::approx::Approx;
use crate::real::{precision, Real};
use crate::BoundsError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use std::cell::RefCell;
use std::sync::Mutex;

static BERNOULLI: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// `B_0, ..., B_n` (with `B_1 = +1/2`) by the Akiyama-Tanigawa recurrence.
fn bernoulli_upto(n: usize) -> Vec<BigRational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    if cache.len() <= n {
        let m = (n + 1).max(2 * cache.len());
        let mut a: Vec<BigRational> = Vec::with_capacity(m + 1);
        let mut out = Vec::with_capacity(m + 1);
        for i in 0..=m {
            a.push(BigRational::new(BigInt::one(), BigInt::from(i + 1)));
            for j in (1..=i).rev() {
                let d = &a[j - 1] - &a[j];
                a[j - 1] = d * BigRational::from_integer(BigInt::from(j));
            }
            out.push(a[0].clone());
        }
        *cache = out;
    }
    cache[..=n].to_vec()
}

pub fn bernoulli(n: usize) -> BigRational {
    bernoulli_upto(n).pop().unwrap()
}

thread_local! {
    static STIRLING: RefCell<(usize, Vec<Real>)> = const { RefCell::new((0, Vec::new())) };
}

/// `B_2j / (2j (2j - 1))` as reals at the current precision, `j = 1..=n`.
fn stirling_coeffs(n: usize) -> Vec<Real> {
    let prec = precision();
    STIRLING.with(|c| {
        let mut c = c.borrow_mut();
        if c.0 != prec {
            *c = (prec, Vec::new());
        }
        if c.1.len() < n {
            let bs = bernoulli_upto(2 * n);
            c.1 = (1..=n)
                .map(|j| to_real(&(&bs[2 * j] / BigRational::from_integer(BigInt::from(2 * j * (2 * j - 1))))))
                .collect();
        }
        c.1[..n].to_vec()
    })
}

fn to_real(q: &BigRational) -> Real {
    let num = Real::from_biguint(&q.numer().abs().to_biguint().unwrap());
    let den = Real::from_biguint(&q.denom().to_biguint().unwrap());
    let v = num / den;
    if q.is_negative() {
        -v
    } else {
        v
    }
}

/// `ln Gamma(x)` for `x > 0`, with the argument's own error propagated.
pub fn ln_gamma(x: &Approx) -> Result<Approx, BoundsError> {
    if !x.is_certainly_positive() {
        return Err(BoundsError::Domain("ln_gamma needs a positive argument".into()));
    }
    let prec = precision();
    let target = Real::from_u64((prec as u64 / 4).max(20));
    let one = Approx::int(1);

    // z = x + shift with z >= target
    let mut z = x.clone();
    let mut prod = Approx::int(1);
    while z.v < target {
        prod = &prod * &z;
        z = &z + &one;
    }

    let half = Approx::exact(Real::ratio(1, 2));
    let ln2pi = (Approx::int(2) * Approx::pi()).ln()?;
    let mut s = &(&(&z - &half) * &z.ln()?) - &z;
    s = &s + &(&ln2pi * &half);

    let tiny = Real::pow2(-(prec as i64) - 8);
    let z2 = &z * &z;
    let mut zpow = z.clone();
    let mut j = 1usize;
    let mut coeffs = stirling_coeffs(16);
    let truncation;
    loop {
        if j > coeffs.len() {
            coeffs = stirling_coeffs(2 * coeffs.len());
        }
        let term = &Approx::rounded(coeffs[j - 1].clone()) / &zpow;
        if term.v.abs() < tiny || j > 4 * prec {
            truncation = term.v.abs();
            break;
        }
        s = &s + &term;
        zpow = &zpow * &z2;
        j += 1;
    }
    if !prod.v.is_zero() && prod.v != Real::from_u64(1) {
        s = &s - &prod.ln()?;
    }
    s.err = &s.err + &truncation;

    // d/dx ln Gamma(x) = psi(x), |psi(x)| <= |ln x| + 1/x + 1
    let psi = x.v.ln().abs() + Real::from_u64(1) / &x.v + Real::from_u64(1);
    s.err = &s.err + &(&psi * &x.err);
    Ok(s)
}

/// `ln(n!)` by exact big-integer factorial.
pub fn ln_factorial_exact(n: u64) -> Approx {
    let mut f = num_bigint::BigUint::one();
    for k in 2..=n {
        f *= k;
    }
    Approx::rounded(Real::from_biguint(&f)).ln().expect("factorial is positive")
}

/// `ln(n!)` as a sum of logarithms.
pub fn ln_factorial_sum(n: u64) -> Approx {
    let mut s = Approx::int(0);
    for k in 2..=n {
        s = &s + &Approx::int(k as i64).ln().expect("positive");
    }
    s
}
