//! Fibonacci and Lucas numbers modulo primes.
//!
//! Indices are arbitrary precision. Residues are computed by fast doubling
//! after reducing the index modulo the period `M(l)`.

use arith::modular::{add_mod, mul_mod, neg_mod, sub_mod};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, SeqError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    Fibonacci,
    Lucas,
}

impl SeqKind {
    pub fn short(self) -> &'static str {
        match self {
            SeqKind::Fibonacci => "fib",
            SeqKind::Lucas => "lucas",
        }
    }
}

impl fmt::Display for SeqKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

impl FromStr for SeqKind {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fib" | "fibonacci" => Ok(SeqKind::Fibonacci),
            "lucas" | "luc" => Ok(SeqKind::Lucas),
            _ => Err(SeqError::Domain(format!("unknown sequence kind {s:?}"))),
        }
    }
}

/// `F_n` and `L_n` reduced modulo `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibLucasPair {
    pub n: BigUint,
    pub l: u64,
    pub f: u64,
    pub g: u64,
}

impl FibLucasPair {
    /// Checks `L_n^2 - 5 F_n^2 = 4 (-1)^n` modulo `l`.
    pub fn identity_holds(&self) -> bool {
        let l = self.l;
        let lhs = sub_mod(mul_mod(self.g, self.g, l), mul_mod(5 % l, mul_mod(self.f, self.f, l), l), l);
        let four = 4 % l;
        let rhs = if self.n.is_odd() { neg_mod(four, l) } else { four };
        lhs == rhs
    }
}

fn check_modulus(l: u64) -> Result<()> {
    if l == 5 || !arith::is_prime(l) {
        return Err(SeqError::Domain(format!("modulus {l} must be a prime other than 5")));
    }
    Ok(())
}

/// `(F_n mod m, F_{n+1} mod m)` by fast doubling, for any modulus `m >= 1`.
pub fn fib_pair_raw(n: u64, m: u64) -> (u64, u64) {
    let (mut a, mut b) = (0u64, 1 % m);
    if n == 0 {
        return (a, b);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let t = sub_mod(add_mod(b, b, m), a, m);
        let c = mul_mod(a, t, m);
        let d = add_mod(mul_mod(a, a, m), mul_mod(b, b, m), m);
        if n >> bit & 1 == 1 {
            a = d;
            b = add_mod(c, d, m);
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// `(F_n mod m, L_n mod m)` for any modulus `m >= 1`, without validation.
#[inline]
pub fn fib_lucas_raw(n: u64, m: u64) -> (u64, u64) {
    let (f, f1) = fib_pair_raw(n, m);
    (f, sub_mod(add_mod(f1, f1, m), f, m))
}

pub fn fib_lucas_mod(n: &BigUint, l: u64) -> Result<FibLucasPair> {
    check_modulus(l)?;
    let m = m_of(l);
    let r = (n % m).to_u64().expect("residue fits in u64");
    let (f, g) = fib_lucas_raw(r, l);
    Ok(FibLucasPair { n: n.clone(), l, f, g })
}

fn m_of(l: u64) -> u64 {
    match l % 5 {
        1 | 4 => l - 1,
        _ => 2 * (l + 1),
    }
}

/// The period `M(l)` of both sequences modulo `l`.
pub fn period_m(l: u64) -> Result<u64> {
    check_modulus(l)?;
    Ok(m_of(l))
}

/// `K(l) = lcm(l - 1, 6)`, defined for `l = +-1 (mod 5)`.
pub fn period_k(l: u64) -> Result<u64> {
    check_modulus(l)?;
    if !matches!(l % 5, 1 | 4) {
        return Err(SeqError::Domain(format!("K(l) needs l = +-1 mod 5, got {l}")));
    }
    Ok(arith::lcm(l - 1, 6))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodInfo {
    pub l: u64,
    pub m_of_l: u64,
    pub k_of_l: Option<u64>,
}

impl PeriodInfo {
    pub fn new(l: u64) -> Result<Self> {
        Ok(PeriodInfo { l, m_of_l: period_m(l)?, k_of_l: period_k(l).ok() })
    }
}

/// The smaller square root of 5 modulo `l`.
pub fn sqrt5_mod(l: u64) -> Result<u64> {
    check_modulus(l)?;
    if !matches!(l % 5, 1 | 4) {
        return Err(SeqError::Domain(format!("5 is not a square modulo {l}")));
    }
    Ok(arith::sqrt_mod(5, l).expect("5 is a residue when l = +-1 mod 5"))
}

/// `omega = (1 + sqrt5) / 2` modulo `l` for a chosen root of 5.
pub fn omega_mod(sqrt5: u64, l: u64) -> u64 {
    let half = l.div_ceil(2);
    mul_mod(add_mod(1, sqrt5 % l, l), half, l)
}

fn check_h_index(r6: u64) -> Result<bool> {
    match r6 {
        1 => Ok(false),
        5 => Ok(true),
        _ => Err(SeqError::Domain(format!("H_n needs n = +-1 mod 6, got n = {r6} mod 6"))),
    }
}

/// `H_n` modulo `l`: `L_n` when `n = 1 (mod 6)` and `-L_n` when `n = 5 (mod 6)`.
pub fn h_n_mod(n: &BigUint, l: u64) -> Result<u64> {
    let negate = check_h_index((n % 6u32).to_u64().unwrap())?;
    let pair = fib_lucas_mod(n, l)?;
    Ok(if negate { neg_mod(pair.g, l) } else { pair.g })
}

/// `H_n` as an exact integer.
pub fn h_exact(n: u64) -> Result<BigInt> {
    let negate = check_h_index(n % 6)?;
    let v = BigInt::from(lucas_exact(n));
    Ok(if negate { -v } else { v })
}

/// `(F_n, F_{n+1})` exactly.
fn fib_pair_exact(n: u64) -> (BigUint, BigUint) {
    let (mut a, mut b) = (BigUint::from(0u32), BigUint::from(1u32));
    if n == 0 {
        return (a, b);
    }
    for bit in (0..64 - n.leading_zeros()).rev() {
        let c = &a * ((&b << 1u32) - &a);
        let d = &a * &a + &b * &b;
        if n >> bit & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

pub fn fib_exact(n: u64) -> BigUint {
    fib_pair_exact(n).0
}

pub fn lucas_exact(n: u64) -> BigUint {
    let (f, f1) = fib_pair_exact(n);
    (f1 << 1u32) - f
}

/// `(L_n mod 4, F_n mod 4)`; both depend only on `n mod 6`.
pub fn mod4_table(n: &BigUint) -> (u8, u8) {
    const TABLE: [(u8, u8); 6] = [(2, 0), (1, 1), (3, 1), (0, 2), (3, 3), (3, 1)];
    TABLE[(n % 6u32).to_usize().unwrap()]
}
