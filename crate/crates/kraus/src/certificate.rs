use arith::modular::{mul_mod, neg_mod};
use arith::{legendre_euler, sqrt_mod, Exec};
use curves::{trace_euler, Catalog, CurveModL, TraceEngine};
use seqcore::{omega_mod, sqrt5_mod, SeqKind};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::time::Instant;

use crate::zeta::{delta_square, modulus_for, zeta_set};
use crate::KrausError;

pub const DEFAULT_K_MAX: u64 = 1000;

const LUCAS_NOTE: &str =
    "delta^2 = (zeta + 4) / 5 from y^(2p) = 5 F_n^2 - 4; reconstructed, not taken from a published variant";

/// Which square root of 5 modulo `l` defines `omega`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    #[default]
    Smaller,
    Larger,
}

/// Outcomes of conditions (a), (b), (c).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KrausCertificate {
    pub kind: SeqKind,
    pub p: u64,
    pub k: u64,
    pub l: u64,
    pub sqrt5: u64,
    #[serde(rename = "a_l_E")]
    pub a_l_e: i64,
    pub zeta_count: usize,
    /// Some `zeta` in `A(p, k)` has `delta = 0`.
    pub delta_zero: bool,
    pub checks: Checks,
    pub elapsed_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NotFound {
    pub kind: SeqKind,
    pub p: u64,
    pub k_max: u64,
}

fn reference_label(kind: SeqKind) -> &'static str {
    match kind {
        SeqKind::Fibonacci => "20a2",
        SeqKind::Lucas => "200b1",
    }
}

/// `E^zeta` for a given `delta`: `Y^2 = X^3 + delta X^2 - X` or `Y^2 = X^3 - 5 delta X^2 + 5X`.
pub fn twisted_curve(kind: SeqKind, delta: u64, l: u64) -> CurveModL {
    let a = match kind {
        SeqKind::Fibonacci => [0, delta, 0, neg_mod(1, l), 0],
        SeqKind::Lucas => [0, neg_mod(mul_mod(5, delta, l), l), 0, 5, 0],
    };
    CurveModL::new(l, a).expect("E^zeta is nonsingular for zeta != 0")
}

fn squares_differ(a: i64, b: i64, p: u64) -> bool {
    (a * a - b * b).rem_euclid(p as i64) != 0
}

/// Evaluates (a)-(c) for one `k`. Condition (c) stops at the first failing `zeta`.
pub fn check_conditions(kind: SeqKind, p: u64, k: u64, root: RootChoice) -> Result<KrausCertificate, KrausError> {
    let start = Instant::now();
    let failed_a = |l| KrausCertificate {
        kind,
        p,
        k,
        l,
        sqrt5: 0,
        a_l_e: 0,
        zeta_count: 0,
        delta_zero: false,
        checks: Checks { a: false, b: false, c: false },
        elapsed_ms: 0,
        note: None,
    };
    let l = 2 * k * p + 1;
    let zs = match zeta_set(kind, p, k) {
        Ok(z) => z,
        Err(KrausError::Domain(_)) if p >= 7 && arith::is_prime(p) && k > 0 => return Ok(failed_a(l)),
        Err(e) => return Err(e),
    };
    let small = sqrt5_mod(l).expect("l = +-1 mod 5");
    let sqrt5 = match root {
        RootChoice::Smaller => small,
        RootChoice::Larger => l - small,
    };
    let omega = omega_mod(sqrt5, l);
    let b = arith::pow_mod(omega, 2 * k, l) != 1;

    let engine = TraceEngine::new(l)?;
    let e = Catalog::builtin().get(reference_label(kind)).expect("builtin curve").reduce(l)?;
    let a_e = engine.trace(&e).a_l;
    let mut delta_zero = false;
    let mut c = true;
    for &z in &zs.zetas {
        let d2 = delta_square(kind, z, l);
        delta_zero |= d2 == 0;
        let delta = sqrt_mod(d2, l).expect("zeta set keeps residues only");
        if !squares_differ(engine.trace(&twisted_curve(kind, delta, l)).a_l, a_e, p) {
            c = false;
            break;
        }
    }
    Ok(KrausCertificate {
        kind,
        p,
        k,
        l,
        sqrt5,
        a_l_e: a_e,
        zeta_count: zs.zetas.len(),
        delta_zero,
        checks: Checks { a: true, b, c },
        elapsed_ms: start.elapsed().as_millis() as u64,
        note: (kind == SeqKind::Lucas).then(|| LUCAS_NOTE.to_string()),
    })
}

/// Smallest `k <= k_max` passing (a), (b) and (c).
pub fn kraus_search(kind: SeqKind, p: u64, k_max: u64, root: RootChoice) -> Result<KrausCertificate, NotFound> {
    let start = Instant::now();
    for k in 1..=k_max {
        if modulus_for(p, k).is_err() {
            continue;
        }
        if let Ok(mut cert) = check_conditions(kind, p, k, root) {
            if cert.checks.all() {
                cert.elapsed_ms = start.elapsed().as_millis() as u64;
                return Ok(cert);
            }
        }
    }
    Err(NotFound { kind, p, k_max })
}

pub fn kraus_search_fib(p: u64, k_max: u64) -> Result<KrausCertificate, NotFound> {
    kraus_search(SeqKind::Fibonacci, p, k_max, RootChoice::Smaller)
}

pub fn kraus_search_lucas(p: u64, k_max: u64) -> Result<KrausCertificate, NotFound> {
    kraus_search(SeqKind::Lucas, p, k_max, RootChoice::Smaller)
}

/// Searches every `p` in `primes` independently.
pub fn sweep(kind: SeqKind, primes: &[u64], k_max: u64, exec: Exec) -> Vec<Result<KrausCertificate, NotFound>> {
    exec.map(primes, |&p| kraus_search(kind, p, k_max, RootChoice::Smaller))
}

fn slow_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let (mut acc, mut base) = (1u128 % m as u128, b as u128 % m as u128);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    acc as u64
}

fn trial_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Re-derives everything in `cert` from `(kind, p, k)` with separate code paths:
/// the `2p`-th powers are enumerated over all of `F_l*`, traces use Euler's
/// criterion pointwise, and every condition is evaluated in full.
pub fn verify_certificate(cert: &KrausCertificate) -> Result<(), String> {
    let (p, k) = (cert.p, cert.k);
    let l = 2 * k * p + 1;
    if cert.l != l {
        return Err(format!("l = {} but 2kp + 1 = {l}", cert.l));
    }
    let a = trial_prime(p) && p >= 7 && trial_prime(l) && (l % 5 == 1 || l % 5 == 4);
    if !a {
        return if cert.checks == (Checks { a: false, b: false, c: false }) {
            Ok(())
        } else {
            Err("condition (a) fails".into())
        };
    }
    if mul_mod(cert.sqrt5, cert.sqrt5, l) != 5 % l {
        return Err(format!("{} is not a square root of 5 mod {l}", cert.sqrt5));
    }
    let omega = mul_mod((1 + cert.sqrt5) % l, l.div_ceil(2), l);
    let b = slow_pow(omega, 2 * k, l) != 1;

    let powers: BTreeSet<u64> = (1..l).map(|x| slow_pow(x, 2 * p, l)).filter(|&z| z != 1).collect();
    let kind = cert.kind;
    let inv5 = slow_pow(5, l - 2, l);
    let mut zetas = Vec::new();
    for &z in &powers {
        let d2 = match kind {
            SeqKind::Fibonacci => (5 * z as u128 + l as u128 - 4) as u64 % l,
            SeqKind::Lucas => mul_mod((z + 4) % l, inv5, l),
        };
        if d2 == 0 || legendre_euler(d2, l) == 1 {
            zetas.push((z, d2));
        }
    }
    let e = Catalog::builtin()
        .get(reference_label(kind))
        .ok_or("missing reference curve")?
        .reduce(l)
        .map_err(|e| e.to_string())?;
    let a_e = trace_euler(&e).a_l;
    if a_e != cert.a_l_e {
        return Err(format!("a_l(E) = {a_e}, certificate says {}", cert.a_l_e));
    }
    let mut c = true;
    let mut delta_zero = false;
    for &(_, d2) in &zetas {
        delta_zero |= d2 == 0;
        let delta = sqrt_mod(d2, l).ok_or("delta missing")?;
        if mul_mod(delta, delta, l) != d2 {
            return Err("bad square root".into());
        }
        c &= squares_differ(trace_euler(&twisted_curve(kind, delta, l)).a_l, a_e, p);
    }
    if zetas.len() != cert.zeta_count {
        return Err(format!("|A(p,k)| = {}, certificate says {}", zetas.len(), cert.zeta_count));
    }
    if delta_zero != cert.delta_zero {
        return Err("delta = 0 flag disagrees".into());
    }
    let checks = Checks { a, b, c };
    if checks != cert.checks {
        return Err(format!("recomputed checks {checks:?} differ from stored {:?}", cert.checks));
    }
    Ok(())
}
