//! Small-index scan: for each `(n, p)` find a prime `l = 1 (mod p)` such that
//! `F_n` (or `L_n`) is not a `p`-th power modulo `l`.

use arith::modular::mul_mod;
use arith::Exec;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use seqcore::{fib_lucas_raw, SeqKind};
use serde::{Deserialize, Serialize};

/// `log(omega) / log(2)` to 30 significant digits, rounded up.
const LOG2_OMEGA_NUM: u128 = 694_241_913_630_617_301_738_790_266_899;
const LOG2_OMEGA_DEN_DIGITS: u32 = 30;

pub const DEFAULT_L_BUDGET: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerWitness {
    pub kind: SeqKind,
    pub n: u64,
    pub p: u64,
    pub l: u64,
}

impl PowerWitness {
    pub fn k(&self) -> u64 {
        (self.l - 1) / self.p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotFound {
    pub kind: SeqKind,
    pub n: u64,
    pub p: u64,
    pub tried: usize,
}

/// Largest exponent that needs scanning at index `n`: `floor(n log2(omega)) + 1`.
/// Beyond it the term is below `2^p` and cannot be a `p`-th power of an integer `> 1`.
pub fn exponent_cap(n: u64) -> u64 {
    let num = BigUint::from(n) * LOG2_OMEGA_NUM;
    let den = BigUint::from(10u32).pow(LOG2_OMEGA_DEN_DIGITS);
    (num / den).to_u64().expect("cap fits in u64") + 1
}

fn term_mod(kind: SeqKind, n: u64, l: u64) -> u64 {
    let m = seqcore::period_m(l).expect("candidate is a prime other than 5");
    let (f, g) = fib_lucas_raw(n % m, l);
    match kind {
        SeqKind::Fibonacci => f,
        SeqKind::Lucas => g,
    }
}

/// Candidate primes `l = 1 (mod p)` with `l = +-1 (mod 5)`, ascending.
pub fn candidates(p: u64) -> impl Iterator<Item = u64> {
    (1u64..).map(move |t| t * p + 1).filter(|&l| matches!(l % 5, 1 | 4) && arith::is_prime(l))
}

pub fn find_witness(kind: SeqKind, n: u64, p: u64, l_budget: usize) -> Result<PowerWitness, NotFound> {
    for l in candidates(p).take(l_budget) {
        let x = term_mod(kind, n, l);
        if x != 0 && arith::pow_mod(x, (l - 1) / p, l) != 1 {
            return Ok(PowerWitness { kind, n, p, l });
        }
    }
    Err(NotFound { kind, n, p, tried: l_budget })
}

/// Re-checks a witness through a 2x2 matrix power for the term and a
/// left-to-right exponentiation, sharing no code with the search.
pub fn verify_witness(w: &PowerWitness) -> bool {
    let (p, l) = (w.p, w.l);
    if p < 2 || l < 3 || (l - 1) % p != 0 || !arith::is_prime(l) {
        return false;
    }
    let (f, f_next) = matrix_fib(w.n, l);
    let x = match w.kind {
        SeqKind::Fibonacci => f,
        SeqKind::Lucas => (2 * f_next + l - f) % l,
    };
    x != 0 && pow_left_to_right(x, (l - 1) / p, l) != 1
}

fn matrix_fib(n: u64, l: u64) -> (u64, u64) {
    type M = [[u64; 2]; 2];
    let mul = |a: M, b: M| -> M {
        let mut c = [[0u64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                c[i][j] = (mul_mod(a[i][0], b[0][j], l) + mul_mod(a[i][1], b[1][j], l)) % l;
            }
        }
        c
    };
    let mut r: M = [[1, 0], [0, 1]];
    let mut b: M = [[1, 1], [1, 0]];
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, b);
        }
        b = mul(b, b);
        e >>= 1;
    }
    // [[F(n+1), F(n)], [F(n), F(n-1)]]
    (r[0][1] % l, r[0][0] % l)
}

fn pow_left_to_right(x: u64, e: u64, l: u64) -> u64 {
    let mut r = 1u64;
    for bit in (0..64).rev() {
        r = mul_mod(r, r, l);
        if e >> bit & 1 == 1 {
            r = mul_mod(r, x, l);
        }
    }
    r
}

/// Smallest index the scan accepts for a sequence.
pub fn min_index(kind: SeqKind) -> u64 {
    match kind {
        SeqKind::Fibonacci => 13,
        SeqKind::Lucas => 4,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub l_budget: usize,
    pub exec: Exec,
    /// Indices processed per parallel batch.
    pub chunk: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { l_budget: DEFAULT_L_BUDGET, exec: Exec::default(), chunk: 512 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanReport {
    pub n_lo: u64,
    pub n_hi: u64,
    pub witnesses: u64,
    pub failures: Vec<(u64, u64)>,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Scans `n_lo..=n_hi`, handing witnesses to `sink` in `(n, p)` order.
pub fn scan_range_with(
    kind: SeqKind,
    n_lo: u64,
    n_hi: u64,
    opts: &ScanOptions,
    mut sink: impl FnMut(&[PowerWitness]),
) -> Result<ScanReport, String> {
    if n_lo < min_index(kind) || n_lo > n_hi {
        return Err(format!("bad index range {n_lo}..={n_hi} for {kind}"));
    }
    let primes = arith::primes_up_to(exponent_cap(n_hi));
    let mut report = ScanReport { n_lo, n_hi, ..Default::default() };
    let mut lo = n_lo;
    while lo <= n_hi {
        let hi = (lo + opts.chunk).min(n_hi + 1);
        let rows = opts.exec.map_range(lo, hi, |n| {
            let cap = exponent_cap(n);
            let mut found = Vec::new();
            let mut missed = Vec::new();
            for &p in primes.iter().take_while(|&&p| p <= cap) {
                match find_witness(kind, n, p, opts.l_budget) {
                    Ok(w) => found.push(w),
                    Err(_) => missed.push((n, p)),
                }
            }
            (found, missed)
        });
        for (found, missed) in rows {
            report.witnesses += found.len() as u64;
            report.failures.extend(missed);
            sink(&found);
        }
        lo = hi;
    }
    Ok(report)
}

pub fn scan_range(kind: SeqKind, n_lo: u64, n_hi: u64) -> Result<ScanReport, String> {
    scan_range_with(kind, n_lo, n_hi, &ScanOptions::default(), |_| {})
}
