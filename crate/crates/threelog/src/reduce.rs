use crate::fib::{FibSetup, MainCase};
use crate::maurice::{DegenerateWindows, ZeroLemmaReading};
use crate::twolog::{c3_bound, c3_log_a2};
use crate::{int, ThreeLogError};
use arith::Exec;
use bounds::{matveev_lower, Approx, LogMagnitude};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Largest `p` with `2p log y - 1 <= X(p)`, where `X` is Matveev's bound in
/// the real case for `omega`, `omega^k / y` and `sqrt5` with `D = 2`, `B = p`.
pub fn matveev_first_bound(setup: &FibSetup) -> Result<u64, ThreeLogError> {
    let a = [crate::fib::ln_omega(), &(&Approx::int(2) * &setup.log_y) + &Approx::lit("0.5"), Approx::int(5).ln()?];
    let two_log_y = &Approx::int(2) * &setup.log_y;
    let violates = |p: u64| -> Result<bool, ThreeLogError> {
        let x = matveev_lower(2, true, &a, &int(p as u128))?;
        let lhs = LogMagnitude::from_value(&(&(&two_log_y * &int(p as u128)) - &Approx::int(1)))?;
        Ok(lhs.compare(&x)? == Ordering::Greater)
    };
    let (mut lo, mut hi) = (1u64, 2u64);
    while !violates(hi)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| ThreeLogError::NoConvergence("Matveev bound overflow".into()))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if violates(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Search grid for `(L, rho, m)`.
#[derive(Clone, Debug)]
pub struct Grid {
    pub ls: Vec<u64>,
    pub rhos: Vec<f64>,
    pub m_range: (f64, f64),
    pub m_step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            ls: (100..=700).step_by(20).collect(),
            rhos: vec![4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 14.0, 16.0, 20.0, 25.0, 30.0],
            m_range: (10.0, 50.0),
            m_step: 1e-5,
        }
    }
}

struct Fast {
    lw: f64,
    l5: f64,
    log_y: f64,
}

impl Fast {
    fn new(setup: &FibSetup) -> Self {
        Fast { lw: ((1.0 + 5f64.sqrt()) / 2.0).ln(), l5: 5f64.ln() / 2.0, log_y: setup.log_y.to_f64() }
    }

    /// `((lhs - rhs)/K, main bound)` for condition (o), in double precision.
    fn eval(&self, l: f64, rho: f64, m: f64, p: f64) -> (f64, f64) {
        let a1 = (rho + 3.0) * self.l5;
        let a2 = (rho + 2.0 * p) * self.lw + 4.0 * self.log_y;
        let a3 = (rho + 1.0) * self.lw;
        let c1 = (32.001 * m * m).cbrt();
        let c2 = (12.0 * m * m).cbrt();
        let l23 = l.powf(2.0 / 3.0);
        let k = (m * l * a1 * a2 * a3).floor();
        let r = (c1 * l23 * a2 * a3).floor() + (c2 * l * a2 * a3).floor() + 1.0;
        let s = (c1 * l23 * a1 * a3).floor() + (c2 * l * a1 * a3).floor() + 1.0;
        let t = (c1 * l23 * a1 * a2).floor() + (c2 * l * a1 * a2).floor() + 1.0;
        let ln_n = 2.0 * k.ln() + l.ln();
        let g = 0.25 - (k / r) * (k / s) * (l / t) / 12.0;
        let pi = std::f64::consts::PI;
        let fb = 2.0 * k.ln() - 3.0 + 2.0 * (2.0 * pi * k / 1.5f64.exp()).ln() / (k - 1.0)
            - (2.0 + 6.0 / (pi * pi) + k.ln()) / (3.0 * k * (k - 1.0));
        let log_b =
            (((r - 1.0) * p + (s - 1.0) * (p - 1.0)) / 2.0).ln() + (((t - 1.0) * p + (s - 1.0)) / 2.0).ln() - fb;
        let lhs = (k * l / 2.0 + l / 4.0 - 1.0 - 2.0 * k / (3.0 * l)) * rho.ln();
        let rhs =
            3.0 * ln_n + g * l * (a1 * r + a2 * s + a3 * t) + 2.0 * (k - 1.0) * log_b - 2.0 * (1f64.exp() / 2.0).ln();
        let bound = (k * l * rho.ln() + (k * l).ln() + 1.0) / (2.0 * self.log_y);
        ((lhs - rhs) / k, bound)
    }

    /// Smallest `m` on the grid step passing (o), if any.
    fn min_m(&self, l: f64, rho: f64, p: f64, grid: &Grid) -> Option<f64> {
        let (mut lo, mut hi) = grid.m_range;
        if self.eval(l, rho, hi, p).0 < 0.0 {
            return None;
        }
        while hi - lo > grid.m_step / 4.0 {
            let mid = 0.5 * (lo + hi);
            if self.eval(l, rho, mid, p).0 >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let m = (hi / grid.m_step).ceil() * grid.m_step;
        (m < grid.m_range.1).then_some(m)
    }
}

/// Best `(L, rho, m, main bound)` on the grid for exponents up to `p`.
pub fn search_parameters(p: u64, setup: &FibSetup, grid: &Grid, exec: Exec) -> Option<(u64, f64, f64, f64)> {
    let fast = Fast::new(setup);
    let cells: Vec<(u64, f64)> = grid.ls.iter().flat_map(|&l| grid.rhos.iter().map(move |&r| (l, r))).collect();
    let found = exec.map(&cells, |&(l, rho)| {
        fast.min_m(l as f64, rho, p as f64, grid).map(|m| (l, rho, m, fast.eval(l as f64, rho, m, p as f64).1))
    });
    found.into_iter().flatten().min_by(|a, b| a.3.total_cmp(&b.3))
}

#[derive(Clone, Debug)]
pub struct ReductionOptions {
    pub setup: FibSetup,
    pub grid: Grid,
    pub reading: ZeroLemmaReading,
    /// Stop once consecutive bounds differ by less than this fraction.
    pub tolerance: f64,
    pub max_rounds: usize,
    pub exec: Exec,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions {
            setup: FibSetup::default(),
            grid: Grid::default(),
            reading: ZeroLemmaReading::default(),
            tolerance: 0.01,
            max_rounds: 20,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Round {
    pub p_in: u64,
    pub l: u64,
    pub rho: f64,
    pub m: f64,
    pub main_bound: u64,
    pub s_max: u64,
    pub windows: DegenerateWindows,
    pub log_a2: f64,
    pub c3_bound: u64,
    pub p_out: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reduction {
    pub log_y: f64,
    pub matveev_bound: u64,
    pub rounds: Vec<Round>,
    pub final_bound: u64,
    pub converged: bool,
}

fn certify(p: u64, l: u64, rho: f64, m: f64, opts: &ReductionOptions) -> Result<(MainCase, f64), ThreeLogError> {
    let rho_a = crate::fib::approx_f64(rho);
    let mut m = m;
    for _ in 0..100 {
        let m_a = Approx::lit(&format!("{m:.5}"));
        let case = MainCase::run(l, &m_a, &rho_a, p, &opts.setup, opts.reading)?;
        if case.verdict.success {
            return Ok((case, (m * 1e5).round() / 1e5));
        }
        m += opts.grid.m_step;
    }
    Err(ThreeLogError::NoConvergence(format!("no certified m near {m} for L = {l}, rho = {rho}")))
}

/// One round: best grid parameters for exponents up to `p_in`, certified, and
/// the resulting bound `max(main case, degenerate case, max(S1, S2))`.
fn round(p_in: u64, opts: &ReductionOptions) -> Result<Round, ThreeLogError> {
    let (l, rho, m, _) = search_parameters(p_in, &opts.setup, &opts.grid, opts.exec)
        .ok_or_else(|| ThreeLogError::NoConvergence(format!("no grid point passes (o) at p = {p_in}")))?;
    let (case, m) = certify(p_in, l, rho, m, opts)?;
    finish_round(p_in, l, rho, m, case, opts)
}

/// Recomputes a round from its `(p_in, L, rho, m)` without searching.
pub fn recheck_round(p_in: u64, l: u64, rho: f64, m: f64, opts: &ReductionOptions) -> Result<Round, ThreeLogError> {
    let case = MainCase::run(
        l,
        &Approx::lit(&format!("{m:.5}")),
        &crate::fib::approx_f64(rho),
        p_in,
        &opts.setup,
        opts.reading,
    )?;
    if !case.verdict.success {
        return Err(ThreeLogError::Domain(format!("conditions fail for L = {l}, rho = {rho}, m = {m} at p = {p_in}")));
    }
    finish_round(p_in, l, rho, m, case, opts)
}

fn finish_round(
    p_in: u64,
    l: u64,
    rho: f64,
    m: f64,
    case: MainCase,
    opts: &ReductionOptions,
) -> Result<Round, ThreeLogError> {
    let main_bound = case.main_bound.ceil() as u64;
    let windows = case.verdict.degenerate_cases.clone();
    let log_a2 = c3_log_a2(&windows);
    let c3 = c3_bound(&log_a2, &opts.setup)?;
    let s_max = u64::try_from(case.s_max()).unwrap_or(u64::MAX);
    let p_out = main_bound.max(c3.bound).max(s_max).min(p_in);
    Ok(Round { p_in, l, rho, m, main_bound, s_max, windows, log_a2: c3.log_a2, c3_bound: c3.bound, p_out })
}

/// Matveev's bound, then repeated rounds until the bound moves by less than
/// the tolerance. Non-convergence is an error carrying the trace.
pub fn fib_p_reduction(opts: &ReductionOptions) -> Result<Reduction, ThreeLogError> {
    let matveev_bound = matveev_first_bound(&opts.setup)?;
    let mut rounds: Vec<Round> = Vec::new();
    let mut p = matveev_bound;
    for _ in 0..opts.max_rounds {
        let r = round(p, opts)?;
        let next = r.p_out;
        rounds.push(r);
        let change = (p - next) as f64 / p as f64;
        p = next;
        if change < opts.tolerance {
            return Ok(Reduction {
                log_y: opts.setup.log_y.to_f64(),
                matveev_bound,
                rounds,
                final_bound: p,
                converged: true,
            });
        }
    }
    let trace: Vec<String> = rounds.iter().map(|r| format!("{} -> {}", r.p_in, r.p_out)).collect();
    Err(ThreeLogError::NoConvergence(format!("after {} rounds: {}", rounds.len(), trace.join(", "))))
}
