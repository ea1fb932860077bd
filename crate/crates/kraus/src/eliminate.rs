use arith::{largest_prime_factor, lcm};
use curves::{frey_lucas, Catalog, Reduction, TraceEngine};
use seqcore::{fib_lucas_raw, period_m};
use serde::Serialize;
use sieve::ResidueClassSet;

use crate::KrausError;

/// What one prime `l` contributes to the elimination of `E^i`.
#[derive(Clone, Debug, Serialize)]
pub struct LocalReport {
    pub l: u64,
    pub m_of_l: u64,
    /// Classes `m mod M(l)` whose Frey curve has the same `a_l` as `E^i`.
    pub t_set: Vec<u64>,
    pub g: u64,
    pub h: u64,
    pub h_smooth: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EliminationReport {
    pub index: usize,
    pub label: String,
    pub primes: Vec<u64>,
    pub locals: Vec<LocalReport>,
    /// Intersection of all `T_l` with `{1, 5} mod 6`.
    pub intersection: ResidueClassSet,
    pub success: bool,
}

fn local(l: u64, a_i: i64, engine: &TraceEngine) -> Result<LocalReport, KrausError> {
    let m = period_m(l).map_err(|e| KrausError::Domain(e.to_string()))?;
    let mut t_set = Vec::new();
    let mut g = 1u64;
    for r in 0..m {
        let (f, _) = fib_lucas_raw(r, l);
        match frey_lucas(f, l)? {
            Reduction::Good(c) => {
                let d = engine.trace(&c).a_l - a_i;
                if d == 0 {
                    t_set.push(r);
                } else {
                    g = lcm(g, d.unsigned_abs());
                }
            }
            Reduction::Multiplicative => {}
        }
    }
    let h = if matches!(l % 5, 2 | 3) {
        g
    } else {
        let lp1 = l as i64 + 1;
        lcm(g, lcm((lp1 - a_i) as u64, (lp1 + a_i) as u64))
    };
    let h_smooth = largest_prime_factor(h).is_none_or(|f| f <= 5);
    Ok(LocalReport { l, m_of_l: m, t_set, g, h, h_smooth })
}

/// Tries to rule out `E^i` (one of the five curves of conductor 200) as the
/// level-lowered form of the Lucas Frey curve, using the primes in `s`.
pub fn eliminate_newforms(i: usize, s: &[u64]) -> Result<EliminationReport, KrausError> {
    let catalog = Catalog::builtin();
    let curve = catalog.newform_200(i).ok_or_else(|| KrausError::Domain(format!("no curve E^{i}")))?;
    let mut locals = Vec::new();
    let mut inter = ResidueClassSet::from_u64(6, &[1, 5]).expect("valid set");
    for &l in s {
        if l == 2 || l == 5 {
            return Err(KrausError::Domain(format!("l = {l} divides the conductor")));
        }
        let engine = TraceEngine::new(l)?;
        let a_i = engine.trace(&curve.reduce(l)?).a_l;
        let rep = local(l, a_i, &engine)?;
        let t = ResidueClassSet::from_u64(rep.m_of_l, &rep.t_set).expect("reduced residues");
        inter = inter.intersect(&t);
        locals.push(rep);
    }
    let success = locals.iter().all(|r| r.h_smooth) && inter.is_empty();
    Ok(EliminationReport {
        index: i,
        label: curve.label.clone(),
        primes: s.to_vec(),
        locals,
        intersection: inter,
        success,
    })
}
