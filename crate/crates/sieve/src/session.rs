//! Growing `S` one pair at a time over a smooth modulus, with checkpoints.

use arith::{is_prime, next_prime, Exec};
use bounds::LogMagnitude;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use seqcore::SeqKind;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::nset::{k_of, NSetOracle, SievePair};
use crate::residue::{small_mod, ResidueClassSet};
use crate::SieveError;

/// `2^5 3^3 5^2 7 11 13 17 19`.
pub const DEFAULT_SMOOTH_MODULUS: u64 = 6_983_776_800;

/// How primes `l` are fed into the sieve.
#[derive(Clone, Debug)]
pub struct Strategy {
    /// Pairs appended before the smooth-modulus search starts.
    pub seed_primes: Vec<u64>,
    /// Starting smooth modulus `M`; multiplied by the next prime after each stage.
    pub initial_modulus: BigUint,
    /// First search bound for `l`; multiplied by 4 whenever the candidates run out.
    pub initial_bound: u64,
    /// No `l` above this is ever tried.
    pub l_max: u64,
    /// A stage also ends after this many pairs without any shrink once `K(S) = M`.
    pub patience: usize,
    /// Target size of `N(S)` at the end of a stage.
    pub floor: usize,
    pub exec: Exec,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            seed_primes: vec![11],
            initial_modulus: BigUint::from(DEFAULT_SMOOTH_MODULUS),
            initial_bound: 1 << 12,
            l_max: 1 << 26,
            patience: 200,
            floor: 4,
            exec: Exec::default(),
        }
    }
}

/// `N(S)` at the end of one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub modulus: BigUint,
    pub pairs: usize,
    pub set: ResidueClassSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Running,
    /// `a` exceeds the upper bound for `n`.
    Contradiction,
    /// Every `l <= l_max` was used without a contradiction.
    Exhausted,
}

#[derive(Clone, Debug)]
pub struct SieveSession {
    pub kind: SeqKind,
    pub p: u64,
    pub q: u64,
    pub pairs: Vec<SievePair>,
    pub k_s: BigUint,
    pub n_s: ResidueClassSet,
    pub lower_bound: BigUint,
    pub smooth_modulus: BigUint,
    pub stages: Vec<StageRecord>,
    pub outcome: Outcome,
    no_shrink: usize,
}

/// One line of progress output.
#[derive(Clone, Debug)]
pub struct Progress {
    pub l: u64,
    pub size: usize,
    pub log10_a: f64,
}

impl fmt::Display for Progress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l={} |N|={} log10(a)={:.4}", self.l, self.size, self.log10_a)
    }
}

impl SieveSession {
    pub fn new(kind: SeqKind, p: u64, q: u64, strategy: &Strategy) -> Result<Self, SieveError> {
        if !is_prime(p) || p < 7 {
            return Err(SieveError::Domain(format!("p = {p} must be a prime >= 7")));
        }
        if q < 5 || q >= p || !is_prime(q) {
            return Err(SieveError::Domain(format!("q = {q} must be a prime with 5 <= q < p")));
        }
        let units6 = ResidueClassSet::from_u64(6, &[1, 5])?;
        Ok(SieveSession {
            kind,
            p,
            q,
            pairs: Vec::new(),
            k_s: BigUint::from(6u32),
            lower_bound: units6.least_above_one().expect("non-empty"),
            n_s: units6,
            smooth_modulus: strategy.initial_modulus.clone(),
            stages: Vec::new(),
            outcome: Outcome::Running,
            no_shrink: 0,
        })
    }

    /// Lets an exhausted session continue, typically with a larger `l_max`.
    pub fn resume(&mut self) {
        if self.outcome == Outcome::Exhausted {
            self.outcome = Outcome::Running;
        }
    }

    pub fn uses(&self, l: u64) -> bool {
        self.pairs.iter().any(|pr| pr.l == l)
    }

    /// Appends `(l, q)` and intersects `N(S)` with `N(l, q)`.
    pub fn push(&mut self, l: u64, exec: Exec) -> Result<Progress, SieveError> {
        let pair = SievePair::new(l, self.q)?;
        let oracle = NSetOracle::new(self.kind, pair)?;
        let kl = oracle.k();
        let k_new = self.k_s.lcm(&BigUint::from(kl));
        let steps = (&k_new / &self.k_s).to_u64().ok_or_else(|| SieveError::Domain("lift too large".into()))?;
        let before = self.n_s.len();

        // reductions mod K(l) of every lifted class r + j K(S)
        let kl_big = BigUint::from(kl);
        let ks_mod = small_mod(&self.k_s, &kl_big);
        let mut lifted: Vec<(BigUint, u64)> = Vec::with_capacity(before * steps as usize);
        for r in self.n_s.residues() {
            let r0 = small_mod(r, &kl_big);
            for j in 0..steps {
                let red = ((r0 as u128 + j as u128 * ks_mod as u128) % kl as u128) as u64;
                lifted.push((r + &self.k_s * j, red));
            }
        }
        let keys: Vec<u64> = lifted.iter().map(|&(_, red)| oracle.key(red)).collect();
        oracle.prefetch(&keys, exec);
        let kept: Vec<BigUint> = lifted.into_iter().filter(|(_, red)| oracle.contains(*red)).map(|(x, _)| x).collect();

        self.k_s = k_new;
        self.n_s = ResidueClassSet::new(self.k_s.clone(), kept)?;
        self.pairs.push(pair);
        if self.n_s.len() < before * steps as usize {
            self.no_shrink = 0;
        } else {
            self.no_shrink += 1;
        }
        if let Some(a) = self.n_s.least_above_one() {
            if a > self.lower_bound {
                self.lower_bound = a;
            }
        }
        Ok(self.progress(l))
    }

    fn progress(&self, l: u64) -> Progress {
        Progress { l, size: self.n_s.len(), log10_a: log10_big(&self.lower_bound) }
    }

    fn stage_done(&self, strategy: &Strategy) -> bool {
        self.k_s == self.smooth_modulus && (self.n_s.len() <= strategy.floor || self.no_shrink >= strategy.patience)
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        Checkpoint {
            kind: self.kind,
            p: self.p,
            q: self.q,
            pairs: self.pairs.iter().map(|pr| (pr.l, pr.q)).collect(),
            modulus_hex: self.k_s.to_str_radix(16),
            residues_hex: self.n_s.residues().iter().map(|r| r.to_str_radix(16)).collect(),
            lower_bound_hex: self.lower_bound.to_str_radix(16),
            smooth_modulus_hex: self.smooth_modulus.to_str_radix(16),
            stages: self.stages.clone(),
            outcome: self.outcome,
            no_shrink: self.no_shrink,
        }
    }

    pub fn from_checkpoint(c: &Checkpoint) -> Result<Self, SieveError> {
        let hex = |s: &str| {
            BigUint::parse_bytes(s.as_bytes(), 16).ok_or_else(|| SieveError::Checkpoint(format!("bad hex value {s:?}")))
        };
        let k_s = hex(&c.modulus_hex)?;
        let residues = c.residues_hex.iter().map(|s| hex(s)).collect::<Result<Vec<_>, _>>()?;
        let pairs = c.pairs.iter().map(|&(l, q)| SievePair::new(l, q)).collect::<Result<Vec<_>, _>>()?;
        Ok(SieveSession {
            kind: c.kind,
            p: c.p,
            q: c.q,
            pairs,
            n_s: ResidueClassSet::new(k_s.clone(), residues)?,
            k_s,
            lower_bound: hex(&c.lower_bound_hex)?,
            smooth_modulus: hex(&c.smooth_modulus_hex)?,
            stages: c.stages.clone(),
            outcome: c.outcome,
            no_shrink: c.no_shrink,
        })
    }
}

/// Serialized session state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub kind: SeqKind,
    pub p: u64,
    pub q: u64,
    pub pairs: Vec<(u64, u64)>,
    pub modulus_hex: String,
    pub residues_hex: Vec<String>,
    pub lower_bound_hex: String,
    pub smooth_modulus_hex: String,
    #[serde(default)]
    pub stages: Vec<StageRecord>,
    pub outcome: Outcome,
    #[serde(default)]
    pub no_shrink: usize,
}

impl Checkpoint {
    /// Writes to a temporary sibling and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<(), SieveError> {
        let mut tmp = PathBuf::from(path);
        tmp.set_extension("tmp");
        let text = serde_json::to_string_pretty(self).map_err(|e| SieveError::Checkpoint(e.to_string()))?;
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, SieveError> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| SieveError::Checkpoint(e.to_string()))
    }
}

pub fn log10_big(x: &BigUint) -> f64 {
    LogMagnitude::from_biguint(x).log10().to_f64()
}

/// Primes `l = +-1 (mod 5)` with `(l - 1) | m` and `lo < l <= hi`, ascending.
pub fn candidates(m: &BigUint, lo: u64, hi: u64) -> Vec<u64> {
    let fac = factor_smooth(m);
    let mut divs = vec![1u64];
    for (pr, e) in fac {
        let mut next = Vec::new();
        for &d in &divs {
            let mut x = d;
            for _ in 0..=e {
                if x >= hi {
                    break;
                }
                next.push(x);
                x = match x.checked_mul(pr) {
                    Some(v) => v,
                    None => break,
                };
            }
        }
        divs = next;
    }
    let mut out: Vec<u64> = divs
        .into_iter()
        .map(|d| d + 1)
        .filter(|&l| l > lo && l <= hi && matches!(l % 5, 1 | 4) && is_prime(l))
        .collect();
    out.sort_unstable();
    out
}

/// Factorization of a modulus whose prime factors are all small.
fn factor_smooth(m: &BigUint) -> Vec<(u64, u32)> {
    let mut m = m.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while !m.is_one() {
        let pb = BigUint::from(p);
        let mut e = 0;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p = next_prime(p);
        assert!(p < 1 << 32, "smooth modulus expected");
    }
    out
}

fn largest_factor(m: &BigUint) -> u64 {
    factor_smooth(m).last().map(|&(p, _)| p).unwrap_or(1)
}

/// Runs stages until `a` exceeds `exp(n_max_ln)` or the `l` supply runs out.
///
/// `observe` sees one progress line per appended pair. A checkpoint is written
/// after each stage when `checkpoint` is given.
pub fn run_sieve(
    session: &mut SieveSession,
    n_max: &LogMagnitude,
    strategy: &Strategy,
    checkpoint: Option<&Path>,
    mut observe: impl FnMut(&Progress),
) -> Result<Outcome, SieveError> {
    for &l in &strategy.seed_primes {
        if !session.uses(l) {
            let pr = session.push(l, strategy.exec)?;
            observe(&pr);
        }
    }
    while session.outcome == Outcome::Running {
        let mut lo = 1u64;
        let mut hi = strategy.initial_bound.min(strategy.l_max);
        let mut queue = candidates(&session.smooth_modulus, lo, hi);
        let mut idx = 0;
        while !session.stage_done(strategy) {
            if idx == queue.len() {
                if hi >= strategy.l_max {
                    session.outcome = Outcome::Exhausted;
                    break;
                }
                lo = hi;
                hi = hi.saturating_mul(4).min(strategy.l_max);
                queue = candidates(&session.smooth_modulus, lo, hi);
                idx = 0;
                continue;
            }
            let l = queue[idx];
            idx += 1;
            if session.uses(l) {
                continue;
            }
            let pr = session.push(l, strategy.exec)?;
            observe(&pr);
        }
        session.stages.push(StageRecord {
            modulus: session.k_s.clone(),
            pairs: session.pairs.len(),
            set: session.n_s.clone(),
        });
        if session.outcome == Outcome::Running {
            let a = LogMagnitude::from_biguint(&session.lower_bound);
            if a.compare(n_max)? == Ordering::Greater {
                session.outcome = Outcome::Contradiction;
            } else {
                let next = next_prime(largest_factor(&session.smooth_modulus));
                session.smooth_modulus *= next;
                session.no_shrink = 0;
            }
        }
        if let Some(path) = checkpoint {
            session.to_checkpoint().save(path)?;
        }
    }
    Ok(session.outcome)
}

/// `K(S)` of a list of pairs.
pub fn k_of_pairs(kind: SeqKind, pairs: &[SievePair]) -> BigUint {
    pairs.iter().fold(BigUint::from(6u32), |acc, pr| acc.lcm(&BigUint::from(k_of(kind, pr.l))))
}
