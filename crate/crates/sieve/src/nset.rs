//! The local sets `N(l, q)`: classes of `n` that survive the Frey curve test at `l`.

use arith::{gcd, is_prime, largest_prime_factor, lcm, Exec};
use curves::{frey_fib, frey_lucas, Catalog, Reduction, TraceEngine};
use seqcore::{fib_lucas_raw, SeqKind};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;

use crate::residue::ResidueClassSet;
use crate::SieveError;

/// Largest prime allowed in `l - 1`.
pub const SMOOTHNESS_LIMIT: u64 = 25000;

/// A prime `l = +-1 (mod 5)` with `l - 1` free of primes `>= 25000`, and a prime `q >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SievePair {
    pub l: u64,
    pub q: u64,
}

impl SievePair {
    pub fn new(l: u64, q: u64) -> Result<Self, SieveError> {
        if !is_prime(l) || !matches!(l % 5, 1 | 4) {
            return Err(SieveError::Domain(format!("l = {l} must be a prime = +-1 mod 5")));
        }
        if largest_prime_factor(l - 1).unwrap_or(1) >= SMOOTHNESS_LIMIT {
            return Err(SieveError::Domain(format!("l - 1 = {} has a prime factor >= {SMOOTHNESS_LIMIT}", l - 1)));
        }
        if q < 5 || !is_prime(q) {
            return Err(SieveError::Domain(format!("q = {q} must be a prime >= 5")));
        }
        Ok(SievePair { l, q })
    }
}

/// The modulus on which membership in `N(l, q)` depends.
pub fn k_of(kind: SeqKind, l: u64) -> u64 {
    match kind {
        SeqKind::Fibonacci => lcm(l - 1, 6),
        SeqKind::Lucas => l - 1,
    }
}

/// Whether `d` has a prime factor `> q`; zero has every prime factor.
pub fn has_prime_factor_above(d: i64, q: u64) -> bool {
    d == 0 || largest_prime_factor(d.unsigned_abs()).is_some_and(|f| f > q)
}

/// Membership oracle for `N(l, q)` with a cache keyed by the Frey parameter mod `l`.
pub struct NSetOracle {
    kind: SeqKind,
    pair: SievePair,
    k: u64,
    a_e: i64,
    singular_member: bool,
    engine: TraceEngine,
    cache: Mutex<HashMap<u64, bool>>,
}

impl NSetOracle {
    pub fn new(kind: SeqKind, pair: SievePair) -> Result<Self, SieveError> {
        let l = pair.l;
        let label = match kind {
            SeqKind::Fibonacci => "20a2",
            SeqKind::Lucas => "200b1",
        };
        let catalog = Catalog::builtin();
        let e = catalog.get(label).expect("builtin catalog curve").reduce(l)?;
        let engine = TraceEngine::new(l)?;
        let a_e = engine.trace(&e).a_l;
        let lp1 = l as i64 + 1;
        let singular_member = has_prime_factor_above(lp1 - a_e, pair.q) || has_prime_factor_above(lp1 + a_e, pair.q);
        Ok(NSetOracle { kind, pair, k: k_of(kind, l), a_e, singular_member, engine, cache: Mutex::new(HashMap::new()) })
    }

    pub fn pair(&self) -> SievePair {
        self.pair
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// `a_l` of the fixed curve `E`.
    pub fn a_e(&self) -> i64 {
        self.a_e
    }

    /// The Frey parameter of `n` mod `l`: `H_n` (Fibonacci) or `F_n` (Lucas).
    pub fn key(&self, n: u64) -> u64 {
        let l = self.pair.l;
        let n = n % self.k;
        let (f, lu) = fib_lucas_raw(n % (l - 1), l);
        match self.kind {
            SeqKind::Fibonacci if n % 6 == 5 => (l - lu) % l,
            SeqKind::Fibonacci => lu,
            SeqKind::Lucas => f,
        }
    }

    fn decide(&self, key: u64) -> bool {
        let l = self.pair.l;
        let red = match self.kind {
            SeqKind::Fibonacci => frey_fib(key, l),
            SeqKind::Lucas => frey_lucas(key, l),
        }
        .expect("modulus validated");
        match red {
            Reduction::Multiplicative => self.singular_member,
            Reduction::Good(c) => has_prime_factor_above(self.engine.trace(&c).a_l - self.a_e, self.pair.q),
        }
    }

    pub fn contains_key(&self, key: u64) -> bool {
        if let Some(&b) = self.cache.lock().unwrap().get(&key) {
            return b;
        }
        let b = self.decide(key);
        self.cache.lock().unwrap().insert(key, b);
        b
    }

    /// Membership of a class `n mod K(l)`; non-units are never members.
    pub fn contains(&self, n: u64) -> bool {
        gcd(n % self.k, self.k) == 1 && self.contains_key(self.key(n))
    }

    /// Fills the cache for all `keys` at once.
    pub fn prefetch(&self, keys: &[u64], exec: Exec) {
        let missing: Vec<u64> = {
            let cache = self.cache.lock().unwrap();
            let mut m: Vec<u64> = keys.iter().copied().filter(|k| !cache.contains_key(k)).collect();
            m.sort_unstable();
            m.dedup();
            m
        };
        let found = exec.map(&missing, |&k| self.decide(k));
        let mut cache = self.cache.lock().unwrap();
        cache.extend(missing.into_iter().zip(found));
    }

    /// The whole set `N(l, q)` as classes mod `K(l)`.
    pub fn full_set(&self, exec: Exec) -> ResidueClassSet {
        let units: Vec<u64> = (1..self.k).filter(|&n| gcd(n, self.k) == 1).collect();
        let keys: Vec<u64> = units.iter().map(|&n| self.key(n)).collect();
        self.prefetch(&keys, exec);
        let members: Vec<u64> =
            units.into_iter().zip(keys).filter(|&(_, k)| self.contains_key(k)).map(|(n, _)| n).collect();
        ResidueClassSet::from_u64(self.k, &members).expect("reduced residues")
    }
}

/// `N(l, q)` for the Fibonacci equation, as a subset of `(Z/K(l))*`.
pub fn n_set_fib(l: u64, q: u64) -> Result<ResidueClassSet, SieveError> {
    Ok(NSetOracle::new(SeqKind::Fibonacci, SievePair::new(l, q)?)?.full_set(Exec::default()))
}

/// `N(l, q)` for the Lucas equation, as a subset of `(Z/(l-1))*`.
pub fn n_set_lucas(l: u64, q: u64) -> Result<ResidueClassSet, SieveError> {
    Ok(NSetOracle::new(SeqKind::Lucas, SievePair::new(l, q)?)?.full_set(Exec::default()))
}
