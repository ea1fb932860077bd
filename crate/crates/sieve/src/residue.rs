//! Finite sets of residue classes and their CRT intersection.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::SieveError;

/// A set of classes modulo `modulus`, kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueClassSet {
    modulus: BigUint,
    residues: Vec<BigUint>,
}

impl ResidueClassSet {
    pub fn new(modulus: BigUint, mut residues: Vec<BigUint>) -> Result<Self, SieveError> {
        if modulus.is_zero() {
            return Err(SieveError::Domain("modulus must be positive".into()));
        }
        if let Some(r) = residues.iter().find(|r| **r >= modulus) {
            return Err(SieveError::Domain(format!("residue {r} is not reduced mod {modulus}")));
        }
        residues.sort();
        residues.dedup();
        Ok(ResidueClassSet { modulus, residues })
    }

    pub fn from_u64(modulus: u64, residues: &[u64]) -> Result<Self, SieveError> {
        Self::new(BigUint::from(modulus), residues.iter().map(|&r| BigUint::from(r)).collect())
    }

    /// All classes coprime to `m`.
    pub fn units(m: u64) -> Self {
        let residues = (0..m).filter(|&r| r.gcd(&m) == 1).map(BigUint::from).collect();
        ResidueClassSet { modulus: BigUint::from(m), residues }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn residues(&self) -> &[BigUint] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    pub fn contains(&self, n: &BigUint) -> bool {
        self.residues.binary_search(&(n % &self.modulus)).is_ok()
    }

    /// Smallest representative `> 1`, or `modulus + 1` when the set is `{1}`.
    pub fn least_above_one(&self) -> Option<BigUint> {
        let one = BigUint::one();
        match self.residues.iter().find(|r| **r > one) {
            Some(r) => Some(r.clone()),
            None if self.residues.first() == Some(&one) => Some(&self.modulus + 1u32),
            None => None,
        }
    }

    /// Classes modulo `lcm` of both moduli that reduce into both sets.
    pub fn intersect(&self, other: &ResidueClassSet) -> ResidueClassSet {
        let (m1, m2) = (&self.modulus, &other.modulus);
        let g = m1.gcd(m2);
        let m1g = m1 / &g;
        let m2g = m2 / &g;
        let lcm = m1 * &m2g;
        let inv = if m2g.is_one() { BigUint::zero() } else { inv_big(&(&m1g % &m2g), &m2g) };

        let mut buckets: HashMap<BigUint, Vec<&BigUint>> = HashMap::new();
        for r in &other.residues {
            buckets.entry(r % &g).or_default().push(r);
        }
        let m2g_i = BigInt::from(m2g.clone());
        let mut out = Vec::new();
        for r1 in &self.residues {
            let Some(bucket) = buckets.get(&(r1 % &g)) else { continue };
            for r2 in bucket {
                let diff = (BigInt::from((*r2).clone()) - BigInt::from(r1.clone())) / BigInt::from(g.clone());
                let t = (diff.mod_floor(&m2g_i).to_biguint().unwrap() * &inv) % &m2g;
                out.push(r1 + m1 * t);
            }
        }
        out.sort();
        out.dedup();
        ResidueClassSet { modulus: lcm, residues: out }
    }

    /// Keeps the classes whose reduction modulo `m` (a divisor of the modulus) passes `keep`.
    pub fn retain_mod(&mut self, m: u64, mut keep: impl FnMut(u64) -> bool) {
        let mb = BigUint::from(m);
        self.residues.retain(|r| keep(small_mod(r, &mb)));
    }
}

pub(crate) fn small_mod(x: &BigUint, m: &BigUint) -> u64 {
    let r = x % m;
    r.iter_u64_digits().next().unwrap_or(0)
}

fn inv_big(a: &BigUint, m: &BigUint) -> BigUint {
    let (a, m) = (BigInt::from(a.clone()), BigInt::from(m.clone()));
    let e = a.extended_gcd(&m);
    assert!(e.gcd.is_one(), "moduli quotient must be coprime");
    e.x.mod_floor(&m).to_biguint().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let a = ResidueClassSet::from_u64(2, &[1]).unwrap();
        let b = ResidueClassSet::from_u64(3, &[1]).unwrap();
        assert_eq!(a.intersect(&b), ResidueClassSet::from_u64(6, &[1]).unwrap());
        let u6 = ResidueClassSet::from_u64(6, &[1, 5]).unwrap();
        let n = ResidueClassSet::from_u64(30, &[1, 11, 19, 29]).unwrap();
        assert_eq!(u6.intersect(&n), n);
        assert_eq!(n.intersect(&n), n);
    }

    #[test]
    fn least_element() {
        let n = ResidueClassSet::from_u64(30, &[1, 11, 19, 29]).unwrap();
        assert_eq!(n.least_above_one(), Some(BigUint::from(11u32)));
        let one = ResidueClassSet::from_u64(30, &[1]).unwrap();
        assert_eq!(one.least_above_one(), Some(BigUint::from(31u32)));
    }

    #[test]
    fn rejects_unreduced() {
        assert!(ResidueClassSet::from_u64(6, &[7]).is_err());
        assert!(ResidueClassSet::from_u64(0, &[]).is_err());
    }
}
