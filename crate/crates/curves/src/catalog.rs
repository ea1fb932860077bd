use crate::{trace_of_frobenius, CurveError, CurveModL};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::path::Path;

const BUILTIN: &str = include_str!("../data/curves.json");

/// An integral Weierstrass model with its table label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogCurve {
    pub label: String,
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    pub provenance: String,
}

impl CatalogCurve {
    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.coefficients().map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Reduction modulo an odd prime of good reduction.
    pub fn reduce(&self, l: u64) -> Result<CurveModL, CurveError> {
        CurveModL::from_integers(l, self.coefficients())
    }
}

/// Exact j-invariant `c4^3 / disc`.
pub fn j_invariant(curve: &CatalogCurve) -> Result<BigRational, CurveError> {
    let disc = curve.discriminant();
    if disc.is_zero() {
        return Err(CurveError::Catalog(format!("{} is singular", curve.label)));
    }
    let [b2, b4, _, _] = curve.b_invariants();
    let c4 = &b2 * &b2 - 24 * &b4;
    Ok(BigRational::new(&c4 * &c4 * &c4, disc))
}

#[derive(Clone, Debug)]
pub struct Catalog {
    curves: Vec<CatalogCurve>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Self, CurveError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CurveError::Catalog(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Parses and validates: each model must be nonsingular and satisfy the
    /// Hasse bound at the first 20 odd primes of good reduction.
    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        let curves: Vec<CatalogCurve> = serde_json::from_str(text).map_err(|e| CurveError::Catalog(e.to_string()))?;
        for c in &curves {
            let disc = c.discriminant();
            if disc.is_zero() {
                return Err(CurveError::Catalog(format!("{} is singular", c.label)));
            }
            let mut checked = 0;
            let mut l = 2;
            while checked < 20 {
                l = arith::next_prime(l);
                if (&disc % BigInt::from(l)).is_zero() {
                    continue;
                }
                let t = trace_of_frobenius(&c.reduce(l)?);
                if (t.a_l * t.a_l) as u64 > 4 * l {
                    return Err(CurveError::Catalog(format!("{} violates the Hasse bound at {l}", c.label)));
                }
                checked += 1;
            }
        }
        Ok(Catalog { curves })
    }

    pub fn curves(&self) -> &[CatalogCurve] {
        &self.curves
    }

    pub fn get(&self, label: &str) -> Option<&CatalogCurve> {
        self.curves.iter().find(|c| c.label.eq_ignore_ascii_case(label))
    }

    /// The conductor-200 curve `E^i`, `i` in 1..=5 (classes a..e).
    pub fn newform_200(&self, i: usize) -> Option<&CatalogCurve> {
        if !(1..=5).contains(&i) {
            return None;
        }
        let label = format!("200{}1", (b'a' + i as u8 - 1) as char);
        self.get(&label)
    }
}

impl CatalogCurve {
    /// Whether the prime `l` divides the discriminant of this model.
    pub fn is_bad_prime(&self, l: u64) -> bool {
        (self.discriminant().abs() % BigInt::from(l)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_models() {
        let cat = Catalog::builtin();
        assert_eq!(cat.get("20A2").unwrap().coefficients(), [0, 1, 0, -1, 0]);
        assert_eq!(cat.get("100a1").unwrap().coefficients(), [0, -1, 0, -33, 62]);
        assert_eq!(cat.get("200B1").unwrap().coefficients(), [0, 1, 0, -3, -2]);
        assert_eq!(cat.newform_200(2).unwrap().label, "200b1");
        assert!(cat.newform_200(6).is_none());
    }

    #[test]
    fn j_invariants() {
        let cat = Catalog::builtin();
        let j = |l: &str| j_invariant(cat.get(l).unwrap()).unwrap();
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(j("100a1"), q(16384, 5));
        assert_eq!(j("200c1"), q(55296, 5));
        assert_eq!(j("20a2"), q(16384, 5));
        let cc = CatalogCurve { label: "cn".into(), a1: 0, a2: 0, a3: 0, a4: -1, a6: 0, provenance: String::new() };
        assert_eq!(j_invariant(&cc).unwrap(), q(1728, 1));
    }

    #[test]
    fn rejects_singular_entry() {
        let text = r#"[{"label":"x","a1":0,"a2":0,"a3":0,"a4":0,"a6":0,"provenance":""}]"#;
        assert!(Catalog::from_json(text).is_err());
    }
}
