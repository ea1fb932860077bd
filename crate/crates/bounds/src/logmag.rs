use crate::approx::Approx;
use crate::real::Real;
use crate::BoundsError;
use num_bigint::BigUint;
use std::cmp::Ordering;

/// A positive quantity stored as its natural logarithm.
#[derive(Clone, Debug)]
pub struct LogMagnitude {
    ln: Approx,
}

impl LogMagnitude {
    pub fn from_ln(ln: Approx) -> Self {
        LogMagnitude { ln }
    }

    pub fn from_value(x: &Approx) -> Result<Self, BoundsError> {
        Ok(LogMagnitude { ln: x.ln()? })
    }

    pub fn from_u64(x: u64) -> Self {
        assert!(x > 0);
        LogMagnitude { ln: Approx::exact(Real::from_u64(x)).ln().expect("positive") }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        assert!(x.bits() > 0, "LogMagnitude of zero");
        LogMagnitude { ln: Approx::rounded(Real::from_biguint(x)).ln().expect("positive") }
    }

    /// `10^x`.
    pub fn pow10(x: &Approx) -> Self {
        LogMagnitude { ln: x * &Approx::int(10).ln().expect("positive") }
    }

    pub fn ln_value(&self) -> &Approx {
        &self.ln
    }

    pub fn log10(&self) -> Approx {
        &self.ln / &Approx::int(10).ln().expect("positive")
    }

    pub fn mul(&self, other: &LogMagnitude) -> LogMagnitude {
        LogMagnitude { ln: &self.ln + &other.ln }
    }

    pub fn div(&self, other: &LogMagnitude) -> LogMagnitude {
        LogMagnitude { ln: &self.ln - &other.ln }
    }

    pub fn pow(&self, e: &Approx) -> LogMagnitude {
        LogMagnitude { ln: &self.ln * e }
    }

    /// `ln` of the represented value as a new magnitude; needs the value to exceed 1.
    pub fn ln_as_magnitude(&self) -> Result<LogMagnitude, BoundsError> {
        LogMagnitude::from_value(&self.ln)
    }

    pub fn compare(&self, other: &LogMagnitude) -> Result<Ordering, BoundsError> {
        self.ln.compare(&other.ln)
    }

    /// Decimal scientific notation, e.g. `2.639e46`.
    pub fn to_sci(&self, digits: usize) -> String {
        let l10 = self.log10().v;
        let e = l10.floor();
        let frac = &l10 - &e;
        let ten = Real::from_u64(10);
        let m = (frac * ten.ln()).exp();
        let scaled = (&m * &ten.powi(digits - 1) + Real::ratio(1, 2)).floor_biguint().to_string();
        let mut e = e.to_f64() as i64;
        let scaled = if scaled.len() > digits {
            e += 1;
            scaled[..digits].to_string()
        } else {
            scaled
        };
        if digits == 1 {
            format!("{scaled}e{e}")
        } else {
            format!("{}.{}e{e}", &scaled[..1], &scaled[1..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific() {
        let x = LogMagnitude::from_biguint(
            &BigUint::parse_bytes(b"26390000000000000000000000000000000000000000000", 10).unwrap(),
        );
        assert_eq!(x.to_sci(4), "2.639e46");
        let y = LogMagnitude::pow10(&Approx::lit("8733.0140"));
        assert_eq!(y.to_sci(4), "1.033e8733");
    }

    #[test]
    fn ordering() {
        let a = LogMagnitude::from_u64(1000);
        let b = LogMagnitude::from_u64(1001);
        assert_eq!(a.compare(&b).unwrap(), Ordering::Less);
        assert!(a.mul(&b).compare(&LogMagnitude::from_u64(1_001_000)).is_err());
    }
}
