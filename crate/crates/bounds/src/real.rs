//! Thin wrapper over `astro_float::BigFloat` with a per-thread precision.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigUint;
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const DEFAULT_PRECISION: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

struct Ctx {
    prec: usize,
    cc: Consts,
}

thread_local! {
    static CTX: RefCell<Ctx> = RefCell::new(Ctx {
        prec: DEFAULT_PRECISION,
        cc: Consts::new().expect("astro-float constant cache"),
    });
}

/// Current working precision in bits.
pub fn precision() -> usize {
    CTX.with(|c| c.borrow().prec)
}

/// Runs `f` with the working precision set to `bits`, restoring it afterwards.
pub fn with_precision<R>(bits: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            CTX.with(|c| c.borrow_mut().prec = self.0);
        }
    }
    let old = CTX.with(|c| std::mem::replace(&mut c.borrow_mut().prec, bits));
    let _guard = Restore(old);
    f()
}

fn with_cc<R>(f: impl FnOnce(usize, &mut Consts) -> R) -> R {
    CTX.with(|c| {
        let mut c = c.borrow_mut();
        let p = c.prec;
        f(p, &mut c.cc)
    })
}

#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_u64(v: u64) -> Self {
        Real(BigFloat::from_u64(v, precision().max(64)))
    }

    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, precision().max(64)))
    }

    /// Exact for every finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, precision().max(64)))
    }

    /// Parses a decimal literal such as `"3.9"` or `"1e20"`, rounded to working precision.
    pub fn parse(s: &str) -> Self {
        let x = with_cc(|p, cc| BigFloat::parse(s, Radix::Dec, p, RM, cc));
        assert!(!x.is_nan(), "not a decimal literal: {s}");
        Real(x)
    }

    pub fn from_biguint(v: &BigUint) -> Self {
        Self::parse(&v.to_str_radix(10))
    }

    /// Exactly `2^e`.
    pub fn pow2(e: i64) -> Self {
        let mut x = BigFloat::from_u64(1, precision().max(64));
        x.set_exponent((e + 1) as astro_float::Exponent);
        Real(x)
    }

    pub fn ratio(a: i64, b: i64) -> Self {
        Self::from_i64(a) / Self::from_i64(b)
    }

    pub fn pi() -> Self {
        Real(with_cc(|p, cc| cc.pi(p, RM)))
    }

    pub fn e() -> Self {
        Real(with_cc(|p, cc| cc.e(p, RM)))
    }

    pub fn ln(&self) -> Self {
        assert!(self.is_positive(), "ln of non-positive value {self}");
        Real(with_cc(|p, cc| self.0.ln(p, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        Real(with_cc(|p, cc| self.0.exp(p, RM, cc)))
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(precision(), RM))
    }

    pub fn powf(&self, e: &Real) -> Self {
        Real(with_cc(|p, cc| self.0.pow(e.inner(), p, RM, cc)))
    }

    pub fn powi(&self, n: usize) -> Self {
        Real(self.0.powi(n, precision(), RM))
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn floor(&self) -> Self {
        Real(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Real(self.0.ceil())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive() && !self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Binary exponent `e` with `2^(e-1) <= |x| < 2^e`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        self.0.exponent().map(|e| e as i64)
    }

    /// Floor of a non-negative value as an exact integer.
    pub fn floor_biguint(&self) -> BigUint {
        assert!(!self.is_negative(), "floor_biguint of negative value");
        let f = self.0.floor();
        if f.is_zero() {
            return BigUint::default();
        }
        let (words, bits, sign, e, _) = f.as_raw_parts().expect("finite value");
        debug_assert_eq!(sign, Sign::Pos);
        let m = BigUint::from_slice(&words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<u32>>());
        let shift = e as i64 - bits as i64;
        if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        }
    }

    pub fn to_f64(&self) -> f64 {
        let s = with_cc(|_, cc| self.0.format(Radix::Dec, RM, cc)).expect("formattable");
        s.parse().unwrap_or(f64::NAN)
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    /// Scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let neg = self.is_negative();
        let a = self.abs();
        let ten = Real::from_u64(10);
        let mut e10 = (a.ln() / ten.ln()).floor().to_f64() as i64;
        let mut m = &a / &ten.powi_signed(e10);
        if m >= ten {
            m = &m / &ten;
            e10 += 1;
        } else if m < Real::from_u64(1) {
            m = &m * &ten;
            e10 -= 1;
        }
        let scaled = (&m * &ten.powi(digits - 1) + Real::ratio(1, 2)).floor_biguint().to_string();
        let (scaled, e10) = if scaled.len() > digits { (scaled[..digits].to_string(), e10 + 1) } else { (scaled, e10) };
        let sign = if neg { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{scaled}e{e10}")
        } else {
            format!("{sign}{}.{}e{e10}", &scaled[..1], &scaled[1..])
        }
    }

    fn powi_signed(&self, n: i64) -> Real {
        if n >= 0 {
            self.powi(n as usize)
        } else {
            Real::from_u64(1) / self.powi((-n) as usize)
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(self.0.$op(&rhs.0, precision(), RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.clone().neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_roundtrip() {
        let v = BigUint::parse_bytes(b"100704598854427777024179418273944411482999002799", 10).unwrap();
        assert_eq!(Real::from_biguint(&v).floor_biguint(), v);
        assert_eq!(Real::parse("12345.99").floor_biguint(), BigUint::from(12345u32));
        assert_eq!(Real::parse("0.5").floor_biguint(), BigUint::default());
    }

    #[test]
    fn precision_scope() {
        assert_eq!(precision(), DEFAULT_PRECISION);
        with_precision(1024, || assert_eq!(precision(), 1024));
        assert_eq!(precision(), DEFAULT_PRECISION);
    }

    #[test]
    fn elementary() {
        let two = Real::from_u64(2);
        assert!((two.sqrt() * two.sqrt() - &two).abs() < Real::parse("1e-70"));
        assert!((two.ln().exp() - &two).abs() < Real::parse("1e-70"));
        assert_eq!(Real::parse("2.5").to_f64(), 2.5);
        assert_eq!(Real::parse("26390000000000000000000000000000000000000000000").to_sci(4), "2.639e46");
        assert_eq!(Real::parse("0.000123456").to_sci(3), "1.23e-4");
    }
}
