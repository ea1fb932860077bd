//! Reals with a running absolute error bound.

use crate::real::{precision, Real};
use crate::BoundsError;
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Required ratio between a decision margin and the accumulated error.
pub const SAFETY_FACTOR: u64 = 10;

#[derive(Clone, Debug)]
pub struct Approx {
    pub v: Real,
    pub err: Real,
}

/// One unit in the last place of `x` at the working precision, doubled.
fn ulp(x: &Real) -> Real {
    match x.exponent() {
        None => Real::from_u64(0),
        Some(e) => Real::pow2(e - precision() as i64 + 2),
    }
}

impl Approx {
    pub fn exact(v: Real) -> Self {
        Approx { v, err: Real::from_u64(0) }
    }

    /// A value produced by one rounded operation.
    pub fn rounded(v: Real) -> Self {
        let err = ulp(&v);
        Approx { v, err }
    }

    pub fn int(n: i64) -> Self {
        Self::exact(Real::from_i64(n))
    }

    /// A decimal literal, rounded once.
    pub fn lit(s: &str) -> Self {
        Self::rounded(Real::parse(s))
    }

    pub fn pi() -> Self {
        Self::rounded(Real::pi())
    }

    pub fn is_certainly_positive(&self) -> bool {
        self.v > self.err
    }

    pub fn ln(&self) -> Result<Approx, BoundsError> {
        if !self.is_certainly_positive() {
            return Err(BoundsError::Precision(format!("ln of value not certainly positive: {}", self.v.to_sci(6))));
        }
        let v = self.v.ln();
        let prop = &self.err / &(&self.v - &self.err);
        let err = prop + ulp(&v) + ulp(&v);
        Ok(Approx { v, err })
    }

    pub fn exp(&self) -> Approx {
        let v = self.v.exp();
        // e^err - 1 <= err * e^err
        let grow = &self.err * &self.err.exp();
        let err = &v * &grow + ulp(&v) + ulp(&v);
        Approx { v, err }
    }

    pub fn sqrt(&self) -> Result<Approx, BoundsError> {
        if !self.is_certainly_positive() {
            return Err(BoundsError::Precision("sqrt of value not certainly positive".into()));
        }
        let v = self.v.sqrt();
        let lo = (&self.v - &self.err).sqrt();
        let err = &self.err / &(Real::from_u64(2) * lo) + ulp(&v);
        Ok(Approx { v, err })
    }

    /// `self^e` for a positive base.
    pub fn powf(&self, e: &Approx) -> Result<Approx, BoundsError> {
        Ok((&self.ln()? * e).exp())
    }

    pub fn powi(&self, n: u32) -> Approx {
        let mut r = Approx::int(1);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    pub fn abs(&self) -> Approx {
        Approx { v: self.v.abs(), err: self.err.clone() }
    }

    /// Ordering that is certain, with the margin at least `SAFETY_FACTOR` times the error.
    pub fn compare(&self, other: &Approx) -> Result<Ordering, BoundsError> {
        let d = &self.v - &other.v;
        let err = &self.err + &other.err + ulp(&d);
        let need = &err * &Real::from_u64(SAFETY_FACTOR);
        if d.abs() > need {
            Ok(if d.is_positive() { Ordering::Greater } else { Ordering::Less })
        } else {
            Err(BoundsError::Precision(format!(
                "difference {} within {}x of error {}",
                d.to_sci(4),
                SAFETY_FACTOR,
                err.to_sci(4)
            )))
        }
    }

    pub fn certainly_gt(&self, other: &Approx) -> Result<bool, BoundsError> {
        Ok(self.compare(other)? == Ordering::Greater)
    }

    pub fn max(self, other: Approx) -> Approx {
        if self.v >= other.v {
            Approx { v: self.v, err: self.err.max(other.err) }
        } else {
            Approx { v: other.v, err: self.err.max(other.err) }
        }
    }

    pub fn min(self, other: Approx) -> Approx {
        if self.v <= other.v {
            Approx { v: self.v, err: self.err.max(other.err) }
        } else {
            Approx { v: other.v, err: self.err.max(other.err) }
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }
}

impl Add<&Approx> for &Approx {
    type Output = Approx;
    fn add(self, rhs: &Approx) -> Approx {
        let v = &self.v + &rhs.v;
        let err = &self.err + &rhs.err + ulp(&v);
        Approx { v, err }
    }
}

impl Sub<&Approx> for &Approx {
    type Output = Approx;
    fn sub(self, rhs: &Approx) -> Approx {
        let v = &self.v - &rhs.v;
        let err = &self.err + &rhs.err + ulp(&v);
        Approx { v, err }
    }
}

impl Mul<&Approx> for &Approx {
    type Output = Approx;
    fn mul(self, rhs: &Approx) -> Approx {
        let v = &self.v * &rhs.v;
        let err = &self.v.abs() * &rhs.err + &rhs.v.abs() * &self.err + &self.err * &rhs.err + ulp(&v);
        Approx { v, err }
    }
}

impl Div<&Approx> for &Approx {
    type Output = Approx;
    fn div(self, rhs: &Approx) -> Approx {
        let den = &rhs.v.abs() - &rhs.err;
        assert!(den.is_positive(), "division by a value not certainly nonzero");
        let v = &self.v / &rhs.v;
        let err = (&self.err + &(&v.abs() * &rhs.err)) / den + ulp(&v);
        Approx { v, err }
    }
}

impl Neg for &Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx { v: -&self.v, err: self.err.clone() }
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Approx> for Approx {
            type Output = Approx;
            fn $m(self, rhs: Approx) -> Approx {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Approx> for Approx {
            type Output = Approx;
            fn $m(self, rhs: &Approx) -> Approx {
                (&self).$m(rhs)
            }
        }
        impl $tr<Approx> for &Approx {
            type Output = Approx;
            fn $m(self, rhs: Approx) -> Approx {
                self.$m(&rhs)
            }
        }
    };
}

owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);
owned!(Div, div);

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        -&self
    }
}
