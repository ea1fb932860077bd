use crate::CurveError;
use arith::modular::{add_mod, mul_mod, neg_mod, reduce_i64, sub_mod};

fn check_modulus(l: u64) -> Result<(), CurveError> {
    if l < 3 || !arith::is_prime(l) {
        return Err(CurveError::BadModulus(l));
    }
    Ok(())
}

/// Weierstrass curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveModL {
    l: u64,
    a: [u64; 5],
}

impl CurveModL {
    /// Builds a nonsingular curve from residues `[a1, a2, a3, a4, a6]`.
    pub fn new(l: u64, a: [u64; 5]) -> Result<Self, CurveError> {
        check_modulus(l)?;
        let c = CurveModL { l, a: a.map(|x| x % l) };
        if c.discriminant() == 0 {
            return Err(CurveError::Singular(l));
        }
        Ok(c)
    }

    pub fn from_integers(l: u64, a: [i64; 5]) -> Result<Self, CurveError> {
        if l < 3 {
            return Err(CurveError::BadModulus(l));
        }
        Self::new(l, a.map(|x| reduce_i64(x, l)))
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    pub fn coefficients(&self) -> [u64; 5] {
        self.a
    }

    /// `(b2, b4, b6)` modulo `l`.
    pub fn b_invariants(&self) -> (u64, u64, u64) {
        let l = self.l;
        let [a1, a2, a3, a4, a6] = self.a;
        let b2 = add_mod(mul_mod(a1, a1, l), mul_mod(4, a2, l), l);
        let b4 = add_mod(mul_mod(2, a4, l), mul_mod(a1, a3, l), l);
        let b6 = add_mod(mul_mod(a3, a3, l), mul_mod(4, a6, l), l);
        (b2, b4, b6)
    }

    pub fn discriminant(&self) -> u64 {
        let l = self.l;
        let [a1, a2, a3, a4, a6] = self.a;
        let (b2, b4, b6) = self.b_invariants();
        let m = |x, y| mul_mod(x, y, l);
        let b8 = sub_mod(
            add_mod(add_mod(m(m(a1, a1), a6), m(4, m(a2, a6)), l), m(a2, m(a3, a3)), l),
            add_mod(m(a1, m(a3, a4)), m(a4, a4), l),
            l,
        );
        let t1 = m(m(b2, b2), b8);
        let t2 = m(8, m(b4, m(b4, b4)));
        let t3 = m(27, m(b6, b6));
        let t4 = m(9, m(b2, m(b4, b6)));
        sub_mod(t4, add_mod(add_mod(t1, t2, l), t3, l), l)
    }

    /// The quadratic twist by `d`, for a curve with `a1 = a3 = 0`.
    pub fn twist(&self, d: u64) -> Result<Self, CurveError> {
        let l = self.l;
        let [a1, a2, a3, a4, a6] = self.a;
        assert!(a1 == 0 && a3 == 0, "twist needs a short model");
        let d = d % l;
        Self::new(
            l,
            [
                0,
                mul_mod(d, a2, l),
                0,
                mul_mod(mul_mod(d, d, l), a4, l),
                mul_mod(mul_mod(d, d, l), mul_mod(d, a6, l), l),
            ],
        )
    }
}

/// Reduction type of a Frey curve at `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    Good(CurveModL),
    /// The model is singular mod `l`, which happens exactly when `l` divides `y`.
    Multiplicative,
}

impl Reduction {
    pub fn curve(&self) -> Option<&CurveModL> {
        match self {
            Reduction::Good(c) => Some(c),
            Reduction::Multiplicative => None,
        }
    }
}

fn tagged(r: Result<CurveModL, CurveError>) -> Result<Reduction, CurveError> {
    match r {
        Ok(c) => Ok(Reduction::Good(c)),
        Err(CurveError::Singular(_)) => Ok(Reduction::Multiplicative),
        Err(e) => Err(e),
    }
}

/// `Y^2 = X^3 + H X^2 - X` over `F_l`, given `H = H_n mod l`.
pub fn frey_fib(h: u64, l: u64) -> Result<Reduction, CurveError> {
    check_modulus(l)?;
    tagged(CurveModL::new(l, [0, h % l, 0, neg_mod(1, l), 0]))
}

/// `Y^2 = X^3 - 5F X^2 + 5X` over `F_l`, given `F = F_n mod l`.
pub fn frey_lucas(f: u64, l: u64) -> Result<Reduction, CurveError> {
    check_modulus(l)?;
    tagged(CurveModL::new(l, [0, neg_mod(mul_mod(5, f % l, l), l), 0, 5 % l, 0]))
}
