use crate::{CurveError, CurveModL};
use arith::modular::{add_mod, mul_mod};
use arith::{legendre_euler, QrTable};

/// `a_l` together with `#E(F_l)`, point at infinity included.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceResult {
    pub a_l: i64,
    pub point_count: u64,
}

impl TraceResult {
    fn from_char_sum(l: u64, s: i64) -> Self {
        TraceResult { a_l: -s, point_count: (l as i64 + 1 + s) as u64 }
    }
}

/// Largest modulus for which a character table is built.
const TABLE_LIMIT: u64 = 1 << 32;

/// Trace computation for many curves over one field.
pub struct TraceEngine {
    l: u64,
    table: Option<QrTable>,
}

impl TraceEngine {
    pub fn new(l: u64) -> Result<Self, CurveError> {
        if l < 3 || !arith::is_prime(l) {
            return Err(CurveError::BadModulus(l));
        }
        let table = (l < TABLE_LIMIT).then(|| QrTable::new(l));
        Ok(TraceEngine { l, table })
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    pub fn trace(&self, curve: &CurveModL) -> TraceResult {
        assert_eq!(curve.modulus(), self.l, "curve and engine disagree on the field");
        let s = match &self.table {
            Some(t) => char_sum(curve, |v| t.chi(v)),
            None => {
                let l = self.l;
                char_sum(curve, |v| legendre_euler(v, l))
            }
        };
        TraceResult::from_char_sum(self.l, s)
    }
}

/// Sum of `chi(4x^3 + b2 x^2 + 2 b4 x + b6)` over `x` in `F_l`, stepping the
/// cubic by forward differences.
fn char_sum(curve: &CurveModL, chi: impl Fn(u64) -> i32) -> i64 {
    let l = curve.modulus();
    let (b2, b4, b6) = curve.b_invariants();
    let mut v = b6;
    let mut d1 = add_mod(add_mod(4 % l, b2, l), mul_mod(2, b4, l), l);
    let mut d2 = add_mod(24 % l, mul_mod(2, b2, l), l);
    let d3 = 24 % l;
    let mut s = 0i64;
    for _ in 0..l {
        s += chi(v) as i64;
        v = add_mod(v, d1, l);
        d1 = add_mod(d1, d2, l);
        d2 = add_mod(d2, d3, l);
    }
    s
}

pub fn trace_of_frobenius(curve: &CurveModL) -> TraceResult {
    TraceEngine::new(curve.modulus()).expect("curve modulus already validated").trace(curve)
}

/// Same character sum, evaluated pointwise with Euler's criterion.
pub fn trace_euler(curve: &CurveModL) -> TraceResult {
    let l = curve.modulus();
    let (b2, b4, b6) = curve.b_invariants();
    let mut s = 0i64;
    for x in 0..l {
        let x2 = mul_mod(x, x, l);
        let g = add_mod(
            add_mod(mul_mod(4, mul_mod(x2, x, l), l), mul_mod(b2, x2, l), l),
            add_mod(mul_mod(2, mul_mod(b4, x, l), l), b6, l),
            l,
        );
        s += legendre_euler(g, l) as i64;
    }
    TraceResult::from_char_sum(l, s)
}

/// Point count by checking every `(x, y)` against the full Weierstrass equation.
pub fn count_points_naive(curve: &CurveModL) -> u64 {
    let l = curve.modulus();
    let [a1, a2, a3, a4, a6] = curve.coefficients();
    let mut count = 1u64;
    for x in 0..l {
        let rhs = (mul_mod(mul_mod(x, x, l), x, l) + mul_mod(a2, mul_mod(x, x, l), l) + mul_mod(a4, x, l) + a6) % l;
        for y in 0..l {
            let lhs = (mul_mod(y, y, l) + mul_mod(mul_mod(a1, x, l), y, l) + mul_mod(a3, y, l)) % l;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}
