use crate::dec;
use crate::{floor_u128, ThreeLogError};
use bounds::{Approx, Real};
use serde::{Deserialize, Serialize};

/// Integer and real parameters of the interpolation determinant, together
/// with the linear form data `D`, `a_i`, `b_i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThreeLogParams {
    #[serde(with = "dec::wide")]
    pub k: u128,
    #[serde(with = "dec::wide")]
    pub l: u128,
    #[serde(with = "dec::wide")]
    pub r: u128,
    #[serde(with = "dec::wide")]
    pub r1: u128,
    #[serde(with = "dec::wide")]
    pub r2: u128,
    #[serde(with = "dec::wide")]
    pub s: u128,
    #[serde(with = "dec::wide")]
    pub s1: u128,
    #[serde(with = "dec::wide")]
    pub s2: u128,
    #[serde(with = "dec::wide")]
    pub t: u128,
    #[serde(with = "dec::wide")]
    pub t1: u128,
    #[serde(with = "dec::wide")]
    pub t2: u128,
    #[serde(with = "dec::approx")]
    pub rho: Approx,
    pub d: u64,
    #[serde(with = "dec::approx")]
    pub a1: Approx,
    #[serde(with = "dec::approx")]
    pub a2: Approx,
    #[serde(with = "dec::approx")]
    pub a3: Approx,
    #[serde(with = "dec::wide")]
    pub b1: u128,
    #[serde(with = "dec::wide")]
    pub b2: u128,
    #[serde(with = "dec::wide")]
    pub b3: u128,
}

impl ThreeLogParams {
    /// Violated structural requirements, by name.
    pub fn structural_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let named = [
            ("K", self.k),
            ("L", self.l),
            ("R", self.r),
            ("R1", self.r1),
            ("R2", self.r2),
            ("S", self.s),
            ("S1", self.s1),
            ("S2", self.s2),
            ("T", self.t),
            ("T1", self.t1),
            ("T2", self.t2),
        ];
        for (name, v) in named {
            if v < 3 {
                out.push(format!("{name} >= 3"));
            }
        }
        let mut need = |ok: bool, what: &str| {
            if !ok {
                out.push(what.to_string());
            }
        };
        need(self.k >= 2 * self.l, "K >= 2L");
        need(self.l >= 5, "L >= 5");
        need(self.r > self.r1.saturating_add(self.r2), "R > R1 + R2");
        need(self.s > self.s1.saturating_add(self.s2), "S > S1 + S2");
        need(self.t > self.t1.saturating_add(self.t2), "T > T1 + T2");
        need(self.t1 >= self.r1, "T1 >= R1");
        need(self.rho.v > Real::from_u64(1), "rho > 1");
        need(self.d >= 1, "D >= 1");
        need(self.b1 >= 1 && self.b2 >= 1 && self.b3 >= 1, "b_i >= 1");
        for (name, a) in [("a1", &self.a1), ("a2", &self.a2), ("a3", &self.a3)] {
            if !a.is_certainly_positive() {
                out.push(format!("{name} > 0"));
            }
        }
        out
    }

    /// `N = K^2 L`.
    pub fn n(&self) -> num_bigint::BigUint {
        let k = num_bigint::BigUint::from(self.k);
        &k * &k * self.l
    }
}

/// Builds the parameters from `L`, `m` and `rho`:
/// `K = floor(m L a1 a2 a3)`, `R1 = floor(c1 L^(2/3) a2 a3)` and so on with
/// `c1 = (32.001 m^2)^(1/3)`, `R2 = floor(c2 L a2 a3)` and so on with
/// `c2 = (12 m^2)^(1/3)`, and `R = R1 + R2 + 1` and so on.
pub fn param_recipe(
    l: u64,
    m: &Approx,
    rho: &Approx,
    a: [Approx; 3],
    d: u64,
    b: [u128; 3],
) -> Result<ThreeLogParams, ThreeLogError> {
    if l < 100 {
        return Err(ThreeLogError::Domain(format!("L = {l} must be at least 100")));
    }
    if m.v <= Real::from_u64(10) || m.v >= Real::from_u64(50) {
        return Err(ThreeLogError::Domain(format!("m = {} outside (10, 50)", m.v.to_sci(8))));
    }
    if rho.v <= Real::e() {
        return Err(ThreeLogError::Domain("rho must exceed e".into()));
    }
    let [a1, a2, a3] = a;
    if a3.v > a1.v {
        return Err(ThreeLogError::Domain("recipe needs a3 <= a1".into()));
    }
    let third = Approx::exact(Real::ratio(1, 3));
    let m2 = m * m;
    let c1 = (&Approx::lit("32.001") * &m2).powf(&third)?;
    let c2 = (&Approx::int(12) * &m2).powf(&third)?;
    let lr = Approx::int(l as i64);
    let l23 = lr.powf(&Approx::exact(Real::ratio(2, 3)))?;
    let (p23, p13, p12) = (&a2 * &a3, &a1 * &a3, &a1 * &a2);
    let f1 = &c1 * &l23;
    let f2 = &c2 * &lr;
    let k = floor_u128(&(&(&(m * &lr) * &a1) * &p23.clone()))?;
    let r1 = floor_u128(&(&f1 * &p23))?;
    let s1 = floor_u128(&(&f1 * &p13))?;
    let t1 = floor_u128(&(&f1 * &p12))?;
    let r2 = floor_u128(&(&f2 * &p23))?;
    let s2 = floor_u128(&(&f2 * &p13))?;
    let t2 = floor_u128(&(&f2 * &p12))?;
    Ok(ThreeLogParams {
        k,
        l: l as u128,
        r: r1 + r2 + 1,
        r1,
        r2,
        s: s1 + s2 + 1,
        s1,
        s2,
        t: t1 + t2 + 1,
        t1,
        t2,
        rho: rho.clone(),
        d,
        a1,
        a2,
        a3,
        b1: b[0],
        b2: b[1],
        b3: b[2],
    })
}
