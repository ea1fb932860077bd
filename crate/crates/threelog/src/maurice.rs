use crate::lemmas::factorial_bound;
use crate::recipe::ThreeLogParams;
use crate::{int, ThreeLogError};
use bounds::{Approx, Real};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Which printed form of the zero-lemma conditions (iii) and (iv) to require.
///
/// `Theorem`: (iii) on `R1, S1, T1` and (iv) with the factor 4.
/// `Proposition`: (iii) on `R2, S2, T2` and (iv) without the factor 4.
/// `Conjunction`: both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroLemmaReading {
    Theorem,
    #[default]
    Proposition,
    Conjunction,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Bounds on the coefficients in the degenerate case (C3), rounded up, and
/// the value of `b2` below which (C1) or (C2) may hold.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DegenerateWindows {
    #[serde(with = "crate::dec::wide")]
    pub r_prime: u128,
    #[serde(with = "crate::dec::wide")]
    pub s_prime: u128,
    #[serde(with = "crate::dec::wide")]
    pub t_prime: u128,
    /// Window for `t''`.
    #[serde(with = "crate::dec::wide")]
    pub t_second: u128,
    #[serde(with = "crate::dec::wide")]
    pub c12_below: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct MauriceVerdict {
    pub reading: ZeroLemmaReading,
    pub structural: Vec<String>,
    pub conditions: Vec<Condition>,
    /// `(lhs - rhs)/K` for condition (o).
    pub slack_per_k: f64,
    /// `log Lambda' > -KL log rho`, present when every condition holds.
    pub lambda_prime_log_bound: Option<f64>,
    pub degenerate_cases: DegenerateWindows,
    pub assumptions: Vec<String>,
    pub success: bool,
}

impl MauriceVerdict {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

fn big(x: u128) -> BigUint {
    BigUint::from(x)
}

fn ge(name: &str, lhs: BigUint, rhs: BigUint) -> Condition {
    Condition { name: name.into(), holds: lhs >= rhs, detail: format!("{lhs} >= {rhs}") }
}

/// `ceil(min(cap, sqrt(num/den)))`.
fn window(cap: u128, num: &BigUint, den: &BigUint) -> u128 {
    let q = Real::from_biguint(num) / Real::from_biguint(den);
    let root = q.sqrt();
    let c = Real::from_biguint(&big(cap));
    let w = root.min(c).ceil();
    u128::try_from(w.floor_biguint()).unwrap_or(u128::MAX)
}

pub(crate) fn windows(p: &ThreeLogParams) -> DegenerateWindows {
    let (r1, s1, t1) = (big(p.r1 + 1), big(p.s1 + 1), big(p.t1 + 1));
    DegenerateWindows {
        r_prime: window(p.r1 + 1, &(&r1 * &s1), &t1),
        s_prime: window(p.s1 + 1, &(&r1 * &s1), &t1),
        t_prime: window(p.t1 + 1, &(&s1 * &t1), &r1),
        t_second: window(p.t1 + 1, &(&r1 * &t1), &s1),
        c12_below: p.s1.max(p.s2),
    }
}

/// Upper bound for `log b`, using `factorial_bound` for the factorial product.
pub(crate) fn log_b(p: &ThreeLogParams) -> Result<Approx, ThreeLogError> {
    let two = Approx::int(2);
    let eta = &(&(int(p.r - 1) * int(p.b2)) + &(int(p.s - 1) * int(p.b1))) / &two;
    let zeta = &(&(int(p.t - 1) * int(p.b2)) + &(int(p.s - 1) * int(p.b3))) / &two;
    Ok(&(&eta.ln()? + &zeta.ln()?) - &factorial_bound(p.k)?)
}

/// Both sides of condition (o).
pub(crate) fn condition_o(p: &ThreeLogParams) -> Result<(Approx, Approx), ThreeLogError> {
    let (k, l) = (int(p.k), int(p.l));
    let lrho = p.rho.ln()?;
    let mut lhs = &(&k * &l) / &Approx::int(2);
    lhs = &lhs + &(&l / &Approx::int(4));
    lhs = &lhs - &Approx::int(1);
    lhs = &lhs - &(&(&Approx::int(2) * &k) / &(&Approx::int(3) * &l));
    lhs = &lhs * &lrho;

    let n = Approx::exact(Real::from_biguint(&p.n()));
    let rst = Approx::exact(Real::from_biguint(&(big(p.r) * big(p.s) * big(p.t))));
    let g = &Approx::exact(Real::ratio(1, 4)) - &(&n / &(&Approx::int(12) * &rst));
    let d = Approx::int(p.d as i64);
    let mut rhs = &(&d + &Approx::int(1)) * &n.ln()?;
    let lin = &(&(&p.a1 * &int(p.r)) + &(&p.a2 * &int(p.s))) + &(&p.a3 * &int(p.t));
    rhs = &rhs + &(&(&g * &l) * &lin);
    rhs = &rhs + &(&(&d * &int(p.k - 1)) * &log_b(p)?);
    let e_half = (&Approx::exact(Real::e()) / &Approx::int(2)).ln()?;
    rhs = &rhs - &(&Approx::int(2) * &e_half);
    Ok((lhs, rhs))
}

/// Evaluates the zero-lemma conditions (o) and (i)-(iv) for `params`.
///
/// On success `Lambda' > rho^(-KL)` unless one of the degenerate cases
/// (C1), (C2), (C3) holds; the windows for those are always reported.
pub fn maurice_check(params: &ThreeLogParams, reading: ZeroLemmaReading) -> Result<MauriceVerdict, ThreeLogError> {
    let p = params;
    let structural = p.structural_violations();
    let windows = windows(p);
    let assumptions = vec![
        "alpha_1, alpha_2, alpha_3 multiplicatively independent".to_string(),
        "a_i >= rho|log alpha_i| - log|alpha_i| + 2D h(alpha_i)".to_string(),
    ];
    if structural.iter().any(|s| s.ends_with("> 0") || s == "rho > 1" || s == "D >= 1" || s == "b_i >= 1")
        || p.k < 2
        || p.l == 0
        || p.r < 2
        || p.s == 0
        || p.t < 2
    {
        return Ok(MauriceVerdict {
            reading,
            structural,
            conditions: Vec::new(),
            slack_per_k: f64::NAN,
            lambda_prime_log_bound: None,
            degenerate_cases: windows,
            assumptions,
            success: false,
        });
    }

    let (lhs, rhs) = condition_o(p)?;
    let o_holds = lhs.compare(&rhs)? != Ordering::Less;
    let slack = (&(&lhs - &rhs) / &int(p.k)).to_f64();
    let mut conditions = vec![Condition {
        name: "o".into(),
        holds: o_holds,
        detail: format!("{} >= {}", lhs.v.to_sci(12), rhs.v.to_sci(12)),
    }];

    let (r1, s1, t1) = (big(p.r1 + 1), big(p.s1 + 1), big(p.t1 + 1));
    let (r2, s2, t2) = (big(p.r2 + 1), big(p.s2 + 1), big(p.t2 + 1));
    let four = BigUint::from(4u32);
    conditions.push(ge("i", &four * &r1 * &s1, t1.clone()));
    conditions.push(ge("ii", &four * &r1 * &t1, s1.clone()));
    let km1 = big(p.k - 1);
    let iii_rhs = BigUint::from(12u32) * &km1 * &km1 * big(p.l - 1);
    let span = big(2 * p.k + p.l - 2);
    let iv_rhs = BigUint::from(8u32) * &span * &span;
    let prod1 = &r1 * &s1 * &t1;
    let iii_thm = ge("iii", prod1.clone(), iii_rhs.clone());
    let iii_prop = ge("iii", &r2 * &s2 * &t2, iii_rhs);
    let iv_thm = ge("iv", &four * &prod1, iv_rhs.clone());
    let iv_prop = ge("iv", prod1, iv_rhs);
    let both = |a: Condition, b: Condition| Condition {
        name: a.name.clone(),
        holds: a.holds && b.holds,
        detail: format!("theorem: {} ({}); proposition: {} ({})", a.detail, a.holds, b.detail, b.holds),
    };
    match reading {
        ZeroLemmaReading::Theorem => conditions.extend([iii_thm, iv_thm]),
        ZeroLemmaReading::Proposition => conditions.extend([iii_prop, iv_prop]),
        ZeroLemmaReading::Conjunction => conditions.extend([both(iii_thm, iii_prop), both(iv_thm, iv_prop)]),
    }

    let success = structural.is_empty() && conditions.iter().all(|c| c.holds);
    let lambda_prime_log_bound = if success { Some(-(&(&int(p.k) * &int(p.l)) * &p.rho.ln()?).to_f64()) } else { None };
    Ok(MauriceVerdict {
        reading,
        structural,
        conditions,
        slack_per_k: slack,
        lambda_prime_log_bound,
        degenerate_cases: windows,
        assumptions,
        success,
    })
}
