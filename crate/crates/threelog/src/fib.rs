use crate::maurice::{maurice_check, MauriceVerdict, ZeroLemmaReading};
use crate::recipe::{param_recipe, ThreeLogParams};
use crate::{int, upper, ThreeLogError};
use bounds::{Approx, Real};
use serde::Serialize;

/// `log omega` with `omega = (1 + sqrt 5)/2`.
pub fn ln_omega() -> Approx {
    let s5 = Approx::int(5).sqrt().expect("positive");
    (&(&Approx::int(1) + &s5) / &Approx::int(2)).ln().expect("positive")
}

/// `h(omega) = (log omega)/2`.
pub fn h_omega() -> Approx {
    &ln_omega() / &Approx::int(2)
}

/// `h(sqrt 5) = (log 5)/2`.
pub fn h_sqrt5() -> Approx {
    &Approx::int(5).ln().expect("positive") / &Approx::int(2)
}

/// Setting for `F_n = y^p` with `n = k p + r`.
#[derive(Clone, Debug)]
pub struct FibSetup {
    /// Lower bound for `log y`.
    pub log_y: Approx,
}

impl Default for FibSetup {
    fn default() -> Self {
        FibSetup { log_y: Approx::lit("1e20") }
    }
}

/// `a1 = (rho+3) log sqrt5`, `a2 = (rho+2p) log omega + 4 log y`,
/// `a3 = (rho+1) log omega`, valid for every exponent up to `p`.
pub fn fib_a(rho: &Approx, p: u64, log_y: &Approx) -> [Approx; 3] {
    let lw = ln_omega();
    let l5 = h_sqrt5();
    let a1 = &(rho + &Approx::int(3)) * &l5;
    let a2 = &(&(rho + &int(2 * p as u128)) * &lw) + &(&Approx::int(4) * log_y);
    let a3 = &(rho + &Approx::int(1)) * &lw;
    [a1, a2, a3]
}

/// Recipe parameters for exponents up to `p`, with `D = 2`, `b1 <= p - 1`,
/// `b2 = p`, `b3 = 1`.
pub fn fib_params(l: u64, m: &Approx, rho: &Approx, p: u64, setup: &FibSetup) -> Result<ThreeLogParams, ThreeLogError> {
    if p < 3 {
        return Err(ThreeLogError::Domain(format!("p = {p} too small")));
    }
    param_recipe(l, m, rho, fib_a(rho, p, &setup.log_y), 2, [(p - 1) as u128, p as u128, 1])
}

/// `(KL log rho + log(KL) + 1) / (2 log y)`: the exponent bound obtained when
/// `log|Lambda| > -KL log rho - log(KL)` meets `log|Lambda| < -2p log y + 1`.
pub fn main_case_bound(params: &ThreeLogParams, setup: &FibSetup) -> Result<Approx, ThreeLogError> {
    let kl = &int(params.k) * &int(params.l);
    let num = &(&(&kl * &params.rho.ln()?) + &kl.ln()?) + &Approx::int(1);
    Ok(&num / &(&Approx::int(2) * &setup.log_y))
}

#[derive(Clone, Debug, Serialize)]
pub struct MainCase {
    pub params: ThreeLogParams,
    pub verdict: MauriceVerdict,
    pub main_bound: f64,
}

impl MainCase {
    pub fn run(
        l: u64,
        m: &Approx,
        rho: &Approx,
        p: u64,
        setup: &FibSetup,
        reading: ZeroLemmaReading,
    ) -> Result<Self, ThreeLogError> {
        let params = fib_params(l, m, rho, p, setup)?;
        let verdict = maurice_check(&params, reading)?;
        let main_bound = upper(&main_case_bound(&params, setup)?).to_f64();
        Ok(MainCase { params, verdict, main_bound })
    }

    pub fn s_max(&self) -> u128 {
        self.params.s1.max(self.params.s2)
    }
}

pub(crate) fn approx_f64(x: f64) -> Approx {
    Approx::exact(Real::from_f64(x))
}
