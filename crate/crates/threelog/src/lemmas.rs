use crate::{int, ThreeLogError};
use bounds::{Approx, Real};
use num_rational::Ratio;

/// Lower bound for `Theta(K0, I)`, the least total norm `k + m` of `I`
/// distinct points `(k, m)` with `m <= K0`. Exact as a rational.
pub fn theta_lower(k0: u64, i: u64) -> Result<Ratio<i128>, ThreeLogError> {
    if k0 < 3 {
        return Err(ThreeLogError::Domain(format!("K0 = {k0} must be at least 3")));
    }
    if 2 * i < k0 * (k0 + 1) {
        return Err(ThreeLogError::Domain(format!("I = {i} is below K0(K0+1)/2")));
    }
    let (k, i) = (k0 as i128, i as i128);
    let num = 12 * i * i + 12 * i * (k - 1) * (k + 1) - k * (k + 2) * (k + 1) * (k + 1);
    Ok(Ratio::new(num, 24 * (k + 1)))
}

/// `Theta(K0, I)` computed by filling the diagonals `k + m = n` in order.
pub fn theta_greedy(k0: u64, i: u64) -> u64 {
    let mut left = i;
    let mut total = 0;
    let mut n = 0;
    while left > 0 {
        let take = (n.min(k0) + 1).min(left);
        total += n * take;
        left -= take;
        n += 1;
    }
    total
}

/// `2 log K - 3 + 2 log(2 pi K / e^1.5)/(K-1) - (2 + 6/pi^2 + log K)/(3K(K-1))`,
/// a lower bound for `(4/(K(K-1))) log prod_{k<K} k!`.
pub fn factorial_bound(k: u128) -> Result<Approx, ThreeLogError> {
    if k < 2 {
        return Err(ThreeLogError::Domain(format!("K = {k} must be at least 2")));
    }
    let kk = int(k);
    let km1 = int(k - 1);
    let lk = kk.ln()?;
    let pi = Approx::pi();
    let e15 = Approx::exact(Real::ratio(3, 2)).exp();
    let mut s = &(&Approx::int(2) * &lk) - &Approx::int(3);
    let inner = (&(&Approx::int(2) * &pi) * &kk / &e15).ln()?;
    s = &s + &(&(&Approx::int(2) * &inner) / &km1);
    let tail = &(&Approx::int(2) + &(&Approx::int(6) / &(&pi * &pi))) + &lk;
    s = &s - &(&tail / &(&(&Approx::int(3) * &kk) * &km1));
    Ok(s)
}

/// `G_R = (N L R / 2)(1/4 - N/(12 R S T))` with `N = K^2 L`.
pub fn g_r(k: u64, l: u64, r: u64, s: u64, t: u64) -> Ratio<i128> {
    let (k, l, r, s, t) = (k as i128, l as i128, r as i128, s as i128, t as i128);
    let n = k * k * l;
    let rst = r * s * t;
    Ratio::new(n * l * r * (3 * rst - n), 24 * rst)
}
