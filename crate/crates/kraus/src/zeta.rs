use arith::modular::{mul_mod, sub_mod};
use arith::{inv_mod, is_prime, pow_mod, primitive_root, QrTable};
use seqcore::SeqKind;
use serde::{Deserialize, Serialize};

use crate::KrausError;

/// The set `A(p, k)`: nontrivial `2p`-th powers `zeta` in `F_l` for which
/// the Frey parameter `delta` with `delta^2 = 5 zeta - 4` (Fibonacci) or
/// `delta^2 = (zeta + 4) / 5` (Lucas) exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSet {
    pub kind: SeqKind,
    pub p: u64,
    pub k: u64,
    pub l: u64,
    pub zetas: Vec<u64>,
}

/// Validates condition (a): `l = 2kp + 1` is prime and `l = +-1 (mod 5)`.
pub fn modulus_for(p: u64, k: u64) -> Result<u64, KrausError> {
    if p < 7 || !is_prime(p) {
        return Err(KrausError::Domain(format!("p = {p} must be a prime >= 7")));
    }
    if k == 0 {
        return Err(KrausError::Domain("k must be positive".into()));
    }
    let l = 2 * k * p + 1;
    if !is_prime(l) {
        return Err(KrausError::Domain(format!("l = 2kp + 1 = {l} is not prime")));
    }
    if !matches!(l % 5, 1 | 4) {
        return Err(KrausError::Domain(format!("l = {l} is not +-1 mod 5")));
    }
    Ok(l)
}

/// The value whose square root is `delta`.
pub(crate) fn delta_square(kind: SeqKind, zeta: u64, l: u64) -> u64 {
    match kind {
        SeqKind::Fibonacci => sub_mod(mul_mod(5, zeta, l), 4, l),
        SeqKind::Lucas => mul_mod((zeta + 4) % l, inv_mod(5, l).expect("l != 5"), l),
    }
}

pub fn zeta_set(kind: SeqKind, p: u64, k: u64) -> Result<ZetaSet, KrausError> {
    let l = modulus_for(p, k)?;
    let qr = QrTable::new(l);
    let h = pow_mod(primitive_root(l), 2 * p, l);
    let mut zetas = Vec::new();
    let mut z = h;
    for _ in 1..k {
        if qr.chi(delta_square(kind, z, l)) >= 0 {
            zetas.push(z);
        }
        z = mul_mod(z, h, l);
    }
    zetas.sort_unstable();
    Ok(ZetaSet { kind, p, k, l, zetas })
}
