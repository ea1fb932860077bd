use crate::modular::{mul_mod, pow_mod};

/// Legendre symbol by Euler's criterion, returned as -1, 0 or 1.
pub fn legendre_euler(a: u64, l: u64) -> i32 {
    let a = a % l;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (l - 1) / 2, l) == 1 {
        1
    } else {
        -1
    }
}

/// Jacobi symbol (a | n) for odd n.
pub fn jacobi(a: u64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Square root of `a` modulo the odd prime `l` (Tonelli-Shanks).
/// Returns the smaller of the two roots.
pub fn sqrt_mod(a: u64, l: u64) -> Option<u64> {
    let a = a % l;
    if a == 0 {
        return Some(0);
    }
    if l == 2 {
        return Some(a);
    }
    if legendre_euler(a, l) != 1 {
        return None;
    }
    let s = (l - 1).trailing_zeros();
    let q = (l - 1) >> s;
    let mut z = 2;
    while legendre_euler(z, l) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, l);
    let mut t = pow_mod(a, q, l);
    let mut r = pow_mod(a, q.div_ceil(2), l);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, l);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), l);
        m = i;
        c = mul_mod(b, b, l);
        t = mul_mod(t, c, l);
        r = mul_mod(r, b, l);
    }
    Some(r.min(l - r))
}

/// Quadratic character table for a fixed odd prime, one bit per residue.
#[derive(Clone, Debug)]
pub struct QrTable {
    l: u64,
    bits: Vec<u64>,
}

impl QrTable {
    pub fn new(l: u64) -> Self {
        assert!(l >= 3 && l % 2 == 1, "QrTable needs an odd prime");
        let mut bits = vec![0u64; (l as usize).div_ceil(64)];
        // (x+1)^2 = x^2 + 2x + 1
        let mut sq = 0u64;
        let mut step = 1u64;
        for _ in 1..=(l - 1) / 2 {
            sq += step;
            if sq >= l {
                sq -= l;
            }
            step += 2;
            if step >= l {
                step -= l;
            }
            bits[(sq / 64) as usize] |= 1 << (sq % 64);
        }
        QrTable { l, bits }
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    /// Legendre symbol of a residue already reduced into `[0, l)`.
    #[inline]
    pub fn chi(&self, a: u64) -> i32 {
        debug_assert!(a < self.l);
        if a == 0 {
            0
        } else if self.bits[(a / 64) as usize] >> (a % 64) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}
