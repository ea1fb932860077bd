use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use seqcore::*;

fn recurrence(n_max: usize, l: u64) -> Vec<(u64, u64)> {
    let mut f = vec![0u64, 1 % l];
    let mut g = vec![2 % l, 1 % l];
    for i in 2..=n_max {
        f.push((f[i - 1] + f[i - 2]) % l);
        g.push((g[i - 1] + g[i - 2]) % l);
    }
    f.into_iter().zip(g).take(n_max + 1).collect()
}

#[test]
fn doubling_matches_recurrence() {
    for l in arith::primes_up_to(1000) {
        if l == 5 {
            continue;
        }
        let seq = recurrence(10_000, l);
        let step = if l < 100 { 1 } else { 7 };
        for n in (0..=10_000u64).step_by(step) {
            let p = fib_lucas_mod(&BigUint::from(n), l).unwrap();
            assert_eq!((p.f, p.g), seq[n as usize], "n={n} l={l}");
        }
    }
}

#[test]
fn exact_identity_and_h_mod_4() {
    for n in 0..=300u64 {
        let f = fib_exact(n);
        let g = lucas_exact(n);
        let lhs = num_bigint::BigInt::from(&g * &g) - num_bigint::BigInt::from(5u32 * &f * &f);
        let rhs = if n.is_odd() { -4 } else { 4 };
        assert_eq!(lhs, rhs.into(), "n={n}");
    }
    for n in 1..=1000u64 {
        if n % 6 == 1 || n % 6 == 5 {
            let h = h_exact(n).unwrap();
            assert_eq!(h.mod_floor(&4.into()), 1.into(), "n={n}");
        }
    }
}

#[test]
fn periodicity_up_to_200() {
    for l in arith::primes_up_to(200) {
        if l == 5 {
            continue;
        }
        let m = period_m(l).unwrap();
        for n in 0..2 * m {
            assert_eq!(fib_lucas_raw(n, l), fib_lucas_raw(n + m, l), "n={n} l={l}");
        }
    }
}

#[test]
fn mod4_matches_direct() {
    for n in 0..=600u64 {
        let f = (fib_exact(n) % 4u32).to_u8().unwrap();
        let g = (lucas_exact(n) % 4u32).to_u8().unwrap();
        assert_eq!(mod4_table(&BigUint::from(n)), (g, f));
    }
}

#[test]
fn period_seven_brute_force() {
    let seq = recurrence(64, 7);
    for n in 0..=48 {
        assert_eq!(seq[n].0, seq[n + 16].0);
    }
}

proptest! {
    #[test]
    fn identity_holds_mod_l(n in 0u64..u64::MAX, idx in 0usize..160) {
        let primes: Vec<u64> = arith::primes_up_to(1000).into_iter().filter(|&p| p != 5).collect();
        let l = primes[idx % primes.len()];
        let pair = fib_lucas_mod(&BigUint::from(n), l).unwrap();
        prop_assert!(pair.identity_holds());
    }

    #[test]
    fn exact_reduces_to_modular(n in 0u64..3000, idx in 0usize..160) {
        let primes: Vec<u64> = arith::primes_up_to(1000).into_iter().filter(|&p| p != 5).collect();
        let l = primes[idx % primes.len()];
        let pair = fib_lucas_mod(&BigUint::from(n), l).unwrap();
        prop_assert_eq!(pair.f, (fib_exact(n) % l).to_u64().unwrap());
        prop_assert_eq!(pair.g, (lucas_exact(n) % l).to_u64().unwrap());
    }
}
