use curves::Catalog;
use kraus::*;
use proptest::prelude::*;
use seqcore::SeqKind;

fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    arith::primes_up_to(hi).into_iter().filter(|&p| p >= lo).collect()
}

fn brute_zetas(kind: SeqKind, p: u64, k: u64) -> Vec<u64> {
    let l = 2 * k * p + 1;
    let is_sq = |v: u64| v == 0 || (1..l).any(|x| x * x % l == v);
    let mut z: Vec<u64> = (1..l).map(|x| arith::pow_mod(x, 2 * p, l)).filter(|&z| z != 1).collect();
    z.sort_unstable();
    z.dedup();
    z.retain(|&z| match kind {
        SeqKind::Fibonacci => is_sq((5 * z + l - 4) % l),
        SeqKind::Lucas => (0..l).any(|d| (5 * d % l * d + l - 4) % l == z),
    });
    z
}

#[test]
fn zeta_sets_match_enumeration() {
    for (p, k) in [(7u64, 2u64), (7, 6), (11, 4), (11, 9), (13, 3), (17, 7), (19, 5), (23, 8)] {
        for kind in [SeqKind::Fibonacci, SeqKind::Lucas] {
            let Ok(z) = zeta_set(kind, p, k) else { continue };
            assert_eq!(z.zetas, brute_zetas(kind, p, k), "{kind:?} p={p} k={k}");
            assert!(!z.zetas.contains(&1));
            assert!(z.zetas.len() < k as usize);
        }
    }
}

#[test]
fn seven_two_has_a_single_candidate() {
    let z = zeta_set(SeqKind::Fibonacci, 7, 2).unwrap();
    assert_eq!(z.l, 29);
    assert_eq!(z.zetas, vec![28]);
    assert!(zeta_set(SeqKind::Lucas, 7, 2).unwrap().zetas.is_empty());
}

#[test]
fn composite_or_wrong_class_is_rejected() {
    assert!(zeta_set(SeqKind::Fibonacci, 7, 4).is_err());
    // 2*1*7+1 = 15
    assert!(zeta_set(SeqKind::Fibonacci, 7, 1).is_err());
    // 2*3*7+1 = 43 = 3 mod 5
    assert!(zeta_set(SeqKind::Fibonacci, 7, 3).is_err());
}

#[test]
fn trivial_zeta_gives_the_reference_curve() {
    for l in [29u64, 31, 41, 59, 61, 71] {
        let e = Catalog::builtin().get("20a2").unwrap().reduce(l).unwrap();
        assert_eq!(twisted_curve(SeqKind::Fibonacci, 1, l), e);
    }
}

#[test]
fn small_searches() {
    for (kind, p) in [(SeqKind::Fibonacci, 7), (SeqKind::Fibonacci, 11), (SeqKind::Lucas, 7), (SeqKind::Lucas, 13)] {
        let c = kraus_search(kind, p, DEFAULT_K_MAX, RootChoice::Smaller).unwrap();
        assert!(c.checks.all());
        assert_eq!(c.l, 2 * c.k * p + 1);
        verify_certificate(&c).unwrap();
        let omega = seqcore::omega_mod(c.sqrt5, c.l);
        assert_ne!(arith::pow_mod(omega, 2 * c.k, c.l), 1);
    }
}

#[test]
fn smallest_k_is_reported() {
    let c = kraus_search_fib(11, DEFAULT_K_MAX).unwrap();
    for k in 1..c.k {
        let r = check_conditions(SeqKind::Fibonacci, 11, k, RootChoice::Smaller).unwrap();
        assert!(!r.checks.all(), "k = {k}");
    }
}

#[test]
fn certificates_up_to_two_hundred() {
    let ps = primes_between(7, 200);
    for kind in [SeqKind::Fibonacci, SeqKind::Lucas] {
        for r in sweep(kind, &ps, DEFAULT_K_MAX, arith::Exec::default()) {
            let c = r.unwrap();
            verify_certificate(&c).unwrap();
            assert_eq!(c.note.is_some(), kind == SeqKind::Lucas);
        }
    }
}

#[test]
fn sequential_and_parallel_sweeps_agree() {
    let ps = primes_between(7, 120);
    let strip = |v: Vec<Result<KrausCertificate, NotFound>>| {
        v.into_iter().map(|r| r.map(|c| (c.k, c.l, c.sqrt5, c.a_l_e, c.zeta_count))).collect::<Vec<_>>()
    };
    let a = strip(sweep(SeqKind::Lucas, &ps, DEFAULT_K_MAX, arith::Exec::Sequential));
    let b = strip(sweep(SeqKind::Lucas, &ps, DEFAULT_K_MAX, arith::Exec::Parallel));
    assert_eq!(a, b);
}

#[test]
fn tampered_certificates_fail() {
    let c = kraus_search_fib(13, DEFAULT_K_MAX).unwrap();
    let mut t = c.clone();
    t.a_l_e += 2;
    assert!(verify_certificate(&t).is_err());
    let mut t = c.clone();
    t.checks.c = false;
    assert!(verify_certificate(&t).is_err());
    let mut t = c.clone();
    t.k += 1;
    assert!(verify_certificate(&t).is_err());
    let mut t = c;
    t.zeta_count += 1;
    assert!(verify_certificate(&t).is_err());
}

#[test]
fn json_fields() {
    let c = kraus_search_lucas(7, DEFAULT_K_MAX).unwrap();
    let v: serde_json::Value = serde_json::to_value(&c).unwrap();
    for key in ["kind", "p", "k", "l", "sqrt5", "a_l_E", "zeta_count", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["kind"], "lucas");
    let back: KrausCertificate = serde_json::from_value(v).unwrap();
    assert_eq!(back, c);
}

fn arb_prime(lo: u64, hi: u64) -> impl Strategy<Value = u64> {
    let ps = primes_between(lo, hi);
    (0..ps.len()).prop_map(move |i| ps[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sqrt5_branch_invariance(p in arb_prime(7, 5000), fib in any::<bool>()) {
        let kind = if fib { SeqKind::Fibonacci } else { SeqKind::Lucas };
        for k in 1..=40 {
            let a = check_conditions(kind, p, k, RootChoice::Smaller).unwrap();
            let b = check_conditions(kind, p, k, RootChoice::Larger).unwrap();
            prop_assert_eq!(a.checks, b.checks, "k = {}", k);
        }
    }

    #[test]
    fn found_certificates_reverify(p in arb_prime(7, 3000), fib in any::<bool>()) {
        let kind = if fib { SeqKind::Fibonacci } else { SeqKind::Lucas };
        let c = kraus_search(kind, p, DEFAULT_K_MAX, RootChoice::Smaller).unwrap();
        prop_assert_eq!(c.l, 2 * c.k * p + 1);
        prop_assert!(verify_certificate(&c).is_ok());
        let other = kraus_search(kind, p, DEFAULT_K_MAX, RootChoice::Larger).unwrap();
        prop_assert_eq!(other.k, c.k);
        prop_assert!(verify_certificate(&other).is_ok());
    }
}
