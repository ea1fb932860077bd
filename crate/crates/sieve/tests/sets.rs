use curves::{count_points_naive, CurveModL};
use num_bigint::BigUint;
use proptest::prelude::*;
use seqcore::{fib_exact, h_exact, SeqKind};
use sieve::{n_set_fib, n_set_lucas, ResidueClassSet, SieveError, SievePair};

fn big(v: &[u64]) -> Vec<BigUint> {
    v.iter().map(|&x| BigUint::from(x)).collect()
}

#[test]
fn fib_eleven_five() {
    let n = n_set_fib(11, 5).unwrap();
    assert_eq!(n.modulus(), &BigUint::from(30u32));
    assert_eq!(n.residues(), big(&[1, 11, 19, 29]).as_slice());
}

#[test]
fn one_is_always_a_member() {
    for l in [11u64, 19, 29, 31, 41, 59, 61, 71, 79, 89, 101] {
        for q in [5u64, 7, 11] {
            assert!(n_set_fib(l, q).unwrap().contains(&BigUint::from(1u32)), "fib l={l} q={q}");
            assert!(n_set_lucas(l, q).unwrap().contains(&BigUint::from(1u32)), "lucas l={l} q={q}");
        }
    }
}

#[test]
fn raising_q_only_removes_classes() {
    for l in [11u64, 19, 29, 31, 41, 61, 71] {
        for (kind_fn, name) in
            [(n_set_fib as fn(u64, u64) -> Result<ResidueClassSet, SieveError>, "fib"), (n_set_lucas, "lucas")]
        {
            let a = kind_fn(l, 5).unwrap();
            let b = kind_fn(l, 7).unwrap();
            assert!(b.residues().iter().all(|r| a.contains(r)), "{name} l={l}");
        }
    }
}

/// Membership from exact sequence values and naive point counts.
fn brute_member(kind: SeqKind, n: u64, l: u64, q: u64) -> bool {
    let big_prime_factor = |d: i64| d == 0 || arith::largest_prime_factor(d.unsigned_abs()).is_some_and(|f| f > q);
    let trace = |c: &CurveModL| l as i64 + 1 - count_points_naive(c) as i64;
    let (frey, e) = match kind {
        SeqKind::Fibonacci => {
            let h = h_exact(n).unwrap();
            let hl = i64::try_from(h % l as i64).unwrap();
            (CurveModL::from_integers(l, [0, hl, 0, -1, 0]), CurveModL::from_integers(l, [0, 1, 0, -1, 0]).unwrap())
        }
        SeqKind::Lucas => {
            let f = i64::try_from(fib_exact(n) % l).unwrap();
            (CurveModL::from_integers(l, [0, -5 * f, 0, 5, 0]), CurveModL::from_integers(l, [0, 1, 0, -3, -2]).unwrap())
        }
    };
    let ae = trace(&e);
    match frey {
        Ok(c) => big_prime_factor(trace(&c) - ae),
        Err(_) => big_prime_factor(l as i64 + 1 - ae) || big_prime_factor(l as i64 + 1 + ae),
    }
}

#[test]
fn sets_match_brute_force() {
    for l in [11u64, 19, 29, 31, 41] {
        let kf = arith::lcm(l - 1, 6);
        let expect: Vec<u64> = (1..kf)
            .filter(|&n| arith::gcd(n, kf) == 1)
            .filter(|&n| brute_member(SeqKind::Fibonacci, n, l, 5))
            .collect();
        assert_eq!(n_set_fib(l, 5).unwrap().residues(), big(&expect).as_slice(), "fib l={l}");
        let kl = l - 1;
        let expect: Vec<u64> =
            (1..kl).filter(|&n| arith::gcd(n, kl) == 1).filter(|&n| brute_member(SeqKind::Lucas, n, l, 5)).collect();
        assert_eq!(n_set_lucas(l, 5).unwrap().residues(), big(&expect).as_slice(), "lucas l={l}");
    }
}

#[test]
fn lucas_eleven_five() {
    let n = n_set_lucas(11, 5).unwrap();
    assert_eq!(n.modulus(), &BigUint::from(10u32));
    assert!(n.contains(&BigUint::from(1u32)));
}

#[test]
fn pair_validation() {
    assert!(SievePair::new(13, 5).is_err());
    assert!(SievePair::new(11, 3).is_err());
    assert!(SievePair::new(21, 5).is_err());
    // 50020 = 2^2 5 41 61, while 50458 = 2 * 25229
    assert!(SievePair::new(50021, 5).is_ok());
    assert!(SievePair::new(50459, 5).is_err());
}

fn brute_intersect(a: &ResidueClassSet, b: &ResidueClassSet) -> Vec<BigUint> {
    let m = num_integer::lcm(a.modulus().clone(), b.modulus().clone());
    let m: u64 = m.try_into().unwrap();
    (0..m).map(BigUint::from).filter(|x| a.contains(x) && b.contains(x)).collect()
}

fn arb_set() -> impl Strategy<Value = ResidueClassSet> {
    (1u64..1000).prop_flat_map(|m| {
        prop::collection::vec(0..m, 0..12).prop_map(move |rs| ResidueClassSet::from_u64(m, &rs).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersect_matches_brute_force(a in arb_set(), b in arb_set()) {
        let c = a.intersect(&b);
        prop_assert_eq!(c.modulus(), &num_integer::lcm(a.modulus().clone(), b.modulus().clone()));
        let brute = brute_intersect(&a, &b);
        prop_assert_eq!(c.residues(), brute.as_slice());
        prop_assert!(c.len() <= a.len() * b.len());
    }

    #[test]
    fn intersect_laws(a in arb_set(), b in arb_set(), c in (1u64..60).prop_flat_map(|m| prop::collection::vec(0..m, 0..6).prop_map(move |rs| ResidueClassSet::from_u64(m, &rs).unwrap()))) {
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.intersect(&a), a.clone());
        prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
    }
}
