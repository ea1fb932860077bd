//! Frozen traces from an independent computer-algebra system, plus brute-force checks.

use curves::*;

const PRIMES: [u64; 20] = [7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83];

const FROZEN: [(&str, [i64; 20]); 7] = [
    ("20a2", [2, 0, 2, -6, -4, 6, 6, -4, 2, 6, -10, -6, -6, 12, 2, 2, -12, 2, 8, 6]),
    ("100a1", [-2, 0, -2, 6, -4, -6, 6, -4, -2, 6, 10, 6, 6, 12, 2, -2, -12, -2, 8, -6]),
    ("200a1", [2, 1, 4, 5, 1, -2, -8, 10, -6, -3, 4, 4, 6, 8, 10, -1, -12, 3, 6, -13]),
    ("200b1", [-2, -4, -4, 0, -4, 2, 2, 0, -4, 2, 6, 6, 4, -12, -10, -14, 8, -8, 16, -2]),
    ("200c1", [4, 4, 2, -2, 4, -4, -2, -8, -6, -6, 8, -4, -6, -4, -2, -8, 0, 6, 0, 16]),
    ("200d1", [2, -4, 4, 0, -4, -2, 2, 0, 4, 2, -6, -6, -4, -12, -10, 14, 8, 8, 16, 2]),
    ("200e1", [-2, 1, -4, -5, 1, 2, -8, 10, 6, -3, -4, -4, -6, 8, 10, 1, -12, -3, 6, 13]),
];

#[test]
fn catalog_traces_match_frozen_table() {
    let cat = Catalog::builtin();
    for (label, traces) in FROZEN {
        let c = cat.get(label).unwrap();
        for (l, a) in PRIMES.iter().zip(traces) {
            let t = trace_of_frobenius(&c.reduce(*l).unwrap());
            assert_eq!(t.a_l, a, "{label} at {l}");
        }
    }
}

#[test]
fn hasse_bound_all_catalog_curves() {
    let cat = Catalog::builtin();
    for c in cat.curves() {
        for l in arith::primes_up_to(2000).into_iter().skip(1) {
            if c.is_bad_prime(l) {
                continue;
            }
            let t = trace_of_frobenius(&c.reduce(l).unwrap());
            assert!(t.a_l * t.a_l <= 4 * l as i64, "{} at {l}", c.label);
            assert_eq!(t.a_l, l as i64 + 1 - t.point_count as i64);
        }
    }
}

#[test]
fn hasse_bound_frey_families() {
    for l in arith::primes_up_to(2000).into_iter().filter(|&l| l > 5) {
        let engine = TraceEngine::new(l).unwrap();
        for h in (0..l).step_by(((l / 40) as usize).max(1)) {
            for red in [frey_fib(h, l).unwrap(), frey_lucas(h, l).unwrap()] {
                if let Reduction::Good(c) = red {
                    let t = engine.trace(&c);
                    assert!(t.a_l * t.a_l <= 4 * l as i64);
                }
            }
        }
    }
}

#[test]
fn brute_force_agreement_up_to_200() {
    for l in arith::primes_up_to(200).into_iter().skip(1) {
        let engine = TraceEngine::new(l).unwrap();
        let mut curves = Vec::new();
        for h in 0..l.min(25) {
            curves.extend(frey_fib(h, l).unwrap().curve().copied());
            curves.extend(frey_lucas(h, l).unwrap().curve().copied());
        }
        curves.extend(CurveModL::from_integers(l, [1, 2, 1, -7, 3]).ok());
        curves.extend(CurveModL::from_integers(l, [1, 0, 1, 4, -6]).ok());
        for c in curves {
            let t = engine.trace(&c);
            assert_eq!(t.point_count, count_points_naive(&c), "l={l} {:?}", c.coefficients());
            assert_eq!(t, trace_euler(&c));
        }
    }
}

#[test]
fn conductor_20_isogeny_invariance() {
    let cat = Catalog::builtin();
    let (a, b) = (cat.get("20a1").unwrap(), cat.get("20a2").unwrap());
    for l in arith::primes_up_to(500).into_iter().filter(|&l| l != 2 && l != 5) {
        assert_eq!(trace_of_frobenius(&a.reduce(l).unwrap()), trace_of_frobenius(&b.reduce(l).unwrap()));
    }
}

#[test]
fn twist_by_minus_one() {
    let cat = Catalog::builtin();
    for label in ["20a2", "200b1", "200c1"] {
        let c = cat.get(label).unwrap();
        for l in arith::primes_up_to(600).into_iter().filter(|&l| l > 5) {
            let e = c.reduce(l).unwrap();
            let tw = e.twist(l - 1).unwrap();
            let (a, b) = (trace_of_frobenius(&e).a_l, trace_of_frobenius(&tw).a_l);
            if l % 4 == 1 {
                assert_eq!(a, b);
            } else {
                assert_eq!(a, -b);
            }
        }
    }
}

#[test]
fn trivial_lucas_frey_curve_is_200b1() {
    let cat = Catalog::builtin();
    let e = cat.get("200b1").unwrap();
    for l in arith::primes_up_to(1000).into_iter().filter(|&l| l > 5) {
        let frey = frey_lucas(1, l).unwrap();
        let fc = frey.curve().unwrap();
        assert_eq!(trace_of_frobenius(fc), trace_of_frobenius(&e.reduce(l).unwrap()));
        let fib = frey_fib(1, l).unwrap();
        assert_eq!(*fib.curve().unwrap(), cat.get("20a2").unwrap().reduce(l).unwrap());
    }
}
