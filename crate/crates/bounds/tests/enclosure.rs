use bounds::{with_precision, Approx, LogMagnitude, Real};
use proptest::prelude::*;

/// `x` at working precision and the same expression at 1024 bits.
fn both(f: impl Fn() -> Approx) -> (Approx, Approx) {
    (with_precision(256, &f), with_precision(1024, &f))
}

/// True when the two enclosures overlap, compared at 1024 bits.
fn consistent((lo, hi): (Approx, Approx)) -> bool {
    with_precision(1024, || (&lo.v - &hi.v).abs() <= &lo.err + &hi.err)
}

fn ratio(n: i64, d: i64) -> Approx {
    &Approx::int(n) / &Approx::int(d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_enclose(a in -10_000i64..10_000, b in 1i64..1000, c in -10_000i64..10_000, d in 1i64..1000) {
        prop_assert!(consistent(both(|| &ratio(a, b) + &ratio(c, d))));
        prop_assert!(consistent(both(|| &ratio(a, b) - &ratio(c, d))));
        prop_assert!(consistent(both(|| &ratio(a, b) * &ratio(c, d))));
        if c != 0 {
            prop_assert!(consistent(both(|| &ratio(a, b) / &ratio(c, d))));
        }
    }

    #[test]
    fn transcendental_functions_enclose(a in 1i64..1_000_000, b in 1i64..1000, k in 0u32..40) {
        prop_assert!(consistent(both(|| ratio(a, b).ln().unwrap())));
        prop_assert!(consistent(both(|| ratio(a % 500, b).exp())));
        prop_assert!(consistent(both(|| ratio(a, b).sqrt().unwrap())));
        prop_assert!(consistent(both(|| ratio(a, b).powi(k))));
        prop_assert!(consistent(both(|| ratio(a, b).powf(&ratio(b, a)).unwrap())));
    }

    #[test]
    fn inverse_pairs_return_the_input(a in 1i64..1_000_000, b in 1i64..1000) {
        let ok = with_precision(256, || {
            let x = ratio(a, b);
            let back = x.ln().unwrap().exp();
            let sq = x.sqrt().unwrap();
            let diff = &back - &x;
            let sq_diff = &(&sq * &sq) - &x;
            diff.v.abs() <= diff.err && sq_diff.v.abs() <= sq_diff.err
        });
        prop_assert!(ok);
    }

    #[test]
    fn comparison_is_sound(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
        let ord = Approx::int(a).compare(&Approx::int(b)).unwrap();
        prop_assert_eq!(ord, a.cmp(&b));
        let x = &Approx::int(a) / &Approx::int(7);
        let y = &Approx::int(b) / &Approx::int(7);
        if a != b {
            prop_assert_eq!(x.compare(&y).unwrap(), a.cmp(&b));
        }
    }

    #[test]
    fn log_magnitudes_multiply(a in 1u64..u64::MAX, b in 1u64..u64::MAX) {
        let prod = LogMagnitude::from_u64(a).mul(&LogMagnitude::from_u64(b));
        let big = num_bigint::BigUint::from(a) * b;
        let exact = LogMagnitude::from_biguint(&big);
        let diff = prod.ln_value() - exact.ln_value();
        prop_assert!(diff.v.abs() <= diff.err);
        prop_assert!((prod.log10().to_f64() - (a as f64).log10() - (b as f64).log10()).abs() < 1e-9);
    }

    #[test]
    fn floor_of_integers(n in 0u64..u64::MAX) {
        prop_assert_eq!(Real::from_u64(n).floor_biguint(), num_bigint::BigUint::from(n));
    }
}
