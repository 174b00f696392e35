use num_bigint::BigInt;
use proptest::prelude::*;
use qshelf_core::series::{DivMode, TruncatedSeries};

const ORDER: i64 = 24;

fn series() -> impl Strategy<Value = TruncatedSeries> {
    (0i64..4, prop::collection::vec(-5i64..=5, 0..12))
        .prop_map(|(val, coeffs)| TruncatedSeries::from_i64s(val, &coeffs, ORDER))
}

fn unit() -> impl Strategy<Value = TruncatedSeries> {
    (prop::bool::ANY, prop::collection::vec(-3i64..=3, 0..8)).prop_map(|(neg, mut tail)| {
        tail.insert(0, if neg { -1 } else { 1 });
        TruncatedSeries::from_i64s(0, &tail, ORDER)
    })
}

proptest! {
    #[test]
    fn addition_commutes(a in series(), b in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_commutes(a in series(), b in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn multiplication_associates(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn distributes(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn unit_division_inverts(a in series(), b in unit()) {
        let c = a.div_unit(&b).unwrap();
        prop_assert_eq!(&b * &c, a);
    }

    #[test]
    fn qpow_division_inverts_shift(a in series(), m in 0i64..6) {
        let back = a.shift(m).div_qpow(m, DivMode::Strict).unwrap();
        prop_assert_eq!(back.order(), a.order());
        prop_assert_eq!(back, a);
    }

    #[test]
    fn additive_inverse(a in series()) {
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn json_round_trip(a in series(), big in any::<i64>()) {
        let a = &a + &TruncatedSeries::monomial(3, BigInt::from(big) * BigInt::from(big), ORDER);
        let text = serde_json::to_string(&a).unwrap();
        let back: TruncatedSeries = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.order(), a.order());
        prop_assert_eq!(back.valuation(), a.valuation());
        prop_assert_eq!(back, a);
    }
}
