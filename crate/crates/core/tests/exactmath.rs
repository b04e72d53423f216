use hecke_ehrhart::exactmath::{bernoulli, gaussian_int, interpolate, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn gaussian_integers_sum_geometric_series() {
    for p in [2u64, 3, 5, 7] {
        for n in 0..8u32 {
            let lhs = gaussian_int(n, p) * BigInt::from(p - 1) + 1;
            assert_eq!(lhs, BigInt::from(p).pow(n));
        }
    }
}

#[test]
fn odd_bernoulli_numbers_vanish() {
    assert_eq!(bernoulli(1), Rational::new(1, 2));
    for k in 2..=10 {
        assert!(bernoulli(2 * k - 1).is_zero());
    }
}

proptest! {
    #[test]
    fn interpolation_reproduces_its_nodes(ys in prop::collection::vec((-50i64..50, 1i64..9), 1..7)) {
        let pts: Vec<(Rational, Rational)> = ys
            .iter()
            .enumerate()
            .map(|(i, &(n, d))| (Rational::from(3 * i as i64 - 4), Rational::new(n, d)))
            .collect();
        let poly = interpolate(&pts).unwrap();
        prop_assert!(poly.degree().is_none_or(|d| d < pts.len()));
        for (x, y) in &pts {
            prop_assert_eq!(&poly.eval(x), y);
        }
    }
}
