mod common;

use common::*;
use proptest::prelude::*;
use sl2lab::algebra::{Field, RationalFunction};
use sl2lab::group::{d_power, in_u_n, in_upper_window, p1_witness, split_window, Matrix2, Unipotent};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn split_window_recombines(f in field(), n in 0i64..4, seed in any::<u64>()) {
        let mut rng = sl2lab::sample::rng(seed);
        let u = Unipotent::from_laurent(&sl2lab::sample::laurent(f, -8, 8, &mut rng));
        let (inner, outer) = split_window(&u, n).unwrap();
        prop_assert!(in_u_n(&inner, n));
        prop_assert!(in_upper_window(&outer, n));
        prop_assert_eq!(inner.compose(&outer), u.clone());
        prop_assert_eq!(&inner.matrix() * &outer.matrix(), u.matrix());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn p1_witness_hits_the_point(
        (x, y) in field().prop_flat_map(|f| (laurent(f, -3, 3), laurent(f, -3, 3)))
            .prop_filter("not both zero", |(x, y)| !(x.is_zero() && y.is_zero()))
    ) {
        let f = x.field();
        let g = p1_witness(&x, &y).unwrap();
        prop_assert!(g.det().is_one());
        prop_assert!(g.has_laurent_entries());
        let (gx, gy) = g.apply_projective(&RationalFunction::one(f), &RationalFunction::zero(f));
        prop_assert_eq!(&gx * &y.to_rational_function(), &gy * &x.to_rational_function());
    }

    #[test]
    fn d_powers_compose(f in field(), j in -5i64..5, k in -5i64..5) {
        prop_assert!(d_power(f, k).det().is_one());
        prop_assert_eq!(&d_power(f, j) * &d_power(f, k), d_power(f, j + k));
    }

    #[test]
    fn inverse_is_two_sided(u in unipotent(Q, -3, 3), k in -3i64..3) {
        let g = &u.matrix() * &d_power(Q, k);
        prop_assert_eq!(&g * &g.inverse(), Matrix2::identity(Q));
        prop_assert_eq!(&g.inverse() * &g, Matrix2::identity(Q));
    }

    #[test]
    fn unipotent_inverse(u in unipotent(Field::Prime(5), -4, 4)) {
        prop_assert!(u.compose(&u.inverse()).is_identity());
    }
}
