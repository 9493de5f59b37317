mod common;

use common::*;
use proptest::prelude::*;
use sl2lab::algebra::{Field, Place};
use sl2lab::group::d_power;
use sl2lab::tree::{act, busemann, distance, neighbors, TreeVertex};

fn vertex(f: Field) -> impl Strategy<Value = TreeVertex> {
    (prop_oneof![Just(Place::Zero), Just(Place::Infinity)], point(f))
        .prop_map(|(at, p)| if at == Place::Zero { p.zero().clone() } else { p.inf().clone() })
}

fn same_place_triple() -> impl Strategy<Value = (TreeVertex, TreeVertex, TreeVertex)> {
    field().prop_flat_map(|f| (point(f), point(f), point(f), any::<bool>())).prop_map(|(a, b, c, z)| {
        if z {
            (a.zero().clone(), b.zero().clone(), c.zero().clone())
        } else {
            (a.inf().clone(), b.inf().clone(), c.inf().clone())
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distance_is_a_metric((u, v, w) in same_place_triple()) {
        let d = |a: &TreeVertex, b: &TreeVertex| distance(a, b).unwrap();
        prop_assert_eq!(d(&u, &u), 0);
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
        prop_assert_eq!(d(&u, &v) == 0, u == v);
    }

    #[test]
    fn busemann_is_one_lipschitz((u, v, _) in same_place_triple()) {
        prop_assert!((busemann(&u) - busemann(&v)).unsigned_abs() <= distance(&u, &v).unwrap());
    }

    #[test]
    fn group_acts_by_isometries((u, v, _) in same_place_triple(), k in -3i64..3, seed in any::<u64>()) {
        let mut rng = sl2lab::sample::rng(seed);
        let g = &sl2lab::sample::unipotent(u.field(), -5, 5, &mut rng) * &d_power(u.field(), k);
        prop_assert_eq!(distance(&act(&g, &u), &act(&g, &v)).unwrap(), distance(&u, &v).unwrap());
        prop_assert_eq!(act(&g.inverse(), &act(&g, &u)), u.clone());
    }

    #[test]
    fn unipotents_keep_busemann(v in vertex(Field::Prime(3)), x in unipotent(Field::Prime(3), -6, 6)) {
        prop_assert_eq!(busemann(&act(&x.matrix(), &v)), busemann(&v));
    }

    #[test]
    fn neighbors_are_at_distance_one(v in vertex(Field::Prime(2))) {
        let nb = neighbors(&v).unwrap();
        prop_assert_eq!(nb.len(), 3);
        for w in &nb {
            prop_assert_eq!(distance(&v, w).unwrap(), 1);
            prop_assert!(neighbors(w).unwrap().contains(&v));
        }
    }
}
