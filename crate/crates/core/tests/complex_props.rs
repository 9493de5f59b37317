mod common;

use common::*;
use proptest::prelude::*;
use sl2lab::algebra::Field;
use sl2lab::complex::{Cell, Chain};
use sl2lab::group::{d_power, Matrix2};
use sl2lab::tree::TreeEdge;

fn cell(f: Field, dim: usize) -> impl Strategy<Value = Cell> {
    (point(f), 0usize..2).prop_map(move |(p, which)| {
        let (e, g) = (TreeEdge::up_from(p.inf()), TreeEdge::up_from(p.zero()));
        match (dim, which) {
            (0, _) => Cell::Vertex(p),
            (1, 0) => Cell::EdgeInf { edge: e, zero: p.zero().clone() },
            (1, _) => Cell::EdgeZero { inf: p.inf().clone(), edge: g },
            _ => Cell::Square { inf: e, zero: g },
        }
    })
}

fn chain(f: Field, dim: usize) -> impl Strategy<Value = Chain> {
    prop::collection::vec((cell(f, dim), scalar(f)), 1..6).prop_map(move |cells| {
        let mut c = Chain::zero(f);
        for (cell, a) in cells {
            c.add_cell(cell, a).unwrap();
        }
        c
    })
}

fn element(f: Field) -> impl Strategy<Value = Matrix2> {
    (unipotent(f, -4, 4), -2i64..=2, unipotent(f, -2, 2))
        .prop_map(move |(u, k, w)| &(&u.matrix() * &d_power(f, k)) * &w.matrix())
}

fn chain_and_element() -> impl Strategy<Value = (Chain, Matrix2)> {
    (field(), 1usize..=2).prop_flat_map(|(f, dim)| (chain(f, dim), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn boundary_squares_to_zero(c in field().prop_flat_map(|f| chain(f, 2))) {
        prop_assert!(c.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_is_equivariant((c, g) in chain_and_element()) {
        prop_assert_eq!(c.act(&g).boundary().unwrap(), c.boundary().unwrap().act(&g));
    }

    #[test]
    fn action_is_invertible((c, g) in chain_and_element()) {
        prop_assert_eq!(c.act(&g).act(&g.inverse()), c.clone());
        prop_assert_eq!(c.act(&g).len(), c.len());
    }

    #[test]
    fn action_is_linear((c, g) in chain_and_element(), k in -3i64..3) {
        let f = c.field();
        let lhs = (&c.scale(&f.from_i64(k)) + &c).act(&g);
        prop_assert_eq!(lhs, c.act(&g).scale(&f.from_i64(k + 1)));
    }
}
