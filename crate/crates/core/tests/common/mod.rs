#![allow(dead_code)]

use proptest::prelude::*;
use sl2lab::algebra::{Field, FieldScalar, LaurentPolynomial, RationalFunction};
use sl2lab::complex::ProductVertex;
use sl2lab::group::Unipotent;

pub const Q: Field = Field::Rationals;

pub fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rationals), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(5))]
}

pub fn scalar(f: Field) -> impl Strategy<Value = FieldScalar> {
    (-6i64..=6).prop_map(move |k| f.from_i64(k))
}

pub fn laurent(f: Field, lo: i64, hi: i64) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((lo..=hi, -4i64..=4), 0..5)
        .prop_map(move |ts| LaurentPolynomial::from_terms(f, ts.into_iter().map(|(e, c)| (e, f.from_i64(c)))))
}

pub fn nonzero_laurent(f: Field, lo: i64, hi: i64) -> impl Strategy<Value = LaurentPolynomial> {
    laurent(f, lo, hi).prop_filter("nonzero", |x| !x.is_zero())
}

/// `p / q` with `q` a nonzero Laurent polynomial.
pub fn rational(f: Field) -> impl Strategy<Value = RationalFunction> {
    (laurent(f, -3, 3), nonzero_laurent(f, -2, 2))
        .prop_map(|(p, q)| p.to_rational_function().div(&q.to_rational_function()).unwrap())
}

pub fn unipotent(f: Field, lo: i64, hi: i64) -> impl Strategy<Value = Unipotent> {
    laurent(f, lo, hi).prop_map(|x| Unipotent::from_laurent(&x))
}

/// A `U`-translate of an apartment point.
pub fn point(f: Field) -> impl Strategy<Value = ProductVertex> {
    (-4i64..=4, -4i64..=4, laurent(f, -6, 6))
        .prop_map(move |(a, b, x)| ProductVertex::apartment(a, b, f).act(&Unipotent::from_laurent(&x).matrix()))
}
