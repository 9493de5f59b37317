//! Seeded random objects for certificates. Coefficients over `Q` are kept
//! small so exact arithmetic stays cheap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Field, FieldScalar, LaurentPolynomial, RationalFunction};
use crate::complex::ProductVertex;
use crate::group::{Matrix2, Unipotent};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed derived from a base seed and a label (FNV-1a), so independent
/// streams stay reproducible whatever order they run in.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    label.bytes().fold(0xcbf2_9ce4_8422_2325 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// A uniform residue over `F_p`; over `Q` an integer in `[-4, 4]`, or a
/// fraction with denominator up to 3 a quarter of the time.
pub fn scalar(field: Field, rng: &mut SampleRng) -> FieldScalar {
    match field {
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p) as i64),
        Field::Rationals => {
            let num = rng.gen_range(-4..=4);
            if rng.gen_bool(0.25) {
                field.from_ratio(num, rng.gen_range(1..=3)).unwrap()
            } else {
                field.from_i64(num)
            }
        }
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut SampleRng) -> FieldScalar {
    loop {
        let s = scalar(field, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Random Laurent polynomial with exponents in `[lo, hi]`, each present
/// with probability one half.
pub fn laurent(field: Field, lo: i64, hi: i64, rng: &mut SampleRng) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero(field);
    for e in lo..=hi {
        if rng.gen_bool(0.5) {
            out.add_term(e, scalar(field, rng));
        }
    }
    out
}

/// `(1 x; 0 1)` with `x` as in [`laurent`].
pub fn unipotent(field: Field, lo: i64, hi: i64, rng: &mut SampleRng) -> Matrix2 {
    Unipotent::from_laurent(&laurent(field, lo, hi, rng)).matrix()
}

/// A random `U`-translate of the apartment point `(l_inf(a), l_0(b))`
/// with `a, b` in `[-span, span]`.
pub fn point(field: Field, span: i64, rng: &mut SampleRng) -> ProductVertex {
    let (a, b) = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
    ProductVertex::apartment(a, b, field).act(&unipotent(field, -span - 2, span + 2, rng))
}

/// A rational function `p/q` with Laurent numerator and a denominator
/// `1 + ...` of degree at most 2.
pub fn rational(field: Field, lo: i64, hi: i64, rng: &mut SampleRng) -> RationalFunction {
    let num = laurent(field, lo, hi, rng).to_rational_function();
    let mut den = LaurentPolynomial::monomial(field.one(), 0);
    for e in 1..=rng.gen_range(0..=2) {
        den.add_term(e, scalar(field, rng));
    }
    num.div(&den.to_rational_function()).expect("constant term 1")
}
