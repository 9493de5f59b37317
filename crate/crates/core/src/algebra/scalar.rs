//! Exact scalars: rationals and prime-field residues behind one tagged type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The base field `F`: either `Q` or `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) && p < (1 << 31) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> FieldScalar {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldScalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> FieldScalar {
        match self {
            Field::Rationals => FieldScalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                FieldScalar::Residue { value: r.to_u64().unwrap(), p }
            }
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Result<FieldScalar> {
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// Number of elements, `None` for `Q`.
    pub fn size(self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(p),
        }
    }

    /// All elements in ascending residue order; errors over `Q`.
    pub fn elements(self) -> Result<Vec<FieldScalar>> {
        match self {
            Field::Rationals => Err(Error::InfiniteField),
            Field::Prime(p) => Ok((0..p).map(|value| FieldScalar::Residue { value, p }).collect()),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Accepts `q`/`Q` and `fp:<p>`/`F_<p>`.
impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rationals);
        }
        let digits = s.strip_prefix("fp:").or_else(|| s.strip_prefix("F_")).ok_or_else(|| {
            Error::Config(format!("unknown field '{s}', expected q or fp:<p>"))
        })?;
        let p = digits.parse().map_err(|_| Error::Config(format!("bad prime '{digits}'")))?;
        Field::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of `Q` or `F_p`.
///
/// Rationals are kept reduced with positive denominator (guaranteed by
/// `BigRational`); residues are kept in `[0, p)`. Derived equality is
/// therefore canonical-form equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldScalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
}

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rationals,
            FieldScalar::Residue { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inverse(&self) -> Result<FieldScalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Residue { value, p } => {
                FieldScalar::Residue { value: pow_mod(*value, p - 2, *p), p: *p }
            }
        })
    }

    pub fn div(&self, other: &FieldScalar) -> Result<FieldScalar> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, e: u32) -> FieldScalar {
        let mut acc = self.field().one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// True when the printed form needs a leading minus sign.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_negative(),
            FieldScalar::Residue { .. } => false,
        }
    }

    pub fn abs(&self) -> FieldScalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn check_same_field(&self, other: &FieldScalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()))
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn mismatch(a: &FieldScalar, b: &FieldScalar) -> ! {
    panic!("arithmetic across field backends: {} and {}", a.field(), b.field())
}

// Mixing backends in operator arithmetic is a programming error and panics;
// use `check_same_field` at input boundaries.
impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Residue { value: a, p }, FieldScalar::Residue { value: b, p: q }) if p == q => {
                FieldScalar::Residue { value: (a + b) % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self + &(-rhs)
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Residue { value: a, p }, FieldScalar::Residue { value: b, p: q }) if p == q => {
                FieldScalar::Residue { value: a * b % p, p: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Residue { value, p } => FieldScalar::Residue { value: (p - value) % p, p: *p },
        }
    }
}

impl Neg for FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for FieldScalar {
            type Output = FieldScalar;
            fn $m(self, rhs: FieldScalar) -> FieldScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldScalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sum() {
        let q = Field::Rationals;
        let s = &q.from_ratio(1, 2).unwrap() + &q.from_ratio(1, 3).unwrap();
        assert_eq!(s, q.from_ratio(5, 6).unwrap());
        assert_eq!(s.to_string(), "5/6");
    }

    #[test]
    fn residues_are_canonical() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
        assert_eq!(f5.from_i64(3).inverse().unwrap(), f5.from_i64(2));
        assert_eq!(-f5.zero(), f5.zero());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Field::Rationals.zero().inverse(), Err(Error::DivisionByZero));
        assert_eq!(Field::prime(7).unwrap().zero().inverse(), Err(Error::DivisionByZero));
    }

    #[test]
    fn non_primes_rejected() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    #[should_panic(expected = "across field backends")]
    fn mixed_backends_panic() {
        let _ = &Field::Rationals.one() + &Field::Prime(3).one();
    }
}
