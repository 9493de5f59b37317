use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::laurent::LaurentPolynomial;
use super::poly::Polynomial;
use super::scalar::{Field, FieldScalar};
use super::{Place, Valuation};
use crate::error::{Error, Result};

/// Reduced fraction `num / den` with `den` monic and `gcd(num, den) = 1`.
/// Zero is stored as `0 / 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field();
        if num.is_zero() {
            return Ok(Self::zero(field));
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc_inv = den.leading().unwrap().inverse()?;
        Ok(RationalFunction { num: num.scale(&lc_inv), den: den.scale(&lc_inv) })
    }

    pub fn zero(field: Field) -> Self {
        RationalFunction { num: Polynomial::zero(field), den: Polynomial::one(field) }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldScalar) -> Self {
        let field = c.field();
        RationalFunction { num: Polynomial::constant(c), den: Polynomial::one(field) }
    }

    pub fn from_i64(field: Field, n: i64) -> Self {
        Self::constant(field.from_i64(n))
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let field = p.field();
        RationalFunction { num: p, den: Polynomial::one(field) }
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(field: Field, k: i64) -> Self {
        LaurentPolynomial::monomial(field.one(), k).to_rational_function()
    }

    pub fn field(&self) -> Field {
        self.num.field()
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a constant of `F`, if it is one.
    pub fn as_constant(&self) -> Option<FieldScalar> {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => Some(self.field().zero()),
            (Some(0), Some(0)) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.field());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn valuation(&self, at: Place) -> Valuation {
        valuation(self, at)
    }

    /// The element as a Laurent polynomial when its denominator is a power
    /// of `t`.
    pub fn to_laurent(&self) -> Option<LaurentPolynomial> {
        let (rest, k) = self.den.strip_t();
        if !rest.is_one() {
            return None;
        }
        Some(LaurentPolynomial::from_polynomial(&self.num).shift(-(k as i64)))
    }
}

/// Discrete valuation at `t = 0` or `t = infinity`; `+inf` for zero.
pub fn valuation(f: &RationalFunction, at: Place) -> Valuation {
    if f.is_zero() {
        return Valuation::Infinite;
    }
    let v = match at {
        Place::Zero => f.num.low_degree().unwrap() as i64 - f.den.low_degree().unwrap() as i64,
        Place::Infinity => f.den.degree().unwrap() as i64 - f.num.degree().unwrap() as i64,
    };
    Valuation::Finite(v)
}

/// Power-series coefficients `c_0 .. c_{n-1}` of `a / b`, `b(0) != 0`.
fn series(a: &Polynomial, b: &Polynomial, n: usize) -> Vec<FieldScalar> {
    let b0_inv = b.coeff(0).inverse().expect("series denominator has nonzero constant term");
    let mut out: Vec<FieldScalar> = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = a.coeff(k);
        for j in 1..=k.min(b.coeffs().len().saturating_sub(1)) {
            acc = &acc - &(&b.coeff(j) * &out[k - j]);
        }
        out.push(&acc * &b0_inv);
    }
    out
}

/// Jet of `f` at `at` in uniformizer exponents: coefficients of
/// `pi^e` for `valuation(f) <= e < upper`.
pub(crate) fn uniformizer_jet(f: &RationalFunction, at: Place, upper: i64) -> BTreeMap<i64, FieldScalar> {
    let mut out = BTreeMap::new();
    let Valuation::Finite(v) = valuation(f, at) else {
        return out;
    };
    if upper <= v {
        return out;
    }
    // Write f = pi^v * a / b with a(0), b(0) nonzero in the uniformizer
    // variable. At infinity this is the substitution s = 1/t.
    let (a, b) = match at {
        Place::Zero => (f.num.strip_t().0, f.den.strip_t().0),
        Place::Infinity => (f.num.reversed(), f.den.reversed()),
    };
    for (i, c) in series(&a, &b, (upper - v) as usize).into_iter().enumerate() {
        if !c.is_zero() {
            out.insert(v + i as i64, c);
        }
    }
    out
}

/// Truncated Laurent expansion of `f` at `at`, returned as an element of
/// `F[t, 1/t]`: the unique jet `g` supported on uniformizer exponents in
/// `[valuation(f), upper)` with `valuation(f - g) >= upper`.
pub fn laurent_expand(f: &RationalFunction, at: Place, upper: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_terms(
        f.field(),
        uniformizer_jet(f, at, upper).into_iter().map(|(e, c)| (at.t_exponent(e), c)),
    )
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.field());
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // A single monomial with positive coefficient reads unambiguously
        // to the left of '/'.
        let simple_num = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() == 1
            && !self.num.leading().is_some_and(FieldScalar::is_negative);
        if simple_num {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
