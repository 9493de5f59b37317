use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{write_terms, Polynomial};
use super::scalar::{Field, FieldScalar};
use super::{Place, RationalFunction, Valuation};

/// Finite sum `sum a_i t^i` over integer exponents.
///
/// Zero coefficients are never stored; the empty map is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    field: Field,
    terms: BTreeMap<i64, FieldScalar>,
}

impl LaurentPolynomial {
    pub fn zero(field: Field) -> Self {
        LaurentPolynomial { field, terms: BTreeMap::new() }
    }

    pub fn monomial(c: FieldScalar, e: i64) -> Self {
        let mut out = Self::zero(c.field());
        out.add_term(e, c);
        out
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (i64, FieldScalar)>) -> Self {
        let mut out = Self::zero(field);
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn from_polynomial(p: &Polynomial) -> Self {
        Self::from_terms(
            p.field(),
            p.coeffs().iter().enumerate().map(|(i, c)| (i as i64, c.clone())),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &FieldScalar)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> FieldScalar {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, e: i64, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&e) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Keep only the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> Self {
        LaurentPolynomial {
            field: self.field,
            terms: self.terms.iter().filter(|(e, _)| keep(**e)).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Substitute `t -> 1/t`.
    pub fn mirrored(&self) -> Self {
        LaurentPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        Self::from_terms(self.field, self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn valuation(&self, at: Place) -> Valuation {
        match at {
            Place::Zero => self.min_exponent().map_or(Valuation::Infinite, Valuation::Finite),
            Place::Infinity => self.max_exponent().map_or(Valuation::Infinite, |d| Valuation::Finite(-d)),
        }
    }

    pub fn to_rational_function(&self) -> RationalFunction {
        let Some(lo) = self.min_exponent() else {
            return RationalFunction::zero(self.field);
        };
        let hi = self.max_exponent().unwrap();
        let mut coeffs = vec![self.field.zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        let p = Polynomial::new(self.field, coeffs);
        if lo >= 0 {
            RationalFunction::from_polynomial(p.shift(lo as usize))
        } else {
            let den = Polynomial::monomial(self.field.one(), (-lo) as usize);
            RationalFunction::new(p, den).expect("monomial denominator is nonzero")
        }
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(self.field);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().rev().map(|(e, c)| (*e, c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let q = Field::Rationals;
        let mut p = LaurentPolynomial::monomial(q.one(), -2);
        p.add_term(-2, q.from_i64(-1));
        assert!(p.is_zero());
        assert_eq!(p.valuation(Place::Zero), Valuation::Infinite);
    }

    #[test]
    fn valuations_and_display() {
        let q = Field::Rationals;
        let p = LaurentPolynomial::from_terms(q, [(-2, q.one()), (0, q.one()), (3, q.one())]);
        assert_eq!(p.valuation(Place::Zero), Valuation::Finite(-2));
        assert_eq!(p.valuation(Place::Infinity), Valuation::Finite(-3));
        assert_eq!(p.to_string(), "t^3 + 1 + t^-2");
        let f = p.to_rational_function();
        assert_eq!(f.to_laurent(), Some(p));
    }
}
