use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Field, FieldScalar};
use crate::error::{Error, Result};

/// Dense univariate polynomial in `t`; `coeffs[i]` multiplies `t^i`.
///
/// Trailing zeros are never stored, so the zero polynomial has no
/// coefficients and `degree()` returns `None` for it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldScalar>,
}

impl Polynomial {
    pub fn new(field: Field, mut coeffs: Vec<FieldScalar>) -> Self {
        while coeffs.last().is_some_and(FieldScalar::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Polynomial { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Polynomial { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldScalar) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: FieldScalar, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    pub fn t(field: Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn from_i64s(field: Field, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldScalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldScalar> {
        self.coeffs.last()
    }

    /// Exponent of the lowest nonzero term, `None` for zero.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &FieldScalar) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.field, coeffs)
    }

    /// Drop the factor `t^low_degree`.
    pub fn strip_t(&self) -> (Self, usize) {
        match self.low_degree() {
            None => (self.clone(), 0),
            Some(k) => (Self::new(self.field, self.coeffs[k..].to_vec()), k),
        }
    }

    /// `t^deg * p(1/t)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(self.field, coeffs)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inverse().expect("leading coefficient is nonzero")),
        }
    }

    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = divisor.leading().unwrap().inverse()?;
        let mut rem = self.coeffs.clone();
        let n = match self.degree() {
            Some(n) if n >= d => n,
            _ => return Ok((Polynomial::zero(self.field), self.clone())),
        };
        let mut quot = vec![self.field.zero(); n - d + 1];
        for i in (0..=n - d).rev() {
            let c = &rem[i + d] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        rem.truncate(d);
        Ok((Polynomial::new(self.field, quot), Polynomial::new(self.field, rem)))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Precondition("polynomial division is not exact".into()))
        }
    }

    /// Monic gcd; `gcd(0, 0)` is an error.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        Ok(xgcd_poly(self, other)?.0)
    }

    pub fn eval(&self, x: &FieldScalar) -> FieldScalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

/// Extended Euclid in `F[t]`: returns `(g, u, v)` with `g = u*a + v*b` and
/// `g` monic.
pub fn xgcd_poly(a: &Polynomial, b: &Polynomial) -> Result<(Polynomial, Polynomial, Polynomial)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let field = a.field();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Polynomial::one(field), Polynomial::zero(field));
    let (mut t0, mut t1) = (Polynomial::zero(field), Polynomial::one(field));
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc_inv = r0.leading().unwrap().inverse()?;
    Ok((r0.scale(&lc_inv), s0.scale(&lc_inv), t0.scale(&lc_inv)))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(self.field, (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.field, out)
    }
}

/// Writes `term` for `c * t^k` with the sign pulled out; used by both
/// polynomial and Laurent printing.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a FieldScalar)>,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        let power = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        if k == 0 {
            write!(f, "{mag}")?;
        } else if mag.is_one() {
            write!(f, "{power}")?;
        } else {
            write!(f, "{mag}*{power}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c));
        write_terms(f, terms)
    }
}
