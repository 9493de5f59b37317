//! `GL2` / `SL2` over `F(t)` and the subgroups used throughout: the
//! unipotents `U`, the windowed pieces `U_n` and `U^n`, powers of
//! `D = diag(t, 1/t)`, and finite word balls in `SL2(J[t, 1/t])`.

use std::collections::HashSet;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::algebra::{xgcd_poly, Field, FieldScalar, LaurentPolynomial, Place, Polynomial, RationalFunction};
use crate::error::{Error, Result};

/// Largest word radius accepted by [`gamma_ball`].
pub const GAMMA_BALL_CAP: usize = 4;

/// A 2x2 matrix `(a b; c d)` over `F(t)` with nonzero determinant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix2 {
    a: RationalFunction,
    b: RationalFunction,
    c: RationalFunction,
    d: RationalFunction,
}

impl Matrix2 {
    pub fn new(a: RationalFunction, b: RationalFunction, c: RationalFunction, d: RationalFunction) -> Result<Self> {
        let m = Matrix2 { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    /// Like [`Matrix2::new`] but also requires determinant one.
    pub fn sl2(a: RationalFunction, b: RationalFunction, c: RationalFunction, d: RationalFunction) -> Result<Self> {
        let m = Self::new(a, b, c, d)?;
        let det = m.det();
        if !det.is_one() {
            return Err(Error::DeterminantNotOne(det.to_string()));
        }
        Ok(m)
    }

    pub fn identity(field: Field) -> Self {
        Self::diag(RationalFunction::one(field))
    }

    /// `diag(x, 1/x)`; panics for `x = 0`.
    pub fn diag(x: RationalFunction) -> Self {
        let field = x.field();
        let inv = x.inverse().expect("diagonal entry must be nonzero");
        Matrix2 { a: x, b: RationalFunction::zero(field), c: RationalFunction::zero(field), d: inv }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn a(&self) -> &RationalFunction {
        &self.a
    }
    pub fn b(&self) -> &RationalFunction {
        &self.b
    }
    pub fn c(&self) -> &RationalFunction {
        &self.c
    }
    pub fn d(&self) -> &RationalFunction {
        &self.d
    }

    pub fn entries(&self) -> [&RationalFunction; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn inverse(&self) -> Self {
        let det_inv = self.det().inverse().expect("matrices are nonsingular");
        Matrix2 {
            a: &self.d * &det_inv,
            b: &(-&self.b) * &det_inv,
            c: &(-&self.c) * &det_inv,
            d: &self.a * &det_inv,
        }
    }

    /// True for members of the upper triangular group `P`.
    pub fn is_upper_triangular(&self) -> bool {
        self.c.is_zero()
    }

    pub fn has_laurent_entries(&self) -> bool {
        self.entries().iter().all(|e| e.to_laurent().is_some())
    }

    /// Action on `P^1(F(t))`: `[x : y] -> [ax + by : cx + dy]`.
    pub fn apply_projective(&self, x: &RationalFunction, y: &RationalFunction) -> (RationalFunction, RationalFunction) {
        (&(&self.a * x) + &(&self.b * y), &(&self.c * x) + &(&self.d * y))
    }
}

impl Mul for &Matrix2 {
    type Output = Matrix2;
    fn mul(self, r: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &(&self.a * &r.a) + &(&self.b * &r.c),
            b: &(&self.a * &r.b) + &(&self.b * &r.d),
            c: &(&self.c * &r.a) + &(&self.d * &r.c),
            d: &(&self.c * &r.b) + &(&self.d * &r.d),
        }
    }
}

impl fmt::Display for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `(1 x; 0 1)`, identified with its corner entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Unipotent(pub RationalFunction);

impl Unipotent {
    pub fn identity(field: Field) -> Self {
        Unipotent(RationalFunction::zero(field))
    }

    pub fn from_laurent(x: &LaurentPolynomial) -> Self {
        Unipotent(x.to_rational_function())
    }

    pub fn entry(&self) -> &RationalFunction {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    pub fn matrix(&self) -> Matrix2 {
        let field = self.0.field();
        Matrix2 {
            a: RationalFunction::one(field),
            b: self.0.clone(),
            c: RationalFunction::zero(field),
            d: RationalFunction::one(field),
        }
    }

    pub fn compose(&self, other: &Unipotent) -> Unipotent {
        Unipotent(&self.0 + &other.0)
    }

    pub fn inverse(&self) -> Unipotent {
        Unipotent(-&self.0)
    }
}

/// The coefficient ring `J`: `Z` (units `+-1`) or `F_p` (units `F_p^*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    PrimeField(u64),
}

impl RingSpec {
    /// The fraction field `F` of `J`.
    pub fn field(self) -> Field {
        match self {
            RingSpec::Integers => Field::Rationals,
            RingSpec::PrimeField(p) => Field::Prime(p),
        }
    }

    pub fn validate(self, field: Field) -> Result<()> {
        if let RingSpec::PrimeField(p) = self {
            Field::prime(p)?;
        }
        if self.field() != field {
            return Err(Error::Config(format!("ring {self} needs field {}, got {field}", self.field())));
        }
        Ok(())
    }

    pub fn units(self) -> Vec<FieldScalar> {
        match self {
            RingSpec::Integers => vec![Field::Rationals.one(), Field::Rationals.from_i64(-1)],
            RingSpec::PrimeField(p) => (1..p).map(|v| Field::Prime(p).from_i64(v as i64)).collect(),
        }
    }

    /// One unit from each class `{u, -u}`: `diag(u, 1/u)` and
    /// `diag(-u, -1/u)` act identically on the trees.
    pub fn unit_classes(self) -> Vec<FieldScalar> {
        let mut seen: Vec<FieldScalar> = Vec::new();
        for u in self.units() {
            if !seen.iter().any(|s| *s == u || *s == -&u) {
                seen.push(u);
            }
        }
        seen
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// Membership in `U_n`: both valuations of the corner entry are `>= -n`.
/// The entry may be any element of `F(t)`.
pub fn in_u_n(u: &Unipotent, n: i64) -> bool {
    Place::BOTH.iter().all(|&at| u.0.valuation(at).at_least(-n))
}

/// Membership in `U^n`: a Laurent polynomial entry with no terms in
/// `[-n, n]`.
pub fn in_upper_window(u: &Unipotent, n: i64) -> bool {
    match u.0.to_laurent() {
        Some(x) => x.terms().all(|(e, _)| e < -n || e > n),
        None => false,
    }
}

/// Splits a unipotent with Laurent entry as `inner * outer`, `inner` in
/// `U_n` (terms with exponents in `[-n, n]`) and `outer` in `U^n`.
pub fn split_window(u: &Unipotent, n: i64) -> Result<(Unipotent, Unipotent)> {
    let x = u.0.to_laurent().ok_or_else(|| Error::NotLaurent(u.0.to_string()))?;
    let inner = x.filter(|e| (-n..=n).contains(&e));
    let outer = x.filter(|e| e < -n || e > n);
    Ok((Unipotent::from_laurent(&inner), Unipotent::from_laurent(&outer)))
}

/// `diag(t^k, t^-k)`.
pub fn d_power(field: Field, k: i64) -> Matrix2 {
    Matrix2::diag(RationalFunction::t_pow(field, k))
}

/// A matrix in `SL2(F[t, 1/t])` whose first column is proportional to
/// `(x, y)`, so it carries `[1 : 0]` to `[x : y]`.
pub fn p1_witness(x: &LaurentPolynomial, y: &LaurentPolynomial) -> Result<Matrix2> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::Precondition("projective point [0 : 0]".into()));
    }
    let field = x.field();
    // Clear denominators, then divide out the gcd in F[t].
    let shift = [x.min_exponent(), y.min_exponent()].into_iter().flatten().min().unwrap();
    let to_poly = |p: &LaurentPolynomial| {
        let p = p.shift(-shift);
        let deg = p.max_exponent().unwrap_or(0).max(0) as usize;
        Polynomial::new(field, (0..=deg).map(|i| p.coeff(i as i64)).collect())
    };
    let (px, py) = (to_poly(x), to_poly(y));
    let g = px.gcd(&py)?;
    let (x0, y0) = (px.div_exact(&g)?, py.div_exact(&g)?);
    let (one, u, v) = xgcd_poly(&x0, &y0)?;
    debug_assert!(one.is_one());
    Matrix2::sl2(
        RationalFunction::from_polynomial(x0),
        RationalFunction::from_polynomial(-&v),
        RationalFunction::from_polynomial(y0),
        RationalFunction::from_polynomial(u),
    )
}

/// The fixed generating set used for word balls, in enumeration order:
/// `(1 e; 0 1)` and `(1 0; e 1)` for `e` in `1, -1, t, -t, 1/t, -1/t`,
/// then `D` and `1/D`.
pub fn generators(ring: RingSpec) -> Vec<Matrix2> {
    let field = ring.field();
    let entries: Vec<RationalFunction> = [0i64, 1, -1]
        .iter()
        .flat_map(|&k| {
            let m = RationalFunction::t_pow(field, k);
            [m.clone(), -&m]
        })
        .collect();
    let mut gens = Vec::new();
    for e in &entries {
        gens.push(Unipotent(e.clone()).matrix());
        gens.push(Matrix2 {
            a: RationalFunction::one(field),
            b: RationalFunction::zero(field),
            c: e.clone(),
            d: RationalFunction::one(field),
        });
    }
    gens.push(d_power(field, 1));
    gens.push(d_power(field, -1));
    gens
}

/// All products of at most `radius` generators, deduplicated, in
/// breadth-first order.
pub fn gamma_ball(ring: RingSpec, radius: usize) -> Result<Vec<Matrix2>> {
    gamma_ball_capped(ring, radius, GAMMA_BALL_CAP)
}

pub fn gamma_ball_capped(ring: RingSpec, radius: usize, cap: usize) -> Result<Vec<Matrix2>> {
    if radius > cap {
        return Err(Error::RadiusOverCap { radius, cap });
    }
    let gens = generators(ring);
    let identity = Matrix2::identity(ring.field());
    let mut seen: HashSet<Matrix2> = HashSet::from([identity.clone()]);
    let mut ball = vec![identity.clone()];
    let mut frontier = vec![identity];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let m = w * g;
                if seen.insert(m.clone()) {
                    next.push(m);
                }
            }
        }
        ball.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(ball)
}
