//! The Bruhat-Tits tree of `SL2` at one place of `F(t)`.
//!
//! A vertex is the homothety class of the lattice spanned by the columns
//! `(pi^m, 0)` and `(c, 1)`, written `(m, c)` with the offset `c` reduced
//! modulo `pi^m`. Equivalently `(m, c)` is the ball `{x : v(x - c) >= m}`
//! of the completed field; two vertices are adjacent when one ball is a
//! maximal sub-ball of the other. The line `l(s) = (-s, 0)` runs towards
//! the end fixed by the unipotents and `busemann(m, c) = -m`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::algebra::{uniformizer_jet, Field, FieldScalar, LaurentPolynomial, Place, RationalFunction, Valuation};
use crate::error::{Error, Result};
use crate::group::Matrix2;

/// Canonical coordinates `(place, level, offset)` of a tree vertex.
///
/// The offset is a Laurent polynomial in the uniformizer `pi` (so in `t`
/// at `Zero` and in `1/t` at `Infinity`) supported strictly below `level`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    place: Place,
    level: i64,
    offset: LaurentPolynomial,
}

impl TreeVertex {
    /// Builds a vertex, reducing `offset` modulo `pi^level`.
    pub fn new(place: Place, level: i64, offset: LaurentPolynomial) -> Self {
        TreeVertex { place, level, offset: offset.filter(|e| e < level) }
    }

    /// The vertex with stabilizer `SL2` of the polynomial ring, `l(0)`.
    pub fn base(place: Place, field: Field) -> Self {
        Self::new(place, 0, LaurentPolynomial::zero(field))
    }

    pub fn place(&self) -> Place {
        self.place
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn field(&self) -> Field {
        self.offset.field()
    }

    /// Offset coefficients indexed by uniformizer exponent.
    pub fn offset(&self) -> &LaurentPolynomial {
        &self.offset
    }

    /// Coefficient of `pi^e` in the offset.
    pub fn offset_coeff(&self, e: i64) -> FieldScalar {
        self.offset.coeff(e)
    }

    /// The offset as an element of `F[t, 1/t]`.
    pub fn offset_in_t(&self) -> LaurentPolynomial {
        match self.place {
            Place::Zero => self.offset.clone(),
            Place::Infinity => self.offset.mirrored(),
        }
    }

    /// Valuation of the reduced offset, `+inf` when it is zero.
    pub fn offset_valuation(&self) -> Valuation {
        self.offset.valuation(Place::Zero)
    }

    /// A matrix whose column lattice represents this vertex.
    pub fn lattice_matrix(&self) -> Matrix2 {
        let field = self.field();
        let pi_m = RationalFunction::t_pow(field, self.place.t_exponent(self.level));
        Matrix2::new(
            pi_m,
            self.offset_in_t().to_rational_function(),
            RationalFunction::zero(field),
            RationalFunction::one(field),
        )
        .expect("lattice matrices are nonsingular")
    }

    pub fn parent(&self) -> TreeVertex {
        Self::new(self.place, self.level - 1, self.offset.clone())
    }

    /// The child `(m + 1, c + a pi^m)`.
    pub fn child(&self, a: &FieldScalar) -> TreeVertex {
        let mut offset = self.offset.clone();
        offset.add_term(self.level, a.clone());
        TreeVertex { place: self.place, level: self.level + 1, offset }
    }
}

/// `(m, c)` with the offset written in `t`.
impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.offset_in_t())
    }
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("nonzero element has finite valuation")
}

/// The vertex of the homothety class of the column lattice of `m`.
///
/// Column swap so the bottom-right entry has minimal valuation in the
/// bottom row, clear the bottom-left entry, scale; then the level is
/// `v(det) - 2 v(bottom)` and the offset is the jet of `top / bottom`.
pub fn canonicalize(m: &Matrix2, at: Place) -> Result<TreeVertex> {
    let det = m.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let (top, bottom) = if m.d().valuation(at) <= m.c().valuation(at) { (m.b(), m.d()) } else { (m.a(), m.c()) };
    let level = finite(det.valuation(at)) - 2 * finite(bottom.valuation(at));
    let ratio = top.div(bottom)?;
    let offset = LaurentPolynomial::from_terms(m.field(), uniformizer_jet(&ratio, at, level));
    Ok(TreeVertex { place: at, level, offset })
}

/// Left action of `g` on the tree.
pub fn act(g: &Matrix2, v: &TreeVertex) -> TreeVertex {
    canonicalize(&(g * &v.lattice_matrix()), v.place).expect("product of nonsingular matrices")
}

/// Combinatorial distance `m + m' - 2 min(m, m', v(c - c'))`.
pub fn distance(u: &TreeVertex, v: &TreeVertex) -> Result<u64> {
    if u.place != v.place {
        return Err(Error::MixedPlaces(u.place, v.place));
    }
    let diff = &u.offset - &v.offset;
    let mut meet = u.level.min(v.level);
    if let Some(e) = diff.min_exponent() {
        meet = meet.min(e);
    }
    Ok((u.level + v.level - 2 * meet) as u64)
}

/// The `|F| + 1` adjacent vertices: parent first, then children by residue.
pub fn neighbors(v: &TreeVertex) -> Result<Vec<TreeVertex>> {
    let elements = v.field().elements()?;
    let mut out = vec![v.parent()];
    out.extend(elements.iter().map(|a| v.child(a)));
    Ok(out)
}

/// `l(s) = (-s, 0)`, the line stabilized by the diagonal matrices.
pub fn line_vertex(at: Place, s: i64, field: Field) -> TreeVertex {
    TreeVertex::new(at, -s, LaurentPolynomial::zero(field))
}

/// Busemann function of the ray `l|[0, inf)`, normalized to `0` at `l(0)`.
pub fn busemann(v: &TreeVertex) -> i64 {
    -v.level
}

/// An edge oriented from `lo` to its parent `hi`, i.e. along increasing
/// Busemann value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeEdge {
    lo: TreeVertex,
    hi: TreeVertex,
}

impl TreeEdge {
    /// The edge from `v` up to its parent.
    pub fn up_from(v: &TreeVertex) -> TreeEdge {
        TreeEdge { lo: v.clone(), hi: v.parent() }
    }

    /// The canonical edge through two adjacent vertices, with `+1` when
    /// `from -> to` agrees with the canonical orientation and `-1` otherwise.
    pub fn oriented(from: &TreeVertex, to: &TreeVertex) -> Result<(TreeEdge, i8)> {
        if distance(from, to)? != 1 {
            return Err(Error::Format("edge endpoints are not adjacent".into()));
        }
        if from.level > to.level {
            Ok((TreeEdge { lo: from.clone(), hi: to.clone() }, 1))
        } else {
            Ok((TreeEdge { lo: to.clone(), hi: from.clone() }, -1))
        }
    }

    pub fn lo(&self) -> &TreeVertex {
        &self.lo
    }

    pub fn hi(&self) -> &TreeVertex {
        &self.hi
    }

    pub fn place(&self) -> Place {
        self.lo.place
    }

    /// Image under `g` in canonical orientation, with the orientation sign.
    pub fn act(&self, g: &Matrix2) -> (TreeEdge, i8) {
        let (lo, hi) = (act(g, &self.lo), act(g, &self.hi));
        TreeEdge::oriented(&lo, &hi).expect("isometries preserve adjacency")
    }
}

/// Breadth-first ball around `center` with the BFS distance of each vertex.
pub fn bfs_ball(center: &TreeVertex, radius: u64) -> Result<BTreeMap<TreeVertex, u64>> {
    let mut seen = BTreeMap::from([(center.clone(), 0)]);
    let mut queue = VecDeque::from([center.clone()]);
    while let Some(v) = queue.pop_front() {
        let d = seen[&v];
        if d == radius {
            continue;
        }
        for w in neighbors(&v)? {
            if !seen.contains_key(&w) {
                seen.insert(w.clone(), d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational_function;
    use crate::group::d_power;

    fn rf(s: &str) -> RationalFunction {
        parse_rational_function(s, Field::Rationals).unwrap()
    }

    fn mat(a: &str, b: &str, c: &str, d: &str) -> Matrix2 {
        Matrix2::new(rf(a), rf(b), rf(c), rf(d)).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let q = Field::Rationals;
        let base = canonicalize(&Matrix2::identity(q), Place::Zero).unwrap();
        assert_eq!(base, TreeVertex::base(Place::Zero, q));
        let v = canonicalize(&d_power(q, 1), Place::Zero).unwrap();
        assert_eq!((v.level(), v.offset().is_zero()), (2, true));
        let v = canonicalize(&mat("t", "1", "0", "1"), Place::Zero).unwrap();
        assert_eq!(v.level(), 1);
        assert_eq!(v.offset(), &LaurentPolynomial::monomial(q.one(), 0));
    }

    #[test]
    fn canonical_form_ignores_unimodular_change() {
        let m = mat("t^2 + 1", "t/(t-3)", "2*t^-1", "t^3 - t");
        let k = mat("1 + t", "t", "1", "1");
        for at in Place::BOTH {
            let scaled = Matrix2::new(
                m.a() * &rf("t^3 - 5"),
                m.b() * &rf("t^3 - 5"),
                m.c() * &rf("t^3 - 5"),
                m.d() * &rf("t^3 - 5"),
            )
            .unwrap();
            assert_eq!(canonicalize(&m, at).unwrap(), canonicalize(&scaled, at).unwrap());
            if at == Place::Zero {
                // k has entries in F[t] and unit determinant at 0.
                assert_eq!(canonicalize(&m, at).unwrap(), canonicalize(&(&m * &k), at).unwrap());
            }
        }
    }

    #[test]
    fn d_moves_along_the_line() {
        let q = Field::Rationals;
        let d = d_power(q, 1);
        for s in -3..=3 {
            assert_eq!(act(&d, &line_vertex(Place::Zero, s, q)), line_vertex(Place::Zero, s - 2, q));
            assert_eq!(act(&d, &line_vertex(Place::Infinity, s, q)), line_vertex(Place::Infinity, s + 2, q));
        }
    }

    #[test]
    fn unipotents_translate_offsets() {
        let q = Field::Rationals;
        let v = TreeVertex::new(Place::Zero, 2, LaurentPolynomial::monomial(q.from_i64(3), -1));
        let u = mat("1", "t^-2 + 5 + t^7", "0", "1");
        let w = act(&u, &v);
        let expect = LaurentPolynomial::from_terms(q, [(-2, q.one()), (-1, q.from_i64(3)), (0, q.from_i64(5))]);
        assert_eq!(w, TreeVertex::new(Place::Zero, 2, expect));
    }

    #[test]
    fn distance_examples() {
        let f2 = Field::Prime(2);
        let base = TreeVertex::base(Place::Zero, f2);
        assert_eq!(distance(&base, &base).unwrap(), 0);
        for k in -4..=4i64 {
            assert_eq!(distance(&base, &line_vertex(Place::Zero, k, f2)).unwrap(), k.unsigned_abs());
        }
        let a = TreeVertex::new(Place::Zero, 1, LaurentPolynomial::zero(f2));
        let b = TreeVertex::new(Place::Zero, 1, LaurentPolynomial::monomial(f2.one(), 0));
        assert_eq!(distance(&a, &b).unwrap(), 2);
        let inf = TreeVertex::base(Place::Infinity, f2);
        assert_eq!(distance(&base, &inf), Err(Error::MixedPlaces(Place::Zero, Place::Infinity)));
    }

    #[test]
    fn valence() {
        let base2 = TreeVertex::base(Place::Zero, Field::Prime(2));
        let n = neighbors(&base2).unwrap();
        assert_eq!(n.len(), 3);
        assert!(!n.contains(&base2));
        for (i, x) in n.iter().enumerate() {
            for y in &n[i + 1..] {
                assert_eq!(distance(x, y).unwrap(), 2);
            }
        }
        let v5 = TreeVertex::new(Place::Infinity, 3, LaurentPolynomial::monomial(Field::Prime(5).one(), 1));
        assert_eq!(neighbors(&v5).unwrap().len(), 6);
        assert_eq!(neighbors(&TreeVertex::base(Place::Zero, Field::Rationals)), Err(Error::InfiniteField));
    }

    #[test]
    fn line_and_busemann() {
        let q = Field::Rationals;
        assert_eq!(line_vertex(Place::Zero, 0, q), TreeVertex::base(Place::Zero, q));
        for s in -4..4 {
            let (a, b) = (line_vertex(Place::Zero, s, q), line_vertex(Place::Zero, s + 1, q));
            assert_eq!(distance(&a, &b).unwrap(), 1);
            assert_eq!(busemann(&a), s);
        }
        let x = TreeVertex::new(Place::Infinity, 1, LaurentPolynomial::monomial(q.from_i64(7), -2));
        assert_eq!(busemann(&act(&d_power(q, 1), &x)), busemann(&x) + 2);
        let y = TreeVertex::new(Place::Zero, -1, LaurentPolynomial::monomial(q.from_i64(7), -2));
        assert_eq!(busemann(&act(&d_power(q, 1), &y)), busemann(&y) - 2);
    }

    #[test]
    fn edge_orientation() {
        let q = Field::Rationals;
        let (a, b) = (line_vertex(Place::Zero, 0, q), line_vertex(Place::Zero, 1, q));
        let (e, s) = TreeEdge::oriented(&a, &b).unwrap();
        assert_eq!((e.lo(), e.hi(), s), (&a, &b, 1));
        let (e2, s2) = TreeEdge::oriented(&b, &a).unwrap();
        assert_eq!((e2, s2), (e, -1));
        assert!(TreeEdge::oriented(&a, &line_vertex(Place::Zero, 2, q)).is_err());
    }
}
