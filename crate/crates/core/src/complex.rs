//! The square complex `X = T_inf x T_0`: cells, chains over `F`, the
//! boundary map, lower stars and the labelled cells `C^n_{a,b}`, and the
//! triangle and square chains `Z_{2n}`, `B_{2n}`.
//!
//! Every edge is stored in its canonical orientation, from the vertex of
//! lower Busemann value to its parent. A square is the pair
//! (`T_inf` edge, `T_0` edge) and is positively oriented when its boundary
//! is
//!
//! ```text
//! d[e, f] = e x hi(f) - e x lo(f) - hi(e) x f + lo(e) x f
//! ```
//!
//! With this orientation `C^n_{a,b}` is a positive square and
//! `d C^n_{a,b} = e_a - f_b + (terms away from x_n)` where `e_a`, `f_b`
//! are the edges leaving `x_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::algebra::{Field, FieldScalar, LaurentPolynomial, Place};
use crate::error::{Error, Result};
use crate::group::{Matrix2, Unipotent};
use crate::tree::{act, busemann, line_vertex, neighbors, TreeEdge, TreeVertex};

/// A vertex `(x, y)` of `X` with `x` in `T_inf` and `y` in `T_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProductVertex {
    inf: TreeVertex,
    zero: TreeVertex,
}

impl ProductVertex {
    pub fn new(inf: TreeVertex, zero: TreeVertex) -> Result<Self> {
        if inf.place() != Place::Infinity || zero.place() != Place::Zero {
            return Err(Error::MixedPlaces(inf.place(), zero.place()));
        }
        Ok(ProductVertex { inf, zero })
    }

    pub fn inf(&self) -> &TreeVertex {
        &self.inf
    }

    pub fn zero(&self) -> &TreeVertex {
        &self.zero
    }

    pub fn field(&self) -> Field {
        self.inf.field()
    }

    /// The apartment point `(l_inf(a), l_0(b))`.
    pub fn apartment(a: i64, b: i64, field: Field) -> Self {
        ProductVertex { inf: line_vertex(Place::Infinity, a, field), zero: line_vertex(Place::Zero, b, field) }
    }

    pub fn act(&self, g: &Matrix2) -> Self {
        ProductVertex { inf: act(g, &self.inf), zero: act(g, &self.zero) }
    }

    pub fn in_apartment(&self) -> bool {
        self.inf.offset().is_zero() && self.zero.offset().is_zero()
    }
}

/// `x_n = (l_inf(n), l_0(n))`; `x_0` is the basepoint.
pub fn x_n(n: i64, field: Field) -> ProductVertex {
    ProductVertex::apartment(n, n, field)
}

/// `beta_rho(x, y) = beta_inf(x) + beta_0(y)`.
pub fn beta_rho(p: &ProductVertex) -> i64 {
    busemann(&p.inf) + busemann(&p.zero)
}

/// A cell of `X` in canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Vertex(ProductVertex),
    /// `T_inf` edge times a `T_0` vertex.
    EdgeInf { edge: TreeEdge, zero: TreeVertex },
    /// `T_inf` vertex times a `T_0` edge.
    EdgeZero { inf: TreeVertex, edge: TreeEdge },
    Square { inf: TreeEdge, zero: TreeEdge },
}

impl Cell {
    pub fn dimension(&self) -> usize {
        match self {
            Cell::Vertex(_) => 0,
            Cell::EdgeInf { .. } | Cell::EdgeZero { .. } => 1,
            Cell::Square { .. } => 2,
        }
    }

    pub fn field(&self) -> Field {
        self.vertices()[0].field()
    }

    /// The apartment square `l_inf([i, i+1]) x l_0([j, j+1])`.
    pub fn apartment_square(i: i64, j: i64, field: Field) -> Cell {
        Cell::Square {
            inf: TreeEdge::up_from(&line_vertex(Place::Infinity, i, field)),
            zero: TreeEdge::up_from(&line_vertex(Place::Zero, j, field)),
        }
    }

    pub fn vertices(&self) -> Vec<ProductVertex> {
        let pv = |a: &TreeVertex, b: &TreeVertex| ProductVertex { inf: a.clone(), zero: b.clone() };
        match self {
            Cell::Vertex(p) => vec![p.clone()],
            Cell::EdgeInf { edge, zero } => vec![pv(edge.lo(), zero), pv(edge.hi(), zero)],
            Cell::EdgeZero { inf, edge } => vec![pv(inf, edge.lo()), pv(inf, edge.hi())],
            Cell::Square { inf, zero } => vec![
                pv(inf.lo(), zero.lo()),
                pv(inf.hi(), zero.lo()),
                pv(inf.lo(), zero.hi()),
                pv(inf.hi(), zero.hi()),
            ],
        }
    }

    /// Closed range of `beta_inf` over the cell.
    pub fn beta_inf_range(&self) -> (i64, i64) {
        range(self.vertices().iter().map(|p| busemann(&p.inf)))
    }

    /// Closed range of `beta_0` over the cell.
    pub fn beta_zero_range(&self) -> (i64, i64) {
        range(self.vertices().iter().map(|p| busemann(&p.zero)))
    }

    pub fn min_beta_rho(&self) -> i64 {
        self.vertices().iter().map(beta_rho).min().unwrap()
    }

    pub fn contains_vertex(&self, p: &ProductVertex) -> bool {
        self.vertices().contains(p)
    }

    /// Image under `g`, with the sign relating the transported orientation
    /// to the canonical one.
    pub fn act(&self, g: &Matrix2) -> (Cell, i8) {
        match self {
            Cell::Vertex(p) => (Cell::Vertex(p.act(g)), 1),
            Cell::EdgeInf { edge, zero } => {
                let (edge, s) = edge.act(g);
                (Cell::EdgeInf { edge, zero: act(g, zero) }, s)
            }
            Cell::EdgeZero { inf, edge } => {
                let (edge, s) = edge.act(g);
                (Cell::EdgeZero { inf: act(g, inf), edge }, s)
            }
            Cell::Square { inf, zero } => {
                let (inf, s1) = inf.act(g);
                let (zero, s2) = zero.act(g);
                (Cell::Square { inf, zero }, s1 * s2)
            }
        }
    }

    /// Signed boundary cells.
    pub fn boundary(&self) -> Result<Vec<(Cell, i8)>> {
        Ok(match self {
            Cell::Vertex(_) => return Err(Error::BoundaryOfVertices),
            Cell::EdgeInf { edge, zero } => vec![
                (Cell::Vertex(ProductVertex { inf: edge.hi().clone(), zero: zero.clone() }), 1),
                (Cell::Vertex(ProductVertex { inf: edge.lo().clone(), zero: zero.clone() }), -1),
            ],
            Cell::EdgeZero { inf, edge } => vec![
                (Cell::Vertex(ProductVertex { inf: inf.clone(), zero: edge.hi().clone() }), 1),
                (Cell::Vertex(ProductVertex { inf: inf.clone(), zero: edge.lo().clone() }), -1),
            ],
            Cell::Square { inf, zero } => vec![
                (Cell::EdgeInf { edge: inf.clone(), zero: zero.hi().clone() }, 1),
                (Cell::EdgeInf { edge: inf.clone(), zero: zero.lo().clone() }, -1),
                (Cell::EdgeZero { inf: inf.hi().clone(), edge: zero.clone() }, -1),
                (Cell::EdgeZero { inf: inf.lo().clone(), edge: zero.clone() }, 1),
            ],
        })
    }
}

fn range(values: impl Iterator<Item = i64>) -> (i64, i64) {
    values.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &TreeVertex| x.to_string();
        match self {
            Cell::Vertex(p) => write!(f, "{} x {}", v(&p.inf), v(&p.zero)),
            Cell::EdgeInf { edge, zero } => write!(f, "[{} -> {}] x {}", v(edge.lo()), v(edge.hi()), v(zero)),
            Cell::EdgeZero { inf, edge } => write!(f, "{} x [{} -> {}]", v(inf), v(edge.lo()), v(edge.hi())),
            Cell::Square { inf, zero } => write!(
                f,
                "[{} -> {}] x [{} -> {}]",
                v(inf.lo()),
                v(inf.hi()),
                v(zero.lo()),
                v(zero.hi())
            ),
        }
    }
}

/// A cell with an explicit orientation sign relative to the canonical one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedCell {
    pub cell: Cell,
    pub sign: i8,
}

impl OrientedCell {
    pub fn to_chain(&self) -> Chain {
        let field = self.cell.field();
        let mut c = Chain::zero(field);
        c.push(self.cell.clone(), field.from_i64(self.sign as i64));
        c
    }
}

/// Finite `F`-linear combination of cells of a single dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    field: Field,
    terms: BTreeMap<Cell, FieldScalar>,
}

impl Chain {
    pub fn zero(field: Field) -> Self {
        Chain { field, terms: BTreeMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.terms.keys().next().map(Cell::dimension)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cell, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, cell: &Cell) -> FieldScalar {
        self.terms.get(cell).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Adds `coeff * cell`, rejecting a cell of the wrong dimension.
    pub fn add_cell(&mut self, cell: Cell, coeff: FieldScalar) -> Result<()> {
        if let Some(d) = self.dimension() {
            if d != cell.dimension() {
                return Err(Error::MixedDimensions(d, cell.dimension()));
            }
        }
        coeff.check_same_field(&self.field.zero())?;
        self.push(cell, coeff);
        Ok(())
    }

    fn push(&mut self, cell: Cell, coeff: FieldScalar) {
        if coeff.is_zero() {
            return;
        }
        let sum = match self.terms.get(&cell) {
            Some(old) => old + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            self.terms.remove(&cell);
        } else {
            self.terms.insert(cell, sum);
        }
    }

    pub fn scale(&self, c: &FieldScalar) -> Chain {
        let mut out = Chain::zero(self.field);
        for (cell, a) in &self.terms {
            out.push(cell.clone(), a * c);
        }
        out
    }

    /// The sub-chain on cells satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&Cell) -> bool) -> Chain {
        Chain {
            field: self.field,
            terms: self.terms.iter().filter(|(c, _)| keep(c)).map(|(c, a)| (c.clone(), a.clone())).collect(),
        }
    }

    pub fn boundary(&self) -> Result<Chain> {
        if self.dimension() == Some(0) {
            return Err(Error::BoundaryOfVertices);
        }
        let mut out = Chain::zero(self.field);
        for (cell, a) in &self.terms {
            for (face, s) in cell.boundary()? {
                out.push(face, if s > 0 { a.clone() } else { -a });
            }
        }
        Ok(out)
    }

    /// Cellwise image under `g` with orientation transport.
    pub fn act(&self, g: &Matrix2) -> Chain {
        let mut out = Chain::zero(self.field);
        for (cell, a) in &self.terms {
            let (image, s) = cell.act(g);
            out.push(image, if s > 0 { a.clone() } else { -a });
        }
        out
    }

    /// Closed `(beta_inf, beta_0)` ranges over the support, `None` if empty.
    pub fn beta_ranges(&self) -> Option<((i64, i64), (i64, i64))> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut a, mut b) = (first.beta_inf_range(), first.beta_zero_range());
        for c in it {
            let (x, y) = (c.beta_inf_range(), c.beta_zero_range());
            a = (a.0.min(x.0), a.1.max(x.1));
            b = (b.0.min(y.0), b.1.max(y.1));
        }
        Some((a, b))
    }
}

impl Add for &Chain {
    type Output = Chain;
    fn add(self, rhs: &Chain) -> Chain {
        let mut out = self.clone();
        for (cell, a) in &rhs.terms {
            out.push(cell.clone(), a.clone());
        }
        out
    }
}

impl Neg for &Chain {
    type Output = Chain;
    fn neg(self) -> Chain {
        self.scale(&-self.field.one())
    }
}

impl Sub for &Chain {
    type Output = Chain;
    fn sub(self, rhs: &Chain) -> Chain {
        self + &(-rhs)
    }
}

/// `act_chain(g, c)`: the translate `g c`.
pub fn act_chain(g: &Matrix2, c: &Chain) -> Chain {
    c.act(g)
}

/// `boundary(c)`; errors on 0-chains.
pub fn boundary(c: &Chain) -> Result<Chain> {
    c.boundary()
}

/// Membership in the lower star `S_n`: a square whose two edges run up
/// into `l_inf(n)` and `l_0(n)`, so both Busemann ranges are `[n-1, n]`.
pub fn in_star_down(cell: &Cell, n: i64) -> bool {
    match cell {
        Cell::Square { inf, zero } => {
            let field = inf.lo().field();
            inf.hi() == &line_vertex(Place::Infinity, n, field) && zero.hi() == &line_vertex(Place::Zero, n, field)
        }
        _ => false,
    }
}

/// All `|F|^2` squares of the lower star at `x_n`, built from tree
/// adjacency alone. Errors over `Q`.
pub fn star_down(n: i64, field: Field) -> Result<Vec<Cell>> {
    if n < 1 {
        return Err(Error::Precondition(format!("lower star needs n >= 1, got {n}")));
    }
    let downward = |at: Place| -> Result<Vec<TreeEdge>> {
        let top = line_vertex(at, n, field);
        Ok(neighbors(&top)?
            .into_iter()
            .filter(|v| busemann(v) == n - 1)
            .map(|v| TreeEdge::up_from(&v))
            .collect())
    };
    let (infs, zeros) = (downward(Place::Infinity)?, downward(Place::Zero)?);
    let mut out = Vec::with_capacity(infs.len() * zeros.len());
    for e in &infs {
        for f in &zeros {
            out.push(Cell::Square { inf: e.clone(), zero: f.clone() });
        }
    }
    Ok(out)
}

/// `C^n_{a,b} = (1, a t^-n + b t^n; 0, 1) C^n_{0,0}` where `C^n_{0,0}` is
/// the apartment square `[n-1, n]^2`.
pub fn make_c(n: i64, a: &FieldScalar, b: &FieldScalar) -> OrientedCell {
    let field = a.field();
    let base = Cell::apartment_square(n - 1, n - 1, field);
    let x = LaurentPolynomial::from_terms(field, [(-n, a.clone()), (n, b.clone())]);
    let (cell, sign) = base.act(&Unipotent::from_laurent(&x).matrix());
    OrientedCell { cell, sign }
}

/// Inverse of [`make_c`]: `a` is the `T_0` offset coefficient of `pi^-n`,
/// `b` the `T_inf` one.
pub fn cell_coords(cell: &Cell, n: i64) -> Result<(FieldScalar, FieldScalar)> {
    match cell {
        Cell::Square { inf, zero } if in_star_down(cell, n) => {
            Ok((zero.lo().offset_coeff(-n), inf.lo().offset_coeff(-n)))
        }
        _ => Err(Error::NotInStarDown(n)),
    }
}

/// Which corner the triangle `Z_{2n}` is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriangleVariant {
    /// Right angle at `x_{2n}`, hypotenuse on `beta_rho = 0`. This is the
    /// variant for which `B_{2n}` meets the lower star at `x_{2n}` in the
    /// four-cell pattern.
    #[default]
    CornerAtX2n,
    /// Vertices `x_n`, `(l_inf(n), l_0(-n))`, `(l_inf(-n), l_0(n))`.
    CornerAtXn,
}

/// The apartment triangle `Z_{2n}`: squares `[i, i+1] x [j, j+1]` with
/// `i, j <= top - 1` and `i + j >= 0`, all with coefficient `+1`.
pub fn triangle_z(n: i64, variant: TriangleVariant, field: Field) -> Chain {
    let top = match variant {
        TriangleVariant::CornerAtX2n => 2 * n,
        TriangleVariant::CornerAtXn => n,
    };
    let mut out = Chain::zero(field);
    for i in -top..top {
        for j in -i..top {
            out.push(Cell::apartment_square(i, j, field), field.one());
        }
    }
    out
}

/// `B_{2n} = Z - u(t^2n) Z - u(t^-2n) Z + u(t^-2n + t^2n) Z`.
pub fn square_b(n: i64, variant: TriangleVariant, field: Field) -> Chain {
    let z = triangle_z(n, variant, field);
    let t = |k: i64| LaurentPolynomial::monomial(field.one(), k);
    let u = |x: LaurentPolynomial| Unipotent::from_laurent(&x).matrix();
    let hi = z.act(&u(t(2 * n)));
    let lo = z.act(&u(t(-2 * n)));
    let both = z.act(&u(&t(-2 * n) + &t(2 * n)));
    &(&(&z - &hi) - &lo) + &both
}

/// The horoball `beta_rho >= threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HoroballSpec {
    pub threshold: i64,
}

pub fn in_horoball(p: &ProductVertex, h: HoroballSpec) -> bool {
    beta_rho(p) >= h.threshold
}

/// A cell lies in the horoball when all of its vertices do.
pub fn cell_in_horoball(cell: &Cell, h: HoroballSpec) -> bool {
    cell.min_beta_rho() >= h.threshold
}
