//! The local cocycles `phi_n` on the lower star `S_n`, the reduction
//! `theta_n` onto `Y_n = U_n Sigma`, the summed cocycles `Phi_n`, and the
//! pairing of `Phi_n` against the squares `B_{2m}`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::algebra::{Field, FieldScalar, LaurentPolynomial, RationalFunction};
use crate::complex::{
    cell_coords, cell_in_horoball, make_c, square_b, Cell, Chain, HoroballSpec, ProductVertex, TriangleVariant,
};
use crate::error::{Error, Result};
use crate::group::{d_power, in_u_n, Matrix2, RingSpec, Unipotent};

/// Horoball threshold used when none is configured. It is the `R*` that the
/// word-ball search for `J = Z` reports: no orbit point of `x_0` has
/// `beta_rho > 0`.
pub const DEFAULT_THRESHOLD: i64 = 1;

/// Orientation convention for `phi_n`. `Reversed` negates every value and
/// exists so the verification suite can confirm it notices a sign error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Standard,
    Reversed,
}

/// `phi_n`: the sum of `coeff * a * b` over the cells `C^n_{a,b}` of the
/// chain. Other cells contribute nothing. Chain cells are canonical and
/// `make_c` cells are positive, so no further sign enters.
pub fn phi(n: i64, c: &Chain) -> FieldScalar {
    phi_oriented(n, c, Orientation::Standard)
}

pub fn phi_oriented(n: i64, c: &Chain, orientation: Orientation) -> FieldScalar {
    let mut total = c.field().zero();
    for (cell, coeff) in c.iter() {
        if let Ok((a, b)) = cell_coords(cell, n) {
            total = &total + &(&(coeff * &a) * &b);
        }
    }
    match orientation {
        Orientation::Standard => total,
        Orientation::Reversed => -total,
    }
}

/// `C^n_{x,y} - C^n_{x',y} - C^n_{x,y'} + C^n_{x',y'}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicCycle {
    pub n: i64,
    pub x: FieldScalar,
    pub y: FieldScalar,
    pub x2: FieldScalar,
    pub y2: FieldScalar,
}

impl BasicCycle {
    pub fn new(n: i64, x: FieldScalar, y: FieldScalar, x2: FieldScalar, y2: FieldScalar) -> Result<Self> {
        if x == x2 && y == y2 {
            return Err(Error::Precondition("basic cycle with x = x' and y = y'".into()));
        }
        Ok(BasicCycle { n, x, y, x2, y2 })
    }

    pub fn to_chain(&self) -> Chain {
        let field = self.x.field();
        let mut out = Chain::zero(field);
        let one = field.one();
        for (a, b, s) in [
            (&self.x, &self.y, one.clone()),
            (&self.x2, &self.y, -&one),
            (&self.x, &self.y2, -&one),
            (&self.x2, &self.y2, one.clone()),
        ] {
            let cell = make_c(self.n, a, b);
            out = &out + &cell.to_chain().scale(&s);
        }
        out
    }
}

/// Writes a relative cycle of the lower star at `x_n` as a combination of
/// basic cycles.
///
/// Repeatedly takes the least cell `C_{x,y}` of the support, the least
/// `x' != x` with `C_{x',y}` in the support and the least `y' != y` with
/// `C_{x,y'}` in the support, and subtracts the matching multiple of
/// the basic cycle `(x, y, x', y')`. The least support cell increases
/// strictly at each step and all cells stay inside the initial row and
/// column set, so the loop terminates.
pub fn decompose_basic(c: &Chain, n: i64) -> Result<Vec<(FieldScalar, BasicCycle)>> {
    let field = c.field();
    let mut grid: BTreeMap<(FieldScalar, FieldScalar), FieldScalar> = BTreeMap::new();
    for (cell, coeff) in c.iter() {
        grid.insert(cell_coords(cell, n)?, coeff.clone());
    }
    // d C_{a,b} = e_a - f_b near x_n, so the boundary coefficient of e_a is
    // the row sum and that of f_b is minus the column sum.
    let mut rows: BTreeMap<FieldScalar, FieldScalar> = BTreeMap::new();
    let mut cols: BTreeMap<FieldScalar, FieldScalar> = BTreeMap::new();
    for ((a, b), v) in &grid {
        let r = rows.entry(a.clone()).or_insert_with(|| field.zero());
        *r = &*r + v;
        let s = cols.entry(b.clone()).or_insert_with(|| field.zero());
        *s = &*s - v;
    }
    if let Some((a, s)) = rows.iter().find(|(_, s)| !s.is_zero()) {
        return Err(Error::NotACycle(format!("edge e_a with a = {a}"), s.to_string()));
    }
    if let Some((b, s)) = cols.iter().find(|(_, s)| !s.is_zero()) {
        return Err(Error::NotACycle(format!("edge f_b with b = {b}"), s.to_string()));
    }

    let mut out = Vec::new();
    while let Some(((x, y), alpha)) = grid.iter().next().map(|(k, v)| (k.clone(), v.clone())) {
        let x2 = grid.keys().find(|(a, b)| *b == y && *a != x).map(|k| k.0.clone()).expect("column sums vanish");
        let y2 = grid.keys().find(|(a, b)| *a == x && *b != y).map(|k| k.1.clone()).expect("row sums vanish");
        for (key, delta) in [
            ((x.clone(), y.clone()), -&alpha),
            ((x2.clone(), y.clone()), alpha.clone()),
            ((x.clone(), y2.clone()), alpha.clone()),
            ((x2.clone(), y2.clone()), -&alpha),
        ] {
            let v = &grid.get(&key).cloned().unwrap_or_else(|| field.zero()) + &delta;
            if v.is_zero() {
                grid.remove(&key);
            } else {
                grid.insert(key, v);
            }
        }
        out.push((alpha, BasicCycle { n, x, y, x2, y2 }));
    }
    Ok(out)
}

/// Reassembles `sum alpha_i B_i`.
pub fn assemble_basic(parts: &[(FieldScalar, BasicCycle)], field: Field) -> Chain {
    parts.iter().fold(Chain::zero(field), |acc, (alpha, b)| &acc + &b.to_chain().scale(alpha))
}

/// Membership in `Y_n`: both canonical offsets have valuation `>= -n`.
/// Exactly then some `x` in `F(t)` with `v_inf(x), v_0(x) >= -n` carries
/// the apartment point with the same Busemann values onto `p`.
pub fn in_y_n(n: i64, p: &ProductVertex) -> bool {
    p.inf().offset_valuation().at_least(-n) && p.zero().offset_valuation().at_least(-n)
}

/// For `p` in `Y_n`, an element `x` of `F(t)` with `(1 x; 0 1)` in `U_n`
/// mapping the apartment point `(l_inf(b_inf), l_0(b_0))` to `p`, built as
/// `(v - w) alpha_i + w` from the two offsets. Verified before returning.
pub fn y_n_witness(n: i64, p: &ProductVertex) -> Option<RationalFunction> {
    if !in_y_n(n, p) {
        return None;
    }
    let v = p.inf().offset_in_t().to_rational_function();
    let w = p.zero().offset_in_t().to_rational_function();
    let start = crate::verify::density_exponent(&v, &w, p.inf().level(), p.zero().level());
    let base = ProductVertex::apartment(-p.inf().level(), -p.zero().level(), p.field());
    (start..start + 64).find_map(|i| {
        let x = crate::verify::interpolate(&v, &w, i);
        let u = Unipotent(x.clone());
        (in_u_n(&u, n) && base.act(&u.matrix()) == *p).then_some(x)
    })
}

/// The `U^n` element used by `theta_n` at `p`, as a Laurent polynomial with
/// no terms in `[-n, n]`.
///
/// A term `t^e` moves the `T_0` offset when `e < m_0` and the `T_inf`
/// offset when `e > -m_inf`. For each exponent outside `[-n, n]` one of the
/// two coordinates is cancelled: below `-n` the `T_0` one when it moves,
/// above `n` the `T_inf` one when it moves, and otherwise whichever does
/// move. This kills the tails that keep `p` out of `Y_n` and fixes every
/// remaining `U^n` degree of freedom, so the result is constant on orbits.
pub fn theta_reducer(n: i64, p: &ProductVertex) -> LaurentPolynomial {
    let (m0, m1) = (p.zero().level(), p.inf().level());
    let c0 = p.zero().offset_in_t();
    let c1 = p.inf().offset_in_t();
    let exps: BTreeSet<i64> =
        c0.terms().chain(c1.terms()).map(|(e, _)| e).filter(|e| *e < -n || *e > n).collect();
    let mut y = LaurentPolynomial::zero(p.field());
    for e in exps {
        let (hits0, hits1) = (e < m0, e > -m1);
        let use_zero = if e < -n { hits0 } else { hits0 && !hits1 };
        let value = if use_zero {
            c0.coeff(e)
        } else if hits1 {
            c1.coeff(e)
        } else {
            continue;
        };
        y.add_term(e, -value);
    }
    y
}

/// `theta_n(p)`: the reducer `u` in `U^n` and `q = u p` in `Y_n`.
pub fn reduce_theta(n: i64, p: &ProductVertex) -> (Unipotent, ProductVertex) {
    let u = Unipotent::from_laurent(&theta_reducer(n, p));
    let q = p.act(&u.matrix());
    (u, q)
}

/// `theta_n` on a cell: the reducer of the corner with the finest
/// offsets, which every other vertex refines, is applied to the whole cell
/// and all resulting vertices are checked to lie in `Y_n`.
pub fn theta_cell(n: i64, cell: &Cell) -> Result<(Cell, i8)> {
    let corner = &cell.vertices()[0];
    let u = Unipotent::from_laurent(&theta_reducer(n, corner)).matrix();
    let (image, sign) = cell.act(&u);
    if !image.vertices().iter().all(|p| in_y_n(n, p)) {
        return Err(Error::IncompatibleReducers);
    }
    Ok((image, sign))
}

/// Cellwise `theta_n` with orientation transport.
pub fn theta_chain(n: i64, c: &Chain) -> Result<Chain> {
    let mut out = Chain::zero(c.field());
    for (cell, coeff) in c.iter() {
        let (image, sign) = theta_cell(n, cell)?;
        let coeff = if sign > 0 { coeff.clone() } else { -coeff };
        out.add_cell(image, coeff)?;
    }
    Ok(out)
}

/// The coset representatives `diag(u, 1/u) D^k` that can carry part of a
/// chain into the lower star at `x_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetWindow {
    /// Inclusive; empty when `k_min > k_max`.
    pub k_min: i64,
    pub k_max: i64,
    /// One unit from each class `{u, -u}`.
    pub units: Vec<FieldScalar>,
}

impl CosetWindow {
    pub fn is_empty(&self) -> bool {
        self.k_min > self.k_max || self.units.is_empty()
    }

    pub fn len(&self) -> usize {
        if self.k_min > self.k_max {
            0
        } else {
            (self.k_max - self.k_min + 1) as usize * self.units.len()
        }
    }

    pub fn ks(&self) -> std::ops::RangeInclusive<i64> {
        self.k_min..=self.k_max
    }

    /// `(u, k, diag(u, 1/u) D^k)` in window order.
    pub fn representatives(&self) -> Vec<(FieldScalar, i64, Matrix2)> {
        let mut out = Vec::with_capacity(self.len());
        for u in &self.units {
            let a = Matrix2::diag(RationalFunction::constant(u.clone()));
            for k in self.ks() {
                out.push((u.clone(), k, &a * &d_power(u.field(), k)));
            }
        }
        out
    }
}

/// The `k` for which `D^k` moves the Busemann ranges of `c` over
/// `[n-1, n]` in both factors. `D` adds 2 to `beta_inf` and subtracts 2
/// from `beta_0`; a 2-cell of the lower star spans `[n-1, n]` in both.
pub fn coset_window_for(n: i64, c: &Chain, ring: RingSpec) -> Result<CosetWindow> {
    ring.validate(c.field())?;
    let units = ring.unit_classes();
    let Some(((i_lo, i_hi), (z_lo, z_hi))) = c.beta_ranges() else {
        return Ok(CosetWindow { k_min: 1, k_max: 0, units });
    };
    // i_lo + 2k <= n - 1, i_hi + 2k >= n, z_lo - 2k <= n - 1, z_hi - 2k >= n
    let k_min = div_ceil(n - i_hi, 2).max(div_ceil(z_lo - n + 1, 2));
    let k_max = (n - 1 - i_lo).div_euclid(2).min((z_hi - n).div_euclid(2));
    Ok(CosetWindow { k_min, k_max, units })
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Evaluation options shared by `Phi_n` and the pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiOptions {
    /// Cells with a vertex below this `beta_rho` are dropped.
    pub threshold: i64,
    pub orientation: Orientation,
    pub variant: TriangleVariant,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions { threshold: DEFAULT_THRESHOLD, orientation: Orientation::Standard, variant: TriangleVariant::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiEvaluation {
    pub value: FieldScalar,
    pub window: CosetWindow,
    pub dropped: usize,
    pub warnings: Vec<String>,
}

/// One coset term `phi_n(theta_n(g c))`, restricted to the lower star.
pub fn coset_term(n: i64, c: &Chain, g: &Matrix2) -> Result<FieldScalar> {
    coset_term_oriented(n, c, g, Orientation::Standard)
}

pub fn coset_term_oriented(n: i64, c: &Chain, g: &Matrix2, orientation: Orientation) -> Result<FieldScalar> {
    let mut moved = Chain::zero(c.field());
    for (cell, coeff) in c.iter() {
        let (image, sign) = cell.act(g);
        if spans_star(&image, n) {
            moved.add_cell(image, if sign > 0 { coeff.clone() } else { -coeff })?;
        }
    }
    Ok(phi_oriented(n, &theta_chain(n, &moved)?, orientation))
}

/// `theta_n` keeps Busemann values, so only squares over `[n-1, n]^2` can
/// land in the lower star.
fn spans_star(cell: &Cell, n: i64) -> bool {
    matches!(cell, Cell::Square { .. })
        && cell.beta_inf_range() == (n - 1, n)
        && cell.beta_zero_range() == (n - 1, n)
}

/// `Phi_n(c)` with the default options.
pub fn big_phi(n: i64, c: &Chain, ring: RingSpec) -> Result<FieldScalar> {
    Ok(big_phi_with(n, c, ring, &PhiOptions::default())?.value)
}

/// `Phi_n(c)`: the sum of coset terms over the window of `c`, after
/// dropping the cells that leave the horoball.
pub fn big_phi_with(n: i64, c: &Chain, ring: RingSpec, opts: &PhiOptions) -> Result<PhiEvaluation> {
    ring.validate(c.field())?;
    let horoball = HoroballSpec { threshold: opts.threshold };
    let kept = c.restrict(|cell| cell_in_horoball(cell, horoball));
    let dropped = c.len() - kept.len();
    let mut warnings = Vec::new();
    if dropped > 0 {
        warnings.push(format!("{dropped} cells below beta_rho = {} excluded from the coset sum", opts.threshold));
    }
    let window = coset_window_for(n, &kept, ring)?;
    let mut value = c.field().zero();
    for (_, k, g) in window.representatives() {
        // Pre-select by Busemann arithmetic before acting.
        let candidates = kept.restrict(|cell| {
            let (i, z) = (cell.beta_inf_range(), cell.beta_zero_range());
            (i.0 + 2 * k, i.1 + 2 * k) == (n - 1, n) && (z.0 - 2 * k, z.1 - 2 * k) == (n - 1, n)
        });
        if !candidates.is_empty() {
            value = &value + &coset_term_oriented(n, &candidates, &g, opts.orientation)?;
        }
    }
    Ok(PhiEvaluation { value, window, dropped, warnings })
}

/// Values of `Phi_{indices[i]}` on `B_{indices[j]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingReport {
    pub indices: Vec<i64>,
    pub matrix: Vec<Vec<FieldScalar>>,
    /// Unit diagonal and `M[i][j] = 0` whenever `indices[i] > indices[j]`.
    pub triangular: bool,
    pub rank: usize,
    pub warnings: Vec<String>,
}

pub fn pairing_matrix(indices: &[i64], ring: RingSpec) -> Result<PairingReport> {
    pairing_matrix_with(indices, ring, &PhiOptions::default())
}

/// `M[i][j] = Phi_{indices[i]}(B_{indices[j]})`. Entries are independent
/// and evaluated in parallel.
pub fn pairing_matrix_with(indices: &[i64], ring: RingSpec, opts: &PhiOptions) -> Result<PairingReport> {
    if indices.is_empty() {
        return Err(Error::Precondition("pairing needs at least one index".into()));
    }
    if indices.iter().any(|k| *k < 2 || k % 2 != 0) {
        return Err(Error::Precondition(format!("indices must be even and >= 2, got {indices:?}")));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition(format!("indices must be strictly ascending, got {indices:?}")));
    }
    let field = ring.field();
    ring.validate(field)?;
    let mut warnings = Vec::new();
    let floor = 2 * indices[0] - 2;
    if opts.threshold > floor {
        warnings.push(format!(
            "threshold {} exceeds {floor} = 2 * {} - 2; lower-star cells may be excluded",
            opts.threshold, indices[0]
        ));
    }
    let chains: Vec<Chain> = indices.iter().map(|m| square_b(m / 2, opts.variant, field)).collect();
    let size = indices.len();
    let cells: Vec<Result<(FieldScalar, Vec<String>)>> = (0..size * size)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / size, ij % size);
            let eval = big_phi_with(indices[i], &chains[j], ring, opts)?;
            Ok((eval.value, eval.warnings))
        })
        .collect();
    let mut matrix = vec![Vec::with_capacity(size); size];
    let mut notes = BTreeSet::new();
    for (ij, entry) in cells.into_iter().enumerate() {
        let (value, w) = entry?;
        notes.extend(w.into_iter().map(|w| format!("B_{}: {w}", indices[ij % size])));
        matrix[ij / size].push(value);
    }
    warnings.extend(notes);
    let triangular = (0..size).all(|i| {
        matrix[i][i].is_one() && (0..size).all(|j| indices[i] <= indices[j] || matrix[i][j].is_zero())
    });
    let rank = rank(&matrix, field);
    Ok(PairingReport { indices: indices.to_vec(), matrix, triangular, rank, warnings })
}

/// Rank by exact Gaussian elimination.
pub fn rank(matrix: &[Vec<FieldScalar>], field: Field) -> usize {
    let mut m: Vec<Vec<FieldScalar>> = matrix.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, pivot);
        let inv = m[r][col].inverse().expect("pivot is nonzero");
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let factor = &m[i][col] * &inv;
                for j in col..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - &delta;
                }
            }
        }
        r += 1;
    }
    debug_assert!(m.iter().flatten().all(|x| x.field() == field));
    r
}
