//! Certificates for the individual steps of the argument.
//!
//! Constructive statements are checked exactly (`EXACT`). Statements with
//! global quantifiers or unknown constants are checked on seeded samples
//! or word balls (`SAMPLED`) and report observed values only. Each
//! certificate carries enough witness data to be re-checked on its own,
//! see [`reverify`].

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Field, FieldScalar, Place, RationalFunction, Valuation};
use crate::cocycle::{
    in_y_n, pairing_matrix_with, phi, rank, reduce_theta, BasicCycle, Orientation, PhiOptions, DEFAULT_THRESHOLD,
};
use crate::complex::{beta_rho, cell_coords, in_star_down, make_c, star_down, x_n, Cell, Chain, HoroballSpec, ProductVertex};
use crate::error::{Error, Result};
use crate::group::{gamma_ball, generators, in_upper_window, p1_witness, Matrix2, RingSpec, Unipotent};
use crate::io::{
    chain_from_json, chain_to_json, matrix_from_json, matrix_to_json, pairing_from_json, pairing_to_json,
    point_from_json, point_to_json, ratfunc_from_json, scalar_from_json,
};
use crate::sample::{self, SampleRng};
use crate::tree::{distance, TreeEdge};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn of(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub lemma: String,
    pub params: Value,
    pub verdict: Verdict,
    pub witnesses: Vec<Value>,
    pub labels: Vec<Label>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    fn new(lemma: &str, params: Value, checks: Vec<(bool, Value)>, label: Label) -> Self {
        let verdict = Verdict::of(checks.iter().all(|(ok, _)| *ok));
        Certificate {
            lemma: lemma.to_string(),
            params,
            verdict,
            witnesses: checks.into_iter().map(|(_, w)| w).collect(),
            labels: vec![label],
            notes: vec![],
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn val_json(v: Valuation) -> Value {
    match v {
        Valuation::Finite(k) => json!(k),
        Valuation::Infinite => json!("+inf"),
    }
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Format(format!("witness lacks '{key}'")))
}

fn get_i64(v: &Value, key: &str) -> Result<i64> {
    get(v, key)?.as_i64().ok_or_else(|| Error::Format(format!("'{key}' is not an integer")))
}

fn get_field(params: &Value) -> Result<Field> {
    get(params, "field")?.as_str().ok_or_else(|| Error::Format("field must be a string".into()))?.parse()
}

fn ring_name(ring: RingSpec) -> String {
    ring.to_string()
}

fn parse_ring(s: &str) -> Result<RingSpec> {
    match s {
        "Z" | "z" => Ok(RingSpec::Integers),
        _ => match s.parse::<Field>()? {
            Field::Prime(p) => Ok(RingSpec::PrimeField(p)),
            Field::Rationals => Err(Error::Config("ring must be Z or F_p".into())),
        },
    }
}

fn get_ring(params: &Value) -> Result<RingSpec> {
    parse_ring(get(params, "ring")?.as_str().ok_or_else(|| Error::Format("ring must be a string".into()))?)
}

// ---------------------------------------------------------------- density

/// `alpha_i = t^i / (t^i + 1)`, which tends to `1` at infinity and to `0`
/// at zero.
pub fn alpha(field: Field, i: i64) -> RationalFunction {
    let ti = RationalFunction::t_pow(field, i);
    ti.div(&(&ti + &RationalFunction::one(field))).expect("t^i + 1 is nonzero")
}

/// `(v - w) alpha_i + w`.
pub fn interpolate(v: &RationalFunction, w: &RationalFunction, i: i64) -> RationalFunction {
    &(&(v - w) * &alpha(v.field(), i)) + w
}

/// The least `i >= 1` with `v_inf(beta - v) >= k_inf` and
/// `v_0(beta - w) >= k_zero` for `beta = interpolate(v, w, i)`. Since
/// `v_inf(1 - alpha_i) = v_0(alpha_i) = i`, both valuations are those of
/// `v - w` shifted by `i`.
pub fn density_exponent(v: &RationalFunction, w: &RationalFunction, k_inf: i64, k_zero: i64) -> i64 {
    let d = v - w;
    match (d.valuation(Place::Infinity).finite(), d.valuation(Place::Zero).finite()) {
        (Some(a), Some(b)) => 1.max(k_inf - a).max(k_zero - b),
        _ => 1,
    }
}

fn density_holds(v: &RationalFunction, w: &RationalFunction, k_inf: i64, k_zero: i64, i: i64) -> bool {
    let beta = interpolate(v, w, i);
    (&beta - v).valuation(Place::Infinity).at_least(k_inf) && (&beta - w).valuation(Place::Zero).at_least(k_zero)
}

fn density_check(v: &RationalFunction, w: &RationalFunction, k_inf: i64, k_zero: i64) -> (bool, Value) {
    let i = density_exponent(v, w, k_inf, k_zero);
    let beta = interpolate(v, w, i);
    let ok = density_holds(v, w, k_inf, k_zero, i) && (i == 1 || !density_holds(v, w, k_inf, k_zero, i - 1));
    let witness = json!({
        "v": v.to_string(), "w": w.to_string(), "k_inf": k_inf, "k_zero": k_zero,
        "i": i, "beta": beta.to_string(),
        "v_inf(beta - v)": val_json((&beta - v).valuation(Place::Infinity)),
        "v_0(beta - w)": val_json((&beta - w).valuation(Place::Zero)),
    });
    (ok, witness)
}

fn density_recheck(w: &Value, field: Field) -> Result<bool> {
    let (v, ww) = (ratfunc_from_json(get(w, "v")?, field)?, ratfunc_from_json(get(w, "w")?, field)?);
    let (ki, kz, i) = (get_i64(w, "k_inf")?, get_i64(w, "k_zero")?, get_i64(w, "i")?);
    let beta = ratfunc_from_json(get(w, "beta")?, field)?;
    Ok(beta == interpolate(&v, &ww, i)
        && density_holds(&v, &ww, ki, kz, i)
        && (i == 1 || !density_holds(&v, &ww, ki, kz, i - 1)))
}

/// Approximates `v` at infinity and `w` at zero simultaneously by
/// `beta = (v - w) alpha_i + w` with the least adequate `i`.
pub fn check_density(v: &RationalFunction, w: &RationalFunction, k_inf: i64, k_zero: i64) -> Certificate {
    let params = json!({"field": v.field().to_string(), "v": v.to_string(), "w": w.to_string(),
        "k_inf": k_inf, "k_zero": k_zero});
    Certificate::new("density", params, vec![density_check(v, w, k_inf, k_zero)], Label::Exact)
}

// ---------------------------------------------------------------- apartment

/// Moves `p` into the apartment by a unipotent whose entry approximates
/// minus the `T_inf` offset at infinity and minus the `T_0` offset at zero.
pub fn reduce_to_apartment(p: &ProductVertex) -> Result<(Unipotent, ProductVertex)> {
    let v = -&p.inf().offset_in_t().to_rational_function();
    let w = -&p.zero().offset_in_t().to_rational_function();
    let x = if v.is_zero() && w.is_zero() {
        RationalFunction::zero(p.field())
    } else {
        interpolate(&v, &w, density_exponent(&v, &w, p.inf().level(), p.zero().level()))
    };
    let u = Unipotent(x);
    let q = p.act(&u.matrix());
    if !q.in_apartment() {
        return Err(Error::Precondition(format!("reduction of {p:?} left the apartment")));
    }
    Ok((u, q))
}

fn apartment_check(p: &ProductVertex) -> Result<(bool, Value)> {
    let (u, q) = reduce_to_apartment(p)?;
    let ok = q.in_apartment() && beta_pair(&q) == beta_pair(p);
    Ok((ok, json!({"p": point_to_json(p), "u": u.entry().to_string(), "q": point_to_json(&q)})))
}

fn apartment_recheck(w: &Value, field: Field) -> Result<bool> {
    let p = point_from_json(get(w, "p")?, field)?;
    let u = Unipotent(ratfunc_from_json(get(w, "u")?, field)?);
    let q = point_from_json(get(w, "q")?, field)?;
    Ok(p.act(&u.matrix()) == q && q.in_apartment() && beta_pair(&q) == beta_pair(&p))
}

fn beta_pair(p: &ProductVertex) -> (i64, i64) {
    (crate::tree::busemann(p.inf()), crate::tree::busemann(p.zero()))
}

// ---------------------------------------------------------------- horoball gap

/// `R* = 1 + max beta_rho(g x_0)` over the word ball; no orbit point of the
/// ball reaches `beta_rho >= R*`. The full evaluation log is the witness.
pub fn horoball_gap(ring: RingSpec, radius: usize) -> Result<Certificate> {
    let field = ring.field();
    let base = x_n(0, field);
    let ball = gamma_ball(ring, radius)?;
    let orbit: Vec<(Matrix2, i64)> = ball.into_par_iter().map(|g| { let b = beta_rho(&base.act(&g)); (g, b) }).collect();
    let r_star = 1 + orbit.iter().map(|(_, b)| *b).max().expect("ball contains the identity");
    let log: Vec<Value> = orbit.iter().map(|(g, b)| json!({"g": matrix_to_json(g), "beta_rho": b})).collect();
    let ok = orbit.iter().all(|(_, b)| *b < r_star);
    let params = json!({"field": field.to_string(), "ring": ring_name(ring), "radius": radius});
    let mut cert = Certificate::new("horoball-gap", params, vec![(ok, json!({"r_star": r_star, "orbit": log}))], Label::Sampled);
    cert.notes.push(format!("R* = {r_star} over {} ball elements", orbit.len()));
    Ok(cert)
}

fn horoball_gap_recheck(w: &Value, field: Field) -> Result<bool> {
    let r_star = get_i64(w, "r_star")?;
    let orbit = get(w, "orbit")?.as_array().ok_or_else(|| Error::Format("orbit must be a list".into()))?;
    let base = x_n(0, field);
    let mut max = i64::MIN;
    for entry in orbit {
        let g = matrix_from_json(get(entry, "g")?, field)?;
        let b = beta_rho(&base.act(&g));
        if b != get_i64(entry, "beta_rho")? {
            return Ok(false);
        }
        max = max.max(b);
    }
    Ok(!orbit.is_empty() && r_star == max + 1)
}

/// The `R*` reported for `J = Z` at small radii, the default horoball
/// threshold.
pub fn horoball_gap_value(cert: &Certificate) -> Option<i64> {
    cert.witnesses.first()?.get("r_star")?.as_i64()
}

// ---------------------------------------------------------------- divergence

/// For `M` in `SL2(F[t, 1/t])` and a bound `L`: the least `i0` from which
/// every nonzero entry `e` of the first column violates one of
/// `v_inf(e) - i >= L`, `v_0(e) - i >= L` (the valuations of the entries of
/// `M D^i` at infinity and of `M D^-i` at zero). It is
/// `1 - L + max_e min(v_inf(e), v_0(e))`, never above the universal bound
/// `1 - L`. Rows `i0 - 1 ..= i0 + 3` are checked.
pub fn divergence_certificate(m: &Matrix2, l: i64) -> Result<Certificate> {
    let (ok, witness) = divergence_check(m, l)?;
    let params = json!({"field": m.field().to_string(), "M": matrix_to_json(m), "L": l});
    Ok(Certificate::new("divergence", params, vec![(ok, witness)], Label::Exact))
}

fn divergence_check(m: &Matrix2, l: i64) -> Result<(bool, Value)> {
    if !m.det().is_one() || !m.has_laurent_entries() {
        return Err(Error::Precondition("divergence needs an element of SL2(F[t, 1/t])".into()));
    }
    let column: Vec<(&str, i64, i64)> = [("a", m.a()), ("c", m.c())]
        .into_iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(name, e)| {
            let v = |at| e.valuation(at).finite().unwrap();
            (name, v(Place::Infinity), v(Place::Zero))
        })
        .collect();
    if column.is_empty() {
        return Err(Error::Precondition("first column vanishes".into()));
    }
    let i0 = 1 - l + column.iter().map(|(_, a, b)| *a.min(b)).max().unwrap();
    let rows: Vec<(i64, bool, Value)> = (i0 - 1..=i0 + 3)
        .map(|i| {
            let violated = column.iter().all(|(_, a, b)| a - i < l || b - i < l);
            let entries: Vec<Value> =
                column.iter().map(|(n, a, b)| json!({"entry": n, "v_inf": a - i, "v_0": b - i})).collect();
            (i, violated, json!({"i": i, "violated": violated, "entries": entries}))
        })
        .collect();
    let ok = !rows[0].1 && rows[1..].iter().all(|r| r.1) && i0 <= 1 - l;
    let witness = json!({"M": matrix_to_json(m), "L": l, "i0": i0, "universal_bound": 1 - l,
        "rows": rows.into_iter().map(|r| r.2).collect::<Vec<_>>()});
    Ok((ok, witness))
}

fn divergence_recheck(w: &Value, field: Field) -> Result<bool> {
    let m = matrix_from_json(get(w, "M")?, field)?;
    let (ok, again) = divergence_check(&m, get_i64(w, "L")?)?;
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- horosphere cover

/// Samples `U`-translates of apartment points with `beta_rho = r` and
/// reports, for each, the nearest point of `{g x_m : g in ball}` with
/// `m = floor(r / 2)` in the `l1` product of tree distances. Only observed
/// distances are reported; no supremum is claimed.
pub fn horosphere_cover_sample(
    ring: RingSpec,
    r: i64,
    samples: usize,
    word_radius: usize,
    rng: &mut SampleRng,
) -> Result<Certificate> {
    let field = ring.field();
    let m = r.div_euclid(2);
    let net: Vec<(Matrix2, ProductVertex)> = {
        let xm = x_n(m, field);
        let mut seen = BTreeSet::new();
        gamma_ball(ring, word_radius)?
            .into_iter()
            .filter_map(|g| {
                let p = xm.act(&g);
                seen.insert(p.clone()).then_some((g, p))
            })
            .collect()
    };
    let mut checks = Vec::with_capacity(samples);
    let mut max = 0;
    for _ in 0..samples {
        let a = m + rng.gen_range(-3..=3);
        let p = ProductVertex::apartment(a, r - a, field).act(&sample::unipotent(field, -3, 3, rng));
        let (g, d_inf, d_zero) = net
            .iter()
            .map(|(g, q)| (g, distance(p.inf(), q.inf()).unwrap(), distance(p.zero(), q.zero()).unwrap()))
            .min_by_key(|(_, a, b)| a + b)
            .expect("ball contains the identity");
        max = max.max(d_inf + d_zero);
        let ok = beta_rho(&p) == r;
        checks.push((ok, json!({"p": point_to_json(&p), "g": matrix_to_json(g), "d_inf": d_inf, "d_zero": d_zero})));
    }
    let params = json!({"field": field.to_string(), "ring": ring_name(ring), "R": r, "m": m,
        "samples": samples, "word_radius": word_radius});
    let mut cert = Certificate::new("horosphere-cover", params, checks, Label::Sampled);
    cert.notes.push(format!("observed max distance {max} over {samples} samples (not a proven bound)"));
    Ok(cert)
}

fn horosphere_recheck(w: &Value, params: &Value, field: Field) -> Result<bool> {
    let p = point_from_json(get(w, "p")?, field)?;
    let q = x_n(get_i64(params, "m")?, field).act(&matrix_from_json(get(w, "g")?, field)?);
    Ok(beta_rho(&p) == get_i64(params, "R")?
        && distance(p.inf(), q.inf())? as i64 == get_i64(w, "d_inf")?
        && distance(p.zero(), q.zero())? as i64 == get_i64(w, "d_zero")?)
}

// ---------------------------------------------------------------- no overlap

/// For `g` outside the upper triangular group, samples points of the
/// horoball and checks that `g` moves each of them out of it.
pub fn nooverlap_sample(g: &Matrix2, h: HoroballSpec, samples: usize, rng: &mut SampleRng) -> Result<Certificate> {
    if g.c().is_zero() {
        return Err(Error::Precondition(
            "g is upper triangular; use the exact beta_rho-invariance check instead".into(),
        ));
    }
    let field = g.field();
    let mut checks = Vec::with_capacity(samples);
    for _ in 0..samples {
        let depth = h.threshold + rng.gen_range(0..=6);
        let a = rng.gen_range(-4..=4) + depth / 2;
        let p = ProductVertex::apartment(a, depth - a, field).act(&sample::unipotent(field, -4, 4, rng));
        checks.push(nooverlap_check(g, h, &p));
    }
    let params = json!({"field": field.to_string(), "g": matrix_to_json(g), "threshold": h.threshold, "samples": samples});
    Ok(Certificate::new("no-overlap", params, checks, Label::Sampled))
}

fn nooverlap_check(g: &Matrix2, h: HoroballSpec, p: &ProductVertex) -> (bool, Value) {
    let (before, after) = (beta_rho(p), beta_rho(&p.act(g)));
    let ok = before >= h.threshold && after < h.threshold;
    (ok, json!({"p": point_to_json(p), "beta_rho": before, "image_beta_rho": after}))
}

fn nooverlap_recheck(w: &Value, params: &Value, field: Field) -> Result<bool> {
    let g = matrix_from_json(get(params, "g")?, field)?;
    let h = HoroballSpec { threshold: get_i64(params, "threshold")? };
    let (ok, again) = nooverlap_check(&g, h, &point_from_json(get(w, "p")?, field)?);
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- projective witnesses

fn p1_check(x: &crate::algebra::LaurentPolynomial, y: &crate::algebra::LaurentPolynomial) -> Result<(bool, Value)> {
    let g = p1_witness(x, y)?;
    let (xr, yr) = (x.to_rational_function(), y.to_rational_function());
    let ok = g.det().is_one() && g.has_laurent_entries() && &(g.a() * &yr) == &(g.c() * &xr);
    Ok((ok, json!({"x": xr.to_string(), "y": yr.to_string(), "g": matrix_to_json(&g)})))
}

fn p1_recheck(w: &Value, field: Field) -> Result<bool> {
    let x = ratfunc_from_json(get(w, "x")?, field)?;
    let y = ratfunc_from_json(get(w, "y")?, field)?;
    let g = matrix_from_json(get(w, "g")?, field)?;
    let (gx, gy) = g.apply_projective(&RationalFunction::one(field), &RationalFunction::zero(field));
    Ok(g.det().is_one() && g.has_laurent_entries() && &(&gx * &y) == &(&gy * &x) && !(gx.is_zero() && gy.is_zero()))
}

// ---------------------------------------------------------------- busemann invariance

/// Generators of `P`: the unipotent generators, `D^(+-1)` and
/// `diag(u, 1/u)` for the units of `J`.
fn parabolic_generators(ring: RingSpec) -> Vec<Matrix2> {
    let mut gens: Vec<Matrix2> = generators(ring).into_iter().filter(|g| g.c().is_zero()).collect();
    for u in ring.units() {
        gens.push(Matrix2::diag(RationalFunction::constant(u)));
    }
    gens
}

fn busemann_check(gens: &[Matrix2], p: &ProductVertex) -> (bool, Value) {
    let b = beta_rho(p);
    let images: Vec<i64> = gens.iter().map(|g| beta_rho(&p.act(g))).collect();
    (images.iter().all(|x| *x == b), json!({"p": point_to_json(p), "beta_rho": b, "images": images}))
}

fn busemann_recheck(w: &Value, params: &Value, field: Field) -> Result<bool> {
    let gens = get(params, "generators")?
        .as_array()
        .ok_or_else(|| Error::Format("generators must be a list".into()))?
        .iter()
        .map(|g| matrix_from_json(g, field))
        .collect::<Result<Vec<_>>>()?;
    let (ok, again) = busemann_check(&gens, &point_from_json(get(w, "p")?, field)?);
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- lower star

fn transitivity_check(n: i64, a: &FieldScalar, b: &FieldScalar) -> (bool, Value) {
    let c = make_c(n, a, b);
    let ok = c.sign == 1 && in_star_down(&c.cell, n) && cell_coords(&c.cell, n).ok() == Some((a.clone(), b.clone()));
    let mut chain = Chain::zero(a.field());
    chain.add_cell(c.cell, a.field().one()).expect("single cell");
    (ok, json!({"n": n, "a": a.to_string(), "b": b.to_string(), "cell": chain_to_json(&chain)}))
}

fn transitivity_recheck(w: &Value, field: Field) -> Result<bool> {
    let n = get_i64(w, "n")?;
    let (a, b) = (scalar_from_json(get(w, "a")?, field)?, scalar_from_json(get(w, "b")?, field)?);
    let chain = chain_from_json(get(w, "cell")?, field)?;
    let (ok, again) = transitivity_check(n, &a, &b);
    let cell = chain.iter().next().map(|(c, _)| c.clone());
    Ok(ok && again == *w && cell.is_some_and(|c| cell_coords(&c, n) == Ok((a, b))))
}

// ---------------------------------------------------------------- phi invariance

fn invariance_check(b: &BasicCycle, u: &Unipotent) -> (bool, Value) {
    let chain = b.to_chain();
    let (before, after) = (phi(b.n, &chain), phi(b.n, &chain.act(&u.matrix())));
    let ok = before == after && crate::group::in_u_n(u, b.n);
    let w = json!({"n": b.n, "cycle": [b.x.to_string(), b.y.to_string(), b.x2.to_string(), b.y2.to_string()],
        "u": u.entry().to_string(), "phi": before.to_string(), "phi_moved": after.to_string()});
    (ok, w)
}

fn invariance_recheck(w: &Value, field: Field) -> Result<bool> {
    let cyc = get(w, "cycle")?.as_array().ok_or_else(|| Error::Format("cycle must be a list".into()))?;
    let s = |i: usize| scalar_from_json(&cyc[i], field);
    let b = BasicCycle::new(get_i64(w, "n")?, s(0)?, s(1)?, s(2)?, s(3)?)?;
    let u = Unipotent(ratfunc_from_json(get(w, "u")?, field)?);
    let (ok, again) = invariance_check(&b, &u);
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- boundary

fn boundary_check(c: &Chain) -> Result<(bool, Value)> {
    let d = c.boundary()?;
    let ok = d.boundary()?.is_zero();
    Ok((ok, json!({"chain": chain_to_json(c), "boundary_cells": d.len()})))
}

fn boundary_recheck(w: &Value, field: Field) -> Result<bool> {
    let (ok, again) = boundary_check(&chain_from_json(get(w, "chain")?, field)?)?;
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- theta

fn theta_check(n: i64, p: &ProductVertex, w: &Unipotent) -> (bool, Value) {
    let (u, q) = reduce_theta(n, p);
    let (again, q2) = reduce_theta(n, &q);
    let (_, q3) = reduce_theta(n, &p.act(&w.matrix()));
    let ok = in_upper_window(&u, n) && in_upper_window(w, n) && in_y_n(n, &q) && again.is_identity() && q2 == q && q3 == q;
    let witness = json!({"n": n, "p": point_to_json(p), "u": u.entry().to_string(), "q": point_to_json(&q),
        "w": w.entry().to_string()});
    (ok, witness)
}

fn theta_recheck(w: &Value, field: Field) -> Result<bool> {
    let n = get_i64(w, "n")?;
    let p = point_from_json(get(w, "p")?, field)?;
    let shift = Unipotent(ratfunc_from_json(get(w, "w")?, field)?);
    let (ok, again) = theta_check(n, &p, &shift);
    Ok(ok && again == *w)
}

// ---------------------------------------------------------------- pairing

fn pairing_check(indices: &[i64], ring: RingSpec, opts: &PhiOptions) -> Result<(bool, Value, Vec<String>)> {
    let report = pairing_matrix_with(indices, ring, opts)?;
    let ok = report.triangular && report.rank == indices.len();
    Ok((ok, pairing_to_json(&report), report.warnings))
}

fn pairing_recheck(w: &Value, field: Field) -> Result<bool> {
    let r = pairing_from_json(w, field)?;
    let size = r.indices.len();
    if r.matrix.len() != size || r.matrix.iter().any(|row| row.len() != size) {
        return Ok(false);
    }
    let triangular = (0..size)
        .all(|i| r.matrix[i][i].is_one() && (0..size).all(|j| r.indices[i] <= r.indices[j] || r.matrix[i][j].is_zero()));
    let rank = rank(&r.matrix, field);
    Ok(triangular == r.triangular && rank == r.rank && triangular && rank == size)
}

// ---------------------------------------------------------------- suite

/// Settings for [`run_all`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub ring: RingSpec,
    pub seed: u64,
    pub threshold: i64,
    pub word_radius: usize,
    pub samples: usize,
    /// Indices of the pairing, even and ascending.
    pub indices: Vec<i64>,
    /// `Reversed` deliberately corrupts the sign of `phi_n`.
    pub orientation: Orientation,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            ring: RingSpec::PrimeField(3),
            seed: 0,
            threshold: DEFAULT_THRESHOLD,
            word_radius: 2,
            samples: 20,
            indices: vec![2, 4, 6],
            orientation: Orientation::Standard,
        }
    }
}

/// Certificate tags in report order.
pub const TAGS: &[&str] = &[
    "apartment",
    "boundary",
    "busemann-invariance",
    "density",
    "divergence",
    "horoball-gap",
    "horosphere-cover",
    "invariance",
    "no-overlap",
    "p1-witness",
    "pairing",
    "theta",
    "transitivity",
];

/// Runs one certificate of the suite.
pub fn run_one(tag: &str, cfg: &VerifyConfig) -> Result<Certificate> {
    let field = cfg.ring.field();
    cfg.ring.validate(field)?;
    let rng = &mut sample::rng(sample::derive_seed(cfg.seed, tag));
    let base = |extra: Value| {
        let mut p = json!({"field": field.to_string(), "ring": ring_name(cfg.ring), "seed": cfg.seed, "samples": cfg.samples});
        if let (Some(p), Value::Object(extra)) = (p.as_object_mut(), extra) {
            p.extend(extra);
        }
        p
    };
    let n_samples = cfg.samples;
    let cert = match tag {
        "apartment" => {
            let checks = (0..n_samples).map(|_| apartment_check(&sample::point(field, 3, rng))).collect::<Result<_>>()?;
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "boundary" => {
            let mut checks = Vec::new();
            for _ in 0..n_samples {
                let mut c = Chain::zero(field);
                for _ in 0..rng.gen_range(1..=4) {
                    let p = sample::point(field, 3, rng);
                    let cell = Cell::Square { inf: TreeEdge::up_from(p.inf()), zero: TreeEdge::up_from(p.zero()) };
                    c.add_cell(cell, sample::scalar(field, rng))?;
                }
                if !c.is_zero() {
                    checks.push(boundary_check(&c)?);
                }
            }
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "busemann-invariance" => {
            let gens = parabolic_generators(cfg.ring);
            let checks = (0..n_samples).map(|_| busemann_check(&gens, &sample::point(field, 3, rng))).collect();
            let params = base(json!({"generators": gens.iter().map(matrix_to_json).collect::<Vec<_>>()}));
            Certificate::new(tag, params, checks, Label::Exact)
        }
        "density" => {
            let checks = (0..n_samples)
                .map(|_| {
                    let (v, w) = (sample::rational(field, -3, 3, rng), sample::rational(field, -3, 3, rng));
                    density_check(&v, &w, rng.gen_range(-6..=6), rng.gen_range(-6..=6))
                })
                .collect();
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "divergence" => {
            let gens = generators(cfg.ring);
            let mut checks = Vec::new();
            while checks.len() < n_samples {
                let m = (0..rng.gen_range(1..=4))
                    .fold(Matrix2::identity(field), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())]);
                if m.a().is_zero() || m.c().is_zero() {
                    continue;
                }
                checks.push(divergence_check(&m, rng.gen_range(-3..=3))?);
            }
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "horoball-gap" => horoball_gap(cfg.ring, cfg.word_radius)?,
        "horosphere-cover" => horosphere_cover_sample(cfg.ring, 2 * cfg.threshold + 2, n_samples, cfg.word_radius, rng)?,
        "invariance" => {
            let mut checks = Vec::new();
            while checks.len() < n_samples {
                let n = rng.gen_range(1..=3);
                let s: Vec<FieldScalar> = (0..4).map(|_| sample::scalar(field, rng)).collect();
                let Ok(b) = BasicCycle::new(n, s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone()) else { continue };
                let u = Unipotent::from_laurent(&sample::laurent(field, -n, n, rng));
                checks.push(invariance_check(&b, &u));
            }
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "no-overlap" => {
            let weyl = Matrix2::sl2(
                RationalFunction::zero(field),
                RationalFunction::from_i64(field, -1),
                RationalFunction::one(field),
                RationalFunction::zero(field),
            )?;
            let mut cert = nooverlap_sample(&weyl, HoroballSpec { threshold: cfg.threshold }, n_samples, rng)?;
            for g in generators(cfg.ring).into_iter().filter(|g| !g.c().is_zero()) {
                let more = nooverlap_sample(&g, HoroballSpec { threshold: cfg.threshold }, n_samples, rng)?;
                cert.notes.push(format!("{} further samples for {}", more.witnesses.len(), g));
                if !more.passed() {
                    cert.verdict = Verdict::Fail;
                }
            }
            cert
        }
        "p1-witness" => {
            let mut checks = Vec::new();
            while checks.len() < n_samples {
                let (x, y) = (sample::laurent(field, -3, 3, rng), sample::laurent(field, -3, 3, rng));
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                checks.push(p1_check(&x, &y)?);
            }
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "pairing" => {
            let opts = PhiOptions { threshold: cfg.threshold, orientation: cfg.orientation, ..PhiOptions::default() };
            let (ok, w, warnings) = pairing_check(&cfg.indices, cfg.ring, &opts)?;
            let mut cert = Certificate::new(tag, base(json!({"indices": cfg.indices, "threshold": cfg.threshold})), vec![(ok, w)], Label::Exact);
            cert.notes = warnings;
            cert
        }
        "theta" => {
            let checks = (0..n_samples)
                .map(|_| {
                    let n = rng.gen_range(1..=3);
                    let p = sample::point(field, 4, rng);
                    let mut shift = sample::laurent(field, -n - 4, n + 4, rng).filter(|e| e < -n || e > n);
                    shift.add_term(n + 1, sample::scalar(field, rng));
                    theta_check(n, &p, &Unipotent::from_laurent(&shift))
                })
                .collect();
            Certificate::new(tag, base(json!({})), checks, Label::Exact)
        }
        "transitivity" => {
            let mut checks = Vec::new();
            let mut label = Label::Exact;
            for n in 1..=3 {
                match field.elements() {
                    Ok(elems) => {
                        let star = star_down(n, field)?;
                        let mut hit = BTreeSet::new();
                        for a in &elems {
                            for b in &elems {
                                let (ok, w) = transitivity_check(n, a, b);
                                let fresh = hit.insert(make_c(n, a, b).cell);
                                checks.push((ok && fresh, w));
                            }
                        }
                        let all: BTreeSet<Cell> = star.into_iter().collect();
                        checks.push((hit == all, json!({"n": n, "star_size": all.len()})));
                    }
                    Err(_) => {
                        label = Label::Sampled;
                        for _ in 0..n_samples {
                            let (a, b) = (sample::scalar(field, rng), sample::scalar(field, rng));
                            checks.push(transitivity_check(n, &a, &b));
                        }
                    }
                }
            }
            Certificate::new(tag, base(json!({})), checks, label)
        }
        _ => return Err(Error::Config(format!("unknown certificate '{tag}', expected one of: {}", TAGS.join(", ")))),
    };
    Ok(cert)
}

/// Every certificate of the suite, in tag order. Deterministic for a
/// fixed configuration.
pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Certificate>> {
    TAGS.par_iter().map(|tag| run_one(tag, cfg)).collect()
}

/// Recomputes the verdict of a certificate from its serialized parameters
/// and witnesses alone.
pub fn reverify(cert: &Certificate) -> Result<Verdict> {
    let params = &cert.params;
    let field = get_field(params)?;
    let each = |f: &dyn Fn(&Value) -> Result<bool>| -> Result<bool> {
        for w in &cert.witnesses {
            if !f(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let ok = match cert.lemma.as_str() {
        "apartment" => each(&|w| apartment_recheck(w, field))?,
        "boundary" => each(&|w| boundary_recheck(w, field))?,
        "busemann-invariance" => each(&|w| busemann_recheck(w, params, field))?,
        "density" => each(&|w| density_recheck(w, field))?,
        "divergence" => each(&|w| divergence_recheck(w, field))?,
        "horoball-gap" => {
            get_ring(params)?;
            each(&|w| horoball_gap_recheck(w, field))?
        }
        "horosphere-cover" => each(&|w| horosphere_recheck(w, params, field))?,
        "invariance" => each(&|w| invariance_recheck(w, field))?,
        "no-overlap" => each(&|w| nooverlap_recheck(w, params, field))? && cert.verdict == Verdict::Pass,
        "p1-witness" => each(&|w| p1_recheck(w, field))?,
        "pairing" => each(&|w| pairing_recheck(w, field))?,
        "theta" => each(&|w| theta_recheck(w, field))?,
        "transitivity" => each(&|w| {
            if w.get("star_size").is_some() {
                let n = get_i64(w, "n")?;
                return Ok(star_down(n, field)?.len() as i64 == get_i64(w, "star_size")?);
            }
            transitivity_recheck(w, field)
        })?,
        other => return Err(Error::Format(format!("unknown certificate '{other}'"))),
    };
    Ok(Verdict::of(ok))
}
