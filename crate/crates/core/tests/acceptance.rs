//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails. Runs without the libtest harness so the lines are
//! always printed.
//!
//! All comparisons are exact. Time limits are pinned below.

use std::collections::{BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;
use sl2lab::algebra::{laurent_expand, Field, FieldScalar, LaurentPolynomial, Place, Polynomial, RationalFunction};
use sl2lab::cocycle::{big_phi, in_y_n, pairing_matrix, phi, reduce_theta, BasicCycle};
use sl2lab::complex::{beta_rho, cell_coords, in_star_down, make_c, square_b, star_down, x_n, Cell, Chain, ProductVertex, TriangleVariant};
use sl2lab::group::{d_power, generators, in_u_n, in_upper_window, p1_witness, Matrix2, RingSpec, Unipotent};
use sl2lab::sample;
use sl2lab::tree::{bfs_ball, busemann, distance, neighbors, TreeEdge, TreeVertex};
use sl2lab::verify::{check_density, divergence_certificate, horoball_gap, horoball_gap_value, reverify, Verdict};

const LIMIT_TREE_ORACLE: Duration = Duration::from_secs(10);
const LIMIT_PAIRING: Duration = Duration::from_secs(60);
const LIMIT_HOROBALL: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, start: Instant) -> Result<String, String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:?}, limit {limit:?}"))?;
    Ok(format!("{:.2}s", spent.as_secs_f64()))
}

/// Adjacency from the ball picture alone: levels differ by one and the
/// finer ball lies in the coarser one.
fn adjacent_oracle(u: &TreeVertex, v: &TreeVertex) -> bool {
    let (lo, hi) = if u.level() < v.level() { (u, v) } else { (v, u) };
    hi.level() == lo.level() + 1 && hi.offset().filter(|e| e < lo.level()) == *lo.offset()
}

fn c1_tree_oracle() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for p in [2, 3] {
        let field = Field::prime(p).unwrap();
        let verts: Vec<TreeVertex> = bfs_ball(&TreeVertex::base(Place::Zero, field), 4).unwrap().into_keys().collect();
        let adj: Vec<Vec<usize>> = (0..verts.len())
            .map(|i| (0..verts.len()).filter(|&j| adjacent_oracle(&verts[i], &verts[j])).collect())
            .collect();
        for s in 0..verts.len() {
            let mut dist = vec![u64::MAX; verts.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(i) = queue.pop_front() {
                for &j in &adj[i] {
                    if dist[j] == u64::MAX {
                        dist[j] = dist[i] + 1;
                        queue.push_back(j);
                    }
                }
            }
            for t in 0..verts.len() {
                let d = distance(&verts[s], &verts[t]).unwrap();
                ensure(d == dist[t], || format!("F_{p}: distance {d} vs BFS {} for {:?}, {:?}", dist[t], verts[s], verts[t]))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs agree, {}", timed(LIMIT_TREE_ORACLE, start)?))
}

fn c2_valence() -> Outcome {
    let mut checked = 0;
    for p in [2, 3, 5] {
        let field = Field::prime(p).unwrap();
        for at in Place::BOTH {
            for v in bfs_ball(&TreeVertex::base(at, field), 3).unwrap().into_keys() {
                let nb: BTreeSet<TreeVertex> = neighbors(&v).unwrap().into_iter().collect();
                ensure(nb.len() == p as usize + 1, || format!("{v:?} has {} neighbors over F_{p}", nb.len()))?;
                ensure(nb.iter().all(|w| adjacent_oracle(&v, w) && distance(&v, w).unwrap() == 1), || {
                    format!("non-adjacent neighbor of {v:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} vertices with p + 1 neighbors"))
}

fn c3_busemann() -> Outcome {
    let mut rng = sample::rng(3);
    let mut tested = 0;
    for field in [Field::Rationals, Field::prime(3).unwrap()] {
        let d = d_power(field, 1);
        for _ in 0..100 {
            let p = sample::point(field, 5, &mut rng);
            let q = p.act(&d);
            ensure(busemann(q.inf()) == busemann(p.inf()) + 2, || format!("beta_inf shift at {p:?}"))?;
            ensure(busemann(q.zero()) == busemann(p.zero()) - 2, || format!("beta_0 shift at {p:?}"))?;
            tested += 1;
        }
        ensure(beta_rho(&x_n(0, field)) == 0, || "beta_rho(x_0) != 0".into())?;
        for n in 0..=10 {
            ensure(beta_rho(&x_n(n, field)) == 2 * n, || format!("beta_rho(x_{n}) != {}", 2 * n))?;
        }
    }
    Ok(format!("{tested} points, x_0..x_10 anchored"))
}

fn c4_transitivity() -> Outcome {
    for p in [2, 3, 5] {
        let field = Field::prime(p).unwrap();
        let elems = field.elements().unwrap();
        for n in 1..=3 {
            let star: BTreeSet<Cell> = star_down(n, field).unwrap().into_iter().collect();
            ensure(star.len() == (p * p) as usize, || format!("F_{p}, n = {n}: {} cells", star.len()))?;
            let mut image = BTreeSet::new();
            for a in &elems {
                for b in &elems {
                    let c = make_c(n, a, b);
                    ensure(star.contains(&c.cell) && in_star_down(&c.cell, n), || format!("C_({a},{b}) outside S_{n}"))?;
                    ensure(cell_coords(&c.cell, n) == Ok((a.clone(), b.clone())), || format!("coords of C_({a},{b})"))?;
                    image.insert(c.cell);
                }
            }
            ensure(image == star, || format!("F_{p}, n = {n}: not onto"))?;
        }
    }
    Ok("p^2 cells and bijective labels for p in {2, 3, 5}, n in {1, 2, 3}".into())
}

fn c5_invariance() -> Outcome {
    let mut rng = sample::rng(5);
    let mut done = 0;
    for field in [Field::Rationals, Field::prime(5).unwrap()] {
        let mut count = 0;
        while count < 200 {
            let n = rng.gen_range(1..=3);
            let s: Vec<FieldScalar> = (0..4).map(|_| sample::scalar(field, &mut rng)).collect();
            let Ok(b) = BasicCycle::new(n, s[0].clone(), s[1].clone(), s[2].clone(), s[3].clone()) else { continue };
            let u = Unipotent::from_laurent(&sample::laurent(field, -n, n, &mut rng));
            ensure(in_u_n(&u, n), || "sampled u outside U_n".into())?;
            let c = b.to_chain();
            let (before, after) = (phi(n, &c), phi(n, &c.act(&u.matrix())));
            ensure(before == after, || format!("{field}: phi {before} -> {after} for {b:?}, u = {}", u.entry()))?;
            count += 1;
        }
        done += count;
    }
    Ok(format!("{done} basic cycles over Q and F_5"))
}

fn random_chain(field: Field, rng: &mut sample::SampleRng) -> Chain {
    let mut c = Chain::zero(field);
    for _ in 0..rng.gen_range(1..=6) {
        let p = sample::point(field, 3, rng);
        let (e, f) = (TreeEdge::up_from(p.inf()), TreeEdge::up_from(p.zero()));
        c.add_cell(Cell::Square { inf: e, zero: f }, sample::nonzero_scalar(field, rng)).unwrap();
    }
    c
}

fn c6_boundary() -> Outcome {
    let mut rng = sample::rng(6);
    for i in 0..100 {
        let field = if i % 2 == 0 { Field::Rationals } else { Field::prime(3).unwrap() };
        let c = random_chain(field, &mut rng);
        let dd = c.boundary().unwrap().boundary().unwrap();
        ensure(dd.is_zero(), || format!("dd != 0 on {c:?}"))?;
    }
    Ok("100 random 2-chains".into())
}

fn c7_pairing() -> Outcome {
    let start = Instant::now();
    let ring = RingSpec::Integers;
    let one = Field::Rationals.one();
    for n in 1..=3 {
        let b = square_b(n, TriangleVariant::CornerAtX2n, Field::Rationals);
        let diag = big_phi(2 * n, &b, ring).unwrap();
        ensure(diag == one, || format!("Phi_{}(B_{}) = {diag}", 2 * n, 2 * n))?;
        for k in 2 * n + 1..=8 {
            let v = big_phi(k, &b, ring).unwrap();
            ensure(v.is_zero(), || format!("Phi_{k}(B_{}) = {v}", 2 * n))?;
        }
    }
    let report = pairing_matrix(&[2, 4, 6], ring).unwrap();
    ensure(report.triangular && report.rank == 3, || format!("report {report:?}"))?;
    Ok(format!("3x3 triangular, rank 3, {}", timed(LIMIT_PAIRING, start)?))
}

/// Every `x = t^-n P / Q` over `F_2` with `Q(0) = 1`, `deg Q <= 3` and
/// `deg P <= 2n + deg Q`, i.e. both valuations `>= -n`, with its jets.
fn y_n_candidates(n: i64, upper: i64) -> Vec<(LaurentPolynomial, LaurentPolynomial)> {
    let f2 = Field::prime(2).unwrap();
    let poly = |bits: u32, len: u32| Polynomial::new(f2, (0..len).map(|i| f2.from_i64(((bits >> i) & 1) as i64)).collect());
    let mut out = Vec::new();
    for qbits in 0..8u32 {
        let q = poly((qbits << 1) | 1, 4);
        let dq = q.degree().unwrap() as u32;
        for pbits in 0..(1u32 << (2 * n as u32 + dq + 1)) {
            let p = poly(pbits, 2 * n as u32 + dq + 1);
            let x = &RationalFunction::t_pow(f2, -n) * &RationalFunction::new(p, q.clone()).unwrap();
            out.push((laurent_expand(&x, Place::Zero, upper), laurent_expand(&x, Place::Infinity, upper)));
        }
    }
    out
}

fn c8_theta() -> Outcome {
    let mut rng = sample::rng(8);
    for i in 0..100 {
        let field = if i % 2 == 0 { Field::Rationals } else { Field::prime(2).unwrap() };
        let n = rng.gen_range(1..=3);
        let p = sample::point(field, 4, &mut rng);
        let (u, q) = reduce_theta(n, &p);
        ensure(in_upper_window(&u, n) && in_y_n(n, &q) && p.act(&u.matrix()) == q, || format!("reduction of {p:?}"))?;
        let (again, q2) = reduce_theta(n, &q);
        ensure(again.is_identity() && q2 == q, || format!("not idempotent at {p:?}"))?;
        let mut w = sample::laurent(field, -n - 4, n + 4, &mut rng).filter(|e| e < -n || e > n);
        w.add_term(-n - 1, sample::nonzero_scalar(field, &mut rng));
        let (_, q3) = reduce_theta(n, &p.act(&Unipotent::from_laurent(&w).matrix()));
        ensure(q3 == q, || format!("orbit constancy fails at {p:?}"))?;
    }

    // Exhaustive comparison over F_2 with n = 1 and jet windows of width 3.
    let n = 1;
    let f2 = Field::prime(2).unwrap();
    let levels = -n - 1..=-n + 3;
    let cands = y_n_candidates(n, *levels.end());
    let mut compared = 0;
    let mut members = 0;
    let offsets = |m: i64| -> Vec<LaurentPolynomial> {
        (0..8u32)
            .map(|bits| LaurentPolynomial::from_terms(f2, (0..3).filter(|i| bits >> i & 1 == 1).map(|i| (m - 3 + i as i64, f2.one()))))
            .collect()
    };
    for m0 in levels.clone() {
        for c0 in offsets(m0) {
            for m1 in levels.clone() {
                for c1 in offsets(m1) {
                    let p = ProductVertex::new(
                        TreeVertex::new(Place::Infinity, m1, c1.clone()),
                        TreeVertex::new(Place::Zero, m0, c0.clone()),
                    )
                    .unwrap();
                    // c1 is in uniformizer exponents; jets at infinity are in t-exponents.
                    let c1_t = c1.mirrored();
                    let found = cands.iter().any(|(j0, jinf)| {
                        j0.filter(|e| e < m0) == c0 && jinf.filter(|e| -e < m1) == c1_t
                    });
                    ensure(found == in_y_n(n, &p), || format!("in_Y_n disagrees with enumeration at {p:?}"))?;
                    compared += 1;
                    members += found as usize;
                }
            }
        }
    }
    Ok(format!("100 random points; {compared} F_2 points ({members} in Y_1) match {} candidates", cands.len()))
}

fn c9_p1() -> Outcome {
    let mut rng = sample::rng(9);
    let f5 = Field::prime(5).unwrap();
    let mut count = 0;
    while count < 100 {
        let (x, y) = (sample::laurent(f5, -3, 3, &mut rng), sample::laurent(f5, -3, 3, &mut rng));
        if x.is_zero() && y.is_zero() {
            continue;
        }
        let g = p1_witness(&x, &y).unwrap();
        ensure(g.det().is_one() && g.has_laurent_entries(), || format!("bad witness {g}"))?;
        let (gx, gy) = g.apply_projective(&RationalFunction::one(f5), &RationalFunction::zero(f5));
        let (xr, yr) = (x.to_rational_function(), y.to_rational_function());
        ensure(&gx * &yr == &gy * &xr, || format!("{g} does not send [1:0] to [{x} : {y}]"))?;
        count += 1;
    }
    Ok("100 projective points over F_5[t, 1/t]".into())
}

fn c10_density() -> Outcome {
    let mut rng = sample::rng(10);
    for _ in 0..50 {
        let field = if rng.gen_bool(0.5) { Field::Rationals } else { Field::prime(3).unwrap() };
        let (v, w) = (sample::rational(field, -3, 3, &mut rng), sample::rational(field, -3, 3, &mut rng));
        let (ki, kz) = (rng.gen_range(-6..=6), rng.gen_range(-6..=6));
        let cert = check_density(&v, &w, ki, kz);
        ensure(cert.verdict == Verdict::Pass, || format!("density failed for v = {v}, w = {w}"))?;
        let beta = sl2lab::algebra::parse_rational_function(cert.witnesses[0]["beta"].as_str().unwrap(), field).unwrap();
        ensure((&beta - &v).valuation(Place::Infinity).at_least(ki), || format!("v_inf bound fails for {beta}"))?;
        ensure((&beta - &w).valuation(Place::Zero).at_least(kz), || format!("v_0 bound fails for {beta}"))?;
    }
    Ok("50 witnesses meet both bounds".into())
}

fn c11_horoball() -> Outcome {
    let start = Instant::now();
    let cert = horoball_gap(RingSpec::Integers, 3).map_err(|e| e.to_string())?;
    let r = horoball_gap_value(&cert).ok_or("no R*")?;
    let log = cert.witnesses[0]["orbit"].as_array().map_or(0, Vec::len);
    let ball = sl2lab::group::gamma_ball(RingSpec::Integers, 3).unwrap().len();
    ensure(cert.verdict == Verdict::Pass && log == ball, || format!("log has {log} of {ball} entries"))?;
    ensure(reverify(&cert) == Ok(Verdict::Pass), || "log does not re-verify".into())?;
    Ok(format!("R* = {r} from {ball} orbit points, {}", timed(LIMIT_HOROBALL, start)?))
}

fn c12_divergence() -> Outcome {
    let mut rng = sample::rng(12);
    let gens = generators(RingSpec::Integers);
    let mut count = 0;
    while count < 20 {
        let m = (0..rng.gen_range(1..=5)).fold(Matrix2::identity(Field::Rationals), |acc, _| &acc * &gens[rng.gen_range(0..gens.len())]);
        if m.a().is_zero() || m.c().is_zero() {
            continue;
        }
        let l = rng.gen_range(-3..=3);
        let cert = divergence_certificate(&m, l).unwrap();
        let i0 = cert.witnesses[0]["i0"].as_i64().unwrap();
        // Independent restatement of the bound at a given i.
        let violated = |i: i64| {
            [m.a(), m.c()].iter().all(|e| {
                let (vi, v0) = (e.valuation(Place::Infinity).finite().unwrap(), e.valuation(Place::Zero).finite().unwrap());
                vi - i < l || v0 - i < l
            })
        };
        ensure((i0..=i0 + 3).all(violated) && !violated(i0 - 1), || format!("i0 = {i0} wrong for {m}, L = {l}"))?;
        ensure(cert.verdict == Verdict::Pass, || format!("certificate FAIL for {m}"))?;
        count += 1;
    }
    Ok("20 matrices, i0 minimal".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("tree distance equals BFS distance (F_2, F_3, radius 4)", c1_tree_oracle),
        ("valence p + 1 (radius 3, p in {2, 3, 5})", c2_valence),
        ("Busemann anchors under D and along x_n", c3_busemann),
        ("lower star: p^2 cells, C^n_{a,b} bijective", c4_transitivity),
        ("phi_n invariant under U_n on basic cycles", c5_invariance),
        ("boundary of boundary vanishes", c6_boundary),
        ("independence pairing over Q, J = Z, indices {2, 4, 6}", c7_pairing),
        ("theta_n idempotent, orbit-constant, Y_n matches enumeration", c8_theta),
        ("projective witnesses over F_5[t, 1/t]", c9_p1),
        ("density witnesses meet valuation bounds", c10_density),
        ("horoball gap over Z, word radius 3", c11_horoball),
        ("divergence index i0 minimal", c12_divergence),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or(e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} [{detail}]", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} [{why}]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
