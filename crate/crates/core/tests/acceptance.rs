//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use verlinde::cyclotomic::{cyclotomic_polynomial, root_power, CycNum, Rational};
use verlinde::grid::{genus_grid, hecke_moves, split_grid, GridBounds, SplitBounds};
use verlinde::schur::{identity_52_check, identity_53_check, identity_54_check, schur_at, schur_brute, VVector};
use verlinde::verlinde::{
    closed_formula_exact, closed_formula_float, Backend, Evaluator, VerifyMode, VerlindeQuery, BACKEND_TOLERANCE,
};
use verlinde::weights::{
    enumerate_pk, enumerate_qk, enumerate_wk_prime, h_iter, phi, phi_inverse, BoundedPartitions, MarkedPoint,
    ParabolicData, SplitContext, WeightVec,
};

const SEED: u64 = 20_240_611;
const FIELD_SAMPLES: usize = 500;
const EMBED_TOLERANCE: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: &[String], checked: usize, what: &str) -> Self {
        let passed = failures.is_empty();
        let mut detail = format!("{checked} {what}");
        if !passed {
            detail.push_str(&format!(", {} failed; first: {}", failures.len(), failures[0]));
        }
        Outcome { passed, detail }
    }
}

fn run(id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = out.passed && in_time;
    let timing = if in_time {
        format!("{:.2}s", elapsed.as_secs_f64())
    } else {
        format!("{:.2}s, over the {}s limit", elapsed.as_secs_f64(), limit.as_secs())
    };
    println!(
        "criterion {id:>2} {}: {name} ({}; {timing})",
        if passed { "PASS" } else { "FAIL" },
        out.detail
    );
    passed
}

fn random_cyc(rng: &mut ChaCha8Rng, order: usize) -> CycNum {
    let coeffs = (0..order)
        .map(|_| Rational::from_integer(rng.random_range(-10..=10).into()))
        .collect();
    CycNum::from_coeffs(order, coeffs)
}

fn cyclotomic_kernel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    for n in 1..=30 {
        if !cyclotomic_polynomial(n).eval(&root_power(n, 1)).is_zero() {
            failures.push(format!("Phi_{n}(zeta_{n}) != 0"));
        }
    }
    for i in 0..FIELD_SAMPLES {
        let n = rng.random_range(1..=30);
        let (a, b, c) = (random_cyc(&mut rng, n), random_cyc(&mut rng, n), random_cyc(&mut rng, n));
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failures.push(format!("sample {i} (N={n}): {what}"));
            }
        };
        check(&(&a + &b) + &c == &a + &(&b + &c), "additive associativity");
        check(&(&a * &b) * &c == &a * &(&b * &c), "multiplicative associativity");
        check(&a + &b == &b + &a && &a * &b == &b * &a, "commutativity");
        check(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity");
        check((&a + &(-&a)).is_zero(), "additive inverse");
        if !a.is_zero() {
            check((&a * &a.inverse().unwrap()).is_one(), "multiplicative inverse");
        }
        let (ea, eb) = (a.embed(), b.embed());
        check((( &a + &b).embed() - (ea + eb)).norm() < EMBED_TOLERANCE, "embed is additive");
        check(((&a * &b).embed() - ea * eb).norm() < EMBED_TOLERANCE, "embed is multiplicative");
        check((a.conjugate().embed() - ea.conj()).norm() < EMBED_TOLERANCE, "conjugation commutes with embed");
    }
    Outcome::new(&failures, FIELD_SAMPLES, "random samples, N <= 30")
}

fn schur_oracle() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in 1..=3 {
        for k in 1..=3 {
            for v in VVector::all(r, k) {
                for lambda in BoundedPartitions::new(r, 6, false).filter(|l| l.size() <= 6) {
                    checked += 1;
                    if schur_at(&lambda, &v, k) != schur_brute(&lambda, &v, k).unwrap() {
                        failures.push(format!("lambda={lambda} v={v} k={k}"));
                    }
                }
            }
        }
    }
    Outcome::new(&failures, checked, "(lambda, v, k) comparisons")
}

fn schur_identities() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in 1..=3 {
        for k in 1..=4 {
            let vs = VVector::all(r, k);
            for v in &vs {
                checked += 2;
                if !identity_52_check(v, k).is_zero() {
                    failures.push(format!("P_k orthogonality r={r} k={k} v={v}"));
                }
                if !identity_53_check(v, k).is_zero() {
                    failures.push(format!("W_k orthogonality r={r} k={k} v={v}"));
                }
            }
            if k <= 3 {
                for (i, v) in vs.iter().enumerate() {
                    for w in &vs[i + 1..] {
                        checked += 1;
                        if !identity_54_check(v, w, k).is_zero() {
                            failures.push(format!("v-vector orthogonality r={r} k={k} v={v} v'={w}"));
                        }
                    }
                }
            }
        }
    }
    Outcome::new(&failures, checked, "residuals")
}

fn sanity_values() -> Outcome {
    let cases = [(1, 1, 1), (1, 2, 3), (0, 2, 1), (2, 1, 1), (3, 1, 1)];
    let mut failures = Vec::new();
    for (g, k, expected) in cases {
        let q = VerlindeQuery::new(g, 0, ParabolicData::empty(2, k).unwrap());
        match closed_formula_exact(&q) {
            Ok(r) if r.value == BigInt::from(expected) => {}
            Ok(r) => failures.push(format!("D_{g}(r=2,k={k}) = {} (expected {expected})", r.value)),
            Err(e) => failures.push(format!("D_{g}(r=2,k={k}): {e}")),
        }
    }
    Outcome::new(&failures, cases.len(), "values")
}

fn genus_recurrence(ev: &Evaluator) -> Outcome {
    let grid = genus_grid(&GridBounds::default());
    let mut failures = Vec::new();
    for q in &grid {
        match ev.verify(q, &VerifyMode::Genus) {
            Ok(rep) if rep.passed => {}
            Ok(rep) => failures.push(format!("{q}: lhs {} rhs {}", rep.lhs, rep.rhs)),
            Err(e) => failures.push(format!("{q}: {e}")),
        }
    }
    Outcome::new(&failures, grid.len(), "queries")
}

fn split_recurrences(ev: &Evaluator) -> Outcome {
    let cases = split_grid(&SplitBounds::default());
    let mut failures = Vec::new();
    let mut terms = 0;
    for case in &cases {
        let (q, ctx) = (&case.query, &case.ctx);
        let tag = format!("{q} g1={} c=({},{})", ctx.g1, ctx.c1, ctx.c2);
        let lhs = match ev.dimension(q) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let checks = [
            ("split", ev.split_recurrence_rhs(q, ctx).map(|s| s.value)),
            ("split, sides swapped", ev.split_recurrence_rhs(q, &ctx.swapped()).map(|s| s.value)),
            ("wprime", ev.wprime_recurrence_rhs(q, ctx).map(|s| s.value)),
        ];
        for (name, rhs) in checks {
            match rhs {
                Ok(v) if v == lhs => {}
                Ok(v) => failures.push(format!("{tag}: {name} rhs {v} != lhs {lhs}")),
                Err(e) => failures.push(format!("{tag}: {name}: {e}")),
            }
        }
        match ev.phi_terms(q, ctx) {
            Ok(pairs) => {
                terms += pairs.len();
                for t in pairs.iter().filter(|t| t.split_term != t.wprime_term) {
                    failures.push(format!(
                        "{tag}: term at mu={} (lambda={}) {} != {}",
                        t.mu, t.lambda, t.split_term, t.wprime_term
                    ));
                }
            }
            Err(e) => failures.push(format!("{tag}: phi terms: {e}")),
        }
    }
    let mut out = Outcome::new(&failures, cases.len(), "split contexts");
    out.detail.push_str(&format!(", {terms} phi-paired terms"));
    out
}

fn all_grid_queries() -> Vec<VerlindeQuery> {
    let mut out = genus_grid(&GridBounds::default());
    out.extend(split_grid(&SplitBounds::default()).into_iter().map(|c| c.query));
    let mut seen = BTreeSet::new();
    out.retain(|q| seen.insert(q.canonical_key()));
    out
}

fn hecke_invariance(ev: &Evaluator) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for q in all_grid_queries() {
        for (point, m) in hecke_moves(&q) {
            checked += 1;
            match ev.verify(&q, &VerifyMode::Hecke { point: point.clone(), m }) {
                Ok(rep) if rep.passed => {}
                Ok(rep) => failures.push(format!("{q} at {point} m={m:?}: {} != {}", rep.lhs, rep.rhs)),
                Err(e) => failures.push(format!("{q} at {point} m={m:?}: {e}")),
            }
        }
    }
    Outcome::new(&failures, checked, "transformations")
}

/// A context with g1 = 1 and k n_1 = j, which is all that φ depends on.
fn synthetic_context(rank: usize, level: i64, j: i64) -> SplitContext {
    SplitContext {
        rank,
        level,
        degree: 0,
        g1: 1,
        g2: 1,
        i1: Vec::new(),
        i2: Vec::new(),
        c1: 1,
        c2: 1,
        ell: 0,
        ell1: 0,
        ell2: 0,
        jump_sum1: j,
        jump_sum2: 0,
        n1: Rational64::new(j, level),
        n2: Rational64::zero(),
    }
}

fn phi_bijection() -> Outcome {
    let mut failures = Vec::new();
    let mut contexts = 0;
    for r in 1..=4usize {
        for k in 1..=5i64 {
            for j in -2 * k..=2 * k {
                let ctx = synthetic_context(r, k, j);
                let q: Vec<WeightVec> = enumerate_qk(r, k, &ctx).collect();
                if q.is_empty() {
                    continue;
                }
                contexts += 1;
                let tag = format!("r={r} k={k} k*n1={j}");
                let image: Vec<WeightVec> = match q.iter().map(|mu| phi(mu, &ctx)).collect() {
                    Ok(v) => v,
                    Err(e) => {
                        failures.push(format!("{tag}: {e}"));
                        continue;
                    }
                };
                let distinct: BTreeSet<&WeightVec> = image.iter().collect();
                if distinct.len() != image.len() {
                    failures.push(format!("{tag}: phi is not injective"));
                }
                let target: BTreeSet<WeightVec> = enumerate_wk_prime(r, k, ctx.wprime_offset()).collect();
                if distinct.into_iter().cloned().collect::<BTreeSet<_>>() != target {
                    failures.push(format!("{tag}: image differs from W'_k"));
                }
                for (mu, lambda) in q.iter().zip(&image) {
                    if phi_inverse(lambda, &ctx).ok().as_ref() != Some(mu) {
                        failures.push(format!("{tag}: phi_inverse(phi({mu})) != {mu}"));
                    }
                }
            }
            for mu in enumerate_pk(r, k) {
                let p = mu.parts();
                for m in 1..=r {
                    let expected = if m < r {
                        k * m as i64 - r as i64 * p[r - m - 1] + mu.size()
                    } else {
                        mu.size() - r as i64 * p[r - 1]
                    };
                    if h_iter(&mu, k, m).size() != expected {
                        failures.push(format!("|H^{m}({mu})| != {expected} at k={k}"));
                    }
                }
            }
        }
    }
    Outcome::new(&failures, contexts, "contexts with nonempty Q_k")
}

fn backend_agreement(ev: &Evaluator) -> Outcome {
    let queries = ev.cached();
    let mut failures = Vec::new();
    for (q, exact) in &queries {
        match closed_formula_float(q) {
            Ok(f) => {
                let e = exact.value.to_f64().unwrap();
                let approx = f.approx.unwrap();
                let relative = (e - approx).abs() / e.abs().max(1.0);
                let residual = f.float_residual.unwrap();
                if relative >= BACKEND_TOLERANCE || residual >= BACKEND_TOLERANCE {
                    failures.push(format!("{q}: exact {e}, float {approx} (residual {residual:.2e})"));
                }
            }
            Err(e) => failures.push(format!("{q}: {e}")),
        }
    }
    Outcome::new(&failures, queries.len(), "queries")
}

fn weight_shifts(q: &VerlindeQuery) -> Vec<VerlindeQuery> {
    let k = q.level();
    let mut out = Vec::new();
    for p in q.omega.points() {
        let (lo, hi) = (-p.weights()[0], k - 1 - p.weights().last().unwrap());
        for c in (lo..=hi).filter(|&c| c != 0) {
            let w = p.weights().iter().map(|a| a + c).collect();
            let moved = MarkedPoint::new(p.label(), p.flag().to_vec(), w);
            out.push(q.with_omega(q.omega.with_point(moved).unwrap()));
        }
    }
    out
}

fn structural_invariants(ev: &Evaluator) -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (q, r) in ev.cached() {
        checked += 1;
        if r.value < BigInt::zero() {
            failures.push(format!("{q}: negative value {}", r.value));
        }
    }
    for q in all_grid_queries() {
        let base = match ev.dimension(&q) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("{q}: {e}"));
                continue;
            }
        };
        let mut variants = vec![("d+r", q.with_degree(q.degree + q.rank() as i64))];
        variants.extend(weight_shifts(&q).into_iter().map(|s| ("weight shift", s)));
        for (what, other) in variants {
            checked += 1;
            match ev.dimension(&other) {
                Ok(v) if v == base => {}
                Ok(v) => failures.push(format!("{what}: {q} gives {base}, {other} gives {v}")),
                Err(e) => failures.push(format!("{what}: {other}: {e}")),
            }
        }
    }
    Outcome::new(&failures, checked, "checks")
}

fn main() {
    let ev = Evaluator::new(Backend::Exact);
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let secs = Duration::from_secs;
    let results = [
        run(1, "cyclotomic field kernel", secs(10), cyclotomic_kernel),
        run(2, "bialternant equals the tableau sum", secs(30), schur_oracle),
        run(3, "Schur orthogonality identities", minutes(2), schur_identities),
        run(4, "closed-formula sanity values", minutes(1), sanity_values),
        run(5, "genus recurrence", minutes(10), || genus_recurrence(&ev)),
        run(6, "split and W' recurrences", minutes(10), || split_recurrences(&ev)),
        run(7, "Hecke invariance", minutes(10), || hecke_invariance(&ev)),
        run(8, "phi bijection and magnitude identity", minutes(2), phi_bijection),
        run(9, "exact and float backends agree", minutes(10), || backend_agreement(&ev)),
        run(10, "integrality, periodicity, weight-shift invariance", minutes(10), || {
            structural_invariants(&ev)
        }),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
