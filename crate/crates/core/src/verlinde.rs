//! The closed Verlinde formula and the recurrences it satisfies.
//!
//! D_g(r, d, ω) = (−1)^{d(r−1)} (k/r)^g (r(r+k)^{r−1})^{g−1}
//!     Σ_v ζ_{r(r+k)}^{(d(r+k) − |ω|)|v|} S_ω(ζ_{r+k}^v) / Π_{i<j} (2 sin π(v_i − v_j)/(r+k))^{2(g−1)}
//!
//! The exact backend works in Q(ζ_{r(r+k)}) and extracts the rational value
//! of the sum, which must be a nonnegative integer. The float backend is an
//! independent double-precision evaluation of the same expression.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::RwLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{CycNum, Rational};
use crate::error::{Error, Result};
use crate::schur::{schur_float, sin_sq_product, SchurEvaluator, VVector};
use crate::weights::{
    build_omega_mu, build_split_omegas, ell, enumerate_pk, enumerate_qk, enumerate_wk_prime, hecke_basic,
    hecke_m, hecke_rotate, lambda_of_point, normalize, omega_total, phi, phi_inverse, split_degrees,
    MarkedPoint, ParabolicData, SplitContext, WeightVec,
};

/// One dimension D_g(r, d, ω); the rank and level live in ω.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerlindeQuery {
    pub genus: u32,
    pub degree: i64,
    pub omega: ParabolicData,
}

fn point_key(p: &MarkedPoint) -> String {
    let join = |xs: Vec<String>| xs.join(",");
    format!(
        "{}/{}",
        join(p.flag().iter().map(ToString::to_string).collect()),
        join(p.weights().iter().map(ToString::to_string).collect())
    )
}

impl VerlindeQuery {
    pub fn new(genus: u32, degree: i64, omega: ParabolicData) -> Self {
        VerlindeQuery { genus, degree, omega }
    }

    pub fn rank(&self) -> usize {
        self.omega.rank()
    }

    pub fn level(&self) -> i64 {
        self.omega.level()
    }

    pub fn with_degree(&self, degree: i64) -> Self {
        VerlindeQuery {
            degree,
            ..self.clone()
        }
    }

    pub fn with_omega(&self, omega: ParabolicData) -> Self {
        VerlindeQuery {
            omega,
            ..self.clone()
        }
    }

    fn header(&self) -> String {
        format!("g={};r={};k={};d={}", self.genus, self.rank(), self.level(), self.degree)
    }

    /// Stable serialization with points sorted by label.
    pub fn canonical_key(&self) -> String {
        let mut pts: Vec<&MarkedPoint> = self.omega.points().iter().collect();
        pts.sort_by(|a, b| a.label().cmp(b.label()));
        let body: Vec<String> = pts.iter().map(|p| format!("{}:{}", p.label(), point_key(p))).collect();
        format!("{};points=[{}]", self.header(), body.join(";"))
    }

    /// Serialization that forgets labels and point order, used for memoization.
    pub fn value_key(&self) -> String {
        let mut body: Vec<String> = self.omega.points().iter().map(point_key).collect();
        body.sort();
        format!("{};points=[{}]", self.header(), body.join(";"))
    }

    /// Whether ℓ = (kχ − Σ d_i r_i)/r is an integer.
    pub fn ell_integral(&self) -> bool {
        ell(&self.omega, self.genus, self.degree).is_integer()
    }

    /// g = 0, d = 0 and three marked points.
    pub fn exceptional_case(&self) -> bool {
        self.genus == 0 && self.degree == 0 && self.omega.points().len() == 3
    }
}

impl fmt::Display for VerlindeQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact or float)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerlindeResult {
    pub value: BigInt,
    pub backend: Backend,
    pub ell_integral: bool,
    pub exceptional_case: bool,
    /// Distance of the float sum from the nearest integer.
    pub float_residual: Option<f64>,
    /// The unrounded float sum.
    pub approx: Option<f64>,
}

/// All v-vectors for (r, k), ascending.
pub fn v_vectors(rank: usize, level: i64) -> Vec<VVector> {
    VVector::all(rank, level)
}

/// One summand of the formula without the global prefactor, at order r(r+k).
pub fn closed_term(q: &VerlindeQuery, v: &VVector) -> CycNum {
    closed_term_with(q, v, omega_total(&q.omega))
}

fn closed_term_with(q: &VerlindeQuery, v: &VVector, total: i64) -> CycNum {
    let (r, k) = (q.rank(), q.level());
    let n = r + k as usize;
    let eval = SchurEvaluator::new(v, k);
    let s = eval.eval_omega(&q.omega);
    let sines = sin_sq_product(v, k)
        .powi(1 - q.genus as i64)
        .expect("the sin² product is nonzero");
    let twist = (q.degree * n as i64 - total) * v.sum();
    (&s * &sines)
        .promote(r * n)
        .expect("r + k divides r(r + k)")
        .mul_root(twist)
}

/// (−1)^{d(r−1)} (k/r)^g (r(r+k)^{r−1})^{g−1}.
pub fn prefactor(q: &VerlindeQuery) -> Rational {
    let (r, k) = (q.rank() as i64, q.level());
    let g = q.genus as i32;
    let sign = if (q.degree * (r - 1)).rem_euclid(2) == 1 { -1 } else { 1 };
    let ratio = Rational::new(k.into(), r.into());
    let base = Rational::from_integer(BigInt::from(r) * BigInt::from(r + k).pow(r as u32 - 1));
    Rational::from_integer(sign.into()) * Pow::pow(&ratio, g) * Pow::pow(&base, g - 1)
}

/// Exact evaluation; the extracted rational must be a nonnegative integer.
pub fn closed_formula_exact(q: &VerlindeQuery) -> Result<VerlindeResult> {
    let (r, k) = (q.rank(), q.level());
    let total = omega_total(&q.omega);
    let terms: Vec<CycNum> = v_vectors(r, k)
        .par_iter()
        .map(|v| closed_term_with(q, v, total))
        .collect();
    let big = r * (r + k as usize);
    let sum = terms.into_iter().fold(CycNum::zero(big), |acc, t| acc + t);
    let value = sum.scale(&prefactor(q)).as_rational()?;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Inconsistent(format!(
            "{q} evaluates to {value}, which is not a nonnegative integer"
        )));
    }
    Ok(VerlindeResult {
        value: value.to_integer(),
        backend: Backend::Exact,
        ell_integral: q.ell_integral(),
        exceptional_case: q.exceptional_case(),
        float_residual: None,
        approx: None,
    })
}

/// Double-precision evaluation, rounded to the nearest integer.
pub fn closed_formula_float(q: &VerlindeQuery) -> Result<VerlindeResult> {
    let (r, k) = (q.rank(), q.level());
    let n = r as i64 + k;
    let big = r as i64 * n;
    let total = omega_total(&q.omega);
    let lambdas: Vec<WeightVec> = q.omega.points().iter().map(|p| lambda_of_point(p, k)).collect();
    let mut sum = Complex64::zero();
    for v in v_vectors(r, k) {
        let e = v.entries();
        let mut sines = 1.0f64;
        for i in 0..r {
            for j in i + 1..r {
                let s = 2.0 * (std::f64::consts::PI * (e[i] - e[j]) as f64 / n as f64).sin();
                sines *= s * s;
            }
        }
        let twist = ((q.degree * n - total) * v.sum()).rem_euclid(big);
        let phase = Complex64::from_polar(1.0, std::f64::consts::TAU * twist as f64 / big as f64);
        let schur: Complex64 = lambdas.iter().map(|l| schur_float(l, &v, k)).product();
        sum += phase * schur * sines.powi(1 - q.genus as i32);
    }
    let pre = prefactor(q).to_f64().unwrap_or(f64::NAN);
    let approx = sum * pre;
    let rounded = approx.re.round();
    let residual = (approx - Complex64::new(rounded, 0.0)).norm();
    if residual.is_nan() || residual >= 0.5 {
        return Err(Error::PrecisionExhausted { residual });
    }
    Ok(VerlindeResult {
        value: BigInt::from_f64(rounded).unwrap_or_default(),
        backend: Backend::Float,
        ell_integral: q.ell_integral(),
        exceptional_case: q.exceptional_case(),
        float_residual: Some(residual),
        approx: Some(approx.re),
    })
}

/// A recurrence right-hand side together with how it was assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceSum {
    pub value: BigInt,
    pub terms: usize,
    /// Sub-queries whose ℓ is not an integer.
    pub ell_nonintegral: usize,
}

impl RecurrenceSum {
    fn collect(parts: Vec<(BigInt, usize)>) -> Self {
        let terms = parts.len();
        let (value, ell_nonintegral) = parts
            .into_iter()
            .fold((BigInt::zero(), 0), |(v, n), (x, m)| (v + x, n + m));
        RecurrenceSum {
            value,
            terms,
            ell_nonintegral,
        }
    }
}

/// One λ ∈ W'_k with μ = φ^{-1}(λ): the split-recurrence term at μ and the
/// W'-recurrence term at λ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTerm {
    pub mu: WeightVec,
    pub lambda: WeightVec,
    pub split_term: BigInt,
    pub wprime_term: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Genus,
    Split(SplitContext),
    WPrime(SplitContext),
    /// H_z^m for `Some(m)`, the basic transformation for `None`.
    Hecke { point: String, m: Option<usize> },
    Backend,
}

impl VerifyMode {
    pub fn name(&self) -> &'static str {
        match self {
            VerifyMode::Genus => "genus",
            VerifyMode::Split(_) => "split",
            VerifyMode::WPrime(_) => "wprime",
            VerifyMode::Hecke { .. } => "hecke",
            VerifyMode::Backend => "backend",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub mode: &'static str,
    pub lhs: BigInt,
    pub rhs: BigInt,
    /// |lhs − rhs| for exact checks; the relative float error for the backend check.
    pub residual: f64,
    pub passed: bool,
}

/// Tolerance for the backend comparison.
pub const BACKEND_TOLERANCE: f64 = 1e-6;

/// Memoizing evaluator for one backend. Safe to share between threads.
#[derive(Debug)]
pub struct Evaluator {
    backend: Backend,
    cache: RwLock<HashMap<String, (VerlindeQuery, VerlindeResult)>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl Evaluator {
    pub fn new(backend: Backend) -> Self {
        Evaluator {
            backend,
            cache: RwLock::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn evaluate(&self, q: &VerlindeQuery) -> Result<VerlindeResult> {
        let key = q.value_key();
        if let Some((_, r)) = self.cache.read().unwrap().get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(r.clone());
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let result = match self.backend {
            Backend::Exact => closed_formula_exact(q)?,
            Backend::Float => closed_formula_float(q)?,
        };
        self.cache
            .write()
            .unwrap()
            .entry(key)
            .or_insert_with(|| (q.clone(), result.clone()));
        Ok(result)
    }

    pub fn dimension(&self, q: &VerlindeQuery) -> Result<BigInt> {
        Ok(self.evaluate(q)?.value)
    }

    fn counted(&self, q: &VerlindeQuery) -> Result<(BigInt, usize)> {
        let r = self.evaluate(q)?;
        Ok((r.value, usize::from(!r.ell_integral)))
    }

    /// Every query evaluated so far, in key order.
    pub fn cached(&self) -> Vec<(VerlindeQuery, VerlindeResult)> {
        let cache = self.cache.read().unwrap();
        let mut keys: Vec<&String> = cache.keys().collect();
        keys.sort();
        keys.into_iter().map(|k| cache[k].clone()).collect()
    }

    pub fn cache_stats(&self) -> (u64, u64) {
        (self.hits.load(Ordering::Relaxed), self.misses.load(Ordering::Relaxed))
    }

    /// Σ_{μ∈P_k} D_{g−1}(r, d, ω^μ).
    pub fn genus_recurrence_rhs(&self, q: &VerlindeQuery) -> Result<RecurrenceSum> {
        if q.genus == 0 {
            return Err(Error::Precondition("the genus recurrence needs g >= 1".into()));
        }
        let mus: Vec<WeightVec> = enumerate_pk(q.rank(), q.level()).collect();
        let parts = mus
            .par_iter()
            .map(|mu| {
                let built = build_omega_mu(&q.omega, mu)?;
                let sub = VerlindeQuery::new(q.genus - 1, q.degree, built.data);
                self.counted(&sub)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RecurrenceSum::collect(parts))
    }

    fn check_context(&self, q: &VerlindeQuery, ctx: &SplitContext) -> Result<()> {
        let expected = SplitContext::new(&q.omega, q.genus, q.degree, ctx.g1, &ctx.i1, ctx.c1, ctx.c2)?;
        if &expected != ctx {
            return Err(Error::Precondition(format!(
                "split context does not belong to {q}"
            )));
        }
        Ok(())
    }

    fn split_term(&self, q: &VerlindeQuery, ctx: &SplitContext, mu: &WeightVec) -> Result<(BigInt, usize)> {
        let (d1, d2) = split_degrees(mu, ctx)?;
        if !d1.is_integer() {
            return Err(Error::NonIntegralDegree(d1.to_string()));
        }
        let halves = build_split_omegas(&q.omega, mu, ctx)?;
        let (a, na) = self.counted(&VerlindeQuery::new(ctx.g1, d1.to_integer(), halves.side1))?;
        let (b, nb) = self.counted(&VerlindeQuery::new(ctx.g2, d2.to_integer(), halves.side2))?;
        Ok((a * b, na + nb))
    }

    /// Σ_{μ∈Q_k} D_{g1}(r, d_1^μ, ω_1^μ) · D_{g2}(r, d_2^μ, ω_2^μ).
    pub fn split_recurrence_rhs(&self, q: &VerlindeQuery, ctx: &SplitContext) -> Result<RecurrenceSum> {
        self.check_context(q, ctx)?;
        let mus: Vec<WeightVec> = enumerate_qk(q.rank(), q.level(), ctx).collect();
        let parts = mus
            .par_iter()
            .map(|mu| self.split_term(q, ctx, mu))
            .collect::<Result<Vec<_>>>()?;
        Ok(RecurrenceSum::collect(parts))
    }

    /// The W'-term at λ: recover μ, build ω_j^μ, move x1 to degree 0 and x2
    /// to degree d by Hecke transformations, and evaluate.
    fn wprime_term(&self, q: &VerlindeQuery, ctx: &SplitContext, lambda: &WeightVec) -> Result<(WeightVec, BigInt, usize)> {
        let mu = phi_inverse(lambda, ctx)?;
        if &phi(&mu, ctx)? != lambda {
            return Err(Error::Inconsistent(format!("phi(phi_inverse({lambda})) != {lambda}")));
        }
        let (d1, d2) = split_degrees(&mu, ctx)?;
        let (d1, d2) = (d1.to_integer(), d2.to_integer());
        let halves = build_split_omegas(&q.omega, &mu, ctx)?;
        let (side1, s1) = hecke_rotate(&halves.side1, &halves.x1, d1)?;
        let (side2, s2) = hecke_rotate(&halves.side2, &halves.x2, d2 - q.degree)?;
        if d1 + s1 != 0 || d2 + s2 != q.degree {
            return Err(Error::HeckeNormalization(format!(
                "reached degrees ({}, {}) instead of (0, {}) for {lambda}",
                d1 + s1,
                d2 + s2,
                q.degree
            )));
        }
        let literal = build_split_omegas(&q.omega, lambda, ctx)?;
        let k = q.level();
        let same_class = |a: &ParabolicData, la: &str, b: &ParabolicData, lb: &str| -> Result<bool> {
            Ok(lambda_class(&lambda_of_point(a.point(la)?, k)) == lambda_class(&lambda_of_point(b.point(lb)?, k)))
        };
        if !same_class(&side1, &halves.x1, &literal.side1, &literal.x1)?
            || !same_class(&side2, &halves.x2, &literal.side2, &literal.x2)?
        {
            return Err(Error::HeckeNormalization(format!(
                "normalized data for {lambda} differs from the data built from {lambda} itself"
            )));
        }
        let (a, na) = self.counted(&VerlindeQuery::new(ctx.g1, 0, side1))?;
        let (b, nb) = self.counted(&VerlindeQuery::new(ctx.g2, q.degree, side2))?;
        Ok((mu, a * b, na + nb))
    }

    /// Σ_{λ∈W'_k} D_{g1}(r, 0, ω_1^λ) · D_{g2}(r, d, ω_2^λ).
    pub fn wprime_recurrence_rhs(&self, q: &VerlindeQuery, ctx: &SplitContext) -> Result<RecurrenceSum> {
        self.check_context(q, ctx)?;
        let lambdas: Vec<WeightVec> = enumerate_wk_prime(q.rank(), q.level(), ctx.wprime_offset()).collect();
        let parts = lambdas
            .par_iter()
            .map(|l| self.wprime_term(q, ctx, l).map(|(_, v, n)| (v, n)))
            .collect::<Result<Vec<_>>>()?;
        Ok(RecurrenceSum::collect(parts))
    }

    /// Pairs each W'-term with the split term at μ = φ^{-1}(λ).
    pub fn phi_terms(&self, q: &VerlindeQuery, ctx: &SplitContext) -> Result<Vec<PhiTerm>> {
        self.check_context(q, ctx)?;
        enumerate_wk_prime(q.rank(), q.level(), ctx.wprime_offset())
            .collect::<Vec<_>>()
            .par_iter()
            .map(|lambda| {
                let (mu, wprime_term, _) = self.wprime_term(q, ctx, lambda)?;
                let (split_term, _) = self.split_term(q, ctx, &mu)?;
                Ok(PhiTerm {
                    mu,
                    lambda: lambda.clone(),
                    split_term,
                    wprime_term,
                })
            })
            .collect()
    }

    /// D_g(r, d + Δ, ω') for the Hecke transformation at `point`.
    pub fn hecke_rhs(&self, q: &VerlindeQuery, point: &str, m: Option<usize>) -> Result<BigInt> {
        let (omega, shift) = match m {
            None => hecke_basic(&q.omega, point)?,
            Some(m) => hecke_m(&normalize(&q.omega, point)?, point, m)?,
        };
        self.dimension(&VerlindeQuery::new(q.genus, q.degree + shift, omega))
    }

    pub fn verify(&self, q: &VerlindeQuery, mode: &VerifyMode) -> Result<VerifyReport> {
        let exact_report = |lhs: BigInt, rhs: BigInt| {
            let residual = (&lhs - &rhs).abs().to_f64().unwrap_or(f64::INFINITY);
            VerifyReport {
                mode: mode.name(),
                passed: lhs == rhs,
                lhs,
                rhs,
                residual,
            }
        };
        match mode {
            VerifyMode::Genus => Ok(exact_report(self.dimension(q)?, self.genus_recurrence_rhs(q)?.value)),
            VerifyMode::Split(ctx) => Ok(exact_report(self.dimension(q)?, self.split_recurrence_rhs(q, ctx)?.value)),
            VerifyMode::WPrime(ctx) => Ok(exact_report(self.dimension(q)?, self.wprime_recurrence_rhs(q, ctx)?.value)),
            VerifyMode::Hecke { point, m } => Ok(exact_report(self.dimension(q)?, self.hecke_rhs(q, point, *m)?)),
            VerifyMode::Backend => {
                let exact = closed_formula_exact(q)?;
                let float = closed_formula_float(q)?;
                let approx = float.approx.unwrap_or(f64::NAN);
                let e = exact.value.to_f64().unwrap_or(f64::INFINITY);
                let relative = (e - approx).abs() / e.abs().max(1.0);
                let residual = relative.max(float.float_residual.unwrap_or(f64::INFINITY));
                Ok(VerifyReport {
                    mode: mode.name(),
                    passed: residual < BACKEND_TOLERANCE,
                    lhs: exact.value,
                    rhs: float.value,
                    residual,
                })
            }
        }
    }
}

/// λ shifted so that its last entry is 0.
fn lambda_class(lambda: &WeightVec) -> Vec<i64> {
    let last = *lambda.parts().last().unwrap();
    lambda.parts().iter().map(|x| x - last).collect()
}

/// Convenience wrapper: one exact evaluation, no memoization.
pub fn dimension(genus: u32, degree: i64, omega: &ParabolicData) -> Result<BigInt> {
    Ok(closed_formula_exact(&VerlindeQuery::new(genus, degree, omega.clone()))?.value)
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(Backend::Exact)
    }
}
