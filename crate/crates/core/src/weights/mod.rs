//! Parabolic data and the weight combinatorics built on top of it.
//!
//! A datum ω = (k, {n⃗(x), a⃗(x)}) attaches to each marked point a flag type
//! n⃗ (multiplicities summing to the rank r) and a strictly increasing weight
//! vector a⃗ bounded by the level k. Everything downstream only ever looks at
//! the partition λ_x obtained from a point (see [`lambda_of_point`]).

mod hecke;
mod phi;
mod sets;
mod split;

pub use hecke::{hecke_basic, hecke_inverse, hecke_m, hecke_rotate, normalize};
pub use phi::{h_closed, h_iter, h_step, phi, phi_inverse};
pub use sets::{
    binomial, enumerate_pk, enumerate_qk, enumerate_wk, enumerate_wk_prime, BoundedPartitions,
};
pub use split::{
    build_omega_mu, build_split_omegas, n_split, split_degrees, OmegaMu, SplitContext, SplitOmegas,
};

use std::collections::HashSet;
use std::fmt;

use num_rational::Rational64;

use crate::error::{Error, Result};

/// One marked point x ∈ I with its flag type n⃗(x) and weights a⃗(x).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedPoint {
    label: String,
    flag: Vec<usize>,
    weights: Vec<i64>,
}

impl MarkedPoint {
    /// Unvalidated; the invariants are checked against a rank and level by
    /// [`ParabolicData::new`].
    pub fn new(label: impl Into<String>, flag: Vec<usize>, weights: Vec<i64>) -> Self {
        MarkedPoint {
            label: label.into(),
            flag,
            weights,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn flag(&self) -> &[usize] {
        &self.flag
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// Number of jumps l (the flag has l + 1 steps).
    pub fn jump_count(&self) -> usize {
        self.flag.len().saturating_sub(1)
    }

    fn validate(&self, rank: usize, level: i64, path: &str) -> Result<()> {
        if self.flag.is_empty() {
            return Err(Error::data(format!("{path}.flag"), "flag must not be empty"));
        }
        if self.flag.len() != self.weights.len() {
            return Err(Error::data(
                path,
                format!(
                    "flag and weights must have equal length (got {} and {})",
                    self.flag.len(),
                    self.weights.len()
                ),
            ));
        }
        if let Some(i) = self.flag.iter().position(|&n| n == 0) {
            return Err(Error::data(
                format!("{path}.flag[{i}]"),
                "flag multiplicities must be positive",
            ));
        }
        let total: usize = self.flag.iter().sum();
        if total != rank {
            return Err(Error::data(
                format!("{path}.flag"),
                format!("flag multiplicities must sum to the rank {rank} (got {total})"),
            ));
        }
        if self.weights[0] < 0 {
            return Err(Error::data(
                format!("{path}.weights[0]"),
                "weights must be nonnegative",
            ));
        }
        if let Some(i) = self.weights.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::data(
                format!("{path}.weights[{}]", i + 1),
                "weights must strictly increase",
            ));
        }
        let last = *self.weights.last().unwrap();
        let boundary_ok = last == level && self.weights[0] == 0;
        if last > level || (last == level && !boundary_ok) {
            return Err(Error::data(
                format!("{path}.weights[{}]", self.weights.len() - 1),
                format!(
                    "weights must stay below the level {level} \
                     (a last weight equal to the level requires a first weight of 0)"
                ),
            ));
        }
        Ok(())
    }
}

/// The datum ω together with the rank r.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicData {
    rank: usize,
    level: i64,
    points: Vec<MarkedPoint>,
}

impl ParabolicData {
    /// Validates every point against `rank` and `level`.
    ///
    /// Weights satisfy 0 ≤ a_1 < … < a_{l+1} < k, except that a last weight
    /// equal to k is accepted when a_1 = 0: that is the shape produced by
    /// [`hecke_m`].
    pub fn new(rank: usize, level: i64, points: Vec<MarkedPoint>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::data("rank", "rank must be at least 1"));
        }
        if level < 1 {
            return Err(Error::data("level", "level must be at least 1"));
        }
        let mut seen = HashSet::new();
        for (i, p) in points.iter().enumerate() {
            let path = format!("points[{i}]");
            if !seen.insert(p.label.as_str()) {
                return Err(Error::data(
                    format!("{path}.label"),
                    format!("duplicate point label `{}`", p.label),
                ));
            }
            p.validate(rank, level, &path)?;
        }
        Ok(ParabolicData {
            rank,
            level,
            points,
        })
    }

    pub fn empty(rank: usize, level: i64) -> Result<Self> {
        ParabolicData::new(rank, level, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn points(&self) -> &[MarkedPoint] {
        &self.points
    }

    pub fn point(&self, label: &str) -> Result<&MarkedPoint> {
        self.points
            .iter()
            .find(|p| p.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Copy of this datum with the point `label` replaced (and revalidated).
    pub fn with_point(&self, replacement: MarkedPoint) -> Result<Self> {
        let idx = self
            .points
            .iter()
            .position(|p| p.label == replacement.label)
            .ok_or_else(|| Error::UnknownLabel(replacement.label.clone()))?;
        let mut points = self.points.clone();
        points[idx] = replacement;
        ParabolicData::new(self.rank, self.level, points)
    }

    /// Copy with extra points appended.
    pub fn with_points(&self, extra: impl IntoIterator<Item = MarkedPoint>) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend(extra);
        ParabolicData::new(self.rank, self.level, points)
    }

    /// Sub-datum on the given labels, in the order they appear here.
    pub fn restrict(&self, labels: &[String]) -> ParabolicData {
        ParabolicData {
            rank: self.rank,
            level: self.level,
            points: self
                .points
                .iter()
                .filter(|p| labels.contains(&p.label))
                .cloned()
                .collect(),
        }
    }

    /// A label not used by any point, derived from `base`.
    pub fn fresh_label(&self, base: &str) -> String {
        let mut label = base.to_string();
        while self.points.iter().any(|p| p.label == label) {
            label.push('\'');
        }
        label
    }
}

/// A weakly decreasing sequence of r nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVec(Vec<i64>);

impl WeightVec {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::data("parts", "weight vector must be nonempty"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::data("parts", "weight vector must be nonincreasing"));
        }
        if *parts.last().unwrap() < 0 {
            return Err(Error::data("parts", "weight vector must be nonnegative"));
        }
        Ok(WeightVec(parts))
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<i64>) -> Self {
        WeightVec(parts)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |μ| = Σ μ_i.
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Adds the constant vector (c, …, c).
    pub fn shifted(&self, c: i64) -> WeightVec {
        WeightVec(self.0.iter().map(|x| x + c).collect())
    }

    pub fn in_pk(&self, level: i64) -> bool {
        self.0[0] < level && *self.0.last().unwrap() >= 0
    }

    pub fn in_wk(&self, level: i64) -> bool {
        self.0[0] <= level && *self.0.last().unwrap() == 0
    }
}

impl fmt::Display for WeightVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// χ = d + r(1 − g).
pub fn chi(genus: u32, rank: usize, degree: i64) -> i64 {
    degree + rank as i64 * (1 - genus as i64)
}

/// The pairs (d_i, r_i) with d_i = a_{i+1} − a_i and r_i = n_1 + … + n_i.
pub fn jumps(p: &MarkedPoint) -> Vec<(i64, usize)> {
    let mut r_i = 0;
    (0..p.jump_count())
        .map(|i| {
            r_i += p.flag[i];
            (p.weights[i + 1] - p.weights[i], r_i)
        })
        .collect()
}

/// Σ_i d_i(x) r_i(x) for one point.
pub fn jump_sum(p: &MarkedPoint) -> i64 {
    jumps(p).iter().map(|&(d, r)| d * r as i64).sum()
}

/// ℓ = (kχ − Σ_x Σ_i d_i(x) r_i(x)) / r, which need not be an integer.
pub fn ell(omega: &ParabolicData, genus: u32, degree: i64) -> Rational64 {
    let total: i64 = omega.points.iter().map(jump_sum).sum();
    Rational64::new(
        omega.level * chi(genus, omega.rank, degree) - total,
        omega.rank as i64,
    )
}

/// λ_x: k − a_i repeated n_i times.
pub fn lambda_of_point(p: &MarkedPoint, level: i64) -> WeightVec {
    let parts = p
        .flag
        .iter()
        .zip(&p.weights)
        .flat_map(|(&n, &a)| std::iter::repeat_n(level - a, n))
        .collect();
    WeightVec(parts)
}

/// |ω| = Σ_x |λ_x|.
pub fn omega_total(omega: &ParabolicData) -> i64 {
    omega
        .points
        .iter()
        .map(|p| lambda_of_point(p, omega.level).size())
        .sum()
}

/// μ* = (k − μ_r, …, k − μ_1).
pub fn mu_star(mu: &WeightVec, level: i64) -> WeightVec {
    WeightVec(mu.0.iter().rev().map(|m| level - m).collect())
}

/// Inverse of [`lambda_of_point`] up to a constant shift: the point whose
/// λ is `lambda`, with weights normalized so that a_1 = 0.
pub(crate) fn point_from_lambda(label: &str, lambda: &[i64], level: i64) -> Result<MarkedPoint> {
    debug_assert!(lambda.windows(2).all(|w| w[0] >= w[1]));
    let top = lambda[0];
    let mut flag = Vec::new();
    let mut weights = Vec::new();
    for &x in lambda {
        match weights.last() {
            Some(&a) if a == top - x => *flag.last_mut().unwrap() += 1,
            _ => {
                flag.push(1);
                weights.push(top - x);
            }
        }
    }
    if *weights.last().unwrap() > level {
        return Err(Error::Inconsistent(format!(
            "partition {lambda:?} spans more than the level {level}"
        )));
    }
    Ok(MarkedPoint::new(label, flag, weights))
}
