//! Degeneration data: the two fresh points attached by μ, and the
//! bookkeeping for splitting the genus and the marked points in two.

use num_rational::Rational64;

use super::{chi, ell, jump_sum, MarkedPoint, ParabolicData, WeightVec};
use crate::error::{Error, Result};

/// Everything the split recurrences need to know about g = g1 + g2,
/// I = I1 ∪ I2 and the polarization degrees c1, c2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitContext {
    pub rank: usize,
    pub level: i64,
    pub degree: i64,
    pub g1: u32,
    pub g2: u32,
    pub i1: Vec<String>,
    pub i2: Vec<String>,
    pub c1: i64,
    pub c2: i64,
    pub ell: i64,
    pub ell1: i64,
    pub ell2: i64,
    /// Σ_{x∈I1} Σ_i d_i(x) r_i(x).
    pub jump_sum1: i64,
    /// Σ_{x∈I2} Σ_i d_i(x) r_i(x).
    pub jump_sum2: i64,
    pub n1: Rational64,
    pub n2: Rational64,
}

impl SplitContext {
    /// Builds and checks a split of (genus, ω) with I1 = `i1` and I2 the
    /// remaining points. Both ℓ and ℓ_j = c_j ℓ / (c1 + c2) must be integers.
    pub fn new(
        omega: &ParabolicData,
        genus: u32,
        degree: i64,
        g1: u32,
        i1: &[String],
        c1: i64,
        c2: i64,
    ) -> Result<Self> {
        if g1 > genus {
            return Err(Error::InvalidSplit(format!("g1 = {g1} exceeds the genus {genus}")));
        }
        if c1 < 1 || c2 < 1 {
            return Err(Error::InvalidSplit("c1 and c2 must be positive".into()));
        }
        for (i, label) in i1.iter().enumerate() {
            omega.point(label)?;
            if i1[..i].contains(label) {
                return Err(Error::InvalidSplit(format!("label `{label}` listed twice in I1")));
            }
        }
        let i1: Vec<String> = omega
            .points()
            .iter()
            .map(|p| p.label().to_string())
            .filter(|l| i1.contains(l))
            .collect();
        let i2: Vec<String> = omega
            .points()
            .iter()
            .map(|p| p.label().to_string())
            .filter(|l| !i1.contains(l))
            .collect();

        let ell = ell(omega, genus, degree);
        if !ell.is_integer() {
            return Err(Error::InvalidSplit(format!("ell = {ell} is not an integer")));
        }
        let ell = ell.to_integer();
        let (l1, l2) = (c1 * ell, c2 * ell);
        if l1 % (c1 + c2) != 0 || l2 % (c1 + c2) != 0 {
            return Err(Error::InvalidSplit(format!(
                "ell_j = c_j * {ell} / {} is not an integer for (c1, c2) = ({c1}, {c2})",
                c1 + c2
            )));
        }
        let sum_over = |labels: &[String]| -> i64 {
            omega
                .points()
                .iter()
                .filter(|p| labels.iter().any(|l| l == p.label()))
                .map(jump_sum)
                .sum()
        };
        let jump_sum1 = sum_over(&i1);
        let jump_sum2 = sum_over(&i2);
        let mut ctx = SplitContext {
            rank: omega.rank(),
            level: omega.level(),
            degree,
            g1,
            g2: genus - g1,
            i1,
            i2,
            c1,
            c2,
            ell,
            ell1: l1 / (c1 + c2),
            ell2: l2 / (c1 + c2),
            jump_sum1,
            jump_sum2,
            n1: Rational64::from_integer(0),
            n2: Rational64::from_integer(0),
        };
        let (n1, n2) = n_split(omega, &ctx);
        ctx.n1 = n1;
        ctx.n2 = n2;
        debug_assert_eq!(chi(genus, omega.rank(), degree) * omega.level(), omega.rank() as i64 * ell + jump_sum1 + jump_sum2);
        Ok(ctx)
    }

    pub fn genus(&self) -> u32 {
        self.g1 + self.g2
    }

    /// Residue used to filter W'_k.
    pub fn wprime_offset(&self) -> i64 {
        self.jump_sum1.rem_euclid(self.rank as i64)
    }

    /// d_1^μ = n_1 + |μ|/k + r(g_1 − 1).
    pub fn d1(&self, mu: &WeightVec) -> Rational64 {
        self.n1
            + Rational64::new(mu.size(), self.level)
            + Rational64::from_integer(self.rank as i64 * (self.g1 as i64 - 1))
    }

    /// d_2^μ = n_2 + r − |μ|/k + r(g_2 − 1).
    pub fn d2(&self, mu: &WeightVec) -> Rational64 {
        self.n2 + Rational64::from_integer(self.rank as i64)
            - Rational64::new(mu.size(), self.level)
            + Rational64::from_integer(self.rank as i64 * (self.g2 as i64 - 1))
    }

    /// The same split read from the other side.
    pub fn swapped(&self) -> SplitContext {
        SplitContext {
            g1: self.g2,
            g2: self.g1,
            i1: self.i2.clone(),
            i2: self.i1.clone(),
            c1: self.c2,
            c2: self.c1,
            ell1: self.ell2,
            ell2: self.ell1,
            jump_sum1: self.jump_sum2,
            jump_sum2: self.jump_sum1,
            n1: self.n2,
            n2: self.n1,
            ..self.clone()
        }
    }
}

/// n_j^ω = (1/k)(r c_j/(c1 + c2) ℓ + Σ_{x∈I_j} Σ_i d_i(x) r_i(x)).
pub fn n_split(omega: &ParabolicData, ctx: &SplitContext) -> (Rational64, Rational64) {
    let r = omega.rank() as i64;
    let k = omega.level();
    let part = |c: i64, labels: &[String]| {
        let s: i64 = omega
            .points()
            .iter()
            .filter(|p| labels.iter().any(|l| l == p.label()))
            .map(jump_sum)
            .sum();
        (Rational64::new(r * c * ctx.ell, ctx.c1 + ctx.c2) + s) / k
    };
    (part(ctx.c1, &ctx.i1), part(ctx.c2, &ctx.i2))
}

/// (d_1^μ, d_2^μ); their sum must be the total degree.
pub fn split_degrees(mu: &WeightVec, ctx: &SplitContext) -> Result<(Rational64, Rational64)> {
    let (d1, d2) = (ctx.d1(mu), ctx.d2(mu));
    if d1 + d2 != Rational64::from_integer(ctx.degree) {
        return Err(Error::Inconsistent(format!(
            "split degrees {d1} + {d2} do not add up to {}",
            ctx.degree
        )));
    }
    Ok((d1, d2))
}

/// ω^μ: ω extended by the two points x1, x2 determined by μ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaMu {
    pub data: ParabolicData,
    pub x1: MarkedPoint,
    pub x2: MarkedPoint,
}

/// Builds ω^μ. Accepts μ ∈ P_k, and also μ ∈ W_k with μ_1 = k (the x_j then
/// carry a last weight equal to the level).
pub fn build_omega_mu(omega: &ParabolicData, mu: &WeightVec) -> Result<OmegaMu> {
    let r = omega.rank();
    let k = omega.level();
    let m = mu.parts();
    if m.len() != r {
        return Err(Error::Precondition(format!("{mu} does not have {r} parts")));
    }
    if m[0] > k || (m[0] == k && m[r - 1] != 0) {
        return Err(Error::Precondition(format!("{mu} is in neither P_{k} nor W_{k}")));
    }
    // nonzero consecutive differences d_i = μ_{r_i} − μ_{r_i + 1}
    let steps: Vec<(i64, usize)> = (1..r)
        .filter(|&i| m[i - 1] != m[i])
        .map(|i| (m[i - 1] - m[i], i))
        .collect();
    let l = steps.len();
    let x1_steps = steps.clone();
    let x2_steps: Vec<(i64, usize)> = (0..l)
        .map(|i| (steps[l - 1 - i].0, r - steps[l - 1 - i].1))
        .collect();

    let make = |label: String, steps: &[(i64, usize)]| {
        let mut weights = vec![m[r - 1]];
        let mut flag = Vec::with_capacity(steps.len() + 1);
        let mut prev = 0;
        for &(d, ri) in steps {
            weights.push(weights.last().unwrap() + d);
            flag.push(ri - prev);
            prev = ri;
        }
        flag.push(r - prev);
        MarkedPoint::new(label, flag, weights)
    };
    let x1 = make(omega.fresh_label("x1"), &x1_steps);
    let x2 = make(omega.fresh_label("x2"), &x2_steps);
    let data = omega.with_points([x1.clone(), x2.clone()])?;
    Ok(OmegaMu { data, x1, x2 })
}

/// The two halves ω_1^μ (points of I1 plus x1) and ω_2^μ (I2 plus x2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOmegas {
    pub side1: ParabolicData,
    pub side2: ParabolicData,
    pub x1: String,
    pub x2: String,
}

pub fn build_split_omegas(
    omega: &ParabolicData,
    mu: &WeightVec,
    ctx: &SplitContext,
) -> Result<SplitOmegas> {
    let built = build_omega_mu(omega, mu)?;
    let side1 = omega.restrict(&ctx.i1).with_points([built.x1.clone()])?;
    let side2 = omega.restrict(&ctx.i2).with_points([built.x2.clone()])?;
    Ok(SplitOmegas {
        side1,
        side2,
        x1: built.x1.label().to_string(),
        x2: built.x2.label().to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{enumerate_pk, lambda_of_point, mu_star};
    use super::*;

    fn wv(p: &[i64]) -> WeightVec {
        WeightVec::new(p.to_vec()).unwrap()
    }

    fn ctx_2_2() -> SplitContext {
        let omega = ParabolicData::empty(2, 2).unwrap();
        SplitContext::new(&omega, 2, 0, 1, &[], 1, 1).unwrap()
    }

    #[test]
    fn n_split_examples() {
        let ctx = ctx_2_2();
        assert_eq!(ctx.ell, -2);
        assert_eq!((ctx.n1, ctx.n2), (Rational64::from(-1), Rational64::from(-1)));

        let omega = ParabolicData::empty(2, 1).unwrap();
        let ctx = SplitContext::new(&omega, 1, 0, 1, &[], 1, 1).unwrap();
        assert_eq!((ctx.n1, ctx.n2), (Rational64::from(0), Rational64::from(0)));
    }

    #[test]
    fn n_split_is_additive() {
        let omega = ParabolicData::new(
            3,
            4,
            vec![
                MarkedPoint::new("p", vec![1, 2], vec![0, 3]),
                MarkedPoint::new("q", vec![1, 1, 1], vec![0, 1, 2]),
            ],
        )
        .unwrap();
        for d in -4..=4 {
            for c in [(1, 1), (1, 2), (2, 1), (1, 3)] {
                let Ok(ctx) = SplitContext::new(&omega, 2, d, 1, &["p".into()], c.0, c.1) else {
                    continue;
                };
                let total = omega.points().iter().map(jump_sum).sum::<i64>();
                assert_eq!(
                    ctx.n1 + ctx.n2,
                    Rational64::new(3 * ctx.ell + total, 4)
                );
            }
        }
    }

    #[test]
    fn split_degree_examples() {
        let ctx = ctx_2_2();
        assert_eq!(split_degrees(&wv(&[0, 0]), &ctx).unwrap().0, Rational64::from(-1));
        assert_eq!(split_degrees(&wv(&[1, 1]), &ctx).unwrap().0, Rational64::from(0));
        for mu in enumerate_pk(2, 2) {
            let (d1, d2) = split_degrees(&mu, &ctx).unwrap();
            assert_eq!(d1 + d2, Rational64::from(0));
        }
    }

    #[test]
    fn split_context_rejects_bad_input() {
        let omega = ParabolicData::new(2, 2, vec![MarkedPoint::new("p", vec![1, 1], vec![0, 1])]).unwrap();
        // ℓ = 3/2 at g = 0, d = 0
        assert!(matches!(
            SplitContext::new(&omega, 0, 0, 0, &[], 1, 1),
            Err(Error::InvalidSplit(_))
        ));
        assert!(matches!(
            SplitContext::new(&omega, 1, 0, 0, &["nope".into()], 1, 1),
            Err(Error::UnknownLabel(_))
        ));
        let empty = ParabolicData::empty(2, 1).unwrap();
        // ℓ = -1 for g = 2, r = 2, k = 1, d = 0; ℓ_j = -1/2
        assert!(SplitContext::new(&empty, 2, 0, 1, &[], 1, 1).is_err());
    }

    #[test]
    fn omega_mu_examples() {
        let empty = ParabolicData::empty(2, 2).unwrap();
        let built = build_omega_mu(&empty, &wv(&[0, 0])).unwrap();
        for x in [&built.x1, &built.x2] {
            assert_eq!(x.flag(), &[2]);
            assert_eq!(x.weights(), &[0]);
            assert_eq!(lambda_of_point(x, 2).parts(), &[2, 2]);
        }
        let built = build_omega_mu(&empty, &wv(&[1, 0])).unwrap();
        for x in [&built.x1, &built.x2] {
            assert_eq!(x.flag(), &[1, 1]);
            assert_eq!(x.weights(), &[0, 1]);
        }
        let empty = ParabolicData::empty(2, 1).unwrap();
        let built = build_omega_mu(&empty, &wv(&[0, 0])).unwrap();
        assert_eq!(lambda_of_point(&built.x1, 1).parts(), &[1, 1]);
        assert_eq!(lambda_of_point(&built.x2, 1).parts(), &[1, 1]);
    }

    #[test]
    fn omega_mu_lambdas_are_mu_and_mu_star() {
        for r in 1..=4 {
            for k in 1..=5 {
                let empty = ParabolicData::empty(r, k).unwrap();
                for mu in enumerate_pk(r, k) {
                    let built = build_omega_mu(&empty, &mu).unwrap();
                    assert_eq!(lambda_of_point(&built.x2, k), mu_star(&mu, k));
                    let shift = k - mu.parts()[0] - mu.parts()[r - 1];
                    assert_eq!(lambda_of_point(&built.x1, k), mu.shifted(shift));
                    assert_eq!(*built.x1.weights().last().unwrap(), mu.parts()[0]);
                }
            }
        }
    }

    #[test]
    fn fresh_labels_avoid_collisions() {
        let omega = ParabolicData::new(2, 2, vec![MarkedPoint::new("x1", vec![2], vec![0])]).unwrap();
        let built = build_omega_mu(&omega, &wv(&[1, 0])).unwrap();
        assert_eq!(built.x1.label(), "x1'");
        assert_eq!(built.x2.label(), "x2");
        assert_eq!(built.data.points().len(), 3);
    }

    #[test]
    fn split_omegas_point_counts() {
        let omega = ParabolicData::new(
            2,
            3,
            vec![
                MarkedPoint::new("a", vec![1, 1], vec![0, 1]),
                MarkedPoint::new("b", vec![1, 1], vec![0, 2]),
            ],
        )
        .unwrap();
        let ctx = SplitContext::new(&omega, 2, 3, 1, &["a".into()], 1, 1).unwrap();
        let halves = build_split_omegas(&omega, &wv(&[0, 0]), &ctx).unwrap();
        assert_eq!(halves.side1.points().len(), 2);
        assert_eq!(halves.side2.points().len(), 2);
        assert!(halves.side1.point("a").is_ok() && halves.side2.point("b").is_ok());

        let empty = ParabolicData::empty(2, 2).unwrap();
        let halves = build_split_omegas(&empty, &wv(&[0, 0]), &ctx_2_2()).unwrap();
        for side in [&halves.side1, &halves.side2] {
            assert_eq!(side.points().len(), 1);
            assert_eq!(side.points()[0].flag(), &[2]);
            assert_eq!(side.points()[0].weights(), &[0]);
        }
    }
}
