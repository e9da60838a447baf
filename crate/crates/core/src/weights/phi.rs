//! The operator H on weight vectors and the bijection φ: Q_k → W'_k.

use super::{SplitContext, WeightVec};
use crate::error::{Error, Result};

/// H¹(μ) = (k − μ_{r−1} + μ_r, μ_1 − μ_{r−1}, …, μ_{r−2} − μ_{r−1}, 0).
pub fn h_step(mu: &WeightVec, level: i64) -> WeightVec {
    let m = mu.parts();
    let r = m.len();
    if r == 1 {
        return WeightVec::from_parts_unchecked(vec![0]);
    }
    let pivot = m[r - 2];
    let mut out = Vec::with_capacity(r);
    out.push(level - pivot + m[r - 1]);
    out.extend(m[..r - 2].iter().map(|x| x - pivot));
    out.push(0);
    WeightVec::from_parts_unchecked(out)
}

/// H^m as an m-fold composition of [`h_step`].
pub fn h_iter(mu: &WeightVec, level: i64, m: usize) -> WeightVec {
    (0..m).fold(mu.clone(), |acc, _| h_step(&acc, level))
}

/// Closed form of H^m for 0 ≤ m ≤ r.
pub fn h_closed(mu: &WeightVec, level: i64, m: usize) -> WeightVec {
    let p = mu.parts();
    let r = p.len();
    assert!(m <= r, "H^m is only defined for m <= r");
    if m == 0 {
        return mu.clone();
    }
    if m == r {
        return mu.shifted(-p[r - 1]);
    }
    // 1-based: μ_{r−m} is p[r − m − 1]
    let pivot = p[r - m - 1];
    let out = (1..=r)
        .map(|j| {
            if j <= m {
                level - pivot + p[r - m + j - 1]
            } else {
                p[j - m - 1] - pivot
            }
        })
        .collect();
    WeightVec::from_parts_unchecked(out)
}

/// φ(μ) = H^{r − i}(μ) where i ≡ d_1^μ (mod r), 0 ≤ i < r.
pub fn phi(mu: &WeightVec, ctx: &SplitContext) -> Result<WeightVec> {
    let d1 = ctx.d1(mu);
    if !d1.is_integer() {
        return Err(Error::NonIntegralDegree(d1.to_string()));
    }
    let r = ctx.rank as i64;
    let i = d1.to_integer().rem_euclid(r);
    Ok(h_iter(mu, ctx.level, (r - i) as usize))
}

/// The unique μ ∈ Q_k with φ(μ) = λ.
pub fn phi_inverse(lambda: &WeightVec, ctx: &SplitContext) -> Result<WeightVec> {
    let (r, k) = (ctx.rank, ctx.level);
    let l = lambda.parts();
    if l.len() != r || !lambda.in_wk(k) {
        return Err(Error::NotInWPrime(l.to_vec()));
    }
    let kn1 = ctx.n1 * k;
    if !kn1.is_integer() {
        return Err(Error::Inconsistent(format!("k * n_1 = {kn1} is not an integer")));
    }
    let numerator = kn1.to_integer() + lambda.size();
    if numerator.rem_euclid(r as i64) != 0 {
        return Err(Error::NotInWPrime(l.to_vec()));
    }
    // (k n_1 + |λ|) / r = k q − s with 0 ≤ s < k
    let x = numerator / r as i64;
    let s = (-x).rem_euclid(k);
    debug_assert_eq!((x + s) % k, 0);
    let mu = if l[0] + s < k {
        l.iter().map(|v| v + s).collect()
    } else {
        let i0 = (1..r)
            .find(|&i| l[i - 1] + s >= k && l[i] + s < k)
            .ok_or_else(|| Error::Inconsistent(format!("no pivot for {lambda} in phi_inverse")))?;
        let mut mu = Vec::with_capacity(r);
        mu.extend(l[i0..].iter().map(|v| v + s));
        mu.extend(l[..i0].iter().map(|v| v + s - k));
        mu
    };
    Ok(WeightVec::from_parts_unchecked(mu))
}
