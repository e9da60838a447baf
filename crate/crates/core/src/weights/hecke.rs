//! Hecke transformations of parabolic data at a marked point.
//!
//! Each transformation returns the new datum together with the degree shift
//! Δ such that D_g(r, d, ω) = D_g(r, d + Δ, ω').
//!
//! In terms of λ_z, a forward step moves leading entries of λ_z to the back
//! and lowers them by k; the degree drops by the number of entries moved.

use super::{lambda_of_point, point_from_lambda, MarkedPoint, ParabolicData};
use crate::error::{Error, Result};

fn invalid(label: &str, reason: impl Into<String>) -> Error {
    Error::InvalidHecke {
        label: label.to_string(),
        reason: reason.into(),
    }
}

/// Merges adjacent steps with equal weights. Only happens when the input
/// already carried a last weight equal to the level.
fn merged(label: &str, flag: Vec<usize>, weights: Vec<i64>) -> MarkedPoint {
    let mut f: Vec<usize> = Vec::with_capacity(flag.len());
    let mut w: Vec<i64> = Vec::with_capacity(weights.len());
    for (n, a) in flag.into_iter().zip(weights) {
        if w.last() == Some(&a) {
            *f.last_mut().unwrap() += n;
        } else {
            f.push(n);
            w.push(a);
        }
    }
    MarkedPoint::new(label, f, w)
}

/// Subtracts a_1(z) from every weight at z. D is unchanged by this.
pub fn normalize(omega: &ParabolicData, z: &str) -> Result<ParabolicData> {
    let p = omega.point(z)?;
    let a1 = p.weights()[0];
    if a1 == 0 {
        return Ok(omega.clone());
    }
    let weights = p.weights().iter().map(|a| a - a1).collect();
    omega.with_point(MarkedPoint::new(z, p.flag().to_vec(), weights))
}

/// ω' with n⃗'(z) = (n_2, …, n_{l+1}, n_1), a'_1 = 0,
/// a'_i = a_{i+1} − a_2 + a_1 (2 ≤ i ≤ l), a'_{l+1} = k − a_2 + a_1.
/// Degree shift −n_1(z).
pub fn hecke_basic(omega: &ParabolicData, z: &str) -> Result<(ParabolicData, i64)> {
    let p = omega.point(z)?;
    let l = p.jump_count();
    if l == 0 {
        return Err(invalid(z, "the flag has a single step (l = 0), so a_2 is undefined"));
    }
    let (n, a, k) = (p.flag(), p.weights(), omega.level());
    let mut flag: Vec<usize> = n[1..].to_vec();
    flag.push(n[0]);
    let mut weights = Vec::with_capacity(l + 1);
    weights.push(0);
    for i in 2..=l {
        weights.push(a[i] - a[1] + a[0]);
    }
    weights.push(k - a[1] + a[0]);
    let out = omega.with_point(merged(z, flag, weights))?;
    Ok((out, -(n[0] as i64)))
}

/// ω'' with a⃗''(z) = (0, a_2, …, a_{l+1}, k) and
/// n⃗''(z) = (n_1 − m, n_2, …, n_{l+1}, m). Requires a_1(z) = 0 and
/// 1 ≤ m < n_1(z). Degree shift −m.
pub fn hecke_m(omega: &ParabolicData, z: &str, m: usize) -> Result<(ParabolicData, i64)> {
    let p = omega.point(z)?;
    let (n, a) = (p.flag(), p.weights());
    if a[0] != 0 {
        return Err(invalid(z, format!("weights are not normalized (a_1 = {})", a[0])));
    }
    if m < 1 || m >= n[0] {
        return Err(invalid(
            z,
            format!("multiplicity m = {m} must satisfy 1 <= m < n_1 = {}", n[0]),
        ));
    }
    let mut flag = Vec::with_capacity(n.len() + 1);
    flag.push(n[0] - m);
    flag.extend_from_slice(&n[1..]);
    flag.push(m);
    let mut weights = a.to_vec();
    weights.push(omega.level());
    let out = omega.with_point(merged(z, flag, weights))?;
    Ok((out, -(m as i64)))
}

/// Inverse step: moves `m` entries of the last block of λ_z to the front,
/// raised by k (1 ≤ m ≤ n_{l+1}(z)). For m = n_{l+1} this is the inverse of
/// [`hecke_basic`]; for m < n_{l+1} on data ending in weight k it inverts
/// [`hecke_m`]. Degree shift +m. The result has normalized weights.
pub fn hecke_inverse(omega: &ParabolicData, z: &str, m: usize) -> Result<(ParabolicData, i64)> {
    let p = omega.point(z)?;
    let last = *p.flag().last().unwrap();
    if m < 1 || m > last {
        return Err(invalid(
            z,
            format!("multiplicity m = {m} must satisfy 1 <= m <= n_(l+1) = {last}"),
        ));
    }
    let k = omega.level();
    let lam = lambda_of_point(p, k);
    let r = lam.len();
    let mut rotated: Vec<i64> = lam.parts()[r - m..].iter().map(|x| x + k).collect();
    rotated.extend_from_slice(&lam.parts()[..r - m]);
    let q = point_from_lambda(z, &rotated, k)?;
    Ok((omega.with_point(q)?, m as i64))
}

/// Moves `entries` entries of λ_z cyclically: forward (front to back,
/// through [`hecke_basic`] and [`hecke_m`]) when positive, backward through
/// [`hecke_inverse`] when negative. Returns the datum and the accumulated
/// degree shift, which is always −entries.
///
/// A whole turn on a point with a single-step flag (n⃗ = (r)) is the twist
/// E ↦ E(−z): the datum is unchanged and the degree drops by r.
pub fn hecke_rotate(omega: &ParabolicData, z: &str, entries: i64) -> Result<(ParabolicData, i64)> {
    let mut cur = normalize(omega, z)?;
    let mut shift = 0i64;
    let mut remaining = entries;
    while remaining > 0 {
        let p = cur.point(z)?;
        let n1 = p.flag()[0] as i64;
        if remaining >= n1 {
            if p.jump_count() == 0 {
                shift -= n1;
            } else {
                let (next, s) = hecke_basic(&cur, z)?;
                cur = next;
                shift += s;
            }
            remaining -= n1;
        } else {
            let (next, s) = hecke_m(&cur, z, remaining as usize)?;
            cur = next;
            shift += s;
            remaining = 0;
        }
    }
    while remaining < 0 {
        let last = *cur.point(z)?.flag().last().unwrap() as i64;
        let m = last.min(-remaining);
        let (next, s) = hecke_inverse(&cur, z, m as usize)?;
        cur = next;
        shift += s;
        remaining += m;
    }
    debug_assert_eq!(shift, -entries);
    Ok((cur, shift))
}
