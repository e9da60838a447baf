//! Schur polynomials evaluated at tuples of (r+k)-th roots of unity.
//!
//! Values are exact elements of Q(ζ_{r+k}). Every matrix entry in the
//! bialternant is itself a root of unity, so determinants of size ≤ 5 are
//! accumulated as integer exponent counts and only converted to a field
//! element once. Larger determinants fall back to fraction-free elimination
//! over the field.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::cyclotomic::{root_power, CycNum, Rational};
use crate::error::{Error, Result};
use crate::weights::{enumerate_pk, enumerate_wk, lambda_of_point, mu_star, ParabolicData, WeightVec};

/// Largest rank for which determinants use the Leibniz expansion.
pub const LEIBNIZ_MAX_RANK: usize = 5;

/// Tableau enumeration refuses shapes with more boxes than this.
pub const SSYT_BOX_LIMIT: i64 = 8;

/// Strictly decreasing (v_1, …, v_r) with v_r = 0 and v_1 < r + k.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VVector(Vec<i64>);

impl VVector {
    pub fn new(entries: Vec<i64>, level: i64) -> Result<Self> {
        let r = entries.len() as i64;
        if entries.is_empty() {
            return Err(Error::data("v", "v-vector must be nonempty"));
        }
        if *entries.last().unwrap() != 0 {
            return Err(Error::data("v", "last entry must be 0"));
        }
        if entries.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::data("v", "entries must strictly decrease"));
        }
        if entries[0] >= r + level {
            return Err(Error::data("v", format!("first entry must be below r + k = {}", r + level)));
        }
        Ok(VVector(entries))
    }

    /// All v-vectors for (r, k) in ascending lexicographic order.
    pub fn all(rank: usize, level: i64) -> Vec<VVector> {
        fn extend(prefix: &mut Vec<i64>, left: usize, out: &mut Vec<VVector>) {
            if left == 0 {
                prefix.push(0);
                out.push(VVector(prefix.clone()));
                prefix.pop();
                return;
            }
            let upper = *prefix.last().unwrap();
            for x in left as i64..upper {
                prefix.push(x);
                extend(prefix, left - 1, out);
                prefix.pop();
            }
        }
        assert!(rank >= 1 && level >= 1, "rank and level must be positive");
        let n = rank as i64 + level;
        let mut out = Vec::new();
        if rank == 1 {
            out.push(VVector(vec![0]));
            return out;
        }
        for v1 in rank as i64 - 1..n {
            let mut prefix = vec![v1];
            extend(&mut prefix, rank - 2, &mut out);
        }
        out
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |v| = Σ v_i.
    pub fn sum(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl fmt::Display for VVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The staircase ρ = (r − 1, …, 1, 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoVec(Vec<i64>);

impl RhoVec {
    pub fn new(rank: usize) -> Self {
        RhoVec((0..rank as i64).rev().collect())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }
}

type Permutations = Arc<Vec<(Vec<usize>, bool)>>;

/// All permutations of 0..n with their parity (true = odd).
fn permutations(n: usize) -> Permutations {
    static CACHE: OnceLock<RwLock<HashMap<usize, Permutations>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut perm, &mut out);
    let out = Arc::new(out);
    cache.write().unwrap().entry(n).or_insert_with(|| Arc::clone(&out));
    out
}

fn heap_permute(k: usize, perm: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, bool)>) {
    if k <= 1 {
        let inversions = (0..perm.len())
            .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        out.push((perm.clone(), inversions % 2 == 1));
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, perm, out);
        if k.is_multiple_of(2) {
            perm.swap(i, k - 1);
        } else {
            perm.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, perm, out);
}

/// Determinant of the matrix (ζ_n^{e_ij}) as exponent counts.
fn root_matrix_det(exps: &[Vec<i64>], n: usize) -> CycNum {
    let r = exps.len();
    let mut counts = vec![0i64; n];
    for (perm, odd) in permutations(r).iter() {
        let e: i64 = perm.iter().enumerate().map(|(i, &j)| exps[i][j]).sum();
        counts[e.rem_euclid(n as i64) as usize] += if *odd { -1 } else { 1 };
    }
    CycNum::from_exponent_counts(n, &counts)
}

/// Leibniz expansion over the field.
pub fn det_leibniz(m: &[Vec<CycNum>]) -> CycNum {
    let r = m.len();
    assert!(r >= 1, "determinant of an empty matrix");
    let order = m[0][0].order();
    let mut acc = CycNum::zero(order);
    for (perm, odd) in permutations(r).iter() {
        let mut term = m[0][perm[0]].clone();
        for (i, &j) in perm.iter().enumerate().skip(1) {
            term = &term * &m[i][j];
        }
        if *odd {
            acc = &acc - &term;
        } else {
            acc += &term;
        }
    }
    acc
}

/// Bareiss elimination. The exact divisions by the previous pivot are
/// carried out as multiplications by its field inverse.
pub fn det_bareiss(m: &[Vec<CycNum>]) -> CycNum {
    let n = m.len();
    assert!(n >= 1, "determinant of an empty matrix");
    let order = m[0][0].order();
    let mut a: Vec<Vec<CycNum>> = m.to_vec();
    let mut negate = false;
    let mut prev = CycNum::one(order);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return CycNum::zero(order),
            }
        }
        let prev_inv = prev.inverse().expect("pivots are nonzero");
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = (&t * &prev_inv).canonical();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Cached data for repeated Schur evaluations at one v: the order r + k and
/// the inverse of the Vandermonde determinant.
#[derive(Clone, Debug)]
pub struct SchurEvaluator {
    v: VVector,
    order: usize,
    inv_vandermonde: CycNum,
}

impl SchurEvaluator {
    pub fn new(v: &VVector, level: i64) -> Self {
        let order = v.len() + level as usize;
        let delta = vandermonde(v, level);
        let inv_vandermonde = delta
            .inverse()
            .expect("v-vector entries are distinct modulo r + k");
        SchurEvaluator {
            v: v.clone(),
            order,
            inv_vandermonde,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Numerator of the bialternant, det(z_j^{λ_i + r − i}).
    pub fn alternant(&self, lambda: &WeightVec) -> CycNum {
        let r = self.v.len();
        assert_eq!(lambda.len(), r, "partition length must equal the rank");
        let shifted: Vec<i64> = lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, l)| l + (r - 1 - i) as i64)
            .collect();
        bialternant_numerator(&shifted, self.v.entries(), self.order)
    }

    pub fn eval(&self, lambda: &WeightVec) -> CycNum {
        &self.alternant(lambda) * &self.inv_vandermonde
    }

    /// S_ω = Π_x S_{λ_x}.
    pub fn eval_omega(&self, omega: &ParabolicData) -> CycNum {
        let mut acc = CycNum::one(self.order);
        for p in omega.points() {
            acc = &acc * &self.eval(&lambda_of_point(p, omega.level()));
        }
        acc
    }
}

fn bialternant_numerator(exponents: &[i64], v: &[i64], n: usize) -> CycNum {
    let r = v.len();
    if r <= LEIBNIZ_MAX_RANK {
        let exps: Vec<Vec<i64>> = exponents
            .iter()
            .map(|e| v.iter().map(|vj| e * vj).collect())
            .collect();
        root_matrix_det(&exps, n)
    } else {
        let m: Vec<Vec<CycNum>> = exponents
            .iter()
            .map(|e| v.iter().map(|vj| root_power(n, e * vj)).collect())
            .collect();
        det_bareiss(&m)
    }
}

/// Δ(v) = det(z_j^{r − i}) = Π_{i<j} (z_i − z_j) with z_j = ζ_{r+k}^{v_j}.
pub fn vandermonde(v: &VVector, level: i64) -> CycNum {
    let n = v.len() + level as usize;
    let rho = RhoVec::new(v.len());
    bialternant_numerator(rho.parts(), v.entries(), n)
}

/// S_λ(ζ^{v_1}, …, ζ^{v_r}) with ζ = ζ_{r+k}, as an element of order r + k.
pub fn schur_at(lambda: &WeightVec, v: &VVector, level: i64) -> CycNum {
    SchurEvaluator::new(v, level).eval(lambda)
}

/// The tableau sum Σ_T Π z_{T(c)} over semistandard tableaux of shape λ
/// with entries in 1..=r.
pub fn schur_brute(lambda: &WeightVec, v: &VVector, level: i64) -> Result<CycNum> {
    let boxes = lambda.size();
    if boxes > SSYT_BOX_LIMIT {
        return Err(Error::SizeGuard {
            boxes,
            limit: SSYT_BOX_LIMIT,
        });
    }
    let r = v.len();
    assert_eq!(lambda.len(), r, "partition length must equal the rank");
    let n = r + level as usize;
    let shape: Vec<usize> = lambda.parts().iter().map(|&p| p as usize).collect();
    let mut counts = vec![0i64; n];
    let mut rows: Vec<Vec<usize>> = shape.iter().map(|&len| Vec::with_capacity(len)).collect();
    fill_tableaux(&shape, r, 0, &mut rows, 0, v.entries(), n, &mut counts);
    Ok(CycNum::from_exponent_counts(n, &counts))
}

#[allow(clippy::too_many_arguments)]
fn fill_tableaux(
    shape: &[usize],
    r: usize,
    row: usize,
    rows: &mut Vec<Vec<usize>>,
    exponent: i64,
    v: &[i64],
    n: usize,
    counts: &mut [i64],
) {
    if row == shape.len() || shape[row] == 0 {
        counts[exponent.rem_euclid(n as i64) as usize] += 1;
        return;
    }
    let col = rows[row].len();
    if col == shape[row] {
        fill_tableaux(shape, r, row + 1, rows, exponent, v, n, counts);
        return;
    }
    let left = if col > 0 { rows[row][col - 1] } else { 0 };
    let above = if row > 0 { rows[row - 1][col] + 1 } else { 0 };
    for entry in left.max(above)..r {
        rows[row].push(entry);
        fill_tableaux(shape, r, row, rows, exponent + v[entry], v, n, counts);
        rows[row].pop();
    }
}

/// S_ω at v: the product of the point Schur values; 1 for no points.
pub fn s_omega(omega: &ParabolicData, v: &VVector) -> CycNum {
    SchurEvaluator::new(v, omega.level()).eval_omega(omega)
}

/// (2 sin πm/n)² = 2 − ζ_n^m − ζ_n^{−m}.
pub fn sin_sq(m: i64, n: usize) -> Result<CycNum> {
    if m.rem_euclid(n as i64) == 0 {
        return Err(Error::DegeneratePair { m, n });
    }
    Ok(&(&CycNum::from_int(n, 2) - &root_power(n, m)) - &root_power(n, -m))
}

/// Π_{i<j} (2 sin π(v_i − v_j)/(r+k))², the squared modulus of Δ(v).
pub fn sin_sq_product(v: &VVector, level: i64) -> CycNum {
    let n = v.len() + level as usize;
    let e = v.entries();
    let mut acc = CycNum::one(n);
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            acc = &acc * &sin_sq(e[i] - e[j], n).expect("v entries are distinct");
        }
    }
    acc
}

/// The sin² product raised to g − 1.
pub fn weyl_denominator(v: &VVector, genus: u32, level: i64) -> CycNum {
    sin_sq_product(v, level)
        .powi(genus as i64 - 1)
        .expect("the sin² product is nonzero")
}

/// J(e^λ)(t) = Σ_τ ε(τ) Π_i t_i^{λ_{τ(i)}} for nonnegative exponents λ.
pub fn j_alternant(exponents: &[i64], t: &[CycNum]) -> CycNum {
    let r = exponents.len();
    assert_eq!(t.len(), r, "exponent and argument counts differ");
    assert!(exponents.iter().all(|&e| e >= 0), "exponents must be nonnegative");
    let powers: Vec<Vec<CycNum>> = t
        .iter()
        .map(|ti| exponents.iter().map(|&e| ti.pow(e as u64)).collect())
        .collect();
    det_leibniz(&powers)
}

/// Σ_{μ∈P_k} S_μ S_{μ*} − ζ^{k|v|} k(r+k)^{r−1} / Π sin².
pub fn identity_52_check(v: &VVector, level: i64) -> CycNum {
    let r = v.len();
    let sets: Vec<WeightVec> = enumerate_pk(r, level).collect();
    dual_pair_residual(v, level, &sets, level)
}

/// Σ_{μ∈W_k} S_μ S_{μ*} − ζ^{k|v|} r(r+k)^{r−1} / Π sin².
pub fn identity_53_check(v: &VVector, level: i64) -> CycNum {
    let r = v.len();
    let sets: Vec<WeightVec> = enumerate_wk(r, level).collect();
    dual_pair_residual(v, level, &sets, r as i64)
}

fn dual_pair_residual(v: &VVector, level: i64, mus: &[WeightVec], factor: i64) -> CycNum {
    let r = v.len();
    let eval = SchurEvaluator::new(v, level);
    let n = eval.order();
    let terms: Vec<CycNum> = mus
        .par_iter()
        .map(|mu| &eval.eval(mu) * &eval.eval(&mu_star(mu, level)))
        .collect();
    let lhs = terms.into_iter().fold(CycNum::zero(n), |acc, t| acc + t);
    let scalar = Rational::from_integer((factor * (n as i64).pow(r as u32 - 1)).into());
    let inv_sin = sin_sq_product(v, level)
        .inverse()
        .expect("the sin² product is nonzero");
    let rhs = inv_sin.mul_root(level * v.sum()).scale(&scalar);
    (&lhs - &rhs).canonical()
}

/// Σ_{μ∈W_k} ζ_{r(r+k)}^{−|μ||v| − |μ*||v′|} S_μ(v) S_{μ*}(v′), at order r(r+k).
/// Vanishes for v ≠ v′.
pub fn identity_54_check(v: &VVector, v_prime: &VVector, level: i64) -> CycNum {
    let r = v.len();
    assert_eq!(v_prime.len(), r, "v-vectors of different rank");
    let big = r * (r + level as usize);
    let ev = SchurEvaluator::new(v, level);
    let ev_prime = SchurEvaluator::new(v_prime, level);
    let mus: Vec<WeightVec> = enumerate_wk(r, level).collect();
    let terms: Vec<CycNum> = mus
        .par_iter()
        .map(|mu| {
            let star = mu_star(mu, level);
            let prod = &ev.eval(mu) * &ev_prime.eval(&star);
            let twist = -mu.size() * v.sum() - star.size() * v_prime.sum();
            prod.promote(big)
                .expect("r + k divides r(r + k)")
                .mul_root(twist)
        })
        .collect();
    terms
        .into_iter()
        .fold(CycNum::zero(big), |acc, t| acc + t)
        .canonical()
}

/// Double-precision S_λ(ζ^v) as a ratio of complex determinants.
pub fn schur_float(lambda: &WeightVec, v: &VVector, level: i64) -> Complex64 {
    let r = v.len();
    let n = (r as i64 + level) as f64;
    let z: Vec<Complex64> = v
        .entries()
        .iter()
        .map(|&vj| Complex64::from_polar(1.0, std::f64::consts::TAU * vj as f64 / n))
        .collect();
    let matrix = |exps: &[i64]| -> Vec<Vec<Complex64>> {
        exps.iter()
            .map(|&e| z.iter().map(|zj| zj.powi(e as i32)).collect())
            .collect()
    };
    let shifted: Vec<i64> = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, l)| l + (r - 1 - i) as i64)
        .collect();
    let rho = RhoVec::new(r);
    complex_det(matrix(&shifted)) / complex_det(matrix(rho.parts()))
}

/// Gaussian elimination with partial pivoting.
pub fn complex_det(mut a: Vec<Vec<Complex64>>) -> Complex64 {
    let n = a.len();
    let mut det = Complex64::one();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[i][k].norm().total_cmp(&a[j][k].norm()))
            .unwrap();
        if a[pivot][k].norm() == 0.0 {
            return Complex64::zero();
        }
        if pivot != k {
            a.swap(pivot, k);
            det = -det;
        }
        det *= a[k][k];
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest {
            let f = row[k] / pivot_row[k];
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                *x -= f * p;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{binomial, MarkedPoint};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn wv(p: &[i64]) -> WeightVec {
        WeightVec::new(p.to_vec()).unwrap()
    }

    fn vv(p: &[i64], k: i64) -> VVector {
        VVector::new(p.to_vec(), k).unwrap()
    }

    /// Partitions with exactly `r` parts (zeros allowed) and at most `max` boxes.
    fn partitions_up_to(r: usize, max: i64) -> Vec<WeightVec> {
        crate::weights::BoundedPartitions::new(r, max, false)
            .filter(|p| p.size() <= max)
            .collect()
    }

    #[test]
    fn vvector_validation() {
        assert!(VVector::new(vec![2, 0], 1).is_ok());
        assert!(VVector::new(vec![3, 0], 1).is_err());
        assert!(VVector::new(vec![1, 1], 1).is_err());
        assert!(VVector::new(vec![2, 1], 1).is_err());
        assert_eq!(vv(&[4, 1, 0], 2).sum(), 5);
    }

    #[test]
    fn vvector_listing() {
        let list: Vec<Vec<i64>> = VVector::all(2, 1).iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(list, vec![vec![1, 0], vec![2, 0]]);
        assert_eq!(VVector::all(2, 2).len(), 3);
        assert_eq!(VVector::all(3, 2).len(), 6);
        for r in 1..=5usize {
            for k in 1..=5i64 {
                let all = VVector::all(r, k);
                assert_eq!(all.len() as u64, binomial(r as u64 + k as u64 - 1, r as u64 - 1));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                assert!(all.iter().all(|v| VVector::new(v.entries().to_vec(), k).is_ok()));
            }
        }
    }

    #[test]
    fn rho() {
        assert_eq!(RhoVec::new(3).parts(), &[2, 1, 0]);
        assert_eq!(RhoVec::new(3).size(), 3);
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let odd = perms.iter().filter(|(_, o)| *o).count();
        assert_eq!(odd, 3);
        for (p, o) in perms.iter() {
            let inversions = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(inversions % 2 == 1, *o);
        }
    }

    #[test]
    fn schur_examples() {
        for k in 1..=3 {
            for v in VVector::all(2, k) {
                let n = 2 + k as usize;
                let z1 = root_power(n, v.entries()[0]);
                assert!(schur_at(&wv(&[0, 0]), &v, k).is_one());
                assert_eq!(schur_at(&wv(&[1, 0]), &v, k), &z1 + &CycNum::one(n));
                assert_eq!(schur_at(&wv(&[1, 1]), &v, k), z1);
            }
        }
    }

    #[test]
    fn brute_examples() {
        let v = vv(&[2, 0], 3);
        let z1 = root_power(5, 2);
        let one = CycNum::one(5);
        assert_eq!(schur_brute(&wv(&[1, 0]), &v, 3).unwrap(), &z1 + &one);
        let h2 = &(&(&z1 * &z1) + &z1) + &one;
        assert_eq!(schur_brute(&wv(&[2, 0]), &v, 3).unwrap(), h2);
        assert!(matches!(
            schur_brute(&wv(&[5, 4]), &v, 3),
            Err(Error::SizeGuard { boxes: 9, limit: 8 })
        ));
    }

    #[test]
    fn bialternant_matches_tableaux() {
        for r in 1..=3 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    for lambda in partitions_up_to(r, 6) {
                        assert_eq!(
                            schur_at(&lambda, &v, k),
                            schur_brute(&lambda, &v, k).unwrap(),
                            "lambda={lambda} v={v} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bareiss_matches_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for size in 1..=5 {
            for _ in 0..6 {
                let n = rng.random_range(1..=12);
                let m: Vec<Vec<CycNum>> = (0..size)
                    .map(|_| {
                        (0..size)
                            .map(|_| {
                                let c = (0..n).map(|_| Rational::from_integer(rng.random_range(-3..=3).into())).collect();
                                CycNum::from_coeffs(n, c)
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(det_bareiss(&m), det_leibniz(&m));
            }
        }
    }

    #[test]
    fn bareiss_handles_zero_pivots() {
        let n = 4;
        let z = |e: i64| root_power(n, e);
        let m = vec![
            vec![CycNum::zero(n), z(1), z(2)],
            vec![z(1), CycNum::zero(n), z(3)],
            vec![z(0), z(2), CycNum::zero(n)],
        ];
        assert_eq!(det_bareiss(&m), det_leibniz(&m));
        let singular = vec![vec![z(1), z(2)], vec![z(1), z(2)]];
        assert!(det_bareiss(&singular).is_zero());
    }

    #[test]
    fn large_rank_uses_elimination() {
        let (r, k) = (6, 1);
        for v in VVector::all(r, k).into_iter().take(3) {
            for lambda in [wv(&[1, 0, 0, 0, 0, 0]), wv(&[1, 1, 0, 0, 0, 0]), wv(&[2, 1, 1, 0, 0, 0])] {
                assert_eq!(schur_at(&lambda, &v, k), schur_brute(&lambda, &v, k).unwrap());
            }
        }
    }

    #[test]
    fn s_omega_examples() {
        let v = vv(&[2, 0], 2);
        assert!(s_omega(&ParabolicData::empty(2, 2).unwrap(), &v).is_one());
        // λ = (1,1) at level 2: a = 1 with multiplicity 2
        let p = |l: &str| MarkedPoint::new(l, vec![2], vec![1]);
        let omega = ParabolicData::new(2, 2, vec![p("a"), p("b")]).unwrap();
        assert_eq!(s_omega(&omega, &v), root_power(4, 4));
        let omega = ParabolicData::new(2, 2, vec![p("a")]).unwrap();
        assert_eq!(s_omega(&omega, &v), root_power(4, 2));
    }

    #[test]
    fn sin_sq_examples() {
        assert_eq!(sin_sq(1, 3).unwrap(), CycNum::from_int(3, 3));
        for n in 2..=12usize {
            for m in 1..n as i64 {
                assert_eq!(sin_sq(m, n).unwrap(), sin_sq(n as i64 - m, n).unwrap());
                let x = sin_sq(m, n).unwrap().embed();
                assert!(x.im.abs() < 1e-12 && x.re > 0.0);
            }
        }
        assert!((sin_sq(1, 4).unwrap().embed().re - 2.0).abs() < 1e-12);
        assert!(matches!(sin_sq(6, 3), Err(Error::DegeneratePair { m: 6, n: 3 })));
    }

    #[test]
    fn weyl_denominator_examples() {
        let v = vv(&[1, 0], 1);
        assert!(weyl_denominator(&v, 1, 1).is_one());
        assert_eq!(weyl_denominator(&v, 2, 1), CycNum::from_int(3, 3));
        let third = Rational::new(1.into(), 3.into());
        assert_eq!(weyl_denominator(&v, 0, 1), CycNum::from_rational(3, third));
    }

    #[test]
    fn sin_product_is_delta_norm() {
        for r in 1..=3 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    let d = vandermonde(&v, k);
                    assert_eq!(&d * &d.conjugate(), sin_sq_product(&v, k));
                }
            }
        }
    }

    #[test]
    fn j_alternant_properties() {
        let n = 5;
        let t = vec![root_power(n, 2), root_power(n, 2)];
        assert!(j_alternant(&[3, 0], &t).is_zero());
        let t = vec![root_power(n, 1), root_power(n, 3)];
        assert_eq!(j_alternant(&[2, 0], &t), -j_alternant(&[0, 2], &t));
    }

    #[test]
    fn schur_is_j_alternant_over_delta() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=3usize {
            for k in 1..=3i64 {
                let n = r + k as usize;
                let mus: Vec<WeightVec> = enumerate_pk(r, k).collect();
                let vs = VVector::all(r, k);
                for _ in 0..5 {
                    let mu = &mus[rng.random_range(0..mus.len())];
                    let v = &vs[rng.random_range(0..vs.len())];
                    let rho = RhoVec::new(r);
                    let t: Vec<CycNum> = mu
                        .parts()
                        .iter()
                        .zip(rho.parts())
                        .map(|(m, p)| root_power(n, m + p))
                        .collect();
                    let j = j_alternant(v.entries(), &t);
                    let delta = vandermonde(v, k);
                    assert_eq!(schur_at(mu, v, k), &j * &delta.inverse().unwrap());
                }
            }
        }
    }

    #[test]
    fn conjugate_dual_law() {
        for r in 1..=3 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    for mu in enumerate_pk(r, k) {
                        let lhs = schur_at(&mu_star(&mu, k), &v, k);
                        let rhs = schur_at(&mu, &v, k).conjugate().mul_root(k * v.sum());
                        assert_eq!(lhs, rhs, "mu={mu} v={v} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn determinant_shift_law() {
        for r in 1..=3 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    for mu in enumerate_pk(r, k) {
                        let base = schur_at(&mu, &v, k);
                        for a in 0..=3 {
                            assert_eq!(schur_at(&mu.shifted(a), &v, k), base.mul_root(a * v.sum()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn values_are_cyclotomic_integers() {
        for r in 1..=3 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    for lambda in partitions_up_to(r, 5) {
                        assert!(schur_at(&lambda, &v, k).is_cyclotomic_integer());
                    }
                }
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(identity_52_check(&vv(&[1, 0], 1), 1).is_zero());
        assert!(identity_53_check(&vv(&[1, 0], 1), 1).is_zero());
        assert!(identity_54_check(&vv(&[1, 0], 2), &vv(&[2, 0], 2), 2).is_zero());
    }

    #[test]
    fn identity_residuals_vanish_on_small_grid() {
        for r in 1..=3 {
            for k in 1..=3 {
                let vs = VVector::all(r, k);
                for v in &vs {
                    assert!(identity_52_check(v, k).is_zero(), "P_k orthogonality r={r} k={k} v={v}");
                    assert!(identity_53_check(v, k).is_zero(), "W_k orthogonality r={r} k={k} v={v}");
                }
                for (i, v) in vs.iter().enumerate() {
                    for w in &vs[i + 1..] {
                        assert!(identity_54_check(v, w, k).is_zero(), "v-vector orthogonality r={r} k={k} {v} {w}");
                    }
                }
            }
        }
    }

    #[test]
    fn float_schur_matches_exact() {
        for r in 1..=4 {
            for k in 1..=3 {
                for v in VVector::all(r, k) {
                    for lambda in partitions_up_to(r, 4) {
                        let exact = schur_at(&lambda, &v, k).embed();
                        let approx = schur_float(&lambda, &v, k);
                        assert!((exact - approx).norm() < 1e-9, "{lambda} {v}");
                    }
                }
            }
        }
    }
}
