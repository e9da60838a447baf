//! Exact arithmetic in the cyclotomic field Q(ζ_N), ζ_N = exp(2πi/N).
//!
//! Elements are stored as rational coefficient vectors of length N, read as
//! Σ c_i ζ^i, i.e. representatives modulo x^N − 1. Multiplication is a cyclic
//! convolution on those representatives; reduction modulo the cyclotomic
//! polynomial Φ_N only happens when a canonical form is actually needed
//! (equality, zero tests, inversion, rational extraction).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Dense integer polynomial, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: &CycNum) -> CycNum {
        let mut acc = CycNum::zero(x.order());
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc = acc + CycNum::from_rational(x.order(), Rational::from_integer(c.clone()));
        }
        acc
    }

    /// Exact quotient by a monic divisor. Panics if the division leaves a
    /// remainder.
    fn exact_div_monic(&self, divisor: &IntPoly) -> IntPoly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        debug_assert!(divisor.coeffs[dd].is_one());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
            return IntPoly::new(Vec::new());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[i + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            quot[i] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
        IntPoly::new(quot)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn phi_cache() -> &'static RwLock<HashMap<usize, Arc<IntPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<IntPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Φ_N, obtained by dividing x^N − 1 by Φ_d for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: usize) -> Arc<IntPoly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    if let Some(p) = phi_cache().read().unwrap().get(&n) {
        return Arc::clone(p);
    }
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::from(-1);
    coeffs[n] = BigInt::one();
    let mut poly = IntPoly::new(coeffs);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        poly = poly.exact_div_monic(&cyclotomic_polynomial(d));
    }
    let poly = Arc::new(poly);
    phi_cache()
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&poly));
    poly
}

/// Euler's totient, i.e. deg Φ_N.
pub fn totient(n: usize) -> usize {
    (1..=n).filter(|&i| i.gcd(&n) == 1).count()
}

/// An element of Q(ζ_N).
#[derive(Clone, Debug)]
pub struct CycNum {
    order: usize,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycNum {
            order,
            coeffs: vec![Rational::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        CycNum::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: usize, q: Rational) -> Self {
        let mut out = CycNum::zero(order);
        out.coeffs[0] = q;
        out
    }

    pub fn from_int(order: usize, n: i64) -> Self {
        CycNum::from_rational(order, Rational::from_integer(n.into()))
    }

    /// Builds Σ c_i ζ^i from raw coefficients; indices wrap modulo the order.
    pub fn from_coeffs(order: usize, coeffs: Vec<Rational>) -> Self {
        let mut out = CycNum::zero(order);
        for (i, c) in coeffs.into_iter().enumerate() {
            out.coeffs[i % order] += c;
        }
        out
    }

    /// Σ counts[e] ζ^e for integer exponent counts (exponents taken mod N).
    pub fn from_exponent_counts(order: usize, counts: &[i64]) -> Self {
        let mut out = CycNum::zero(order);
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                out.coeffs[e % order] += Rational::from_integer(c.into());
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Raw representative modulo x^N − 1 (not canonical).
    pub fn raw_coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Representative reduced modulo Φ_N: every coefficient of index
    /// ≥ φ(N) is zero.
    pub fn canonical(&self) -> CycNum {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.degree().unwrap();
        let mut c = self.coeffs.clone();
        for i in (deg..c.len()).rev() {
            if c[i].is_zero() {
                continue;
            }
            let lead = std::mem::replace(&mut c[i], Rational::zero());
            for (j, p) in phi.coeffs()[..deg].iter().enumerate() {
                if !p.is_zero() {
                    c[i - deg + j] -= &lead * Rational::from_integer(p.clone());
                }
            }
        }
        CycNum {
            order: self.order,
            coeffs: c,
        }
    }

    /// Coefficients of the canonical form, truncated to length φ(N).
    pub fn canonical_coeffs(&self) -> Vec<Rational> {
        let deg = cyclotomic_polynomial(self.order).degree().unwrap();
        let mut c = self.canonical().coeffs;
        c.truncate(deg);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero) || self.canonical().coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        (self - &CycNum::one(self.order)).is_zero()
    }

    fn assert_same_order(&self, other: &CycNum) {
        assert_eq!(
            self.order, other.order,
            "cyclotomic order mismatch; promote operands first"
        );
    }

    pub fn scale(&self, q: &Rational) -> CycNum {
        if q.is_zero() {
            return CycNum::zero(self.order);
        }
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Multiplication by ζ^m, a rotation of the coefficient vector.
    pub fn mul_root(&self, m: i64) -> CycNum {
        let n = self.order;
        let shift = m.rem_euclid(n as i64) as usize;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(i + shift) % n] = c.clone();
        }
        CycNum { order: n, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = CycNum::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents go through [`CycNum::inverse`].
    pub fn powi(&self, e: i64) -> Result<CycNum> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Φ_N. The remainder sequence is run over Z[x] as a primitive
    /// pseudo-remainder sequence, carrying the cofactor of `self` along.
    pub fn inverse(&self) -> Result<CycNum> {
        let canon = self.canonical_coeffs();
        let denom = canon
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let a: Vec<BigInt> = canon
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        let mut r1 = trimmed(a);
        if r1.is_empty() {
            return Err(Error::DivisionByZero { order: self.order });
        }
        // invariant: s_i · a ≡ r_i (mod Φ_N), where a is the scaled input
        let mut r0 = cyclotomic_polynomial(self.order).coeffs().to_vec();
        let mut s0: Vec<BigInt> = Vec::new();
        let mut s1 = vec![BigInt::one()];
        while r1.len() > 1 {
            let (mult, quot, rem) = pseudo_div_rem(&r0, &r1);
            let mut s2 = sub_poly(&scale_poly(&s0, &mult), &mul_poly(&quot, &s1));
            let mut rem = rem;
            // Φ_N is irreducible, so the sequence ends in a nonzero constant
            assert!(!rem.is_empty(), "nonconstant gcd with a cyclotomic polynomial");
            let g = rem.iter().chain(&s2).fold(BigInt::zero(), |g, c| g.gcd(c));
            if !g.is_one() {
                rem.iter_mut().chain(s2.iter_mut()).for_each(|c| *c /= &g);
            }
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // s1 · a ≡ c, and a = denom · self
        let c = Rational::from_integer(r1.pop().unwrap());
        let factor = Rational::from_integer(denom) / c;
        let coeffs = s1.into_iter().map(|x| Rational::from_integer(x) * &factor).collect();
        Ok(CycNum::from_coeffs(self.order, coeffs))
    }

    /// Galois conjugation ζ ↦ ζ^{-1}; complex conjugation under [`CycNum::embed`].
    pub fn conjugate(&self) -> CycNum {
        let n = self.order;
        let mut coeffs = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(n - i) % n] = c.clone();
        }
        CycNum { order: n, coeffs }
    }

    /// The constant term, provided the canonical form has no other terms.
    pub fn as_rational(&self) -> Result<Rational> {
        let canon = self.canonical();
        if canon.coeffs[1..].iter().all(Zero::is_zero) {
            Ok(canon.coeffs[0].clone())
        } else {
            Err(Error::NotRational(Box::new(canon)))
        }
    }

    /// Embeds into Q(ζ_M) for a multiple M of the order: ζ_N ↦ ζ_M^{M/N}.
    pub fn promote(&self, target: usize) -> Result<CycNum> {
        if target == 0 || !target.is_multiple_of(self.order) {
            return Err(Error::InvalidPromotion {
                from: self.order,
                to: target,
            });
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = target / self.order;
        let mut coeffs = vec![Rational::zero(); target];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Ok(CycNum {
            order: target,
            coeffs,
        })
    }

    /// Double-precision value Σ c_i exp(2πi·i/N).
    pub fn embed(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let angle = std::f64::consts::TAU * i as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// True when every canonical coefficient is an integer.
    pub fn is_cyclotomic_integer(&self) -> bool {
        self.canonical().coeffs.iter().all(|c| c.is_integer())
    }
}

/// ζ_N^{m mod N}.
pub fn root_power(order: usize, m: i64) -> CycNum {
    CycNum::one(order).mul_root(m)
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return (self - other).is_zero();
        }
        let l = self.order.lcm(&other.order);
        let a = self.promote(l).unwrap();
        let b = other.promote(l).unwrap();
        (&a - &b).is_zero()
    }
}

impl Eq for CycNum {}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let canon = self.canonical();
        let mut terms = Vec::new();
        for (i, c) in canon.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("({c})*z{}", self.order),
                _ => format!("({c})*z{}^{i}", self.order),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add<&CycNum> for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.assert_same_order(rhs);
        CycNum {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(mut self, rhs: CycNum) -> CycNum {
        self += &rhs;
        self
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.assert_same_order(rhs);
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl Sub<&CycNum> for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.assert_same_order(rhs);
        CycNum {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(self, rhs: CycNum) -> CycNum {
        &self - &rhs
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl Mul<&CycNum> for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.assert_same_order(rhs);
        let n = self.order;
        let lhs: Vec<(usize, &Rational)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out = vec![Rational::zero(); n];
        for (j, b) in rhs.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for &(i, a) in &lhs {
                let k = if i + j >= n { i + j - n } else { i + j };
                out[k] += a * b;
            }
        }
        CycNum {
            order: n,
            coeffs: out,
        }
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: CycNum) -> CycNum {
        &self * &rhs
    }
}

impl std::iter::Sum for CycNum {
    /// Panics on an empty iterator, since the order would be unknown.
    fn sum<I: Iterator<Item = CycNum>>(mut iter: I) -> CycNum {
        let mut acc = iter.next().expect("sum of an empty sequence of CycNum");
        for x in iter {
            acc += &x;
        }
        acc
    }
}

fn trimmed(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn scale_poly(p: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    trimmed(p.iter().map(|x| x * c).collect())
}

fn sub_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let zero = BigInt::zero();
    let len = a.len().max(b.len());
    trimmed(
        (0..len)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn mul_poly(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trimmed(out)
}

/// Pseudo-division over Z: returns (m, q, r) with m · a = q · b + r and
/// deg r < deg b, where m is a power of the leading coefficient of b.
fn pseudo_div_rem(a: &[BigInt], b: &[BigInt]) -> (BigInt, Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    let mut mult = BigInt::one();
    if rem.len() <= db {
        return (mult, Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = std::mem::take(&mut rem[i + db]);
        if c.is_zero() {
            continue;
        }
        if !lead.is_one() {
            rem[..i + db].iter_mut().for_each(|x| *x *= lead);
            quot.iter_mut().for_each(|x| *x *= lead);
            mult *= lead;
        }
        for (j, y) in b[..db].iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        quot[i] += c;
    }
    rem.truncate(db);
    (mult, trimmed(quot), trimmed(rem))
}
