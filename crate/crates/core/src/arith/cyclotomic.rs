//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Numbers are stored in the power basis `1, ζ, …, ζ^{φ(m)-1}` with a common
//! positive denominator, reduced modulo the `m`-th cyclotomic polynomial.
//! Character values are naturally produced as integer combinations of roots of
//! unity; [`RootSum`] accumulates those cheaply and converts to canonical form on
//! demand.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::numtheory::{divisors, euler_phi, gcd_i128};

/// Power-basis data for `Q(ζ_m)`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    /// Coefficients of `Φ_m`, low degree first, length `degree + 1`.
    poly: Vec<i64>,
    /// `x^k mod Φ_m` for `0 <= k < m`.
    powers: Vec<Vec<i64>>,
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();

/// Shared field descriptor for conductor `m` (cached).
pub fn cyclotomic_field(m: u32) -> Arc<CyclotomicField> {
    assert!(m >= 1, "conductor must be positive");
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(m)
        .or_insert_with(|| Arc::new(CyclotomicField::build(m)))
        .clone()
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m as u64) {
        let d = d as u32;
        if d == m {
            continue;
        }
        num = poly_exact_div(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn poly_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact polynomial division");
    q
}

impl CyclotomicField {
    fn build(m: u32) -> Self {
        let poly = cyclotomic_polynomial(m);
        let degree = poly.len() - 1;
        debug_assert_eq!(degree as u64, euler_phi(m as u64));
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 0 {
            unreachable!("cyclotomic polynomials have positive degree");
        }
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] -= top * poly[i];
                }
            }
        }
        CyclotomicField {
            conductor: m,
            degree,
            poly,
            powers,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// `φ(m)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    /// Power-basis coordinates of `ζ^k`.
    pub fn power(&self, k: u64) -> &[i64] {
        &self.powers[(k % self.conductor as u64) as usize]
    }
}

/// An element of `Q(ζ_m)` in canonical power-basis form.
#[derive(Clone)]
pub struct CyclotomicNumber {
    field: Arc<CyclotomicField>,
    num: Vec<i128>,
    den: i128,
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor
            && self.den == other.den
            && self.num == other.num
    }
}
impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den != 1 {
            write!(f, "(")?;
        }
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let a = c.unsigned_abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if a != 1 {
                        write!(f, "{}*", a)?;
                    }
                    if i == 1 {
                        write!(f, "z{}", self.field.conductor)?;
                    } else {
                        write!(f, "z{}^{}", self.field.conductor, i)?;
                    }
                }
            }
        }
        if self.den != 1 {
            write!(f, ")/{}", self.den)?;
        }
        Ok(())
    }
}

impl CyclotomicNumber {
    pub fn zero(m: u32) -> Self {
        let field = cyclotomic_field(m);
        let n = field.degree;
        CyclotomicNumber {
            field,
            num: vec![0; n],
            den: 1,
        }
    }

    pub fn from_int(m: u32, v: i128) -> Self {
        let mut z = Self::zero(m);
        z.num[0] = v;
        z
    }

    pub fn from_rational(m: u32, num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        let mut z = Self::zero(m);
        z.num[0] = num;
        z.den = den;
        z.normalize();
        z
    }

    /// `ζ_m^k`.
    pub fn root(m: u32, k: u64) -> Self {
        let field = cyclotomic_field(m);
        let num = field.power(k).iter().map(|&c| c as i128).collect();
        CyclotomicNumber { field, num, den: 1 }
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Numerator coefficients in the power basis.
    pub fn numerators(&self) -> &[i128] {
        &self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|&c| c == 0)
    }

    /// True when all power-basis coefficients are integers (equivalently, the
    /// number is an algebraic integer, since `Z[ζ_m]` is the full ring of
    /// integers).
    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// The rational value, if the number lies in `Q`.
    pub fn as_rational(&self) -> Option<(i128, i128)> {
        if self.num[1..].iter().all(|&c| c == 0) {
            Some((self.num[0], self.den))
        } else {
            None
        }
    }

    /// The integer value, if the number is a rational integer.
    pub fn as_integer(&self) -> Option<i128> {
        match self.as_rational() {
            Some((n, 1)) => Some(n),
            _ => None,
        }
    }

    fn normalize(&mut self) {
        if self.den < 0 {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -*c;
            }
        }
        let mut g = self.den;
        for &c in &self.num {
            g = gcd_i128(g, c);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.den /= g;
            for c in &mut self.num {
                *c /= g;
            }
        }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "cyclotomic conductors differ"
        );
    }

    /// Multiply by the rational `n/d`.
    pub fn scale(&self, n: i128, d: i128) -> Self {
        assert!(d != 0, "zero denominator");
        let mut out = self.clone();
        for c in &mut out.num {
            *c = c.checked_mul(n).expect("cyclotomic coefficient overflow");
        }
        out.den = out.den.checked_mul(d).expect("cyclotomic denominator overflow");
        out.normalize();
        out
    }

    /// Apply the Galois automorphism `ζ ↦ ζ^a` (`gcd(a, m) = 1`).
    pub fn galois(&self, a: u64) -> Self {
        let m = self.field.conductor as u64;
        let mut acc = vec![0i128; self.field.degree];
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = self.field.power((i as u64 * a) % m);
            for (t, &pc) in acc.iter_mut().zip(p) {
                *t += c * pc as i128;
            }
        }
        let mut out = CyclotomicNumber {
            field: self.field.clone(),
            num: acc,
            den: self.den,
        };
        out.normalize();
        out
    }

    /// Complex conjugate, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let m = self.field.conductor as u64;
        self.galois(m - 1)
    }

    /// Brute-force trace to `Q`: the sum of all Galois conjugates.
    pub fn trace(&self) -> (i128, i128) {
        let m = self.field.conductor as u64;
        let mut acc = Self::zero(self.field.conductor);
        for a in 1..=m {
            if super::numtheory::gcd(a, m) == 1 {
                acc = &acc + &self.galois(a);
            }
        }
        acc.as_rational().expect("trace must be rational")
    }

    /// Brute-force norm to `Q`: the product of all Galois conjugates.
    pub fn norm(&self) -> (i128, i128) {
        let m = self.field.conductor as u64;
        let mut acc = Self::from_int(self.field.conductor, 1);
        for a in 1..=m {
            if super::numtheory::gcd(a, m) == 1 {
                acc = &acc * &self.galois(a);
            }
        }
        acc.as_rational().expect("norm must be rational")
    }

    /// Re-express in a larger conductor `m2` (a multiple of `m`).
    pub fn lift_to(&self, m2: u32) -> Self {
        let m = self.field.conductor;
        assert!(m2 % m == 0, "target conductor must be a multiple");
        let step = (m2 / m) as u64;
        let target = cyclotomic_field(m2);
        let mut acc = vec![0i128; target.degree];
        for (i, &c) in self.num.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, &pc) in acc.iter_mut().zip(target.power(i as u64 * step)) {
                *t += c * pc as i128;
            }
        }
        let mut out = CyclotomicNumber {
            field: target,
            num: acc,
            den: self.den,
        };
        out.normalize();
        out
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_same(rhs);
        let den = lcm_i128(self.den, rhs.den);
        let (fa, fb) = (den / self.den, den / rhs.den);
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(&a, &b)| a * fa + b * fb)
            .collect();
        let mut out = CyclotomicNumber {
            field: self.field.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            field: self.field.clone(),
            num: self.num.iter().map(|&c| -c).collect(),
            den: self.den,
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.check_same(rhs);
        let n = self.field.degree;
        let m = self.field.conductor as usize;
        // raw product indexed by exponent mod m
        let mut raw = vec![0i128; m.max(2 * n)];
        for (i, &a) in self.num.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.num.iter().enumerate() {
                if b != 0 {
                    raw[i + j] += a.checked_mul(b).expect("cyclotomic coefficient overflow");
                }
            }
        }
        let mut acc = vec![0i128; n];
        for (k, &c) in raw.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if k < n {
                acc[k] += c;
            } else {
                for (t, &pc) in acc.iter_mut().zip(self.field.power(k as u64)) {
                    *t += c * pc as i128;
                }
            }
        }
        let mut out = CyclotomicNumber {
            field: self.field.clone(),
            num: acc,
            den: self.den.checked_mul(rhs.den).expect("denominator overflow"),
        };
        out.normalize();
        out
    }
}

fn lcm_i128(a: i128, b: i128) -> i128 {
    (a / gcd_i128(a, b)).checked_mul(b).expect("denominator overflow")
}

/// A non-canonical integer combination `Σ c_k ζ_m^k` of roots of unity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RootSum {
    pub terms: BTreeMap<u32, i64>,
}

impl RootSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn root(k: u32) -> Self {
        let mut s = Self::new();
        s.add_term(k, 1);
        s
    }

    pub fn int(c: i64) -> Self {
        let mut s = Self::new();
        s.add_term(0, c);
        s
    }

    pub fn add_term(&mut self, k: u32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &RootSum, c: i64) {
        for (&k, &v) in &other.terms {
            self.add_term(k, v * c);
        }
    }

    pub fn scaled(&self, c: i64) -> RootSum {
        let mut out = RootSum::new();
        out.add_assign_scaled(self, c);
        out
    }

    /// Multiply by `ζ^k` (exponents taken mod `m`).
    pub fn shifted(&self, k: u32, m: u32) -> RootSum {
        let mut out = RootSum::new();
        for (&e, &v) in &self.terms {
            out.add_term((e + k) % m, v);
        }
        out
    }

    /// `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, m: u32) -> RootSum {
        self.galois(m - 1, m)
    }

    /// `ζ ↦ ζ^a`.
    pub fn galois(&self, a: u32, m: u32) -> RootSum {
        let mut out = RootSum::new();
        for (&e, &v) in &self.terms {
            out.add_term(((e as u64 * a as u64) % m as u64) as u32, v);
        }
        out
    }

    pub fn mul(&self, other: &RootSum, m: u32) -> RootSum {
        let mut out = RootSum::new();
        for (&a, &x) in &self.terms {
            for (&b, &y) in &other.terms {
                out.add_term((a + b) % m, x * y);
            }
        }
        out
    }

    /// Evaluate `Σ c_k ζ^k` at the rational point `ζ = 1`.
    pub fn at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn to_cyclotomic(&self, m: u32) -> CyclotomicNumber {
        let field = cyclotomic_field(m);
        let mut acc = vec![0i128; field.degree];
        for (&k, &c) in &self.terms {
            for (t, &pc) in acc.iter_mut().zip(field.power(k as u64)) {
                *t += c as i128 * pc as i128;
            }
        }
        CyclotomicNumber {
            field,
            num: acc,
            den: 1,
        }
    }
}

/// Dense accumulator indexed by exponent mod `m`; used for large sums.
#[derive(Clone, Debug)]
pub struct RootAccumulator {
    m: u32,
    coeffs: Vec<i64>,
}

impl RootAccumulator {
    pub fn new(m: u32) -> Self {
        RootAccumulator {
            m,
            coeffs: vec![0; m as usize],
        }
    }

    pub fn add(&mut self, k: u32, c: i64) {
        self.coeffs[(k % self.m) as usize] += c;
    }

    /// Add `c · ζ^shift · s`.
    pub fn add_sum(&mut self, s: &RootSum, shift: u32, c: i64) {
        for (&k, &v) in &s.terms {
            self.coeffs[((k + shift) % self.m) as usize] += v * c;
        }
    }

    /// Add `c · a · b`.
    pub fn add_product(&mut self, a: &RootSum, b: &RootSum, c: i64) {
        for (&x, &u) in &a.terms {
            for (&y, &v) in &b.terms {
                self.coeffs[((x + y) % self.m) as usize] += u * v * c;
            }
        }
    }

    pub fn to_cyclotomic(&self) -> CyclotomicNumber {
        let field = cyclotomic_field(self.m);
        let mut acc = vec![0i128; field.degree];
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, &pc) in acc.iter_mut().zip(field.power(k as u64)) {
                *t += c as i128 * pc as i128;
            }
        }
        let mut out = CyclotomicNumber { field, num: acc, den: 1 };
        out.normalize();
        out
    }
}

/// Serialized form: conductor, denominator and power-basis numerators, all as
/// decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicRecord {
    pub conductor: String,
    pub den: String,
    pub coeffs: Vec<String>,
}

impl From<&CyclotomicNumber> for CyclotomicRecord {
    fn from(z: &CyclotomicNumber) -> Self {
        CyclotomicRecord {
            conductor: z.field.conductor.to_string(),
            den: z.den.to_string(),
            coeffs: z.num.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl CyclotomicRecord {
    pub fn to_number(&self) -> Option<CyclotomicNumber> {
        let m: u32 = self.conductor.parse().ok()?;
        if m == 0 {
            return None;
        }
        let mut z = CyclotomicNumber::zero(m);
        if self.coeffs.len() != z.num.len() {
            return None;
        }
        for (c, s) in z.num.iter_mut().zip(&self.coeffs) {
            *c = s.parse().ok()?;
        }
        z.den = self.den.parse().ok()?;
        if z.den == 0 {
            return None;
        }
        z.normalize();
        Some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::numtheory::mobius;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_to_the_m_is_one() {
        for m in 1..=60u32 {
            let z = CyclotomicNumber::root(m, 1);
            let mut acc = CyclotomicNumber::from_int(m, 1);
            for _ in 0..m {
                acc = &acc * &z;
            }
            assert_eq!(acc, CyclotomicNumber::from_int(m, 1), "m = {m}");
        }
    }

    #[test]
    fn trace_and_norm_of_zeta_match_galois_sums() {
        for m in 1..=24u32 {
            let z = CyclotomicNumber::root(m, 1);
            assert_eq!(z.trace(), (mobius(m as u64) as i128, 1), "trace, m = {m}");
            let expected_norm = if m == 2 { -1 } else { 1 };
            assert_eq!(z.norm(), (expected_norm, 1), "norm, m = {m}");
        }
    }

    #[test]
    fn arithmetic_round_trips() {
        let m = 15;
        let a = &CyclotomicNumber::root(m, 2) + &CyclotomicNumber::from_rational(m, 1, 3);
        let b = &CyclotomicNumber::root(m, 7) - &CyclotomicNumber::root(m, 11);
        let s = &(&a + &b) - &b;
        assert_eq!(s, a);
        assert_eq!(a.conj().conj(), a);
        let p = &a * &b;
        assert_eq!(p.conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn root_sum_sum_of_all_roots_is_zero() {
        let m = 12;
        let mut s = RootSum::new();
        for k in 0..m {
            s.add_term(k, 1);
        }
        assert!(s.to_cyclotomic(m).is_zero());
        let mut acc = RootAccumulator::new(m);
        acc.add_sum(&s, 5, 3);
        assert!(acc.to_cyclotomic().is_zero());
    }

    #[test]
    fn lift_preserves_values() {
        let z = CyclotomicNumber::root(3, 1);
        let lifted = z.lift_to(12);
        assert_eq!(lifted, CyclotomicNumber::root(12, 4));
    }

    #[test]
    fn record_round_trip() {
        let z = &CyclotomicNumber::root(8, 3) + &CyclotomicNumber::from_rational(8, -5, 4);
        let rec = CyclotomicRecord::from(&z);
        assert_eq!(rec.to_number().unwrap(), z);
    }
}
