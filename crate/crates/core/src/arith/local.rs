//! Finite local coefficient rings `R_N = O/π^N`.
//!
//! `O` is the valuation ring of `Q_p(ζ_m)` at a fixed prime above `p`. Writing
//! `m = p^a·m'` with `p ∤ m'`, the unramified part `W = W(F_{p^d})`, `d = ord_{m'}(p)`,
//! is realised as `Z/p^M[y]/(h(y))` for a fixed monic irreducible `h` over `F_p`,
//! and the ramified part is adjoined through the Eisenstein polynomial
//! `Φ_{p^a}(1 + π)` of degree `e = φ(p^a)`. An element is stored as
//! `Σ_{i<e} c_i π^i` with `c_i ∈ W`; digit `c_i` is kept modulo
//! `p^{⌈(N-i)/e⌉}`, which is exactly reduction modulo `π^N`.
//!
//! `ζ_{m'}` is obtained by Newton lifting an element of order `m'` of
//! `F_p[y]/(h)`, and `ζ_{p^a} = 1 + π`, so `ζ_m = ζ_{m'}(1 + π)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::cyclotomic::CyclotomicNumber;
use super::numtheory::{factorize, is_prime, mult_order, vp};
use crate::error::{Error, Result};

/// An element of a [`LocalRing`], as `e·d` coefficients (digit-major).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RElem(pub Vec<u64>);

impl RElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }
}

#[derive(Debug)]
struct Inner {
    p: u64,
    m: u64,
    ramified_exp: u32,
    m_prime: u64,
    e: usize,
    d: usize,
    precision: u32,
    pm: u64,
    digit_mod: Vec<u64>,
    /// Low coefficients of the monic irreducible `h`, entries in `[0, p)`.
    h: Vec<u64>,
    /// Low coefficients of the Eisenstein polynomial, reduced mod `p^M`.
    eis: Vec<u64>,
    /// `π^{e-1} ε^{-1}` where `π^e = p ε`.
    pi_shift: Vec<u64>,
    zeta_pows: Vec<RElem>,
}

/// The ring `O/π^N`; cheap to clone.
#[derive(Clone)]
pub struct LocalRing(Arc<Inner>);

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalRing(p={}, m={}, N={}, e={}, d={})",
            self.0.p, self.0.m, self.0.precision, self.0.e, self.0.d
        )
    }
}

impl PartialEq for LocalRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m && self.0.precision == other.0.precision
    }
}

static RINGS: OnceLock<Mutex<HashMap<(u64, u64, u32), LocalRing>>> = OnceLock::new();

/// Build (or fetch from cache) the context `O/π^N` for `Q_p(ζ_m)`.
pub fn build_local_ring(p: u64, m: u64, precision: i64) -> Result<LocalRing> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} is not prime")));
    }
    if m == 0 {
        return Err(Error::InvalidInput("conductor m must be positive".into()));
    }
    if precision <= 0 {
        return Err(Error::InvalidInput(format!(
            "precision N = {precision} must be positive"
        )));
    }
    let n = precision as u32;
    let cache = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().expect("ring cache poisoned").get(&(p, m, n)) {
        return Ok(r.clone());
    }
    let ring = LocalRing::construct(p, m, n)?;
    cache
        .lock()
        .expect("ring cache poisoned")
        .insert((p, m, n), ring.clone());
    Ok(ring)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    if a <= 0 {
        0
    } else {
        (a + b - 1) / b
    }
}

impl LocalRing {
    fn construct(p: u64, m: u64, n: u32) -> Result<Self> {
        let a = vp(m, p);
        let m_prime = m / p.pow(a);
        let e = if a == 0 { 1 } else { ((p - 1) * p.pow(a - 1)) as usize };
        let d = mult_order(p % m_prime.max(1), m_prime.max(1)) as usize;
        let d = d.max(1);
        let cap = ceil_div(n as i64, e as i64) as u32;
        let pm = p
            .checked_pow(cap)
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| Error::InvalidInput("precision too large for word arithmetic".into()))?;
        let digit_mod = (0..e)
            .map(|i| p.pow(ceil_div(n as i64 - i as i64, e as i64) as u32))
            .collect();
        let h = first_irreducible(p, d);
        let eis = eisenstein_coeffs(p, a, e, pm);
        let inner = Inner {
            p,
            m,
            ramified_exp: a,
            m_prime,
            e,
            d,
            precision: n,
            pm,
            digit_mod,
            h,
            eis,
            pi_shift: Vec::new(),
            zeta_pows: Vec::new(),
        };
        let mut ring = LocalRing(Arc::new(inner));

        // ε = π^e / p = -Σ (E_r / p) π^r, computed from the exact coefficients mod p^{M+1}.
        let eis_hi = eisenstein_coeffs(p, a, e, pm * p);
        let mut eps = ring.zero();
        for (r, &c) in eis_hi.iter().enumerate() {
            let q = if a == 0 {
                // π = p: E(π) = π - p so ε = 1
                if r == 0 {
                    1
                } else {
                    0
                }
            } else {
                debug_assert_eq!(c % p, 0);
                (pm - (c / p) % pm) % pm
            };
            eps.0[r * ring.0.d] = q;
        }
        ring.canon(&mut eps.0);
        let eps_inv = ring
            .inv(&eps)
            .expect("ε is a unit by construction of the Eisenstein polynomial");
        let mut pi_pow = ring.one();
        for _ in 0..e - 1 {
            pi_pow = ring.mul(&pi_pow, &ring.uniformizer_raw());
        }
        let pi_shift = ring.mul(&pi_pow, &eps_inv).0;

        // ζ_{m'} by Newton lifting, ζ_{p^a} = 1 + π.
        let zeta_mp = ring.lift_root_of_unity(m_prime);
        let zeta = if a == 0 {
            zeta_mp
        } else {
            let one_plus_pi = ring.add(&ring.one(), &ring.uniformizer_raw());
            ring.mul(&zeta_mp, &one_plus_pi)
        };
        let mut pows = Vec::with_capacity(m as usize);
        let mut cur = ring.one();
        for _ in 0..m {
            pows.push(cur.clone());
            cur = ring.mul(&cur, &zeta);
        }
        if cur != ring.one() {
            return Err(Error::Internal("ζ_m^m ≠ 1 in the local ring".into()));
        }
        {
            let inner = Arc::get_mut(&mut ring.0).expect("fresh ring is uniquely owned");
            inner.pi_shift = pi_shift;
            inner.zeta_pows = pows;
        }
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn conductor(&self) -> u64 {
        self.0.m
    }
    /// Ramification index `e`.
    pub fn e(&self) -> usize {
        self.0.e
    }
    /// Residue degree `d`, so that `k = F_{p^d}`.
    pub fn d(&self) -> usize {
        self.0.d
    }
    /// `π`-adic precision `N`.
    pub fn precision(&self) -> u32 {
        self.0.precision
    }
    pub fn residue_field_size(&self) -> u64 {
        self.0.p.pow(self.0.d as u32)
    }
    pub fn ramified_exponent(&self) -> u32 {
        self.0.ramified_exp
    }
    pub fn unramified_conductor(&self) -> u64 {
        self.0.m_prime
    }
    /// Number of machine words per element.
    pub fn width(&self) -> usize {
        self.0.e * self.0.d
    }
    /// Coefficients of the irreducible polynomial defining the residue field.
    pub fn residue_polynomial(&self) -> &[u64] {
        &self.0.h
    }

    /// Same field, different precision.
    pub fn with_precision(&self, n: u32) -> LocalRing {
        build_local_ring(self.0.p, self.0.m, n as i64).expect("valid parameters")
    }

    /// The residue field `k = O/π` as a ring of precision 1.
    pub fn residue_ring(&self) -> LocalRing {
        self.with_precision(1)
    }

    pub fn zero(&self) -> RElem {
        RElem(vec![0; self.width()])
    }

    pub fn one(&self) -> RElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> RElem {
        let mut x = self.zero();
        x.0[0] = (v as i128).rem_euclid(self.0.pm as i128) as u64;
        self.canon(&mut x.0);
        x
    }

    /// `π` (equal to `p` in the unramified case).
    pub fn uniformizer(&self) -> RElem {
        let mut x = self.uniformizer_raw();
        self.canon(&mut x.0);
        x
    }

    fn uniformizer_raw(&self) -> RElem {
        let mut x = self.zero();
        if self.0.e == 1 {
            x.0[0] = self.0.p % self.0.pm;
        } else {
            x.0[self.0.d] = 1;
        }
        x
    }

    /// `ζ_m^k`.
    pub fn root(&self, k: u64) -> RElem {
        self.0.zeta_pows[(k % self.0.m) as usize].clone()
    }

    pub fn root_ref(&self, k: u64) -> &RElem {
        &self.0.zeta_pows[(k % self.0.m) as usize]
    }

    /// Canonical reduction modulo `π^N`.
    pub fn canon(&self, x: &mut [u64]) {
        let d = self.0.d;
        for i in 0..self.0.e {
            let md = self.0.digit_mod[i];
            for c in &mut x[i * d..(i + 1) * d] {
                *c %= md;
            }
        }
    }

    /// Canonical representative modulo `π^v` (`v <= N`).
    pub fn truncate(&self, x: &RElem, v: u32) -> RElem {
        let d = self.0.d;
        let e = self.0.e as i64;
        let mut out = x.clone();
        for i in 0..self.0.e {
            let md = self.0.p.pow(ceil_div(v as i64 - i as i64, e) as u32);
            for c in &mut out.0[i * d..(i + 1) * d] {
                *c %= md;
            }
        }
        out
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = a.clone();
        self.add_assign(&mut out.0, &b.0);
        out
    }

    pub fn sub(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = a.clone();
        self.sub_assign(&mut out.0, &b.0);
        out
    }

    pub fn neg(&self, a: &RElem) -> RElem {
        let mut out = self.zero();
        self.sub_assign(&mut out.0, &a.0);
        out
    }

    pub fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        let d = self.0.d;
        for i in 0..self.0.e {
            let md = self.0.digit_mod[i];
            for j in i * d..(i + 1) * d {
                let s = a[j] + b[j];
                a[j] = if s >= md { s - md } else { s };
            }
        }
    }

    pub fn sub_assign(&self, a: &mut [u64], b: &[u64]) {
        let d = self.0.d;
        for i in 0..self.0.e {
            let md = self.0.digit_mod[i];
            for j in i * d..(i + 1) * d {
                a[j] = if a[j] >= b[j] { a[j] - b[j] } else { a[j] + md - b[j] };
            }
        }
    }

    /// `acc += n·x` for a nonnegative integer `n` (digitwise, no reduction by `h`).
    pub fn add_scaled_int(&self, acc: &mut [u64], x: &[u64], n: u64) {
        let d = self.0.d;
        for i in 0..self.0.e {
            let md = self.0.digit_mod[i] as u128;
            for j in i * d..(i + 1) * d {
                acc[j] = ((acc[j] as u128 + x[j] as u128 * n as u128) % md) as u64;
            }
        }
    }

    pub fn mul(&self, a: &RElem, b: &RElem) -> RElem {
        let mut out = self.zero();
        self.mul_into(&a.0, &b.0, &mut out.0);
        out
    }

    /// `out = a·b`.
    pub fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let d = self.0.d;
        let e = self.0.e;
        let pm = self.0.pm as u128;
        let rd = 2 * d - 1;
        let re = 2 * e - 1;
        let mut raw = vec![0u128; re * rd];
        let mut any = false;
        for i in 0..e {
            let ai = &a[i * d..(i + 1) * d];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for k in 0..e {
                let bk = &b[k * d..(k + 1) * d];
                if bk.iter().all(|&c| c == 0) {
                    continue;
                }
                any = true;
                let row = &mut raw[(i + k) * rd..(i + k + 1) * rd];
                for (s, &x) in ai.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let x = x as u128;
                    for (t, &y) in bk.iter().enumerate() {
                        row[s + t] += x * y as u128;
                    }
                }
            }
        }
        out.iter_mut().for_each(|c| *c = 0);
        if !any {
            return;
        }
        // reduce each digit modulo h(y)
        let mut digits = vec![0u64; re * d];
        for s in 0..re {
            let row = &mut raw[s * rd..(s + 1) * rd];
            for t in (d..rd).rev() {
                let c = row[t] % pm;
                if c == 0 {
                    continue;
                }
                row[t] = 0;
                for (j, &hj) in self.0.h.iter().enumerate() {
                    if hj != 0 {
                        row[t - d + j] += c * (pm - hj as u128);
                    }
                }
            }
            for t in 0..d {
                digits[s * d + t] = (row[t] % pm) as u64;
            }
        }
        // reduce π^s for s >= e via π^e = -Σ E_r π^r
        for s in (e..re).rev() {
            for t in 0..d {
                let c = digits[s * d + t] as u128;
                if c == 0 {
                    continue;
                }
                digits[s * d + t] = 0;
                for (r, &er) in self.0.eis.iter().enumerate() {
                    if er != 0 {
                        let idx = (s - e + r) * d + t;
                        digits[idx] = ((digits[idx] as u128 + c * (pm - er as u128)) % pm) as u64;
                    }
                }
            }
        }
        out.copy_from_slice(&digits[..e * d]);
        self.canon(out);
    }

    /// `acc -= a·b`.
    pub fn mul_sub_assign(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let mut tmp = vec![0u64; self.width()];
        self.mul_into(a, b, &mut tmp);
        self.sub_assign(acc, &tmp);
    }

    /// `acc += a·b`.
    pub fn mul_add_assign(&self, acc: &mut [u64], a: &[u64], b: &[u64]) {
        let mut tmp = vec![0u64; self.width()];
        self.mul_into(a, b, &mut tmp);
        self.add_assign(acc, &tmp);
    }

    /// `π`-adic valuation in units where `v(π) = 1`; `None` means the element is
    /// zero in `R_N` (valuation at least `N`).
    pub fn valuation(&self, x: &[u64]) -> Option<u32> {
        let d = self.0.d;
        let mut best: Option<u32> = None;
        for i in 0..self.0.e {
            for &c in &x[i * d..(i + 1) * d] {
                if c != 0 {
                    let v = self.0.e as u32 * vp(c, self.0.p) + i as u32;
                    best = Some(best.map_or(v, |b: u32| b.min(v)));
                }
            }
        }
        best
    }

    pub fn is_unit(&self, x: &[u64]) -> bool {
        x[..self.0.d].iter().any(|&c| c % self.0.p != 0)
    }

    /// Inverse of a unit.
    pub fn inv(&self, x: &RElem) -> Option<RElem> {
        if !self.is_unit(&x.0) {
            return None;
        }
        let p = self.0.p;
        let digit0: Vec<u64> = x.0[..self.0.d].iter().map(|&c| c % p).collect();
        let r = fp_poly_inverse_mod(&digit0, &self.0.h, p)?;
        let mut v = self.zero();
        v.0[..self.0.d].copy_from_slice(&r);
        self.canon(&mut v.0);
        let one = self.one();
        for _ in 0..64 {
            let uv = self.mul(x, &v);
            if uv == one {
                return Some(v);
            }
            let delta = self.sub(&one, &uv);
            let corr = self.mul(&v, &delta);
            v = self.add(&v, &corr);
        }
        None
    }

    /// Divide by `π` an element of positive valuation. The result is determined
    /// modulo `π^{N-1}`; the top digit is filled canonically.
    pub fn div_pi(&self, x: &RElem) -> RElem {
        let d = self.0.d;
        let e = self.0.e;
        let p = self.0.p;
        debug_assert!(x.0[..d].iter().all(|&c| c % p == 0), "division by π of a unit");
        let mut out = self.zero();
        for i in 1..e {
            out.0[(i - 1) * d..i * d].copy_from_slice(&x.0[i * d..(i + 1) * d]);
        }
        let mut c0 = self.zero();
        for j in 0..d {
            c0.0[j] = x.0[j] / p;
        }
        let shift = RElem(self.0.pi_shift.clone());
        let term = self.mul(&c0, &shift);
        self.canon(&mut out.0);
        self.add(&out, &term)
    }

    /// Divide by `π^v`; requires valuation at least `v`.
    pub fn div_pi_pow(&self, x: &RElem, v: u32) -> RElem {
        let mut y = x.clone();
        for _ in 0..v {
            y = self.div_pi(&y);
        }
        y
    }

    /// `π^v`.
    pub fn pi_pow(&self, v: u32) -> RElem {
        let mut out = self.one();
        let pi = self.uniformizer();
        for _ in 0..v {
            out = self.mul(&out, &pi);
        }
        out
    }

    /// `u` and `v` with `x = u·π^v`, `u` a unit; `None` for zero.
    pub fn split_unit(&self, x: &RElem) -> Option<(RElem, u32)> {
        let v = self.valuation(&x.0)?;
        Some((self.div_pi_pow(x, v), v))
    }

    /// Image of an integer combination of roots of unity.
    pub fn from_root_sum(&self, s: &super::cyclotomic::RootSum) -> RElem {
        let mut acc = self.zero();
        for (&k, &c) in &s.terms {
            let t = self.mul(self.root_ref(k as u64), &self.from_int(c));
            self.add_assign(&mut acc.0, &t.0);
        }
        acc
    }

    /// Image of `s / den` for an integer combination of roots of unity whose
    /// quotient is `p`-integral.
    pub fn from_root_sum_div(&self, s: &super::cyclotomic::RootSum, den: i64) -> Result<RElem> {
        assert!(den != 0, "zero denominator");
        let p = self.0.p;
        let sgn = if den < 0 { -1 } else { 1 };
        let den = den.unsigned_abs();
        let v = vp(den, p);
        let unit_den = den / p.pow(v);
        let hi = if v == 0 {
            self.clone()
        } else {
            self.with_precision(self.0.precision + v * self.0.e as u32)
        };
        let mut acc = hi.from_root_sum(s);
        if v > 0 {
            if let Some(val) = hi.valuation(&acc.0) {
                if val < v * self.0.e as u32 {
                    return Err(Error::NotIntegral(format!(
                        "quotient has negative valuation {}",
                        val as i64 - (v * self.0.e as u32) as i64
                    )));
                }
            }
            for c in &mut acc.0 {
                *c /= p.pow(v);
            }
        }
        let mut low = RElem(acc.0);
        self.canon(&mut low.0);
        let inv = self
            .inv(&self.from_int(sgn * (unit_den % self.0.pm) as i64))
            .expect("prime-to-p denominator is a unit");
        Ok(self.mul(&low, &inv))
    }

    /// `π`-adic valuation of `s / den` (`None` when exactly zero).
    pub fn valuation_of_root_sum(&self, s: &super::cyclotomic::RootSum, den: i64) -> Option<i64> {
        if s.terms.is_empty() || s.to_cyclotomic(self.0.m as u32).is_zero() {
            return None;
        }
        let shift = vp(den.unsigned_abs(), self.0.p) as i64 * self.0.e as i64;
        let mut prec = (shift as u32 + 2).max(4);
        loop {
            let ring = self.with_precision(prec);
            let img = ring.from_root_sum(s);
            if let Some(v) = ring.valuation(&img.0) {
                return Some(v as i64 - shift);
            }
            prec *= 2;
            assert!(prec <= 1024, "valuation did not stabilise");
        }
    }

    /// Image of a `p`-integral cyclotomic number (conductor dividing `m`).
    pub fn from_cyclotomic(&self, z: &CyclotomicNumber) -> Result<RElem> {
        let zc = z.conductor() as u64;
        if self.0.m % zc != 0 {
            return Err(Error::InvalidInput(format!(
                "conductor {zc} does not divide ring conductor {}",
                self.0.m
            )));
        }
        let step = self.0.m / zc;
        let den = z.denominator();
        let p = self.0.p;
        let s = vp(den as u64, p);
        let unit_den = den as u64 / p.pow(s);
        let hi_prec = self.0.precision + s * self.0.e as u32;
        let hi = if s == 0 { self.clone() } else { self.with_precision(hi_prec) };
        let mut acc = hi.zero();
        for (i, &c) in z.numerators().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let cm = (c.rem_euclid(hi.0.pm as i128)) as u64;
            let mut ce = hi.zero();
            ce.0[0] = cm;
            hi.canon(&mut ce.0);
            hi.mul_add_assign(&mut acc.0, &hi.root_ref(i as u64 * step).0, &ce.0);
        }
        if s > 0 {
            match hi.valuation(&acc.0) {
                Some(v) if v < s * self.0.e as u32 => {
                    return Err(Error::NotIntegral(format!(
                        "value has negative valuation {}",
                        v as i64 - (s * self.0.e as u32) as i64
                    )))
                }
                _ => {}
            }
            for c in &mut acc.0 {
                debug_assert_eq!(*c % p.pow(s), 0);
                *c /= p.pow(s);
            }
        }
        let mut low = self.zero();
        low.0.copy_from_slice(&acc.0);
        self.canon(&mut low.0);
        let inv = self
            .inv(&self.from_int((unit_den % self.0.pm) as i64))
            .expect("prime-to-p denominator is a unit");
        Ok(self.mul(&low, &inv))
    }

    /// Valuation of a cyclotomic number at the chosen prime: computed from the
    /// integral numerator at enough precision. `None` for exact zero.
    pub fn valuation_of(&self, z: &CyclotomicNumber) -> Option<i64> {
        if z.is_zero() {
            return None;
        }
        let den = z.denominator();
        let s = vp(den as u64, self.0.p) as i64 * self.0.e as i64;
        let num = z.scale(den, 1);
        let mut prec = self.0.precision.max(8);
        loop {
            let ring = self.with_precision(prec);
            let img = ring.from_cyclotomic(&num).expect("integral numerator");
            if let Some(v) = ring.valuation(&img.0) {
                return Some(v as i64 - s);
            }
            prec *= 2;
            if prec > 512 {
                // exact nonzero values cannot have unbounded valuation
                panic!("valuation did not stabilise");
            }
        }
    }

    /// Move an element to another precision of the same field (truncate or pad).
    pub fn convert(&self, x: &RElem, target: &LocalRing) -> RElem {
        debug_assert_eq!(self.0.p, target.0.p);
        debug_assert_eq!(self.0.m, target.0.m);
        let mut out = x.clone();
        target.canon(&mut out.0);
        out
    }

    /// Residue class in `k`, as a precision-1 element.
    pub fn residue(&self, x: &RElem) -> RElem {
        self.truncate(x, 1)
    }

    /// Deterministic representative of the residue element with index `n`
    /// (`0 <= n < |k|`), lifted with zero higher digits.
    pub fn residue_rep(&self, mut n: u64) -> RElem {
        let mut x = self.zero();
        for j in 0..self.0.d {
            x.0[j] = n % self.0.p;
            n /= self.0.p;
        }
        x
    }

    fn lift_root_of_unity(&self, order: u64) -> RElem {
        if order == 1 {
            return self.one();
        }
        let p = self.0.p;
        let h = &self.0.h;
        let d = self.0.d;
        let q = p.pow(d as u32);
        let primes: Vec<u64> = factorize(order).into_iter().map(|(r, _)| r).collect();
        let mut beta = None;
        for n in 1..q {
            let alpha = int_to_poly(n, p, d);
            let b = fp_poly_pow_mod(&alpha, (q - 1) / order, h, p);
            if is_one(&b) {
                continue;
            }
            if primes
                .iter()
                .all(|&r| !is_one(&fp_poly_pow_mod(&b, order / r, h, p)))
            {
                beta = Some(b);
                break;
            }
        }
        let beta = beta.expect("F_{p^d} contains roots of unity of order m'");
        let mut z = self.zero();
        z.0[..d].copy_from_slice(&beta);
        let one = self.one();
        let ord_elem = self.from_int(order as i64);
        for _ in 0..64 {
            let zpow = self.pow(&z, order - 1);
            let f = self.sub(&self.mul(&zpow, &z), &one);
            if self.is_zero(&f.0) {
                return z;
            }
            let fp = self.mul(&ord_elem, &zpow);
            let step = self.mul(&f, &self.inv(&fp).expect("derivative is a unit"));
            z = self.sub(&z, &step);
        }
        panic!("Newton lifting of a root of unity did not converge");
    }

    pub fn pow(&self, x: &RElem, mut k: u64) -> RElem {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Decimal rendering of the coefficient vector.
    pub fn to_strings(&self, x: &RElem) -> Vec<String> {
        x.0.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(&self, s: &[String]) -> Result<RElem> {
        if s.len() != self.width() {
            return Err(Error::Malformed("ring element has wrong width".into()));
        }
        let mut x = self.zero();
        for (c, t) in x.0.iter_mut().zip(s) {
            *c = t
                .parse()
                .map_err(|_| Error::Malformed(format!("bad coefficient {t:?}")))?;
        }
        let before = x.clone();
        self.canon(&mut x.0);
        if before != x {
            return Err(Error::Malformed("ring element not in canonical form".into()));
        }
        Ok(x)
    }
}

fn is_one(a: &[u64]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

fn int_to_poly(mut n: u64, p: u64, d: usize) -> Vec<u64> {
    let mut out = vec![0; d];
    for c in out.iter_mut() {
        *c = n % p;
        n /= p;
    }
    out
}

/// `a·b mod h` over `F_p`, `h` monic of degree `d` given by its low coefficients.
fn fp_poly_mul_mod(a: &[u64], b: &[u64], h: &[u64], p: u64) -> Vec<u64> {
    let d = h.len();
    let mut raw = vec![0u64; 2 * d.max(1)];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            raw[i + j] = (raw[i + j] + x * y) % p;
        }
    }
    for t in (d..raw.len()).rev() {
        let c = raw[t];
        if c == 0 {
            continue;
        }
        raw[t] = 0;
        for (j, &hj) in h.iter().enumerate() {
            raw[t - d + j] = (raw[t - d + j] + c * (p - hj % p)) % p;
        }
    }
    raw.truncate(d);
    raw
}

fn fp_poly_pow_mod(a: &[u64], mut k: u64, h: &[u64], p: u64) -> Vec<u64> {
    let d = h.len();
    let mut acc = vec![0u64; d];
    acc[0] = 1 % p;
    if d == 0 {
        return acc;
    }
    let mut base = a.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            acc = fp_poly_mul_mod(&acc, &base, h, p);
        }
        base = fp_poly_mul_mod(&base, &base, h, p);
        k >>= 1;
    }
    acc
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_inv(a: u64, p: u64) -> u64 {
    super::numtheory::mod_pow(a, p - 2, p)
}

/// Polynomial remainder over `F_p` (general, not necessarily monic divisor).
fn fp_poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lb = *b.last().expect("nonzero divisor");
    let inv = fp_inv(lb, p);
    while r.len() >= b.len() {
        let c = r[r.len() - 1] * inv % p;
        let shift = r.len() - b.len();
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
        }
        r = trim(r);
    }
    r
}

fn fp_poly_gcd_is_one(a: &[u64], b: &[u64], p: u64) -> bool {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = fp_poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len() == 1
}

/// Inverse of `a` modulo the monic `h` over `F_p`.
fn fp_poly_inverse_mod(a: &[u64], h: &[u64], p: u64) -> Option<Vec<u64>> {
    let d = h.len();
    let mut full_h = h.to_vec();
    full_h.push(1);
    // extended Euclid on (h, a)
    let mut r0 = trim(full_h);
    let mut r1 = trim(a.to_vec());
    let mut s0: Vec<u64> = vec![];
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // polynomial division r0 = q r1 + r
        let mut r = r0.clone();
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let inv = fp_inv(*r1.last().unwrap(), p);
        while r.len() >= r1.len() && !r.is_empty() {
            let c = r[r.len() - 1] * inv % p;
            let shift = r.len() - r1.len();
            q[shift] = c;
            for (j, &bj) in r1.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - c * bj % p) % p;
            }
            r = trim(r);
        }
        // s2 = s0 - q s1
        let mut qs = vec![0u64; q.len() + s1.len()];
        for (i, &x) in q.iter().enumerate() {
            for (j, &y) in s1.iter().enumerate() {
                qs[i + j] = (qs[i + j] + x * y) % p;
            }
        }
        let len = qs.len().max(s0.len());
        let mut s2 = vec![0u64; len];
        for (i, c) in s2.iter_mut().enumerate() {
            let a0 = s0.get(i).copied().unwrap_or(0);
            let b0 = qs.get(i).copied().unwrap_or(0);
            *c = (a0 + p - b0) % p;
        }
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = trim(s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = fp_inv(r0[0], p);
    let mut out = vec![0u64; d];
    for (i, &c) in s0.iter().enumerate() {
        if i < d {
            out[i] = c * inv % p;
        }
    }
    if d == 0 {
        return Some(out);
    }
    // reduce s0 in case its degree reached d
    let reduced = fp_poly_rem(
        &s0.iter().map(|&c| c * inv % p).collect::<Vec<_>>(),
        &{
            let mut f = h.to_vec();
            f.push(1);
            f
        },
        p,
    );
    let mut out = vec![0u64; d];
    out[..reduced.len()].copy_from_slice(&reduced);
    Some(out)
}

/// Lexicographically first monic irreducible of degree `d` over `F_p`
/// (low coefficients varying fastest), returned as its low coefficients.
fn first_irreducible(p: u64, d: usize) -> Vec<u64> {
    if d == 1 {
        return vec![0];
    }
    let primes: Vec<u64> = factorize(d as u64).into_iter().map(|(r, _)| r).collect();
    let total = p.pow(d as u32);
    for n in 0..total {
        let h = int_to_poly(n, p, d);
        if h[0] == 0 {
            continue;
        }
        if rabin_irreducible(&h, p, d, &primes) {
            return h;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

fn frobenius_power(h: &[u64], p: u64, d: usize, k: usize) -> Vec<u64> {
    let mut y = vec![0u64; d];
    y[1 % d] = 1;
    for _ in 0..k {
        y = fp_poly_pow_mod(&y, p, h, p);
    }
    y
}

fn rabin_irreducible(h: &[u64], p: u64, d: usize, primes: &[u64]) -> bool {
    let mut x = vec![0u64; d];
    x[1] = 1;
    if frobenius_power(h, p, d, d) != x {
        return false;
    }
    let mut full = h.to_vec();
    full.push(1);
    for &r in primes {
        let k = d / r as usize;
        let mut g = frobenius_power(h, p, d, k);
        g[1] = (g[1] + p - 1) % p;
        if !fp_poly_gcd_is_one(&full, &g, p) {
            return false;
        }
    }
    true
}

/// Coefficients `E_0..E_{e-1}` of `Φ_{p^a}(1 + π)` modulo `modulus`. For the
/// unramified case this is `π - p`.
fn eisenstein_coeffs(p: u64, a: u32, e: usize, modulus: u64) -> Vec<u64> {
    if a == 0 {
        return vec![(modulus - p % modulus) % modulus];
    }
    let md = modulus as u128;
    let step = p.pow(a - 1) as usize;
    let total_deg = (p as usize - 1) * step;
    debug_assert_eq!(total_deg, e);
    let mut sum = vec![0u128; total_deg + 1];
    // (1+π)^{k·step} for k = 0..p-1, by repeated multiplication
    let mut cur = vec![0u128; total_deg + 1];
    cur[0] = 1;
    for k in 0..p as usize {
        if k > 0 {
            for _ in 0..step {
                for i in (1..=total_deg).rev() {
                    cur[i] = (cur[i] + cur[i - 1]) % md;
                }
            }
        }
        for i in 0..=total_deg {
            sum[i] = (sum[i] + cur[i]) % md;
        }
    }
    debug_assert_eq!(sum[total_deg] % md, 1 % md);
    sum[..e].iter().map(|&c| c as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramified_cube_roots() {
        let r = build_local_ring(3, 3, 4).unwrap();
        assert_eq!((r.e(), r.d()), (2, 1));
        let three = r.from_int(3);
        assert_eq!(r.valuation(&three.0), Some(2));
        let pi = r.sub(&r.root(1), &r.one());
        assert_eq!(r.valuation(&pi.0), Some(1));
        // (ζ3 - 1)^2 = -3 ζ3
        let lhs = r.mul(&pi, &pi);
        let rhs = r.mul(&r.from_int(-3), &r.root(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inert_prime_in_q_zeta8() {
        let r = build_local_ring(3, 8, 4).unwrap();
        assert_eq!((r.e(), r.d()), (1, 2));
        assert_eq!(r.pow(&r.root(1), 8), r.one());
        assert_ne!(r.pow(&r.root(1), 4), r.one());
    }

    #[test]
    fn rational_case_is_integers_mod_nine() {
        let r = build_local_ring(3, 1, 2).unwrap();
        assert_eq!((r.e(), r.d(), r.width()), (1, 1, 1));
        assert_eq!(r.from_int(10), r.from_int(1));
        assert_eq!(r.valuation(&r.from_int(3).0), Some(1));
        assert_eq!(r.valuation(&r.from_int(9).0), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_local_ring(3, 0, 4).is_err());
        assert!(build_local_ring(3, 3, 0).is_err());
        assert!(build_local_ring(4, 3, 2).is_err());
    }

    #[test]
    fn inverse_and_division() {
        let r = build_local_ring(3, 120, 6).unwrap();
        assert_eq!((r.e(), r.d()), (2, 4));
        for k in 0..120 {
            let z = r.root(k);
            let zi = r.inv(&z).unwrap();
            assert_eq!(r.mul(&z, &zi), r.one());
        }
        let pi = r.uniformizer();
        let x = r.mul(&pi, &r.add(&r.root(7), &r.from_int(5)));
        let y = r.div_pi(&x);
        assert_eq!(r.truncate(&r.mul(&y, &pi), 6), x);
        let (u, v) = r.split_unit(&r.from_int(3)).unwrap();
        assert_eq!(v, 2);
        assert_eq!(r.mul(&u, &r.pi_pow(2)), r.from_int(3));
    }

    #[test]
    fn valuation_of_rationals() {
        let r = build_local_ring(3, 120, 6).unwrap();
        let x = CyclotomicNumber::from_rational(120, 1, 120);
        assert_eq!(r.valuation_of(&x), Some(-2));
        assert!(r.from_cyclotomic(&x).is_err());
        let y = CyclotomicNumber::from_rational(120, 9, 120);
        let img = r.from_cyclotomic(&y).unwrap();
        assert_eq!(r.mul(&img, &r.from_int(40)), r.from_int(3));
    }

    #[test]
    fn cyclotomic_map_is_a_ring_homomorphism() {
        let r = build_local_ring(3, 24, 5).unwrap();
        let a = &CyclotomicNumber::root(24, 5) + &CyclotomicNumber::from_int(24, 2);
        let b = &CyclotomicNumber::root(24, 17) - &CyclotomicNumber::root(24, 3);
        let lhs = r.from_cyclotomic(&(&a * &b)).unwrap();
        let rhs = r.mul(&r.from_cyclotomic(&a).unwrap(), &r.from_cyclotomic(&b).unwrap());
        assert_eq!(lhs, rhs);
    }
}
