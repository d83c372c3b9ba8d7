//! Exact arithmetic over Q and over number fields Q[x]/(m), plus the
//! integer-polynomial factorization used to split Hecke characteristic
//! polynomials (squarefree decomposition, mod-p factorization, Hensel
//! lifting, Zassenhaus recombination).

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub type Q = BigRational;

pub fn q_from_i64(x: i64) -> Q {
    Q::from(BigInt::from(x))
}

// ---------------------------------------------------------------------------
// Dense polynomials over Q
// ---------------------------------------------------------------------------

/// Coefficients low-to-high; no trailing zeros (normalized).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPoly(pub Vec<Q>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(vec![])
    }
    pub fn one() -> Self {
        QPoly(vec![Q::one()])
    }
    pub fn x() -> Self {
        QPoly(vec![Q::zero(), Q::one()])
    }
    pub fn constant(c: Q) -> Self {
        let mut p = QPoly(vec![c]);
        p.normalize();
        p
    }
    pub fn from_coeffs(v: Vec<Q>) -> Self {
        let mut p = QPoly(v);
        p.normalize();
        p
    }
    pub fn normalize(&mut self) {
        while self.0.last().map_or(false, |c| c.is_zero()) {
            self.0.pop();
        }
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
    pub fn lc(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }
    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c;
        }
        QPoly::from_coeffs(v)
    }
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] -= c;
        }
        QPoly::from_coeffs(v)
    }
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(v)
    }
    pub fn scale(&self, c: &Q) -> Self {
        QPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }
    /// (quotient, remainder) with deg r < deg divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.degree().unwrap();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        let inv_lc = Q::one() / d.lc();
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &inv_lc;
            if !c.is_zero() {
                q[i - dd] = c.clone();
                for j in 0..=dd {
                    let t = &d.0[j] * &c;
                    r[i - dd + j] -= t;
                }
            }
        }
        (QPoly::from_coeffs(q), QPoly::from_coeffs(r))
    }
    pub fn derivative(&self) -> Self {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Q::from(BigInt::from(i as u64 + 1)))
                .collect(),
        )
    }
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&(Q::one() / self.lc()))
    }
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
    /// Clear denominators and content: primitive integer polynomial with the
    /// same roots, positive leading coefficient.
    pub fn primitive_zpoly(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let mut v: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from(den.clone())).to_integer()).collect();
        let mut content = BigInt::zero();
        for c in &v {
            content = content.gcd(c);
        }
        if !content.is_zero() {
            for c in v.iter_mut() {
                *c /= &content;
            }
        }
        if v.last().map_or(false, |c| c.is_negative()) {
            for c in v.iter_mut() {
                *c = -c.clone();
            }
        }
        v
    }
}

pub fn zpoly_to_qpoly(v: &[BigInt]) -> QPoly {
    QPoly::from_coeffs(v.iter().map(|c| Q::from(c.clone())).collect())
}

// ---------------------------------------------------------------------------
// Field abstraction for linear algebra
// ---------------------------------------------------------------------------

pub trait Field: Clone + std::fmt::Debug {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_i64(&self, x: i64) -> Self::Elem;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QQ;

impl Field for QQ {
    type Elem = Q;
    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a.clone()
    }
    fn inv(&self, a: &Q) -> Q {
        Q::one() / a.clone()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, x: i64) -> Q {
        q_from_i64(x)
    }
}

// ---------------------------------------------------------------------------
// Number fields
// ---------------------------------------------------------------------------

/// Q[x]/(minpoly), minpoly monic with integer coefficients. Degree-1 fields
/// (minpoly = x - r) represent Q itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberField {
    /// Monic integer minimal polynomial, low-to-high, length degree+1.
    pub minpoly: Vec<BigInt>,
}

/// Element as polynomial in the generator, fixed length = degree.
pub type NfElem = Vec<Q>;

impl NumberField {
    pub fn new(minpoly: Vec<BigInt>) -> Arc<Self> {
        assert!(minpoly.len() >= 2, "minpoly must have degree >= 1");
        assert!(minpoly.last().unwrap().is_one(), "minpoly must be monic");
        Arc::new(NumberField { minpoly })
    }
    pub fn rationals() -> Arc<Self> {
        NumberField::new(vec![BigInt::zero(), BigInt::one()])
    }
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
    pub fn elem_from_q(&self, c: Q) -> NfElem {
        let mut v = vec![Q::zero(); self.degree()];
        v[0] = c;
        v
    }
    pub fn gen(&self) -> NfElem {
        let d = self.degree();
        if d == 1 {
            // generator is the rational root -minpoly[0]
            vec![-Q::from(self.minpoly[0].clone())]
        } else {
            let mut v = vec![Q::zero(); d];
            v[1] = Q::one();
            v
        }
    }
    fn reduce_poly(&self, mut v: Vec<Q>) -> NfElem {
        let d = self.degree();
        // reduce degrees >= d using x^d = -(m_0 + ... + m_{d-1} x^{d-1})
        for i in (d..v.len()).rev() {
            let c = std::mem::replace(&mut v[i], Q::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                let t = Q::from(self.minpoly[j].clone()) * &c;
                v[i - d + j] -= t;
            }
        }
        v.truncate(d);
        while v.len() < d {
            v.push(Q::zero());
        }
        v
    }
    pub fn nf_mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let d = self.degree();
        let mut v = vec![Q::zero(); 2 * d - 1];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                v[i + j] += &a[i] * &b[j];
            }
        }
        self.reduce_poly(v)
    }
    pub fn nf_inv(&self, a: &NfElem) -> NfElem {
        // extended Euclid in Q[x] against the minimal polynomial
        let ap = QPoly::from_coeffs(a.clone());
        assert!(!ap.is_zero(), "division by zero in number field");
        let mp = zpoly_to_qpoly(&self.minpoly);
        let (g, _s, t) = xgcd_qpoly(&mp, &ap);
        assert_eq!(g.degree(), Some(0), "element not invertible (minpoly not irreducible?)");
        let inv = t.scale(&(Q::one() / g.0[0].clone()));
        let mut v = inv.0;
        v.resize(self.degree(), Q::zero());
        self.reduce_poly(v)
    }
    pub fn nf_is_rational(&self, a: &NfElem) -> Option<Q> {
        if a[1..].iter().all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }
    /// Evaluate an integer polynomial at this field's generator.
    pub fn eval_zpoly_at_gen(&self, f: &[BigInt]) -> NfElem {
        let mut v: Vec<Q> = f.iter().map(|c| Q::from(c.clone())).collect();
        if v.is_empty() {
            v.push(Q::zero());
        }
        let out = self.reduce_poly(v);
        out
    }
}

/// Extended gcd over Q[x]: returns (g, s, t) with s*a + t*b = g.
pub fn xgcd_qpoly(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
    let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    (r0, s0, t0)
}

/// A number field as a `Field` instance.
#[derive(Debug, Clone)]
pub struct NfCtx(pub Arc<NumberField>);

impl Field for NfCtx {
    type Elem = NfElem;
    fn zero(&self) -> NfElem {
        vec![Q::zero(); self.0.degree()]
    }
    fn one(&self) -> NfElem {
        self.0.elem_from_q(Q::one())
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.0.nf_mul(a, b)
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        a.iter().map(|x| -x.clone()).collect()
    }
    fn inv(&self, a: &NfElem) -> NfElem {
        self.0.nf_inv(a)
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn from_i64(&self, x: i64) -> NfElem {
        self.0.elem_from_q(q_from_i64(x))
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (u64 prime), used by the factorization engine
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct FpPoly {
    p: u64,
    c: Vec<u64>, // low-to-high, normalized
}

impl FpPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        let mut f = FpPoly { p, c };
        f.norm();
        f
    }
    fn norm(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }
    fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }
    fn one(p: u64) -> Self {
        FpPoly { p, c: vec![1] }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn deg(&self) -> isize {
        self.c.len() as isize - 1
    }
    fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = vec![0u64; n];
        for (i, &x) in self.c.iter().enumerate() {
            v[i] = (v[i] + x) % self.p;
        }
        for (i, &x) in o.c.iter().enumerate() {
            v[i] = (v[i] + x) % self.p;
        }
        FpPoly::new(self.p, v)
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut v = vec![0u64; n];
        for (i, &x) in self.c.iter().enumerate() {
            v[i] = (v[i] + x) % self.p;
        }
        for (i, &x) in o.c.iter().enumerate() {
            v[i] = (v[i] + self.p - x % self.p) % self.p;
        }
        FpPoly::new(self.p, v)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut v = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &x) in self.c.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in o.c.iter().enumerate() {
                v[i + j] = (v[i + j] + crate::zp::mul_mod_u64(x, y, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, v)
    }
    fn scale(&self, k: u64) -> Self {
        FpPoly::new(self.p, self.c.iter().map(|&x| crate::zp::mul_mod_u64(x, k, self.p)).collect())
    }
    fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(crate::zp::mod_inverse_u64(self.lc(), self.p))
    }
    fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero());
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        let inv = crate::zp::mod_inverse_u64(d.lc(), self.p);
        for i in (dd..r.len()).rev() {
            let c = crate::zp::mul_mod_u64(r[i], inv, self.p);
            if c != 0 {
                q[i - dd] = c;
                for j in 0..=dd {
                    let t = crate::zp::mul_mod_u64(d.c[j], c, self.p);
                    r[i - dd + j] = (r[i - dd + j] + self.p - t) % self.p;
                }
            }
        }
        (FpPoly::new(self.p, q), FpPoly::new(self.p, r))
    }
    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
    fn pow_mod(&self, mut e: BigUint, m: &Self) -> Self {
        let mut acc = FpPoly::one(self.p);
        let mut b = self.divrem(m).1;
        while !e.is_zero() {
            if (&e % 2u32) == BigUint::one() {
                acc = acc.mul(&b).divrem(m).1;
            }
            b = b.mul(&b).divrem(m).1;
            e >>= 1;
        }
        acc
    }
    fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        FpPoly::new(
            self.p,
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| crate::zp::mul_mod_u64(c, (i as u64 + 1) % self.p, self.p))
                .collect(),
        )
    }
}

/// Factor a squarefree monic polynomial over F_p into monic irreducibles.
fn factor_fp_squarefree(f: &FpPoly) -> Vec<FpPoly> {
    let p = f.p;
    let mut out = Vec::new();
    // distinct-degree
    let mut v = f.monic();
    let mut h = FpPoly::new(p, vec![0, 1]); // x
    let mut d = 0usize;
    let mut stack: Vec<(FpPoly, usize)> = Vec::new();
    while v.deg() > 0 {
        d += 1;
        if (v.deg() as usize) < 2 * d {
            stack.push((v.clone(), v.deg() as usize));
            break;
        }
        h = h.pow_mod(BigUint::from(p), &v);
        let g = v.gcd(&h.sub(&FpPoly::new(p, vec![0, 1])));
        if g.deg() > 0 {
            stack.push((g.clone(), d));
            let (q, r) = v.divrem(&g);
            debug_assert!(r.is_zero());
            v = q.monic();
            h = h.divrem(&v).1;
        }
    }
    // equal-degree splitting (Cantor-Zassenhaus), deterministic pseudo-random
    let mut seed: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for (g, d) in stack {
        let mut work = vec![g];
        while let Some(w) = work.pop() {
            if w.deg() as usize == d {
                out.push(w.monic());
                continue;
            }
            // random poly of degree < deg(w)
            let r = FpPoly::new(f.p, (0..w.c.len() - 1).map(|_| next() % f.p).collect());
            if r.is_zero() {
                work.push(w);
                continue;
            }
            let e = (BigUint::from(f.p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let t = r.pow_mod(e, &w).sub(&FpPoly::one(f.p));
            let h = w.gcd(&t);
            if h.deg() <= 0 || h.deg() == w.deg() {
                work.push(w);
            } else {
                let (q, _) = w.divrem(&h);
                work.push(h);
                work.push(q.monic());
            }
        }
    }
    out.sort_by_key(|f| (f.deg(), f.c.clone()));
    out
}

// ---------------------------------------------------------------------------
// Hensel lifting of integer polynomial factorizations
// ---------------------------------------------------------------------------

fn zpoly_mod(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    f.iter().map(|c| c.mod_floor(m)).collect()
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    v
}

fn zpoly_sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate() {
        v[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        v[i] -= x;
    }
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zpoly_norm(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Division with remainder by a polynomial whose leading coefficient is a
/// unit modulo m; all arithmetic mod m.
fn zpoly_divrem_mod(a: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let d = zpoly_norm(zpoly_mod(d, m));
    assert!(!d.is_empty());
    let dd = d.len() - 1;
    let mut r = zpoly_mod(a, m);
    if r.len() <= dd {
        return (vec![], zpoly_norm(r));
    }
    let lc_inv = mod_inverse_big(d.last().unwrap(), m);
    let mut q = vec![BigInt::zero(); r.len() - dd];
    for i in (dd..r.len()).rev() {
        let c = (&r[i] * &lc_inv).mod_floor(m);
        if !c.is_zero() {
            q[i - dd] = c.clone();
            for j in 0..=dd {
                r[i - dd + j] = (&r[i - dd + j] - &d[j] * &c).mod_floor(m);
            }
        }
    }
    (zpoly_norm(q), zpoly_norm(r))
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible mod m");
    e.x.mod_floor(m)
}

fn zpoly_add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        v[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        v[i] += x;
    }
    zpoly_norm(v)
}

/// One quadratic Hensel step (von zur Gathen-Gerhard 15.10): from
/// f = g*h mod m with h monic and s*g + t*h = 1 mod m, produce the same
/// data mod m^2.
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let e = zpoly_mod(&zpoly_sub(f, &zpoly_mul(g, h)), &m2);
    // q, r with s*e = q*h + r and deg r < deg h
    let se = zpoly_mod(&zpoly_mul(s, &e), &m2);
    let (q, r) = zpoly_divrem_mod(&se, h, &m2);
    // g* = g + t*e + q*g, h* = h + r; coefficients above the true degrees
    // vanish mod m^2 (leading-coefficient argument with h* monic), so
    // normalize after reduction.
    let g_new = zpoly_norm(zpoly_mod(&zpoly_add(&zpoly_add(g, &zpoly_mul(t, &e)), &zpoly_mul(g, &q)), &m2));
    let h_new = zpoly_norm(zpoly_mod(&zpoly_add(h, &r), &m2));
    // lift the Bezout pair: b = s*g* + t*h* - 1 mod m^2
    let b = zpoly_norm(zpoly_mod(
        &zpoly_sub(&zpoly_add(&zpoly_mul(s, &g_new), &zpoly_mul(t, &h_new)), &[BigInt::one()]),
        &m2,
    ));
    let sb = zpoly_norm(zpoly_mod(&zpoly_mul(s, &b), &m2));
    let (c, d) = zpoly_divrem_mod(&sb, &h_new, &m2);
    let s_new = zpoly_norm(zpoly_mod(&zpoly_sub(s, &d), &m2));
    let t_new = zpoly_norm(zpoly_mod(
        &zpoly_sub(&zpoly_sub(t, &zpoly_mul(t, &b)), &zpoly_mul(&g_new, &c)),
        &m2,
    ));
    (g_new, h_new, s_new, t_new)
}

/// Lift a pairwise-coprime monic factorization of monic f over F_p to
/// monic factors mod p^target_exp (balanced tree of two-factor lifts).
pub fn hensel_lift_factors(
    f: &[BigInt],
    factors_mod_p: &[Vec<BigInt>],
    p: u64,
    target_exp: u32,
) -> Vec<Vec<BigInt>> {
    assert!(f.last().unwrap().is_one(), "hensel_lift_factors needs monic f");
    if factors_mod_p.len() == 1 {
        let mut g = f.to_vec();
        let m = BigInt::from(p).pow(target_exp);
        g = zpoly_mod(&g, &m);
        return vec![g];
    }
    // split into two halves: g = product of first half, h = rest
    let half = factors_mod_p.len() / 2;
    let pbig = BigInt::from(p);
    let mut g = vec![BigInt::one()];
    for fac in &factors_mod_p[..half] {
        g = zpoly_mod(&zpoly_mul(&g, fac), &pbig);
    }
    let mut h = vec![BigInt::one()];
    for fac in &factors_mod_p[half..] {
        h = zpoly_mod(&zpoly_mul(&h, fac), &pbig);
    }
    // Bezout s*g + t*h = 1 mod p via Fp xgcd
    let gp = FpPoly::new(p, g.iter().map(|c| c.mod_floor(&pbig).to_u64().unwrap()).collect());
    let hp = FpPoly::new(p, h.iter().map(|c| c.mod_floor(&pbig).to_u64().unwrap()).collect());
    let (gg, s, t) = xgcd_fp(&gp, &hp);
    assert_eq!(gg.deg(), 0, "factors not coprime mod p");
    let inv = crate::zp::mod_inverse_u64(gg.c[0], p);
    let s = s.scale(inv);
    let t = t.scale(inv);
    let mut sv: Vec<BigInt> = s.c.iter().map(|&x| BigInt::from(x)).collect();
    let mut tv: Vec<BigInt> = t.c.iter().map(|&x| BigInt::from(x)).collect();
    let mut gv = g;
    let mut hv = h;
    let mut me = 1u32;
    let mut m = pbig.clone();
    while me < target_exp {
        let (g2, h2, s2, t2) = hensel_step(f, &gv, &hv, &sv, &tv, &m);
        gv = g2;
        hv = h2;
        sv = s2;
        tv = t2;
        me *= 2;
        m = &m * &m;
    }
    let mfinal = BigInt::from(p).pow(target_exp);
    gv = zpoly_mod(&gv, &mfinal);
    hv = zpoly_mod(&hv, &mfinal);
    // recurse
    let mut out = hensel_lift_factors(&gv, &factors_mod_p[..half], p, target_exp);
    out.extend(hensel_lift_factors(&hv, &factors_mod_p[half..], p, target_exp));
    out
}

fn xgcd_fp(a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly, FpPoly) {
    let p = a.p;
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (FpPoly::one(p), FpPoly::zero(p));
    let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let ns = s0.sub(&q.mul(&s1));
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    (r0, s0, t0)
}

// ---------------------------------------------------------------------------
// Integer polynomial factorization (Zassenhaus)
// ---------------------------------------------------------------------------

/// Factor a primitive integer polynomial into irreducible primitive factors
/// with multiplicities. Requires squarefree input for the core routine; the
/// public entry does squarefree decomposition first.
pub fn factor_zpoly(f: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let fq = zpoly_to_qpoly(f);
    assert!(!fq.is_zero());
    let mut out: Vec<(Vec<BigInt>, usize)> = Vec::new();
    // squarefree decomposition over Q (Yun)
    let fp = fq.derivative();
    let a0 = fq.gcd(&fp);
    let mut b = fq.divrem(&a0).0;
    let mut c = fp.divrem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut mult = 1usize;
    while b.degree() != Some(0) {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            for (g, _) in factor_squarefree_zpoly(&a.primitive_zpoly()) {
                out.push((g, mult));
            }
        }
        b = b.divrem(&a).0;
        c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
        mult += 1;
        if b.is_zero() {
            break;
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

fn factor_squarefree_zpoly(f: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let n = f.len() - 1;
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![(f.to_vec(), 1)];
    }
    // choose p: f mod p squarefree and lc not divisible
    let small_primes = [
        3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103,
        107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211,
    ];
    let lc = f.last().unwrap().clone();
    let mut chosen: Option<(u64, Vec<FpPoly>)> = None;
    for &p in &small_primes {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let pb = BigInt::from(p);
        let fp = FpPoly::new(p, f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect());
        let fpm = fp.monic();
        if fpm.gcd(&fpm.derivative()).deg() != 0 {
            continue;
        }
        let facs = factor_fp_squarefree(&fpm);
        match &chosen {
            Some((_, best)) if best.len() <= facs.len() => {}
            _ => chosen = Some((p, facs)),
        }
        if let Some((_, ref best)) = chosen {
            if best.len() <= 2 {
                break;
            }
        }
    }
    let (p, fp_factors) = chosen.expect("no suitable prime found for factorization");
    if fp_factors.len() == 1 {
        return vec![(f.to_vec(), 1)];
    }
    // Mignotte-style bound on coefficients of factors of f (times lc)
    let norm: f64 = f
        .iter()
        .map(|c| {
            let v = c.to_f64().unwrap_or(f64::MAX).abs();
            v * v
        })
        .sum::<f64>()
        .sqrt();
    let bound = norm * 2f64.powi(n as i32 + 1) * lc.to_f64().unwrap_or(f64::MAX).abs();
    let mut target = 1u32;
    let mut pk = p as f64;
    while pk <= 2.0 * bound {
        pk *= pk;
        target *= 2;
    }
    // make monic version of f mod p^target: work with f* = lc^(n-1) f(x/lc)
    // to keep things monic; simpler: lift factors of monic (f/lc mod p).
    let m = BigInt::from(p).pow(target);
    let lc_inv = mod_inverse_big(&lc.mod_floor(&m), &m);
    let fmonic: Vec<BigInt> = f.iter().map(|c| (c * &lc_inv).mod_floor(&m)).collect();
    let fp_factor_vecs: Vec<Vec<BigInt>> = fp_factors.iter().map(|g| g.c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let lifted = hensel_lift_factors(&fmonic, &fp_factor_vecs, p, target);
    // recombination
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut fcur = f.to_vec();
    let mut out = Vec::new();
    let mut subset_size = 1usize;
    while 2 * subset_size <= remaining.len() {
        let mut found = true;
        while found && 2 * subset_size <= remaining.len() {
            found = false;
            let combos = combinations(remaining.len(), subset_size);
            for combo in combos {
                let mcur = BigInt::from(p).pow(target);
                let lccur = fcur.last().unwrap();
                let mut cand = vec![lccur.clone()];
                for &i in &combo {
                    cand = zpoly_mod(&zpoly_mul(&cand, &remaining[i]), &mcur);
                }
                // balanced lift
                let half = &mcur / 2;
                let cand: Vec<BigInt> = cand
                    .iter()
                    .map(|c| if c > &half { c - &mcur } else { c.clone() })
                    .collect();
                let candq = zpoly_to_qpoly(&cand);
                if candq.is_zero() {
                    continue;
                }
                let cand_prim = candq.primitive_zpoly();
                if cand_prim.len() < 2 {
                    continue;
                }
                let (q, r) = zpoly_to_qpoly(&fcur).divrem(&zpoly_to_qpoly(&cand_prim));
                if r.is_zero() {
                    out.push((cand_prim, 1));
                    fcur = q.primitive_zpoly();
                    let mut keep = Vec::new();
                    for (i, fac) in remaining.iter().enumerate() {
                        if !combo.contains(&i) {
                            keep.push(fac.clone());
                        }
                    }
                    remaining = keep;
                    found = true;
                    break;
                }
            }
        }
        subset_size += 1;
    }
    if fcur.len() > 1 {
        out.push((fcur, 1));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Public re-export of integer polynomial multiplication (used by padic).
pub fn zpoly_mul_public(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    zpoly_mul(a, b)
}

/// Factor an integer polynomial mod p into monic irreducibles (as u64
/// coefficient vectors) with multiplicities, sorted by (degree, coeffs).
pub fn factor_mod_p(f: &[BigInt], p: u64) -> Vec<(Vec<u64>, usize)> {
    let pb = BigInt::from(p);
    let fp = FpPoly::new(p, f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect());
    assert!(!fp.is_zero(), "polynomial vanishes mod p");
    let fp = fp.monic();
    let mut out: Vec<(Vec<u64>, usize)> = Vec::new();
    for (part, mult) in squarefree_decomposition_fp(&fp) {
        for irr in factor_fp_squarefree(&part) {
            out.push((irr.c, mult));
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Squarefree decomposition over F_p, including p-th power unwrapping
/// (Frobenius is the identity on F_p coefficients).
fn squarefree_decomposition_fp(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out: Vec<(FpPoly, usize)> = Vec::new();
    let fd = f.derivative();
    if fd.is_zero() {
        // f = g(x^p) = g(x)^p over F_p
        let mut g = Vec::new();
        for (i, &c) in f.c.iter().enumerate() {
            if i % p as usize == 0 {
                g.push(c);
            } else {
                assert_eq!(c, 0, "derivative zero but non-p-multiple coefficient present");
            }
        }
        let g = FpPoly::new(p, g);
        for (h, m) in squarefree_decomposition_fp(&g) {
            out.push((h, m * p as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.divrem(&c).0.monic();
    let mut i = 1usize;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let z = w.divrem(&y).0.monic();
        if z.deg() > 0 {
            out.push((z, i));
        }
        w = y;
        c = c.divrem(&w).0.monic();
        i += 1;
    }
    if c.deg() > 0 {
        // remaining part is a p-th power
        for (h, m) in squarefree_decomposition_fp(&c) {
            out.push((h, m * p as usize));
        }
    }
    out
}

/// Rational roots of an integer polynomial (num | c0, den | lc).
pub fn rational_roots(f: &[BigInt]) -> Vec<Q> {
    factor_zpoly(f)
        .into_iter()
        .filter(|(g, _)| g.len() == 2)
        .map(|(g, _)| -Q::new(g[0].clone(), g[1].clone()))
        .collect()
}

pub fn zpoly_sign_display(f: &[BigInt]) -> String {
    let terms: Vec<String> = f
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format!("{}", c),
            1 => format!("{}*x", c),
            _ => format!("{}*x^{}", c, i),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

pub fn bigint_sign_ok(x: &BigInt) -> bool {
    x.sign() != Sign::NoSign || x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn qpoly_divrem_roundtrip() {
        let f = QPoly::from_coeffs(vec![q_from_i64(2), q_from_i64(0), q_from_i64(-3), q_from_i64(1)]);
        let d = QPoly::from_coeffs(vec![q_from_i64(-1), q_from_i64(1)]);
        let (q, r) = f.divrem(&d);
        assert_eq!(d.mul(&q).add(&r), f);
    }

    #[test]
    fn factor_quadratics() {
        // x^2 - 1 = (x-1)(x+1)
        let f = z(&[-1, 0, 1]);
        let facs = factor_zpoly(&f);
        assert_eq!(facs.len(), 2);
        assert!(facs.iter().all(|(g, m)| g.len() == 2 && *m == 1));
        // x^2 + 1 irreducible
        let f = z(&[1, 0, 1]);
        let facs = factor_zpoly(&f);
        assert_eq!(facs.len(), 1);
        assert_eq!(facs[0].0, z(&[1, 0, 1]));
        // x^2 - x - 1 irreducible
        let facs = factor_zpoly(&z(&[-1, -1, 1]));
        assert_eq!(facs.len(), 1);
    }

    #[test]
    fn factor_with_multiplicity() {
        // (x-2)^2 (x^2+x+1)
        let sq = zpoly_mul(&z(&[-2, 1]), &z(&[-2, 1]));
        let f = zpoly_mul(&sq, &z(&[1, 1, 1]));
        let facs = factor_zpoly(&f);
        assert_eq!(facs.len(), 2);
        let lin = facs.iter().find(|(g, _)| g.len() == 2).unwrap();
        assert_eq!(lin.1, 2);
        let quad = facs.iter().find(|(g, _)| g.len() == 3).unwrap();
        assert_eq!(quad.0, z(&[1, 1, 1]));
        assert_eq!(quad.1, 1);
    }

    #[test]
    fn factor_cyclotomic_product() {
        // Phi_1 * Phi_5 = (x-1)(x^4+x^3+x^2+x+1) = x^5 - 1
        let f = z(&[-1, 0, 0, 0, 0, 1]);
        let facs = factor_zpoly(&f);
        assert_eq!(facs.len(), 2);
        assert_eq!(facs[0].0, z(&[-1, 1]));
        assert_eq!(facs[1].0, z(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn factor_degree6_mixed() {
        // (x^2+1)(x^2-2)(x^2+x+7)
        let f = zpoly_mul(&zpoly_mul(&z(&[1, 0, 1]), &z(&[-2, 0, 1])), &z(&[7, 1, 1]));
        let facs = factor_zpoly(&f);
        assert_eq!(facs.len(), 3);
        for (_, m) in &facs {
            assert_eq!(*m, 1);
        }
    }

    #[test]
    fn nf_inverse_roundtrip() {
        // Q(sqrt(13)): x^2 - 13
        let k = NumberField::new(z(&[-13, 0, 1]));
        let ctx = NfCtx(k.clone());
        let a = vec![q_from_i64(3), q_from_i64(2)]; // 3 + 2 sqrt(13)
        let inv = ctx.inv(&a);
        let prod = ctx.mul(&a, &inv);
        assert_eq!(prod, ctx.one());
    }

    #[test]
    fn rational_root_extraction() {
        // 2x^2 - x - 1 = (2x + 1)(x - 1): roots 1, -1/2
        let roots = rational_roots(&z(&[-1, -1, 2]));
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&q_from_i64(1)));
        assert!(roots.contains(&Q::new(BigInt::from(-1), BigInt::from(2))));
    }
}
