//! Dense univariate polynomials over 𝔽_q.

use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::field::{Elem, Fq};

/// Coefficients in ascending degree order with no trailing zeros; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(from = "Vec<Elem>", into = "Vec<Elem>")]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical order: by degree, then by coefficients from the top down.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<Elem>> for Poly {
    fn from(v: Vec<Elem>) -> Poly {
        Poly::from_coeffs(v)
    }
}

impl From<Poly> for Vec<Elem> {
    fn from(p: Poly) -> Vec<Elem> {
        p.coeffs
    }
}

fn trim(v: &mut Vec<Elem>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Poly {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: Elem) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The indeterminate t.
    pub fn x() -> Poly {
        Poly { coeffs: vec![0, 1] }
    }

    /// t^n + c for constant c.
    pub fn monomial(n: usize, c: Elem) -> Poly {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Poly::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn add(&self, other: &Poly, fq: &Fq) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut v = long.coeffs.clone();
        for (a, &b) in v.iter_mut().zip(&short.coeffs) {
            *a = fq.add(*a, b);
        }
        Poly::from_coeffs(v)
    }

    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&a| fq.neg(a)).collect() }
    }

    pub fn sub(&self, other: &Poly, fq: &Fq) -> Poly {
        self.add(&other.neg(fq), fq)
    }

    pub fn scale(&self, c: Elem, fq: &Fq) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect() }
    }

    pub fn mul(&self, other: &Poly, fq: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if fq.is_prime_field() {
            let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
            mul_acc(&self.coeffs, &other.coeffs, &mut acc);
            let q = fq.q() as u64;
            return Poly::from_coeffs(acc.into_iter().map(|v| (v % q) as u32).collect());
        }
        let mut v = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = fq.add(v[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(v)
    }

    pub fn pow(&self, mut e: u64, fq: &Fq) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fq);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, fq);
            }
        }
        acc
    }

    /// Quotient and remainder; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly, fq: &Fq) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let n = d.coeffs.len() - 1;
        if self.coeffs.len() <= n {
            return (Poly::zero(), self.clone());
        }
        let inv = fq.inv(d.leading());
        let mut r = self.coeffs.clone();
        let mut quot = vec![0; r.len() - n];
        for i in (n..r.len()).rev() {
            let c = fq.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - n] = c;
            for j in 0..=n {
                r[i - n + j] = fq.sub(r[i - n + j], fq.mul(c, d.coeffs[j]));
            }
        }
        r.truncate(n);
        (Poly::from_coeffs(quot), Poly::from_coeffs(r))
    }

    pub fn rem(&self, d: &Poly, fq: &Fq) -> Poly {
        if fq.is_prime_field() && d.is_monic() {
            if self.coeffs.len() < d.coeffs.len() {
                return self.clone();
            }
            let mut acc: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
            return Poly::from_coeffs(reduce_acc(&mut acc, &d.coeffs, fq.q() as u64));
        }
        self.divrem(d, fq).1
    }

    pub fn div_exact(&self, d: &Poly, fq: &Fq) -> Poly {
        let (qt, r) = self.divrem(d, fq);
        debug_assert!(r.is_zero(), "inexact division");
        qt
    }

    pub fn monic(&self, fq: &Fq) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(fq.inv(self.leading()), fq)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly, fq: &Fq) -> Poly {
        let mut a = self.monic(fq);
        let mut b = other.monic(fq);
        while !b.is_zero() {
            let r = a.rem(&b, fq).monic(fq);
            a = b;
            b = r;
        }
        a
    }

    /// Returns (g, s) with s·self ≡ g (mod m), g = gcd(self, m) monic.
    pub fn gcd_inverse(&self, m: &Poly, fq: &Fq) -> (Poly, Poly) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m, fq));
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1, fq);
            let s = s0.sub(&qt.mul(&s1, fq), fq);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero());
        }
        let c = fq.inv(r0.leading());
        (r0.scale(c, fq), s0.scale(c, fq).rem(m, fq))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly, fq: &Fq) -> Option<Poly> {
        let (g, s) = self.gcd_inverse(m, fq);
        g.is_one().then_some(s)
    }

    pub fn derivative(&self, fq: &Fq) -> Poly {
        let v = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| fq.mul(fq.from_int(i as i64), c)).collect();
        Poly::from_coeffs(v)
    }

    pub fn eval(&self, x: Elem, fq: &Fq) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    /// Evaluates at an element of the residue ring 𝔽_q[t]/(m), given as a polynomial.
    pub fn eval_mod(&self, x: &Poly, m: &Modulus) -> Poly {
        let fq = m.field();
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, &c| m.mul(&acc, x).add(&Poly::constant(c), fq))
    }
}

/// acc += a * b, unreduced.
#[inline]
fn mul_acc(a: &[u32], b: &[u32], acc: &mut [u64]) {
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        for (dst, &y) in acc[i..i + b.len()].iter_mut().zip(b) {
            *dst += x * y as u64;
        }
    }
}

/// Reduces an unreduced accumulator modulo the monic `m` over 𝔽_q, q prime.
#[inline]
fn reduce_acc(acc: &mut [u64], m: &[u32], q: u64) -> Vec<u32> {
    let n = m.len() - 1;
    for i in (n..acc.len()).rev() {
        let c = acc[i] % q;
        if c == 0 {
            continue;
        }
        let c = q - c;
        for (dst, &y) in acc[i - n..i].iter_mut().zip(&m[..n]) {
            *dst += c * y as u64;
        }
    }
    acc[..n.min(acc.len())].iter().map(|&v| (v % q) as u32).collect()
}

/// A fixed monic modulus with fast multiplication in 𝔽_q[t]/(m).
#[derive(Clone, Debug)]
pub struct Modulus<'a> {
    m: Poly,
    fq: &'a Fq,
}

impl<'a> Modulus<'a> {
    /// `m` must be monic of positive degree.
    pub fn new(m: Poly, fq: &'a Fq) -> Modulus<'a> {
        assert!(m.is_monic() && m.deg() >= 1, "modulus must be monic of positive degree");
        Modulus { m, fq }
    }

    pub fn poly(&self) -> &Poly {
        &self.m
    }

    pub fn field(&self) -> &'a Fq {
        self.fq
    }

    pub fn degree(&self) -> usize {
        self.m.deg()
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.m, self.fq)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        if self.fq.is_prime_field() {
            let mut acc = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
            mul_acc(&a.coeffs, &b.coeffs, &mut acc);
            return Poly::from_coeffs(reduce_acc(&mut acc, &self.m.coeffs, self.fq.q() as u64));
        }
        a.mul(b, self.fq).rem(&self.m, self.fq)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut base = self.reduce(a);
        let mut acc = self.reduce(&Poly::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_big(&self, a: &Poly, e: &BigUint) -> Poly {
        let mut acc = self.reduce(&Poly::one());
        let base = self.reduce(a);
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
        }
        acc
    }

    /// a ↦ a^q.
    pub fn frobenius(&self, a: &Poly) -> Poly {
        self.pow(a, self.fq.q() as u64)
    }
}
