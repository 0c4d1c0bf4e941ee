//! Arithmetic in 𝔽_q for prime powers q < 2^16.
//!
//! Elements are `u32` indices in `0..q`. For prime q the index is the residue itself.
//! For q = ℓ^k an element Σ c_i θ^i is encoded as Σ c_i ℓ^i, where θ is a root of the
//! field modulus: the least primitive monic polynomial of degree k over 𝔽_ℓ, ordered by
//! that same base-ℓ encoding of its lower coefficients.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::nt;

pub type Elem = u32;

#[derive(Clone)]
pub struct Fq {
    characteristic: u32,
    degree: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    // Only for extension fields with q <= 256.
    add_table: Vec<u32>,
    neg_table: Vec<u32>,
}

impl std::fmt::Debug for Fq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fq").field("q", &self.q).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}
impl Eq for Fq {}

#[derive(Serialize)]
struct FqSummary<'a> {
    q: u32,
    characteristic: u32,
    modulus: &'a [u32],
}

impl Serialize for Fq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FqSummary { q: self.q, characteristic: self.characteristic, modulus: &self.modulus }.serialize(s)
    }
}

impl Fq {
    pub fn new(q: u64) -> Result<Fq> {
        if q >= 1 << 16 {
            return Err(Error::InvalidFieldSize(q));
        }
        let (ell, k) = nt::prime_power(q).ok_or(Error::InvalidFieldSize(q))?;
        if k == 1 {
            Ok(Self::prime(ell as u32))
        } else {
            Ok(Self::extension(ell as u32, k))
        }
    }

    fn prime(ell: u32) -> Fq {
        let q = ell;
        let order = (q - 1) as u64;
        let factors = nt::prime_divisors(order);
        let powmod = |mut b: u64, mut e: u64| {
            let mut r = 1u64;
            b %= q as u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = r * b % q as u64;
                }
                b = b * b % q as u64;
                e >>= 1;
            }
            r
        };
        let g = (1..q as u64)
            .find(|&g| q == 2 || factors.iter().all(|&r| powmod(g, order / r) != 1))
            .expect("prime fields are cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for i in 0..order {
            exp.push(x as u32);
            log[x as usize] = i as u32;
            x = x * g % q as u64;
        }
        Fq {
            characteristic: ell,
            degree: 1,
            q,
            modulus: vec![0, 1],
            exp,
            log,
            add_table: Vec::new(),
            neg_table: Vec::new(),
        }
    }

    fn extension(ell: u32, k: u32) -> Fq {
        let base = Self::prime(ell);
        let q = ell.pow(k);
        let order = (q - 1) as u64;
        let factors = nt::prime_divisors(order);
        // Candidates t^k + (lower part), lower part enumerated by base-ℓ index.
        let mut modulus = None;
        for idx in 0..ell.pow(k) {
            let mut c: Vec<u32> = (0..k).map(|i| idx / ell.pow(i) % ell).collect();
            c.push(1);
            let f = super::Poly::from_coeffs(c.clone());
            if c[0] == 0 || !super::is_irreducible(&f, &base) {
                continue;
            }
            let m = super::Modulus::new(f, &base);
            let t = super::Poly::x();
            let primitive = factors.iter().all(|&r| !m.pow(&t, order / r).is_one());
            if primitive {
                modulus = Some(c);
                break;
            }
        }
        let modulus = modulus.expect("a primitive polynomial exists in every degree");
        // Successive powers of θ as digit vectors.
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u32; k as usize];
        cur[0] = 1;
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * ell + d);
        for i in 0..order {
            let e = encode(&cur);
            exp.push(e);
            log[e as usize] = i as u32;
            // multiply by θ: shift, then subtract top·modulus
            let top = cur[k as usize - 1];
            for j in (1..k as usize).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..k as usize {
                    cur[j] = (cur[j] + (ell - top) * modulus[j] % ell) % ell;
                }
            }
        }
        let mut f =
            Fq { characteristic: ell, degree: k, q, modulus, exp, log, add_table: Vec::new(), neg_table: Vec::new() };
        f.neg_table = (0..q).map(|a| f.digit_neg(a)).collect();
        if q <= 256 {
            f.add_table = (0..q * q).map(|ab| f.digit_add(ab / q, ab % q)).collect();
        }
        f
    }

    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        let ell = self.characteristic;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += (a % ell + b % ell) % ell * place;
            a /= ell;
            b /= ell;
            place *= ell;
        }
        out
    }

    fn digit_neg(&self, mut a: u32) -> u32 {
        let ell = self.characteristic;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.degree {
            out += (ell - a % ell) % ell * place;
            a /= ell;
            place *= ell;
        }
        out
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }
    /// Extension degree over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.degree == 1
    }
    /// Defining polynomial over 𝔽_ℓ, ascending coefficients (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The fixed multiplicative generator.
    pub fn generator(&self) -> Elem {
        if self.q == 2 {
            1
        } else {
            self.exp[1]
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.degree == 1 {
            let s = a + b;
            if s >= self.q {
                s - self.q
            } else {
                s
            }
        } else if !self.add_table.is_empty() {
            self.add_table[(a * self.q + b) as usize]
        } else {
            self.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.degree == 1 {
            if a == 0 {
                0
            } else {
                self.q - a
            }
        } else {
            self.neg_table[a as usize]
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.degree == 1 {
            ((a as u64 * b as u64) % self.q as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
            self.exp[(s % (self.q as u64 - 1)) as usize]
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        let l = self.log[a as usize];
        if l == 0 {
            1
        } else {
            self.exp[(self.q - 1 - l) as usize]
        }
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let l = self.log[a as usize] as u128 * e as u128 % (self.q as u128 - 1);
        self.exp[l as usize]
    }

    /// Discrete log with respect to `generator()`.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    pub fn is_square(&self, a: Elem) -> bool {
        a == 0 || self.characteristic == 2 || self.log[a as usize] % 2 == 0
    }

    /// The ℓ-th root, ℓ the characteristic (inverse Frobenius).
    pub fn char_root(&self, a: Elem) -> Elem {
        self.pow(a, (self.q / self.characteristic) as u64)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        let ell = self.characteristic as i64;
        n.rem_euclid(ell) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }
}
