//! The residue field 𝔽_q[t]/(v) of a place and small polynomials over it.

use num_bigint::BigUint;

use crate::ffpoly::{Elem, Fq, Modulus, Poly};

pub struct ResidueField<'a> {
    m: Modulus<'a>,
    // frob[j] = θ^{q·j} mod v, so c^q = Σ c_j frob[j].
    frob: Vec<Poly>,
}

/// Polynomial over a residue field, ascending, trimmed.
pub type RPoly = Vec<Poly>;

impl<'a> ResidueField<'a> {
    /// `v` must be monic irreducible of positive degree.
    pub fn new(v: &Poly, fq: &'a Fq) -> ResidueField<'a> {
        let m = Modulus::new(v.clone(), fq);
        let tq = m.frobenius(&Poly::x());
        let d = m.degree();
        let mut frob = Vec::with_capacity(d);
        let mut cur = m.reduce(&Poly::one());
        for _ in 0..d {
            frob.push(cur.clone());
            cur = m.mul(&cur, &tq);
        }
        ResidueField { m, frob }
    }

    pub fn base(&self) -> &'a Fq {
        self.m.field()
    }
    pub fn degree(&self) -> usize {
        self.m.degree()
    }
    /// Q = q^d.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.base().q()).pow(self.degree() as u32)
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        self.m.reduce(a)
    }
    pub fn constant(&self, c: Elem) -> Poly {
        Poly::constant(c)
    }
    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b, self.base())
    }
    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b, self.base())
    }
    pub fn neg(&self, a: &Poly) -> Poly {
        a.neg(self.base())
    }
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.m.mul(a, b)
    }
    pub fn inv(&self, a: &Poly) -> Poly {
        a.inv_mod(self.m.poly(), self.base()).expect("nonzero element of a field")
    }
    pub fn pow_big(&self, a: &Poly, e: &BigUint) -> Poly {
        self.m.pow_big(a, e)
    }

    /// c ↦ c^q as a linear map.
    pub fn frobenius(&self, c: &Poly) -> Poly {
        let fq = self.base();
        let d = self.degree();
        if fq.is_prime_field() {
            let q = fq.q() as u64;
            let mut acc = vec![0u64; d];
            for (&cj, t) in c.coeffs().iter().zip(&self.frob) {
                if cj == 0 {
                    continue;
                }
                for (dst, &y) in acc.iter_mut().zip(t.coeffs()) {
                    *dst += cj as u64 * y as u64;
                }
            }
            return Poly::from_coeffs(acc.into_iter().map(|v| (v % q) as u32).collect());
        }
        c.coeffs().iter().zip(&self.frob).fold(Poly::zero(), |acc, (&cj, t)| acc.add(&t.scale(cj, fq), fq))
    }

    /// Every element, for exhaustive oracles.
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        let q = self.base().q() as u64;
        let d = self.degree();
        (0..q.pow(d as u32)).map(move |mut idx| {
            let mut c = vec![0u32; d];
            for slot in c.iter_mut() {
                *slot = (idx % q) as u32;
                idx /= q;
            }
            Poly::from_coeffs(c)
        })
    }

    // ---- polynomials over the residue field ----

    fn trim(&self, mut a: RPoly) -> RPoly {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn rp_eval(&self, f: &RPoly, x: &Poly) -> Poly {
        f.iter().rev().fold(Poly::zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn rp_sub(&self, a: &RPoly, b: &RPoly) -> RPoly {
        let n = a.len().max(b.len());
        let z = Poly::zero();
        let v = (0..n).map(|i| self.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.trim(v)
    }

    pub fn rp_mul(&self, a: &RPoly, b: &RPoly) -> RPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![Poly::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                v[i + j] = self.add(&v[i + j], &self.mul(x, y));
            }
        }
        self.trim(v)
    }

    pub fn rp_rem(&self, a: &RPoly, f: &RPoly) -> RPoly {
        let n = f.len() - 1;
        let mut r = a.clone();
        if r.len() <= n {
            return r;
        }
        let inv = self.inv(&f[n]);
        for i in (n..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let c = self.mul(&r[i], &inv);
            for j in 0..=n {
                r[i - n + j] = self.sub(&r[i - n + j], &self.mul(&c, &f[j]));
            }
        }
        r.truncate(n);
        self.trim(r)
    }

    pub fn rp_monic(&self, a: &RPoly) -> RPoly {
        match a.last() {
            None => Vec::new(),
            Some(l) => {
                let inv = self.inv(l);
                a.iter().map(|c| self.mul(c, &inv)).collect()
            }
        }
    }

    pub fn rp_gcd(&self, a: &RPoly, b: &RPoly) -> RPoly {
        let mut a = self.rp_monic(a);
        let mut b = self.rp_monic(b);
        while !b.is_empty() {
            let r = self.rp_monic(&self.rp_rem(&a, &b));
            a = b;
            b = r;
        }
        a
    }

    /// g ↦ g^q in the ring K[X]/(f), where `xq[i]` = X^{q·i} mod f.
    fn rp_frobenius(&self, g: &RPoly, xq: &[RPoly], f: &RPoly) -> RPoly {
        let mut acc: RPoly = Vec::new();
        for (c, h) in g.iter().zip(xq) {
            if c.is_zero() {
                continue;
            }
            let cq = self.frobenius(c);
            let term: RPoly = h.iter().map(|x| self.mul(&cq, x)).collect();
            acc = self.rp_add(&acc, &term);
        }
        self.rp_rem(&acc, f)
    }

    pub fn rp_add(&self, a: &RPoly, b: &RPoly) -> RPoly {
        let n = a.len().max(b.len());
        let z = Poly::zero();
        let v = (0..n).map(|i| self.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.trim(v)
    }

    fn rp_powmod_small(&self, a: &RPoly, mut e: u64, f: &RPoly) -> RPoly {
        let mut base = self.rp_rem(a, f);
        let mut acc: RPoly = vec![Poly::one()];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rp_rem(&self.rp_mul(&acc, &base), f);
            }
            e >>= 1;
            if e > 0 {
                base = self.rp_rem(&self.rp_mul(&base, &base), f);
            }
        }
        acc
    }

    pub fn rp_powmod_big(&self, a: &RPoly, e: &BigUint, f: &RPoly) -> RPoly {
        let base = self.rp_rem(a, f);
        let mut acc: RPoly = self.rp_rem(&vec![Poly::one()], f);
        for i in (0..e.bits()).rev() {
            acc = self.rp_rem(&self.rp_mul(&acc, &acc), f);
            if e.bit(i) {
                acc = self.rp_rem(&self.rp_mul(&acc, &base), f);
            }
        }
        acc
    }

    /// X^Q mod f for a monic f, by d applications of the q-Frobenius.
    pub fn x_to_the_q(&self, f: &RPoly) -> RPoly {
        let n = f.len() - 1;
        let x: RPoly = self.rp_rem(&vec![Poly::zero(), Poly::one()], f);
        let xq1 = self.rp_powmod_small(&x, self.base().q() as u64, f);
        let mut xq = Vec::with_capacity(n);
        let mut cur: RPoly = vec![Poly::one()];
        for _ in 0..n {
            xq.push(cur.clone());
            cur = self.rp_rem(&self.rp_mul(&cur, &xq1), f);
        }
        let mut h = x;
        for _ in 0..self.degree() {
            h = self.rp_frobenius(&h, &xq, f);
        }
        h
    }

    /// Number of distinct roots in the residue field of a monic f.
    pub fn count_roots(&self, f: &RPoly) -> usize {
        self.split_part(f).len() - 1
    }

    /// gcd(f, X^Q − X): the product of the distinct linear factors of f.
    pub fn split_part(&self, f: &RPoly) -> RPoly {
        let h = self.x_to_the_q(f);
        let g = self.rp_sub(&h, &vec![Poly::zero(), Poly::one()]);
        if g.is_empty() {
            return self.rp_monic(f);
        }
        self.rp_gcd(f, &g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_matches_power() {
        let fq = Fq::new(5).unwrap();
        let v = crate::ffpoly::irreducibles(&fq, 4, 1000).unwrap()[17].clone();
        let k = ResidueField::new(&v, &fq);
        for c in k.elements().step_by(37) {
            assert_eq!(k.frobenius(&c), Modulus::new(v.clone(), &fq).pow(&c, 5));
        }
    }

    #[test]
    fn roots_by_brute_force() {
        let fq = Fq::new(5).unwrap();
        let v = Poly::from_coeffs(vec![2, 0, 1]); // t^2+2
        let k = ResidueField::new(&v, &fq);
        let elems: Vec<Poly> = k.elements().collect();
        for (i, a) in elems.iter().enumerate().step_by(3) {
            let b = &elems[(i * 7 + 3) % elems.len()];
            let f: RPoly = vec![b.clone(), a.clone(), Poly::zero(), Poly::one()];
            let brute = elems.iter().filter(|x| k.rp_eval(&f, x).is_zero()).count();
            assert_eq!(k.count_roots(&f), brute, "a={a} b={b}");
        }
    }
}
