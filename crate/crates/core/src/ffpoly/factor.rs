//! Squarefree, distinct-degree and equal-degree factorization; irreducibility and counting.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::Fq;
use super::poly::{Modulus, Poly};
use crate::error::{Error, Result};
use crate::nt;

/// Distinct monic irreducible factors with multiplicities, sorted in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Factorization {
    factors: Vec<(Poly, u32)>,
}

impl Factorization {
    /// Builds from arbitrary (irreducible, multiplicity) pairs, merging repeats.
    pub fn from_pairs(mut pairs: Vec<(Poly, u32)>) -> Factorization {
        pairs.sort();
        let mut factors: Vec<(Poly, u32)> = Vec::with_capacity(pairs.len());
        for (g, e) in pairs {
            match factors.last_mut() {
                Some((h, m)) if *h == g => *m += e,
                _ => factors.push((g, e)),
            }
        }
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Poly, u32)> {
        self.factors.iter()
    }

    /// w(f): number of distinct irreducible factors.
    pub fn distinct(&self) -> usize {
        self.factors.len()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(g, e)| g.deg() * *e as usize).sum()
    }

    pub fn product(&self, fq: &Fq) -> Poly {
        self.factors.iter().fold(Poly::one(), |acc, (g, e)| acc.mul(&g.pow(*e as u64, fq), fq))
    }
}

/// Factors a monic polynomial. The constant 1 has the empty factorization.
pub fn factor(f: &Poly, fq: &Fq) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f, fq) {
        for (h, d) in distinct_degree(&g, fq) {
            for k in equal_degree(&h, d, fq) {
                out.push((k, e));
            }
        }
    }
    Ok(Factorization::from_pairs(out))
}

/// Yun-style decomposition f = Π g_i^{e_i} with g_i squarefree and pairwise coprime.
pub fn squarefree_decomposition(f: &Poly, fq: &Fq) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let ell = fq.characteristic();
    let df = f.derivative(fq);
    let mut c = f.gcd(&df, fq);
    let mut w = f.div_exact(&c, fq);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c, fq);
        let fac = w.div_exact(&y, fq);
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w, fq);
        i += 1;
    }
    if !c.is_one() {
        // c is a polynomial in t^ℓ: take its ℓ-th root and recurse.
        let root: Vec<u32> = c.coeffs().iter().step_by(ell as usize).map(|&a| fq.char_root(a)).collect();
        for (g, e) in squarefree_decomposition(&Poly::from_coeffs(root), fq) {
            out.push((g, e * ell));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into (product of all degree-d factors, d).
pub fn distinct_degree(f: &Poly, fq: &Fq) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let mut h = Poly::x();
    let mut d = 0;
    while g.deg() >= 2 * (d + 1) {
        d += 1;
        let m = Modulus::new(g.clone(), fq);
        h = m.frobenius(&m.reduce(&h));
        let z = g.gcd(&h.sub(&Poly::x(), fq), fq);
        if !z.is_one() {
            g = g.div_exact(&z, fq);
            out.push((z, d));
        }
    }
    if g.deg() > 0 {
        let d = g.deg();
        out.push((g, d));
    }
    out
}

/// Splits a product of distinct irreducibles of common degree d. Randomized with a seed fixed
/// by the input, so results are reproducible.
pub fn equal_degree(f: &Poly, d: usize, fq: &Fq) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    let seed = f.coeffs().iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &c| (h ^ c as u64).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    edf_rec(f, d, fq, &mut rng, &mut out);
    out
}

fn edf_rec(f: &Poly, d: usize, fq: &Fq, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    if f.deg() == d {
        out.push(f.clone());
        return;
    }
    let m = Modulus::new(f.clone(), fq);
    let q = fq.q();
    let n = f.deg();
    let odd_exp = (fq.characteristic() != 2).then(|| (BigUint::from(q).pow(d as u32) - 1u32) / 2u32);
    loop {
        let a = Poly::from_coeffs((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.is_constant() {
            continue;
        }
        let b = match &odd_exp {
            Some(e) => m.pow_big(&a, e).sub(&Poly::one(), fq),
            None => {
                // absolute trace to 𝔽_2 of the residue ring
                let k = fq.degree() as usize * d;
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..k {
                    t = m.mul(&t, &t);
                    acc = acc.add(&t, fq);
                }
                acc
            }
        };
        let z = f.gcd(&b, fq);
        if z.deg() > 0 && z.deg() < n {
            let other = f.div_exact(&z, fq);
            edf_rec(&z, d, fq, rng, out);
            edf_rec(&other, d, fq, rng, out);
            return;
        }
    }
}

/// Rabin's test: f irreducible of degree n iff t^{q^n} ≡ t (mod f) and
/// gcd(t^{q^{n/r}} − t, f) = 1 for every prime r | n.
pub fn is_irreducible(f: &Poly, fq: &Fq) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let f = f.monic(fq);
    let m = Modulus::new(f.clone(), fq);
    let x = m.reduce(&Poly::x());
    let mut checkpoints: Vec<usize> = nt::prime_divisors(n as u64).into_iter().map(|r| n / r as usize).collect();
    checkpoints.sort_unstable();
    let mut h = x.clone();
    let mut done = 0;
    for k in checkpoints {
        while done < k {
            h = m.frobenius(&h);
            done += 1;
        }
        if !f.gcd(&h.sub(&x, fq), fq).is_one() {
            return false;
        }
    }
    while done < n {
        h = m.frobenius(&h);
        done += 1;
    }
    h == x
}

/// Number of monic irreducibles of degree n over 𝔽_q: (1/n) Σ_{d|n} μ(d) q^{n/d}.
pub fn count_irreducible(q: u64, n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for d in nt::divisors(n as u64) {
        let term = BigUint::from(q).pow((n as u64 / d) as u32);
        match nt::mobius(d) {
            1 => pos += term,
            -1 => neg += term,
            _ => {}
        }
    }
    Ok((pos - neg) / BigUint::from(n))
}

/// Convenience wrapper for counts that fit in 64 bits.
pub fn count_irreducible_u64(q: u64, n: u32) -> Result<u64> {
    count_irreducible(q, n)?.to_u64().ok_or(Error::CountOverflow { q, n })
}

/// I_n / q^n in floating point, stable for large n.
pub fn irreducible_density(q: u64, n: u32) -> f64 {
    let qf = q as f64;
    let s: f64 = nt::divisors(n as u64)
        .into_iter()
        .map(|d| nt::mobius(d) as f64 * qf.powf(n as f64 / d as f64 - n as f64))
        .sum();
    s / n as f64
}

/// All monic polynomials of degree n in canonical order.
pub fn monics(fq: &Fq, n: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = fq.q() as u64;
    let total = q.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut c = Vec::with_capacity(n + 1);
        let mut digits = vec![0u32; n];
        for slot in digits.iter_mut() {
            *slot = (idx % q) as u32;
            idx /= q;
        }
        c.extend(digits);
        c.push(1);
        Poly::from_coeffs(c)
    })
}

/// All monic irreducibles of degree n, canonical order. Requires q^n ≤ `limit`.
pub fn irreducibles(fq: &Fq, n: usize, limit: u128) -> Result<Vec<Poly>> {
    use rayon::prelude::*;
    let required = (fq.q() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > limit {
        return Err(Error::BudgetExceeded { required, limit });
    }
    if n == 0 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    let all: Vec<Poly> = monics(fq, n).collect();
    let mut out: Vec<Poly> = all.into_par_iter().filter(|f| is_irreducible(f, fq)).collect();
    out.sort();
    Ok(out)
}

/// Uniform monic polynomial of degree n from an explicit seed.
pub fn sample_monic(fq: &Fq, n: usize, seed: u64) -> Poly {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_monic_with(fq, n, &mut rng)
}

pub fn sample_monic_with<R: Rng + ?Sized>(fq: &Fq, n: usize, rng: &mut R) -> Poly {
    let q = fq.q();
    let mut c: Vec<u32> = (0..n).map(|_| rng.gen_range(0..q)).collect();
    c.push(1);
    Poly::from_coeffs(c)
}

/// Uniform element of [0, bound), bound > 0.
pub(crate) fn uniform_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    debug_assert!(!bound.is_zero());
    if bound.is_one() {
        return BigUint::zero();
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = bytes as u64 * 8 - bits;
    loop {
        let mut buf = vec![0u8; bytes];
        rng.fill(&mut buf[..]);
        let last = bytes - 1;
        buf[last] &= 0xffu8 >> excess;
        let v = BigUint::from_bytes_le(&buf);
        if &v < bound {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    #[test]
    fn spec_examples() {
        let f2 = Fq::new(2).unwrap();
        let fac = factor(&p(&[0, 1, 0, 1]), &f2).unwrap();
        assert_eq!(fac.factors(), &[(p(&[0, 1]), 1), (p(&[1, 1]), 2)]);
        let fac = factor(&p(&[1, 1, 1]), &f2).unwrap();
        assert_eq!(fac.factors(), &[(p(&[1, 1, 1]), 1)]);
        let f5 = Fq::new(5).unwrap();
        let fac = factor(&p(&[4, 0, 1]), &f5).unwrap();
        assert_eq!(fac.factors(), &[(p(&[1, 1]), 1), (p(&[4, 1]), 1)]);
        for (g, _) in fac.iter() {
            let root = f5.neg(g.coeff(0));
            assert_eq!(p(&[4, 0, 1]).eval(root, &f5), 0);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let f5 = Fq::new(5).unwrap();
        assert_eq!(factor(&Poly::zero(), &f5), Err(Error::ZeroPolynomial));
        assert_eq!(factor(&p(&[1, 2]), &f5), Err(Error::NotMonic));
    }

    #[test]
    fn pth_powers_in_char_p() {
        let f3 = Fq::new(3).unwrap();
        // (t+1)^3 (t^2+1)^4 t
        let g = p(&[1, 1]).pow(3, &f3).mul(&p(&[1, 0, 1]).pow(4, &f3), &f3).mul(&p(&[0, 1]), &f3);
        let fac = factor(&g, &f3).unwrap();
        assert_eq!(fac.factors(), &[(p(&[0, 1]), 1), (p(&[1, 1]), 3), (p(&[1, 0, 1]), 4)]);
    }

    #[test]
    fn counts_small() {
        assert_eq!(count_irreducible_u64(2, 1).unwrap(), 2);
        assert_eq!(count_irreducible_u64(2, 3).unwrap(), 2);
        assert_eq!(count_irreducible_u64(3, 2).unwrap(), 3);
        assert!(count_irreducible(2, 0).is_err());
        assert!((irreducible_density(5, 6) * 15625.0 - 2580.0).abs() < 1e-9);
    }

    #[test]
    fn extension_field_factoring() {
        for q in [4u64, 8, 9] {
            let fq = Fq::new(q).unwrap();
            for n in 1..=4 {
                for s in 0..20 {
                    let f = sample_monic(&fq, n, s);
                    let fac = factor(&f, &fq).unwrap();
                    assert_eq!(fac.product(&fq), f);
                    assert!(fac.iter().all(|(g, _)| is_irreducible(g, &fq)));
                }
            }
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let f2 = Fq::new(2).unwrap();
        assert_eq!(sample_monic(&f2, 3, 17), sample_monic(&f2, 3, 17));
    }

    #[test]
    fn uniform_below_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = BigUint::from(1000u32);
        let mut seen = [false; 1000];
        for _ in 0..20000 {
            let v = uniform_below(&b, &mut rng).to_usize().unwrap();
            seen[v] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
