//! Exact sampling of the factorization pattern of a uniform monic polynomial.
//!
//! A uniform monic f of degree m is the multiset product of prime powers g^{k/d}: take
//! k uniform in 1..=m, then d | k with probability d·I_d/q^k, then g uniform among the
//! I_d monic irreducibles of degree d, and recurse on m − k. Irreducibles are named by
//! their index below I_d, which is all that distinct-factor statistics need.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::Result;
use crate::ffpoly::{count_irreducible, uniform_below};
use crate::nt::divisors;

/// Precomputed I_d and q^k up to degree n.
#[derive(Clone, Debug)]
pub struct PatternSampler {
    q: u64,
    n: usize,
    irr: Vec<BigUint>,
    qpow: Vec<BigUint>,
    divs: Vec<Vec<u64>>,
}

/// Factorization pattern: (degree, index among irreducibles of that degree) → multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorPattern {
    pub factors: BTreeMap<(u32, BigUint), u32>,
}

impl FactorPattern {
    /// w(f), the number of distinct irreducible factors.
    pub fn w(&self) -> usize {
        self.factors.len()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|((d, _), e)| *d as u64 * *e as u64).sum()
    }

    /// Sorted (degree, multiplicity) shape, forgetting which irreducible occurs.
    pub fn shape(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<(u32, u32)> = self.factors.iter().map(|((d, _), e)| (*d, *e)).collect();
        v.sort();
        v
    }
}

impl PatternSampler {
    pub fn new(q: u64, n: usize) -> Result<PatternSampler> {
        let mut irr = vec![BigUint::default()];
        let mut qpow = vec![BigUint::from(1u32)];
        let mut divs = vec![Vec::new()];
        for k in 1..=n {
            irr.push(count_irreducible(q, k as u32)?);
            qpow.push(&qpow[k - 1] * q);
            divs.push(divisors(k as u64));
        }
        Ok(PatternSampler { q, n, irr, qpow, divs })
    }

    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> FactorPattern {
        let mut out = FactorPattern::default();
        let mut m = self.n;
        while m > 0 {
            let k = rng.gen_range(1..=m);
            let mut u = uniform_below(&self.qpow[k], rng);
            let mut d = k;
            for &dd in &self.divs[k] {
                let w = &self.irr[dd as usize] * dd;
                if u < w {
                    d = dd as usize;
                    break;
                }
                u -= w;
            }
            let g = uniform_below(&self.irr[d], rng);
            *out.factors.entry((d as u32, g)).or_default() += (k / d) as u32;
            m -= k;
        }
        out
    }
}
