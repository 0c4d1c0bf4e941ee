//! SL₂(𝔽_p) enumeration and the Frobenius-type densities ρ₀, ρ₁, ρ₂.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, Q};
use crate::nt;

/// A 2×2 matrix [[a, b], [c, d]] over 𝔽_p with determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    m: [[u32; 2]; 2],
    p: u32,
}

impl GroupElement {
    pub fn new(a: u32, b: u32, c: u32, d: u32, p: u32) -> Result<GroupElement> {
        let p64 = p as u64;
        let det = (a as u64 * d as u64 + p64 * p64 - (b as u64 * c as u64) % p64) % p64;
        if det != 1 % p64 {
            return Err(Error::InvalidParameter(format!("determinant {det} != 1 mod {p}")));
        }
        Ok(GroupElement { m: [[a % p, b % p], [c % p, d % p]], p })
    }

    pub fn identity(p: u32) -> GroupElement {
        GroupElement { m: [[1, 0], [0, 1]], p }
    }

    pub fn entries(&self) -> [[u32; 2]; 2] {
        self.m
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let p = self.p as u64;
        let mut r = [[0u32; 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let s = self.m[i][0] as u64 * o.m[0][j] as u64 + self.m[i][1] as u64 * o.m[1][j] as u64;
                *cell = (s % p) as u32;
            }
        }
        GroupElement { m: r, p: self.p }
    }

    pub fn pow(&self, mut e: u64) -> GroupElement {
        let mut base = *self;
        let mut acc = GroupElement::identity(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.m == [[1, 0], [0, 1]]
    }
}

/// All elements of SL₂(𝔽_p).
pub fn sl2_elements(p: u32) -> Result<Vec<GroupElement>> {
    if !nt::is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p >= 13 {
        log::warn!("enumerating SL2(F_{p}) costs O(p^4) operations");
    }
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if let Ok(g) = GroupElement::new(a, b, c, d, p) {
                        out.push(g);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sl2Densities {
    pub p: u32,
    pub order: u64,
    /// Fraction with g^p ≠ 1.
    #[serde(serialize_with = "exact::serialize")]
    pub rho0: Q,
    /// Fraction with g ≠ 1, g^p = 1.
    #[serde(serialize_with = "exact::serialize")]
    pub rho1: Q,
    /// Fraction with g = 1.
    #[serde(serialize_with = "exact::serialize")]
    pub rho2: Q,
}

impl Sl2Densities {
    pub fn as_f64(&self) -> [f64; 3] {
        [exact::to_f64(&self.rho0), exact::to_f64(&self.rho1), exact::to_f64(&self.rho2)]
    }
}

/// Closed forms (1 − p/(p²−1), 1/p, 1/(p³−p)).
pub fn closed_form_densities(p: u32) -> [Q; 3] {
    let p = p as i64;
    [exact::one() - exact::frac(p, p * p - 1), exact::frac(1, p), exact::frac(1, p * p * p - p)]
}

/// Enumerates SL₂(𝔽_p) and returns the exact class fractions, checked against the
/// closed forms.
pub fn sl2_densities(p: u32) -> Result<Sl2Densities> {
    let elems = sl2_elements(p)?;
    let mut counts = [0i64; 3];
    for g in &elems {
        if g.is_identity() {
            counts[2] += 1;
        } else if g.pow(p as u64).is_identity() {
            counts[1] += 1;
        } else {
            counts[0] += 1;
        }
    }
    let n = elems.len() as i64;
    let d = Sl2Densities {
        p,
        order: n as u64,
        rho0: exact::frac(counts[0], n),
        rho1: exact::frac(counts[1], n),
        rho2: exact::frac(counts[2], n),
    };
    let cf = closed_form_densities(p);
    if [&d.rho0, &d.rho1, &d.rho2] != [&cf[0], &cf[1], &cf[2]] {
        return Err(Error::Invariant(format!("SL2(F_{p}) densities disagree with closed forms")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let d2 = sl2_densities(2).unwrap();
        assert_eq!(d2.order, 6);
        assert_eq!(
            (d2.rho0.clone(), d2.rho1.clone(), d2.rho2.clone()),
            (exact::frac(1, 3), exact::frac(1, 2), exact::frac(1, 6))
        );
        let d3 = sl2_densities(3).unwrap();
        assert_eq!(d3.order, 24);
        assert_eq!((d3.rho0, d3.rho1, d3.rho2), (exact::frac(5, 8), exact::frac(1, 3), exact::frac(1, 24)));
        assert!(matches!(sl2_densities(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(GroupElement::new(1, 1, 1, 1, 5).is_err());
        assert!(GroupElement::new(2, 0, 0, 3, 5).is_ok());
    }
}
