//! The field 𝔽_q together with a twist prime p | q − 1, and p-th power residue symbols.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use super::field::{Elem, Fq};
use super::poly::{Modulus, Poly};
use crate::error::{Error, Result};
use crate::nt;

/// 𝔽_q with a prime p such that q ≡ 1 (mod p), so μ_p ⊂ 𝔽_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    field: Fq,
    p: u32,
    zeta: Elem,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            q: u32,
            p: u32,
            modulus: &'a [u32],
            zeta: u32,
        }
        Repr { q: self.field.q(), p: self.p, modulus: self.field.modulus(), zeta: self.zeta }.serialize(s)
    }
}

impl FieldSpec {
    pub fn new(q: u64, p: u32) -> Result<FieldSpec> {
        if !nt::is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let field = Fq::new(q)?;
        if (q - 1) % p as u64 != 0 {
            return Err(Error::NoRootsOfUnity { q, p: p as u64 });
        }
        let zeta = field.pow(field.generator(), (q - 1) / p as u64);
        Ok(FieldSpec { field, p, zeta })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn q(&self) -> u32 {
        self.field.q()
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    /// The chosen primitive p-th root of unity ζ_p.
    pub fn zeta(&self) -> Elem {
        self.zeta
    }

    /// μ_p as field elements ζ^0, ζ^1, ..., ζ^{p−1}.
    pub fn roots_of_unity(&self) -> Vec<Elem> {
        (0..self.p as u64).map(|e| self.field.pow(self.zeta, e)).collect()
    }

    /// Exponent e with x = ζ^e, if x ∈ μ_p.
    pub fn mu_index(&self, x: Elem) -> Option<u32> {
        let l = self.field.log(x)? as u64;
        let step = (self.field.q() as u64 - 1) / self.p as u64;
        (l % step == 0).then(|| (l / step) as u32)
    }
}

/// An element ζ^e of μ_p, stored as its exponent e mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RootOfUnity {
    pub exponent: u32,
    pub p: u32,
}

impl RootOfUnity {
    pub fn one(p: u32) -> RootOfUnity {
        RootOfUnity { exponent: 0, p }
    }
    pub fn is_one(&self) -> bool {
        self.exponent == 0
    }
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: RootOfUnity) -> RootOfUnity {
        RootOfUnity { exponent: (self.exponent + other.exponent) % self.p, p: self.p }
    }
    pub fn pow(self, e: u32) -> RootOfUnity {
        RootOfUnity { exponent: (self.exponent as u64 * e as u64 % self.p as u64) as u32, p: self.p }
    }
    pub fn value(&self, spec: &FieldSpec) -> Elem {
        spec.field.pow(spec.zeta, self.exponent as u64)
    }
}

impl std::fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.p, self.exponent) {
            (2, 0) => write!(f, "+1"),
            (2, _) => write!(f, "-1"),
            (_, e) => write!(f, "z^{e}"),
        }
    }
}

/// (v/h)_p = v^{(q^{deg h} − 1)/p} mod h, for h irreducible and v coprime to h.
///
/// Irreducibility of h is the caller's responsibility; the result is checked to lie in μ_p.
pub fn residue_symbol(v: &Poly, h: &Poly, spec: &FieldSpec) -> Result<RootOfUnity> {
    let fq = spec.field();
    if h.deg() == 0 || !h.is_monic() {
        return Err(Error::InvalidParameter(format!("modulus {h} must be monic of positive degree")));
    }
    let m = Modulus::new(h.clone(), fq);
    let r = m.reduce(v);
    if r.is_zero() {
        return Err(Error::SymbolUndefined { v: v.to_string(), h: h.to_string() });
    }
    let e = (BigUint::from(fq.q()).pow(h.deg() as u32) - 1u32) / spec.p();
    let s = m.pow_big(&r, &e);
    let c = match s.coeffs() {
        [c] => *c,
        _ => return Err(Error::NotIrreducible(h.to_string())),
    };
    let exponent = spec.mu_index(c).ok_or_else(|| Error::NotIrreducible(h.to_string()))?;
    Ok(RootOfUnity { exponent, p: spec.p() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    #[test]
    fn field_spec_validation() {
        assert!(FieldSpec::new(5, 2).is_ok());
        assert!(FieldSpec::new(7, 3).is_ok());
        assert!(matches!(FieldSpec::new(5, 3), Err(Error::NoRootsOfUnity { .. })));
        assert!(matches!(FieldSpec::new(7, 4), Err(Error::NotPrime(4))));
        let s = FieldSpec::new(13, 3).unwrap();
        let mu = s.roots_of_unity();
        assert_eq!(mu.len(), 3);
        for (e, &z) in mu.iter().enumerate() {
            assert_eq!(s.field().pow(z, 3), 1);
            assert_eq!(s.mu_index(z), Some(e as u32));
        }
    }

    #[test]
    fn quadratic_symbols() {
        // t+2 ≡ 1 mod (t+1): a square.
        let s3 = FieldSpec::new(3, 2).unwrap();
        assert!(residue_symbol(&p(&[2, 1]), &p(&[1, 1]), &s3).unwrap().is_one());
        // t^12 mod t^2+2 over 𝔽_5 is (−2)^6 = 4 = −1.
        let s5 = FieldSpec::new(5, 2).unwrap();
        let r = residue_symbol(&p(&[0, 1]), &p(&[2, 0, 1]), &s5).unwrap();
        assert_eq!(r.value(&s5), 4);
    }

    #[test]
    fn rejects_multiple_of_modulus() {
        let s5 = FieldSpec::new(5, 2).unwrap();
        let h = p(&[1, 1]);
        assert!(matches!(residue_symbol(&h.mul(&p(&[3, 1]), s5.field()), &h, &s5), Err(Error::SymbolUndefined { .. })));
    }
}
