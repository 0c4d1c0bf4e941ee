//! Elliptic curves y² = x³ + A(t)x + B(t) over 𝔽_q(t) and their place classes.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::resfield::{RPoly, ResidueField};
use crate::error::{Error, Result};
use crate::ffpoly::{is_irreducible, FieldSpec, Fq, Poly};

/// dim_{𝔽_p} E(k_v)[p] for good places, or bad reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PlaceClass {
    P0,
    P1,
    P2,
    Bad,
}

impl PlaceClass {
    pub const ALL: [PlaceClass; 4] = [PlaceClass::P0, PlaceClass::P1, PlaceClass::P2, PlaceClass::Bad];

    /// The p-torsion dimension, `None` for bad places.
    pub fn rank(self) -> Option<u32> {
        match self {
            PlaceClass::P0 => Some(0),
            PlaceClass::P1 => Some(1),
            PlaceClass::P2 => Some(2),
            PlaceClass::Bad => None,
        }
    }

    pub fn from_rank(k: u32) -> Result<PlaceClass> {
        match k {
            0 => Ok(PlaceClass::P0),
            1 => Ok(PlaceClass::P1),
            2 => Ok(PlaceClass::P2),
            k => Err(Error::InvalidClass(k)),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for PlaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PlaceClass::P0 => "P0",
            PlaceClass::P1 => "P1",
            PlaceClass::P2 => "P2",
            PlaceClass::Bad => "Bad",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveSpec {
    spec: FieldSpec,
    a: Poly,
    b: Poly,
    #[serde(skip)]
    disc: Poly,
}

impl CurveSpec {
    /// Short Weierstrass model. Requires characteristic ≥ 5, nonzero discriminant and a
    /// non-constant j-invariant.
    pub fn new(spec: FieldSpec, a: Poly, b: Poly) -> Result<CurveSpec> {
        let fq = spec.field();
        let ch = fq.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::BadCharacteristic(ch as u64));
        }
        let a3 = a.pow(3, fq);
        let b2 = b.pow(2, fq);
        let inner = a3.scale(fq.from_int(4), fq).add(&b2.scale(fq.from_int(27), fq), fq);
        let disc = inner.scale(fq.from_int(-16), fq);
        if disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        // j = 1728·4A³/(4A³+27B²) is constant iff A = 0, B = 0, or A³ ∝ B².
        if a.is_zero() || b.is_zero() || a3.monic(fq) == b2.monic(fq) {
            return Err(Error::Isotrivial);
        }
        Ok(CurveSpec { spec, a, b, disc })
    }

    /// From y² = x³ + a2·x² + a4·x + a6, completing the cube with x ↦ x − a2/3.
    pub fn from_cubic(spec: FieldSpec, a2: Poly, a4: Poly, a6: Poly) -> Result<CurveSpec> {
        let fq = spec.field().clone();
        let ch = fq.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::BadCharacteristic(ch as u64));
        }
        let inv3 = fq.inv(fq.from_int(3));
        let inv27 = fq.inv(fq.from_int(27));
        let a2sq = a2.mul(&a2, &fq);
        let a = a4.sub(&a2sq.scale(inv3, &fq), &fq);
        let b = a6
            .sub(&a2.mul(&a4, &fq).scale(inv3, &fq), &fq)
            .add(&a2sq.mul(&a2, &fq).scale(fq.mul(fq.from_int(2), inv27), &fq), &fq);
        CurveSpec::new(spec, a, b)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }
    pub fn field(&self) -> &Fq {
        self.spec.field()
    }
    pub fn a(&self) -> &Poly {
        &self.a
    }
    pub fn b(&self) -> &Poly {
        &self.b
    }
    pub fn p(&self) -> u32 {
        self.spec.p()
    }
    /// Δ = −16(4A³ + 27B²).
    pub fn discriminant(&self) -> &Poly {
        &self.disc
    }

    pub fn is_bad(&self, v: &Poly) -> bool {
        self.disc.rem(v, self.field()).is_zero()
    }
}

/// Place class of the finite place v. Checks that v is monic irreducible.
pub fn classify_place(curve: &CurveSpec, v: &Poly) -> Result<PlaceClass> {
    if !v.is_monic() {
        return Err(Error::NotMonic);
    }
    if !is_irreducible(v, curve.field()) {
        return Err(Error::NotIrreducible(v.to_string()));
    }
    classify_irreducible(curve, v)
}

/// As [`classify_place`] for v already known to be monic irreducible.
pub fn classify_irreducible(curve: &CurveSpec, v: &Poly) -> Result<PlaceClass> {
    if curve.p() != 2 && curve.p() != 3 {
        return Err(Error::UnsupportedTwist(curve.p()));
    }
    if curve.is_bad(v) {
        return Ok(PlaceClass::Bad);
    }
    let fq = curve.field();
    let k = ResidueField::new(v, fq);
    let a = k.reduce(curve.a());
    let b = k.reduce(curve.b());
    match curve.p() {
        2 => {
            let f: RPoly = vec![b, a, Poly::zero(), Poly::one()];
            match k.count_roots(&f) {
                0 => Ok(PlaceClass::P0),
                1 => Ok(PlaceClass::P1),
                3 => Ok(PlaceClass::P2),
                n => Err(Error::Invariant(format!("separable cubic with {n} roots at {v}"))),
            }
        }
        _ => {
            // ψ₃/3 = x⁴ + 2Ax² + 4Bx − A²/3
            let c = |n: i64| Poly::constant(fq.from_int(n));
            let inv3 = Poly::constant(fq.inv(fq.from_int(3)));
            let psi: RPoly = vec![
                k.neg(&k.mul(&k.mul(&a, &a), &inv3)),
                k.mul(&c(4), &b),
                k.mul(&c(2), &a),
                Poly::zero(),
                Poly::one(),
            ];
            let roots = k.split_part(&psi);
            if roots.len() == 1 {
                return Ok(PlaceClass::P0);
            }
            // Each root x gives two rational points iff F(x) is a nonzero square.
            let cubic: RPoly = vec![b, a, Poly::zero(), Poly::one()];
            let fx = k.rp_rem(&cubic, &roots);
            let euler = (k.size() - 1u32) / 2u32;
            let t = k.rp_powmod_big(&fx, &euler, &roots);
            let t1 = k.rp_sub(&t, &vec![Poly::one()]);
            let good = if t1.is_empty() { roots.len() - 1 } else { k.rp_gcd(&roots, &t1).len() - 1 };
            let points = 1 + 2 * good;
            match points {
                1 => Ok(PlaceClass::P0),
                3 => Ok(PlaceClass::P1),
                9 => Ok(PlaceClass::P2),
                n => Err(Error::Invariant(format!("{n} points of order dividing 3 at {v}"))),
            }
        }
    }
}

/// Brute-force oracle: counts x in the residue field with x³ + Ax + B = 0, i.e. the
/// points (x, 0) of order two.
pub fn two_torsion_oracle(curve: &CurveSpec, v: &Poly) -> PlaceClass {
    if curve.is_bad(v) {
        return PlaceClass::Bad;
    }
    let k = ResidueField::new(v, curve.field());
    let f: RPoly = vec![k.reduce(curve.b()), k.reduce(curve.a()), Poly::zero(), Poly::one()];
    let roots = k.elements().filter(|x| k.rp_eval(&f, x).is_zero()).count();
    match roots {
        0 => PlaceClass::P0,
        1 => PlaceClass::P1,
        _ => PlaceClass::P2,
    }
}

/// Brute-force oracle for p = 3: counts points of order dividing 3 by enumerating
/// all affine (x, y) and testing 3P = O through the tangent condition x(2P) = x(P).
pub fn three_torsion_oracle(curve: &CurveSpec, v: &Poly) -> PlaceClass {
    if curve.is_bad(v) {
        return PlaceClass::Bad;
    }
    let fq = curve.field();
    let k = ResidueField::new(v, fq);
    let a = k.reduce(curve.a());
    let b = k.reduce(curve.b());
    let c = |n: i64| Poly::constant(fq.from_int(n));
    let elems: Vec<Poly> = k.elements().collect();
    let mut points = 1usize;
    for x in &elems {
        let x2 = k.mul(x, x);
        let rhs = k.add(&k.add(&k.mul(&x2, x), &k.mul(&a, x)), &b);
        for y in &elems {
            if k.mul(y, y) != rhs || y.is_zero() {
                continue;
            }
            // 2P has x-coordinate λ² − 2x with λ = (3x² + A)/(2y); 3P = O iff x(2P) = x(P).
            let lam = k.mul(&k.add(&k.mul(&c(3), &x2), &a), &k.inv(&k.mul(&c(2), y)));
            let x2p = k.sub(&k.mul(&lam, &lam), &k.mul(&c(2), x));
            if &x2p == x {
                points += 1;
            }
        }
    }
    match points {
        1 => PlaceClass::P0,
        3 => PlaceClass::P1,
        _ => PlaceClass::P2,
    }
}

/// Q = q^{deg v} as an integer, for budget checks.
pub fn residue_field_size(fq: &Fq, v: &Poly) -> BigUint {
    BigUint::from(fq.q()).pow(v.deg() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    fn test_curve() -> CurveSpec {
        CurveSpec::new(FieldSpec::new(5, 2).unwrap(), p(&[0, 1]), p(&[0, 1])).unwrap()
    }

    #[test]
    fn worked_places() {
        let e = test_curve();
        assert_eq!(classify_place(&e, &p(&[4, 1])).unwrap(), PlaceClass::P0);
        assert_eq!(classify_place(&e, &p(&[1, 1])).unwrap(), PlaceClass::P1);
        assert_eq!(classify_place(&e, &p(&[0, 1])).unwrap(), PlaceClass::Bad);
    }

    #[test]
    fn full_two_torsion_model() {
        let spec = FieldSpec::new(5, 2).unwrap();
        let fq = spec.field().clone();
        // x(x−1)(x−t) = x³ − (1+t)x² + t·x
        let e = CurveSpec::from_cubic(spec, p(&[4, 4]), p(&[0, 1]), Poly::zero()).unwrap();
        for v in crate::ffpoly::irreducibles(&fq, 2, 1000).unwrap() {
            let c = classify_irreducible(&e, &v).unwrap();
            assert!(c == PlaceClass::P2 || c == PlaceClass::Bad);
        }
    }

    #[test]
    fn rejects_degenerate_curves() {
        let s5 = FieldSpec::new(5, 2).unwrap();
        assert_eq!(CurveSpec::new(s5.clone(), Poly::zero(), p(&[0, 1])).unwrap_err(), Error::Isotrivial);
        assert_eq!(CurveSpec::new(s5.clone(), p(&[1]), p(&[2])).unwrap_err(), Error::Isotrivial);
        // A = −3t², B = 2t³ has 4A³ + 27B² = 0
        assert_eq!(CurveSpec::new(s5, p(&[0, 0, 2]), p(&[0, 0, 0, 2])).unwrap_err(), Error::SingularCurve);
        let s9 = FieldSpec::new(9, 2).unwrap();
        assert!(matches!(CurveSpec::new(s9, p(&[0, 1]), p(&[0, 1])), Err(Error::BadCharacteristic(3))));
    }

    #[test]
    fn three_torsion_matches_oracle() {
        let spec = FieldSpec::new(7, 3).unwrap();
        let fq = spec.field().clone();
        let e = CurveSpec::new(spec, p(&[0, 1]), p(&[1, 1])).unwrap();
        for d in 1..=2 {
            for v in crate::ffpoly::irreducibles(&fq, d, 1000).unwrap() {
                assert_eq!(classify_irreducible(&e, &v).unwrap(), three_torsion_oracle(&e, &v), "{v}");
            }
        }
    }
}
