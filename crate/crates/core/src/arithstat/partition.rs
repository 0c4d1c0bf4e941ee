use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffpoly::{factor, Factorization, Fq, Poly};
use crate::galois::{classify_irreducible, CurveSpec, PlaceClass};

/// Assigns a place class to an irreducible factor.
pub trait PlaceClassifier {
    fn class_of(&self, v: &Poly) -> Result<PlaceClass>;
}

impl PlaceClassifier for CurveSpec {
    fn class_of(&self, v: &Poly) -> Result<PlaceClass> {
        classify_irreducible(self, v)
    }
}

/// Curve-free mode: every place gets the same class.
#[derive(Clone, Copy, Debug)]
pub struct ConstantClass(pub PlaceClass);

impl PlaceClassifier for ConstantClass {
    fn class_of(&self, _: &Poly) -> Result<PlaceClass> {
        Ok(self.0)
    }
}

impl<F: Fn(&Poly) -> Result<PlaceClass>> PlaceClassifier for F {
    fn class_of(&self, v: &Poly) -> Result<PlaceClass> {
        self(v)
    }
}

fn good_class(c: &impl PlaceClassifier, v: &Poly) -> Result<u32> {
    match c.class_of(v)? {
        PlaceClass::Bad => Err(Error::BadPlace(v.to_string())),
        k => Ok(k.rank().unwrap()),
    }
}

/// Splits f into (f_*, f^*): prime-power factors of degree ≤ 𝔫 and > 𝔫.
pub fn split_star(f: &Poly, threshold: usize, fq: &Fq) -> Result<(Poly, Poly)> {
    Ok(split_star_factored(&factor(f, fq)?, threshold, fq))
}

pub fn split_star_factored(fact: &Factorization, threshold: usize, fq: &Fq) -> (Poly, Poly) {
    let mut low = Poly::one();
    let mut high = Poly::one();
    for (g, e) in fact.iter() {
        let part = g.pow(*e as u64, fq);
        if g.deg() > threshold {
            high = high.mul(&part, fq);
        } else {
            low = low.mul(&part, fq);
        }
    }
    (low, high)
}

/// λ_{i,j,k}: the number of irreducible factors of degree i, multiplicity j and class k.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplittingPartition {
    lambda: BTreeMap<(u32, u32, u32), u64>,
}

impl SplittingPartition {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, i: u32, j: u32, k: u32, count: u64) {
        if count > 0 {
            *self.lambda.entry((i, j, k)).or_default() += count;
        }
    }

    pub fn get(&self, i: u32, j: u32, k: u32) -> u64 {
        self.lambda.get(&(i, j, k)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32, u32), u64)> + '_ {
        self.lambda.iter().map(|(&key, &c)| (key, c))
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Σ λ·i·j.
    pub fn n(&self) -> u64 {
        self.iter().map(|((i, j, _), c)| i as u64 * j as u64 * c).sum()
    }

    /// Σ λ.
    pub fn w(&self) -> u64 {
        self.lambda.values().sum()
    }

    pub fn flags(&self, threshold: usize, p: u32) -> PartitionFlags {
        let thr = threshold as u32;
        let pth_power_free = self.iter().all(|((_, j, _), _)| j < p);
        let admissible = self.iter().all(|((i, _, _), _)| i > thr);
        let forgettable = self.iter().all(|((i, _, _), _)| i <= thr);
        let has_aux = self.iter().any(|((i, j, k), _)| k == 0 && i > thr && j % p != 0);
        PartitionFlags { pth_power_free, admissible, forgettable, locally_arrangeable: admissible && has_aux }
    }
}

impl Serialize for SplittingPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Cell {
            i: u32,
            j: u32,
            k: u32,
            count: u64,
        }
        #[derive(Serialize)]
        struct Repr {
            n: u64,
            w: u64,
            lambda: Vec<Cell>,
        }
        let lambda = self.iter().map(|((i, j, k), count)| Cell { i, j, k, count }).collect();
        Repr { n: self.n(), w: self.w(), lambda }.serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionFlags {
    pub pth_power_free: bool,
    pub admissible: bool,
    pub forgettable: bool,
    pub locally_arrangeable: bool,
}

pub fn partition_of(
    f: &Poly,
    fq: &Fq,
    classify: &impl PlaceClassifier,
    threshold: usize,
    p: u32,
) -> Result<(SplittingPartition, PartitionFlags)> {
    partition_of_factored(&factor(f, fq)?, classify, threshold, p)
}

pub fn partition_of_factored(
    fact: &Factorization,
    classify: &impl PlaceClassifier,
    threshold: usize,
    p: u32,
) -> Result<(SplittingPartition, PartitionFlags)> {
    let mut part = SplittingPartition::new();
    for (g, e) in fact.iter() {
        part.add(g.deg() as u32, *e, good_class(classify, g)?, 1);
    }
    let flags = part.flags(threshold, p);
    Ok((part, flags))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxiliaryData {
    pub d_a: usize,
    pub f_a: Poly,
    /// deg f_a, counting multiplicity.
    pub d_a_star: usize,
}

/// The 𝒫₀ factors of maximal degree, with their multiplicities.
pub fn auxiliary_place(
    fact: &Factorization,
    flags: &PartitionFlags,
    classify: &impl PlaceClassifier,
    fq: &Fq,
) -> Result<AuxiliaryData> {
    if !flags.locally_arrangeable {
        return Err(Error::NoAuxiliaryPlace);
    }
    let mut p0 = Vec::new();
    for (g, e) in fact.iter() {
        if good_class(classify, g)? == 0 {
            p0.push((g, *e));
        }
    }
    let d_a = p0.iter().map(|(g, _)| g.deg()).max().ok_or(Error::NoAuxiliaryPlace)?;
    let f_a =
        p0.iter().filter(|(g, _)| g.deg() == d_a).fold(Poly::one(), |acc, (g, e)| acc.mul(&g.pow(*e as u64, fq), fq));
    let d_a_star = f_a.deg();
    Ok(AuxiliaryData { d_a, f_a, d_a_star })
}
