use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::exact::{self, Q};

/// Arithmetic used by rank distributions: `f64` for long iterations, [`Q`] for identities.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    fn ratio(n: i64, d: i64) -> Self;
    /// p^{−r}
    fn inv_pow(p: u32, r: u32) -> Self;
    fn abs_val(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Scalar for f64 {
    fn ratio(n: i64, d: i64) -> f64 {
        n as f64 / d as f64
    }
    fn inv_pow(p: u32, r: u32) -> f64 {
        (p as f64).powi(-(r as i32))
    }
    fn abs_val(&self) -> f64 {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Q {
    fn ratio(n: i64, d: i64) -> Q {
        exact::frac(n, d)
    }
    fn inv_pow(p: u32, r: u32) -> Q {
        exact::inv_pow(p, r)
    }
    fn abs_val(&self) -> Q {
        self.abs()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// A finitely supported distribution on ranks {0, 1, 2, ...}.
///
/// With a cap, mass pushed above the cap is folded into the top state and accumulated
/// in `truncation_mass`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankDist<T: Scalar = f64> {
    mass: Vec<T>,
    cap: Option<usize>,
    truncation: T,
}

pub type ExactDist = RankDist<Q>;

impl<T: Scalar> RankDist<T> {
    pub fn delta(r: usize) -> Self {
        let mut mass = vec![T::zero(); r + 1];
        mass[r] = T::one();
        RankDist { mass, cap: None, truncation: T::zero() }
    }

    pub fn from_masses(mass: Vec<T>) -> Self {
        let mut d = RankDist { mass, cap: None, truncation: T::zero() };
        d.trim();
        d
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = Some(cap);
        if self.mass.len() > cap + 1 {
            let extra = self.mass.split_off(cap + 1);
            let folded = extra.into_iter().fold(T::zero(), |a, b| a + b);
            self.mass[cap] = self.mass[cap].clone() + folded.clone();
            self.truncation = self.truncation.clone() + folded;
        }
        self
    }

    pub fn cap(&self) -> Option<usize> {
        self.cap
    }

    fn trim(&mut self) {
        while self.mass.len() > 1 && self.mass.last().is_some_and(|m| m.is_zero()) {
            self.mass.pop();
        }
    }

    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    pub fn get(&self, r: usize) -> T {
        self.mass.get(r).cloned().unwrap_or_else(T::zero)
    }

    /// Largest state in the support vector.
    pub fn jmax(&self) -> usize {
        self.mass.len().saturating_sub(1)
    }

    pub fn truncation_mass(&self) -> &T {
        &self.truncation
    }

    pub fn total(&self) -> T {
        self.mass.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// ρ(μ): mass on odd states.
    pub fn parity(&self) -> T {
        self.mass.iter().skip(1).step_by(2).cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn mean(&self) -> f64 {
        self.mass.iter().enumerate().map(|(r, m)| r as f64 * m.to_f64()).sum()
    }

    /// Adds `m` at state r, honoring the cap.
    pub(crate) fn push_mass(out: &mut Vec<T>, truncation: &mut T, cap: Option<usize>, r: usize, m: T) {
        let r = match cap {
            Some(c) if r > c => {
                *truncation = truncation.clone() + m.clone();
                c
            }
            _ => r,
        };
        if out.len() <= r {
            out.resize(r + 1, T::zero());
        }
        out[r] = out[r].clone() + m;
    }

    pub(crate) fn from_parts(mass: Vec<T>, cap: Option<usize>, truncation: T) -> Self {
        let mut d = RankDist { mass, cap, truncation };
        d.trim();
        d
    }

    pub fn to_f64(&self) -> RankDist<f64> {
        RankDist {
            mass: self.mass.iter().map(|m| m.to_f64()).collect(),
            cap: self.cap,
            truncation: self.truncation.to_f64(),
        }
    }

    /// CSV `state,mass` followed by `#truncation_mass,<value>`.
    pub fn to_csv(&self) -> String
    where
        T: std::fmt::Display,
    {
        let mut s = String::from("state,mass\n");
        for (r, m) in self.mass.iter().enumerate() {
            s.push_str(&format!("{r},{m}\n"));
        }
        s.push_str(&format!("#truncation_mass,{}\n", self.truncation));
        s
    }
}

impl RankDist<f64> {
    /// Empirical distribution from state counts.
    pub fn from_counts(counts: &[u64]) -> RankDist<f64> {
        let n: u64 = counts.iter().sum();
        RankDist::from_masses(counts.iter().map(|&c| c as f64 / n as f64).collect())
    }
}

/// Total variation distance ½ Σ |a − b|.
pub fn tv_distance<T: Scalar>(a: &RankDist<T>, b: &RankDist<T>) -> T {
    let n = a.mass.len().max(b.mass.len());
    let s = (0..n).fold(T::zero(), |acc, r| acc + (a.get(r) - b.get(r)).abs_val());
    s * T::ratio(1, 2)
}

impl Serialize for RankDist<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            mass: &'a [f64],
            truncation_mass: f64,
        }
        Repr { mass: &self.mass, truncation_mass: self.truncation }.serialize(s)
    }
}
