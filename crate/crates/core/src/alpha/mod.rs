//! The α(p) rate constant: the sup over ρ ∈ (0,1) of the min of three error exponents.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::gamma_beta;
use crate::nt::is_prime;

const GRID: usize = 10_000;
const LO: f64 = 1e-6;
const HI: f64 = 1.0 - 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Term {
    ErdosKac,
    Chebotarev,
    Markov,
}

impl Term {
    pub const ALL: [Term; 3] = [Term::ErdosKac, Term::Chebotarev, Term::Markov];
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Term::ErdosKac => "erdos_kac",
            Term::Chebotarev => "chebotarev",
            Term::Markov => "markov",
        })
    }
}

/// ρ ln ρ + 1 − ρ, the large-deviation exponent of the prime-factor count.
pub fn erdos_kac_exponent(rho: f64) -> f64 {
    if rho == 0.0 {
        return 1.0;
    }
    rho * rho.ln() + 1.0 - rho
}

/// The three terms (erdos_kac, chebotarev, markov) at ρ.
pub fn terms(p: u32, rho: f64) -> [f64; 3] {
    let pf = p as f64;
    let s = pf / (pf * pf - 1.0);
    [erdos_kac_exponent(rho), -rho * s.ln(), -rho * (1.0 - s).ln()]
}

fn check(p: u32, rho: f64) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0,1), got {rho}")));
    }
    Ok(())
}

fn objective(p: u32, rho: f64) -> f64 {
    terms(p, rho).into_iter().fold(f64::INFINITY, f64::min)
}

pub fn alpha_objective(p: u32, rho: f64) -> Result<f64> {
    check(p, rho)?;
    Ok(objective(p, rho))
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaResult {
    pub p: u32,
    pub alpha: f64,
    pub rho_star: f64,
    pub binding_terms: Vec<Term>,
    /// Set when the grid scan found more than one local maximum; the result then
    /// comes from grid refinement instead of golden-section search.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub non_unimodal: bool,
}

fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

fn grid_refine(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    loop {
        let h = (b - a) / 100.0;
        let best = (0..=100).map(|i| a + h * i as f64).max_by(|x, y| f(*x).total_cmp(&f(*y))).unwrap();
        if h < tol {
            return best;
        }
        a = (best - h).max(LO);
        b = (best + h).min(HI);
    }
}

/// Maximizes the objective on (0,1).
pub fn alpha(p: u32, tol: f64) -> Result<AlphaResult> {
    check(p, 0.5)?;
    if tol.is_nan() || tol < 1e-9 {
        return Err(Error::InvalidParameter(format!("tol must be at least 1e-9, got {tol}")));
    }
    let f = |r: f64| objective(p, r);
    let h = (HI - LO) / GRID as f64;
    let vals: Vec<f64> = (0..=GRID).map(|i| f(LO + h * i as f64)).collect();
    let local_maxima = (1..GRID).filter(|&i| vals[i] > vals[i - 1] && vals[i] > vals[i + 1]).count();
    let imax = vals.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    let a = LO + h * imax.saturating_sub(1) as f64;
    let b = (LO + h * (imax + 1) as f64).min(HI);
    let non_unimodal = local_maxima > 1;
    let rho_star = if non_unimodal { grid_refine(f, a, b, tol) } else { golden(f, a, b, tol) };
    let alpha = f(rho_star);
    let t = terms(p, rho_star);
    let binding_terms =
        Term::ALL.into_iter().zip(t).filter(|(_, v)| (v - alpha).abs() <= 10.0 * tol).map(|(k, _)| k).collect();
    Ok(AlphaResult { p, alpha, rho_star, binding_terms, non_unimodal })
}

/// Finite-n exponents with the ε and β corrections of the error budget.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub p: u32,
    pub rho: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub erdos_kac: f64,
    pub chebotarev: f64,
    /// −(1−ε)ρ ln γ(β) + 4ε ln β.
    pub markov: f64,
    pub min: f64,
}

pub fn exponent_report(p: u32, rho: f64, epsilon: f64, beta: f64) -> Result<ExponentReport> {
    check(p, rho)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if beta.is_nan() || beta <= 1.0 {
        return Err(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
    }
    let pf = p as f64;
    let erdos_kac = erdos_kac_exponent(rho);
    let chebotarev = -(1.0 - epsilon) * rho * (pf / (pf * pf - 1.0)).ln();
    let markov = -(1.0 - epsilon) * rho * gamma_beta(p, beta).ln() + 4.0 * epsilon * beta.ln();
    Ok(ExponentReport {
        p,
        rho,
        epsilon,
        beta,
        erdos_kac,
        chebotarev,
        markov,
        min: erdos_kac.min(chebotarev).min(markov),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_examples() {
        let v = alpha_objective(2, 0.456864).unwrap();
        assert!((v - (-0.456864 * (2.0f64 / 3.0).ln())).abs() < 1e-12);
        assert!((v - 0.185243).abs() < 1e-6);
        assert!(alpha_objective(2, 1e-9).unwrap() < 1e-8);
        assert!(alpha_objective(2, 1.0).is_err());
        assert!(alpha_objective(2, 0.0).is_err());
        assert!(alpha_objective(4, 0.5).is_err());
    }

    #[test]
    fn objective_is_min_of_terms() {
        for p in [2, 3, 5, 7] {
            for i in 1..1000 {
                let r = i as f64 / 1000.0;
                let v = alpha_objective(p, r).unwrap();
                assert!(terms(p, r).iter().all(|&t| v <= t));
            }
        }
    }

    #[test]
    fn binding_terms_at_optimum() {
        let r = alpha(2, 1e-9).unwrap();
        assert_eq!(r.binding_terms, vec![Term::ErdosKac, Term::Chebotarev]);
        for p in [3, 5, 7] {
            let r = alpha(p, 1e-9).unwrap();
            assert_eq!(r.binding_terms, vec![Term::ErdosKac, Term::Markov], "p={p}");
            assert!(!r.non_unimodal);
        }
        assert!(alpha(2, 1e-12).is_err());
    }

    #[test]
    fn exponent_report_limits() {
        let p = 2;
        let rho = 0.456864;
        let t = terms(p, rho);
        let r = exponent_report(p, rho, 1e-12, 10.0).unwrap();
        assert!((r.chebotarev - t[1]).abs() < 1e-10);
        // the Markov correction recovers −ρ ln(1 − p/(p²−1)) only as β → ∞
        let far = exponent_report(p, rho, 1e-12, 1e6).unwrap();
        assert!((far.markov - t[2]).abs() < 1e-5);
        let mut prev = f64::INFINITY;
        for k in 1..100 {
            let e = k as f64 / 100.0;
            let r = exponent_report(p, rho, e, 10.0).unwrap();
            assert!(r.chebotarev <= t[1]);
            assert!(r.chebotarev < prev);
            prev = r.chebotarev;
        }
    }
}
