//! Factor statistics of degree-n monic polynomials over 𝔽_q: the m_{n,q} scale, the
//! small/large factor split, splitting partitions, auxiliary places, Mertens sums and
//! Erdős–Kac experiments.

mod partition;
mod sampler;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::alpha::erdos_kac_exponent;
use crate::error::{Error, Result};
use crate::ffpoly::irreducible_density;
use crate::nt::prime_power;
use crate::seeded::run_blocks;

pub use partition::{
    auxiliary_place, partition_of, partition_of_factored, split_star, split_star_factored, AuxiliaryData,
    ConstantClass, PartitionFlags, PlaceClassifier, SplittingPartition,
};
pub use sampler::{FactorPattern, PatternSampler};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaleParams {
    pub n: f64,
    pub q: f64,
    /// ln n + ln ln q.
    pub m_nq: f64,
    /// ⌊4 m_{n,q}² / ln q⌋.
    pub threshold_n: u64,
}

impl ScaleParams {
    /// Same formulas for real n, q > e; used for identities that need non-integer inputs.
    pub fn from_reals(n: f64, q: f64) -> Result<ScaleParams> {
        if q.is_nan() || q <= 2.0 {
            return Err(Error::InvalidParameter(format!("q must be at least 3, got {q}")));
        }
        if n.is_nan() || n <= 1.0 {
            return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
        }
        let m_nq = n.ln() + q.ln().ln();
        let threshold_n = (4.0 * m_nq * m_nq / q.ln()).floor().max(0.0) as u64;
        Ok(ScaleParams { n, q, m_nq, threshold_n })
    }

    /// m_{n,q} > e^{e^e}, the range where the asymptotic bounds are stated.
    pub fn in_regime(&self) -> bool {
        self.m_nq > 1f64.exp().exp().exp()
    }

    /// ε = 1/ln ln m_{n,q}, or `None` when ln ln m_{n,q} ≤ 0.
    pub fn regime_epsilon(&self) -> Option<f64> {
        let ll = self.m_nq.ln().ln();
        (ll > 0.0 && ll.is_finite()).then(|| 1.0 / ll)
    }
}

pub fn scale_params(n: u64, q: u64) -> Result<ScaleParams> {
    if q < 3 {
        return Err(Error::InvalidParameter(format!("q must be at least 3, got {q}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    ScaleParams::from_reals(n as f64, q as f64)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MertensSum {
    pub q: u64,
    pub threshold: u64,
    pub value: f64,
    /// 2 ln 𝔫 + 2.
    pub bound: f64,
}

/// Σ_{i ≤ 𝔫} I_i q^{−i}, checked against 2 ln 𝔫 + 2.
pub fn mertens_sum(q: u64, threshold: u64) -> Result<MertensSum> {
    if threshold < 1 {
        return Err(Error::DegreeTooSmall { min: 1, got: 0 });
    }
    if prime_power(q).is_none() {
        return Err(Error::InvalidFieldSize(q));
    }
    let value = (1..=threshold as u32).map(|i| irreducible_density(q, i)).sum();
    let bound = 2.0 * (threshold as f64).ln() + 2.0;
    if value > bound {
        return Err(Error::Invariant(format!("Mertens sum {value} exceeds {bound}")));
    }
    Ok(MertensSum { q, threshold, value, bound })
}

/// Experiment output: {params, empirical, bound, in_regime, seed}.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport<E> {
    pub params: serde_json::Value,
    pub empirical: E,
    pub bound: Option<f64>,
    pub in_regime: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CdfPoint {
    pub w: usize,
    /// (w − m)/√m
    pub z: f64,
    pub cdf: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErdosKac {
    pub trials: u64,
    pub m_nq: f64,
    pub mean_w: f64,
    pub var_w: f64,
    pub ks_distance: f64,
    pub cdf: Vec<CdfPoint>,
}

fn check_q(q: u64) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::InvalidFieldSize(q));
    }
    Ok(())
}

/// Histogram of w(f) over `trials` uniform monic f of degree n.
pub fn w_histogram(q: u64, n: usize, trials: u64, seed: u64) -> Result<Vec<u64>> {
    check_q(q)?;
    let sampler = PatternSampler::new(q, n)?;
    let run = |rng: &mut rand_chacha::ChaCha8Rng, k: u64| {
        let mut h = vec![0u64; n + 1];
        for _ in 0..k {
            h[sampler.sample(rng).w()] += 1;
        }
        h
    };
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    Ok(run_blocks(trials, seed, run, merge).unwrap_or_else(|| vec![0; n + 1]))
}

/// Sampled law of (w(f) − m_{n,q})/√m_{n,q} and its Kolmogorov distance to N(0,1).
pub fn erdos_kac_experiment(q: u64, n: usize, trials: u64, seed: u64) -> Result<ExperimentReport<ErdosKac>> {
    let sp = scale_params(n as u64, q)?;
    if sp.m_nq <= 1.0 {
        return Err(Error::InvalidParameter(format!("m_nq = {} must exceed 1", sp.m_nq)));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let hist = w_histogram(q, n, trials, seed)?;
    let m = sp.m_nq;
    let s = m.sqrt();
    let tf = trials as f64;
    let mean_w = hist.iter().enumerate().map(|(w, &c)| w as f64 * c as f64).sum::<f64>() / tf;
    let var_w = hist.iter().enumerate().map(|(w, &c)| (w as f64 - mean_w).powi(2) * c as f64).sum::<f64>() / tf;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let mut cdf = Vec::new();
    let mut acc = 0u64;
    let mut ks: f64 = 0.0;
    for (w, &c) in hist.iter().enumerate() {
        let z = (w as f64 - m) / s;
        let phi = normal.cdf(z);
        let before = acc as f64 / tf;
        acc += c;
        let after = acc as f64 / tf;
        ks = ks.max((before - phi).abs()).max((after - phi).abs());
        if c > 0 {
            cdf.push(CdfPoint { w, z, cdf: after });
        }
    }
    Ok(ExperimentReport {
        params: serde_json::json!({ "q": q, "n": n, "trials": trials, "m_nq": m }),
        empirical: ErdosKac { trials, m_nq: m, mean_w, var_w, ks_distance: ks, cdf },
        bound: None,
        in_regime: sp.in_regime(),
        seed,
    })
}

/// Wilson score interval for k successes in n trials.
pub fn wilson(k: u64, n: u64, z: f64) -> (f64, f64) {
    let nf = n as f64;
    let ph = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let centre = (ph + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (ph * (1.0 - ph) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct EkTail {
    pub rho: f64,
    pub trials: u64,
    pub hits: u64,
    pub tail: f64,
    /// Wilson interval at z = 3.
    pub wilson: (f64, f64),
    /// ρ ln ρ + 1 − ρ.
    pub exponent: f64,
    pub pass: bool,
}

/// Empirical P(w < ρ m or w > 2m) against 4 (n ln q)^{−(ρ ln ρ + 1 − ρ)}.
pub fn effective_ek_tail(q: u64, n: usize, rho: f64, trials: u64, seed: u64) -> Result<ExperimentReport<EkTail>> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidParameter(format!("rho must lie in (0,1), got {rho}")));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let sp = scale_params(n as u64, q)?;
    let hist = w_histogram(q, n, trials, seed)?;
    let m = sp.m_nq;
    let hits =
        hist.iter().enumerate().filter(|(w, _)| (*w as f64) < rho * m || (*w as f64) > 2.0 * m).map(|(_, &c)| c).sum();
    let exponent = erdos_kac_exponent(rho);
    let bound = 4.0 * (n as f64 * (q as f64).ln()).powf(-exponent);
    let wilson = wilson(hits, trials, 3.0);
    let tail = hits as f64 / trials as f64;
    Ok(ExperimentReport {
        params: serde_json::json!({ "q": q, "n": n, "rho": rho, "trials": trials, "m_nq": m }),
        empirical: EkTail { rho, trials, hits, tail, wilson, exponent, pass: wilson.0 <= bound },
        bound: Some(bound),
        in_regime: sp.in_regime(),
        seed,
    })
}

/// ε-dependent quantities at (n, q): the formula value of ε and the corrected exponents.
#[derive(Clone, Debug, Serialize)]
pub struct EpsilonReport {
    pub params: ScaleParams,
    pub regime_epsilon: Option<f64>,
    /// Whether the formula value lies in (0,1).
    pub usable: bool,
    pub epsilon: f64,
    pub exponents: crate::alpha::ExponentReport,
}

pub fn epsilon_report(n: u64, q: u64, p: u32, rho: f64, epsilon: f64, beta: f64) -> Result<EpsilonReport> {
    let params = scale_params(n, q)?;
    let regime_epsilon = params.regime_epsilon();
    Ok(EpsilonReport {
        params,
        regime_epsilon,
        usable: regime_epsilon.is_some_and(|e| e > 0.0 && e < 1.0),
        epsilon,
        exponents: crate::alpha::exponent_report(p, rho, epsilon, beta)?,
    })
}
