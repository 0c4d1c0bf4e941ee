use std::collections::BTreeMap;

use serde::Serialize;

use super::dist::{tv_distance, RankDist, Scalar};
use crate::error::{Error, Result};
use crate::exact::{self, Q};

/// M_L row at r as (target, probability): down with 1 − p^{−r}, up with p^{−r}.
pub fn ml_row<T: Scalar>(r: usize, p: u32) -> Vec<(usize, T)> {
    if r == 0 {
        return vec![(1, T::one())];
    }
    let up = T::inv_pow(p, r as u32);
    vec![(r - 1, T::one() - up.clone()), (r + 1, up)]
}

/// Push-forward under M_L.
pub fn ml_step<T: Scalar>(d: &RankDist<T>, p: u32) -> RankDist<T> {
    let mut out = Vec::with_capacity(d.masses().len() + 1);
    let mut trunc = d.truncation_mass().clone();
    for (r, m) in d.masses().iter().enumerate() {
        if m.is_zero() {
            continue;
        }
        for (s, w) in ml_row::<T>(r, p) {
            RankDist::push_mass(&mut out, &mut trunc, d.cap(), s, m.clone() * w);
        }
    }
    RankDist::from_parts(out, d.cap(), trunc)
}

/// (1 − p/(p²−1), 1/p, 1/(p³−p)): weights of I, M_L, M_L² in M.
pub fn m_weights<T: Scalar>(p: u32) -> [T; 3] {
    let p = p as i64;
    [T::one() - T::ratio(p, p * p - 1), T::ratio(1, p), T::ratio(1, p * p * p - p)]
}

fn combine<T: Scalar>(parts: [(&RankDist<T>, T); 3], base: &RankDist<T>) -> RankDist<T> {
    let n = parts.iter().map(|(d, _)| d.masses().len()).max().unwrap_or(0);
    let mass = (0..n).map(|r| parts.iter().fold(T::zero(), |acc, (d, w)| acc + w.clone() * d.get(r))).collect();
    let trunc = parts.iter().fold(base.truncation_mass().clone(), |acc, (d, w)| {
        acc + w.clone() * (d.truncation_mass().clone() - base.truncation_mass().clone())
    });
    RankDist::from_parts(mass, base.cap(), trunc)
}

/// Push-forward under M = (1 − p/(p²−1))·I + (1/p)·M_L + (1/(p³−p))·M_L².
pub fn m_step<T: Scalar>(d: &RankDist<T>, p: u32) -> RankDist<T> {
    let [w0, w1, w2] = m_weights::<T>(p);
    let l1 = ml_step(d, p);
    let l2 = ml_step(&l1, p);
    combine([(d, w0), (&l1, w1), (&l2, w2)], d)
}

pub fn iterate<T: Scalar>(d: &RankDist<T>, n: usize, step: impl Fn(&RankDist<T>) -> RankDist<T>) -> RankDist<T> {
    (0..n).fold(d.clone(), |acc, _| step(&acc))
}

/// Π_{m≥0} (1 + p^{−m})^{−1}, to double precision.
pub fn pr_constant(p: u32) -> f64 {
    let mut prod = 0.5; // m = 0
    let mut m = 1;
    loop {
        let t = (p as f64).powi(-m);
        if t < 1e-18 {
            return prod;
        }
        prod /= 1.0 + t;
        m += 1;
    }
}

fn pr_terms(p: u32, upto: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(upto + 1);
    let mut cur = pr_constant(p);
    v.push(cur);
    for m in 1..=upto {
        cur *= p as f64 / ((p as f64).powi(m as i32) - 1.0);
        v.push(cur);
    }
    v
}

/// Mass of PR above jmax.
pub fn pr_tail(p: u32, jmax: usize) -> f64 {
    let terms = pr_terms(p, jmax + 40);
    terms[jmax + 1..].iter().sum()
}

/// PR(j) = Π_{m≥0}(1+p^{−m})^{−1} · Π_{m=1}^{j} p/(p^m − 1) for j ≤ jmax.
pub fn poonen_rains(p: u32, jmax: usize) -> Result<RankDist<f64>> {
    let tail = pr_tail(p, jmax);
    if tail > 1e-12 {
        return Err(Error::TruncationTooSmall { jmax, tail });
    }
    let terms = pr_terms(p, jmax);
    Ok(RankDist::from_parts(terms, Some(jmax), tail))
}

/// Smallest jmax with PR tail below 1e-12.
pub fn default_jmax(p: u32) -> usize {
    (1..).find(|&j| pr_tail(p, j) <= 1e-12).expect("PR tail decays")
}

/// Even and odd parts of PR, each normalized.
pub fn eplus_eminus(p: u32, jmax: usize) -> Result<(RankDist<f64>, RankDist<f64>)> {
    let pr = poonen_rains(p, jmax)?;
    let split = |odd: bool| {
        let raw: Vec<f64> =
            pr.masses().iter().enumerate().map(|(r, &m)| if (r % 2 == 1) == odd { m } else { 0.0 }).collect();
        let s: f64 = raw.iter().sum();
        RankDist::from_parts(raw.into_iter().map(|m| m / s).collect(), Some(jmax), 0.0)
    };
    Ok((split(false), split(true)))
}

/// Exact transition table of the rank under a ramified place of class k, as Δ → probability.
pub fn local_transition_table(k: u32, r: u32, p: u32) -> Result<BTreeMap<i32, Q>> {
    let pr = exact::inv_pow(p, r);
    let pr2 = exact::inv_pow(p, 2 * r);
    let pq = exact::int(p as i64);
    let mut t = BTreeMap::new();
    match k {
        0 => {
            t.insert(0, exact::one());
        }
        1 => {
            if r == 0 {
                t.insert(1, exact::one());
            } else {
                t.insert(-1, exact::one() - pr.clone());
                t.insert(1, pr);
            }
        }
        2 => {
            let p1 = &pq + exact::one();
            t.insert(-2, exact::one() - &p1 * &pr + &pq * &pr2);
            t.insert(0, &p1 * &pr - (&pq + exact::frac(1, p as i64)) * &pr2);
            t.insert(2, exact::frac(1, p as i64) * pr2);
        }
        k => return Err(Error::InvalidClass(k)),
    }
    Ok(t)
}

/// Floating-point form of [`local_transition_table`] as (Δ, probability) triples.
///
/// Unused slots carry probability 0. Used by the samplers, where exact rationals are too slow.
pub fn table_row_f64(k: u32, r: u32, p: u32) -> Result<[(i32, f64); 3]> {
    let pf = p as f64;
    let a = pf.powi(-(r as i32));
    Ok(match k {
        0 => [(0, 1.0), (0, 0.0), (0, 0.0)],
        1 if r == 0 => [(1, 1.0), (0, 0.0), (0, 0.0)],
        1 => [(-1, 1.0 - a), (1, a), (0, 0.0)],
        2 => {
            let up = a * a / pf;
            let stay = (pf + 1.0) * a - (pf + 1.0 / pf) * a * a;
            // the closed form vanishes at r ≤ 1; keep it exactly zero there
            let down = if r < 2 { 0.0 } else { 1.0 - stay - up };
            [(-2, down), (0, stay), (2, up)]
        }
        k => return Err(Error::InvalidClass(k)),
    })
}

/// Row of M_L^k at r as Δ → probability, by composing M_L rows.
pub fn ml_power_row(k: u32, r: u32, p: u32) -> BTreeMap<i32, Q> {
    let mut d: RankDist<Q> = RankDist::delta(r as usize);
    for _ in 0..k {
        d = ml_step(&d, p);
    }
    d.masses()
        .iter()
        .enumerate()
        .filter(|(_, m)| !num_traits::Zero::is_zero(*m))
        .map(|(s, m)| (s as i32 - r as i32, m.clone()))
        .collect()
}

/// γ(β) = 1 − p/(p²−1) + 1/(pβ) + 1/((p³−p)β²).
pub fn gamma_beta(p: u32, beta: f64) -> f64 {
    let p = p as f64;
    1.0 - p / (p * p - 1.0) + 1.0 / (p * beta) + 1.0 / ((p * p * p - p) * beta * beta)
}

/// E[β^{X'} | X = x] − γ(β)·β^x under M, evaluated in exact rationals from the row at x.
///
/// Both terms grow like β^x while their difference stays bounded, so floating point
/// loses everything to cancellation at moderate x.
pub fn drift_residual(p: u32, beta: f64, x: usize) -> f64 {
    let Some(b) = Q::from_float(beta) else {
        return f64::NAN;
    };
    let next: RankDist<Q> = m_step(&RankDist::delta(x), p);
    let pq = exact::int(p as i64);
    let gamma = exact::one() - &pq / (&pq * &pq - exact::one())
        + (&pq * &b).recip()
        + ((&pq * &pq * &pq - &pq) * &b * &b).recip();
    let e = next.masses().iter().enumerate().fold(exact::zero(), |acc, (s, m)| acc + m * num_traits::pow(b.clone(), s));
    exact::to_f64(&(e - gamma * num_traits::pow(b, x)))
}

#[derive(Clone, Debug, Serialize)]
pub struct DriftReport {
    pub p: u32,
    pub beta: f64,
    pub gamma: f64,
    pub residuals: Vec<f64>,
    /// κ̂ = max residual over the sweep.
    pub kappa_hat: f64,
    pub argmax: usize,
}

pub fn drift_sweep(p: u32, beta: f64, xmax: usize) -> DriftReport {
    let residuals: Vec<f64> = (0..=xmax).map(|x| drift_residual(p, beta, x)).collect();
    let (argmax, kappa_hat) =
        residuals
            .iter()
            .cloned()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (x, r)| if r > best.1 { (x, r) } else { best });
    DriftReport { p, beta, gamma: gamma_beta(p, beta), residuals, kappa_hat, argmax }
}

#[derive(Clone, Debug, Serialize)]
pub struct RateFit {
    pub p: u32,
    /// TV(Mⁿμ₀, PR) for n = 0..=nmax.
    pub tv: Vec<f64>,
    /// Fit window [start, end] where TV ∈ [1e-9, 1e-2]; `None` when TV never enters it.
    pub window: Option<(usize, usize)>,
    pub c: f64,
    pub gamma_hat: f64,
    /// min over β ∈ (1, p] of γ(β), attained at β = p.
    pub gamma_bound: f64,
    pub pass: bool,
}

/// Iterates M from μ₀ and fits TV ≈ c·γ̂ⁿ by least squares on log TV.
pub fn convergence_rate(p: u32, mu0: &RankDist<f64>, nmax: usize) -> Result<RateFit> {
    let jmax = default_jmax(p).max(mu0.jmax() + 1) + 20;
    let pr = poonen_rains(p, jmax)?;
    let mut d = mu0.clone().with_cap(jmax);
    let mut tv = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        if n > 0 {
            d = m_step(&d, p);
        }
        tv.push(tv_distance(&d, &pr));
    }
    let pts: Vec<(f64, f64)> =
        tv.iter().enumerate().filter(|(_, &t)| (1e-9..=1e-2).contains(&t)).map(|(n, &t)| (n as f64, t.ln())).collect();
    let gamma_bound = gamma_beta(p, p as f64);
    if pts.len() < 2 {
        return Ok(RateFit { p, tv, window: None, c: 0.0, gamma_hat: 0.0, gamma_bound, pass: true });
    }
    let window = Some((pts[0].0 as usize, pts[pts.len() - 1].0 as usize));
    let k = pts.len() as f64;
    let mx = pts.iter().map(|q| q.0).sum::<f64>() / k;
    let my = pts.iter().map(|q| q.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|q| (q.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|q| (q.0 - mx) * (q.1 - my)).sum();
    let slope = sxy / sxx;
    let gamma_hat = slope.exp();
    Ok(RateFit {
        p,
        tv,
        window,
        c: (my - slope * mx).exp(),
        gamma_hat,
        gamma_bound,
        pass: gamma_hat < 1.0 && gamma_hat <= gamma_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::ExactDist;

    #[test]
    fn ml_examples() {
        let d: ExactDist = ml_step(&RankDist::delta(0), 2);
        assert_eq!(d, RankDist::delta(1));
        let d: ExactDist = ml_step(&RankDist::delta(1), 2);
        assert_eq!(d.masses(), &[exact::frac(1, 2), exact::zero(), exact::frac(1, 2)]);
    }

    #[test]
    fn m_step_example() {
        let d: ExactDist = m_step(&RankDist::delta(0), 2);
        assert_eq!(d.masses(), &[exact::frac(5, 12), exact::frac(1, 2), exact::frac(1, 12)]);
        for p in [2, 3, 5, 7] {
            let w = m_weights::<Q>(p);
            assert_eq!(w[0].clone() + w[1].clone() + w[2].clone(), exact::one());
        }
    }

    #[test]
    fn pr_values() {
        let pr = poonen_rains(2, 40).unwrap();
        let oracle = 0.5 / (1..80).fold(1.0, |a, m| a * (1.0 + 0.5f64.powi(m)));
        assert!((pr.get(0) - oracle).abs() < 1e-14);
        assert!((pr.get(0) - 0.2097112).abs() < 1e-7);
        assert!((pr.get(1) / pr.get(0) - 2.0).abs() < 1e-14);
        assert!((pr.parity() - 0.5).abs() < 1e-9);
        assert!(matches!(poonen_rains(2, 3), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn table_example() {
        let t = local_transition_table(2, 1, 2).unwrap();
        assert_eq!(t[&-2], exact::zero());
        assert_eq!(t[&0], exact::frac(7, 8));
        assert_eq!(t[&2], exact::frac(1, 8));
        assert_eq!(local_transition_table(0, 5, 3).unwrap()[&0], exact::one());
        assert!(local_transition_table(3, 0, 2).is_err());
        for p in [2u32, 3, 5, 7] {
            for k in 0..3 {
                for r in 0..25 {
                    let exact = local_transition_table(k, r, p).unwrap();
                    for (d, v) in table_row_f64(k, r, p).unwrap() {
                        if v > 0.0 {
                            assert!((exact::to_f64(&exact[&d]) - v).abs() < 1e-15);
                        }
                    }
                    let total: f64 = table_row_f64(k, r, p).unwrap().iter().map(|x| x.1).sum();
                    assert!((total - 1.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn drift_limit_and_gamma() {
        assert!((gamma_beta(2, 2.0) - 0.625).abs() < 1e-15);
        for p in [2u32, 3, 5, 7] {
            let pf = p as f64;
            assert!((gamma_beta(p, pf) - (1.0 - (pf * pf - pf + 1.0) / pf.powi(3))).abs() < 1e-15);
        }
        // residual/β^x → 0
        let r = drift_residual(2, 2.0, 40) / 2f64.powi(40);
        assert!(r.abs() < 1e-10);
    }

    #[test]
    fn stationary_start_has_no_rate() {
        let pr = poonen_rains(2, 60).unwrap();
        let fit = convergence_rate(2, &pr, 30).unwrap();
        assert!(fit.window.is_none());
        assert!(fit.tv.iter().all(|&t| t < 1e-8));
    }
}
