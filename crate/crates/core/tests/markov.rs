use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use selmerwalk::markov::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn exact_dist(weights: &[u32]) -> ExactDist {
    let total: i64 = weights.iter().map(|&w| w as i64).sum::<i64>().max(1);
    RankDist::from_masses(weights.iter().map(|&w| q(w as i64, total)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn steps_conserve_mass(w in prop::collection::vec(0u32..100, 1..12), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        prop_assume!(w.iter().any(|&x| x > 0));
        let d = exact_dist(&w);
        prop_assert_eq!(ml_step(&d, p).total(), BigRational::one());
        prop_assert_eq!(m_step(&d, p).total(), BigRational::one());
    }

    #[test]
    fn parity_laws(w in prop::collection::vec(0u32..100, 1..12), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        prop_assume!(w.iter().any(|&x| x > 0));
        let d = exact_dist(&w);
        let rho = d.parity();
        let pq = BigRational::from_integer((p as i64).into());
        let expect = (BigRational::one() - BigRational::from_integer(2.into()) / &pq) * &rho + BigRational::one() / &pq;
        prop_assert_eq!(m_step(&d, p).parity(), expect);
        prop_assert_eq!(ml_step(&d, p).parity(), BigRational::one() - rho.clone());
        prop_assert_eq!(ml_step(&ml_step(&d, p), p).parity(), rho);
    }
}

#[test]
fn tv_basics() {
    let a: RankDist = RankDist::delta(0);
    let b: RankDist = RankDist::delta(1);
    assert_eq!(tv_distance(&a, &a), 0.0);
    assert_eq!(tv_distance(&a, &b), 1.0);
    assert_eq!(tv_distance(&a, &b), tv_distance(&b, &a));
}

#[test]
fn tables_equal_operator_composition() {
    for p in [2u32, 3, 5, 7] {
        for r in 0..=20u32 {
            for k in 1..=2u32 {
                let table = local_transition_table(k, r, p).unwrap();
                let comp = ml_power_row(k, r, p);
                for (dl, v) in &table {
                    assert_eq!(comp.get(dl).cloned().unwrap_or_else(BigRational::zero), *v, "p={p} r={r} k={k} Δ={dl}");
                }
                for (dl, v) in &comp {
                    assert_eq!(table.get(dl), Some(v), "p={p} r={r} k={k} Δ={dl}");
                }
                let total = table.values().fold(BigRational::zero(), |a, b| a + b);
                assert_eq!(total, BigRational::one());
            }
            let id = local_transition_table(0, r, p).unwrap();
            assert_eq!(id.len(), 1);
            assert_eq!(id[&0], BigRational::one());
        }
    }
}

#[test]
fn rows_sum_to_one() {
    for p in [2u32, 3, 5, 7] {
        for r in 0..30 {
            let total = ml_row::<BigRational>(r, p).into_iter().fold(BigRational::zero(), |a, (_, m)| a + m);
            assert_eq!(total, BigRational::one());
            let d: ExactDist = m_step(&RankDist::delta(r), p);
            assert_eq!(d.total(), BigRational::one());
        }
    }
}

#[test]
fn stationarity() {
    for p in [2u32, 3, 5] {
        let jmax = default_jmax(p);
        assert!(pr_tail(p, jmax) < 1e-12);
        let pr = poonen_rains(p, jmax).unwrap();
        assert!(1.0 - pr.total() < 1e-12);
        assert!((pr.parity() - 0.5).abs() < 1e-9);
        let next = m_step(&pr.clone().with_cap(jmax + 2), p);
        assert!(tv_distance(&next, &pr) < 1e-8, "p={p}");
    }
}

#[test]
fn pr_closed_form() {
    // PR(j) from the product formula evaluated independently
    for p in [2u32, 3, 5, 7] {
        let pf = p as f64;
        let c: f64 = 0.5 / (1..200).fold(1.0, |a, m| a * (1.0 + pf.powi(-m)));
        let pr = poonen_rains(p, default_jmax(p)).unwrap();
        let mut v = c;
        for j in 0..=pr.jmax() {
            if j > 0 {
                v *= pf / (pf.powi(j as i32) - 1.0);
            }
            assert!((pr.get(j) - v).abs() < 1e-15 * v.max(1e-300) + 1e-17);
        }
    }
}

#[test]
fn parity_components() {
    let jmax = 60;
    for p in [2u32, 3, 5] {
        let (ep, em) = eplus_eminus(p, jmax).unwrap();
        let pr = poonen_rains(p, jmax).unwrap();
        for j in 0..=jmax {
            if j % 2 == 1 {
                assert_eq!(ep.get(j), 0.0);
            } else {
                assert_eq!(em.get(j), 0.0);
            }
            assert!(((ep.get(j) + em.get(j)) / 2.0 - pr.get(j)).abs() < 1e-10);
        }
        assert!((ep.total() - 1.0).abs() < 1e-12);
        assert!((em.total() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn lagrangian_limits() {
    let p = 2;
    let jmax = 60;
    let (ep, em) = eplus_eminus(p, jmax).unwrap();
    let d = iterate(&RankDist::<f64>::delta(0).with_cap(jmax), 120, |x| ml_step(x, p));
    assert!(tv_distance(&d, &ep) < 1e-6);
    for j in 0..4usize {
        let target = if j % 2 == 0 { &ep } else { &em };
        let mut d = RankDist::<f64>::delta(j).with_cap(jmax);
        let mut prev = f64::INFINITY;
        for k in 1..=60 {
            d = ml_step(&ml_step(&d, p), p);
            let tv = tv_distance(&d, target);
            if k > 10 && tv > 1e-13 {
                assert!(tv <= prev + 1e-15, "j={j} k={k}: {tv} > {prev}");
            }
            prev = tv;
        }
        assert!(prev < 1e-6);
    }
}

#[test]
fn governing_chain_converges() {
    let p = 2;
    let d = iterate(&RankDist::<f64>::delta(0).with_cap(60), 80, |x| m_step(x, p));
    let pr = poonen_rains(p, 60).unwrap();
    assert!(tv_distance(&d, &pr) < 1e-6);
    let fit = convergence_rate(p, &RankDist::delta(0), 80).unwrap();
    assert!(fit.gamma_hat < 1.0);
    assert!(fit.gamma_hat <= 5.0 / 8.0 + 0.01);
    assert!(fit.pass);
    for p in [3u32, 5, 7] {
        let fit = convergence_rate(p, &RankDist::delta(0), 200).unwrap();
        assert!(fit.pass, "p={p} gamma_hat={}", fit.gamma_hat);
        assert!(fit.gamma_hat > 1.0 - (p as f64) / ((p * p - 1) as f64));
    }
}

#[test]
fn drift() {
    for p in [2u32, 3, 5, 7] {
        let pf = p as f64;
        assert!((gamma_beta(p, pf) - (1.0 - (pf * pf - pf + 1.0) / pf.powi(3))).abs() < 1e-15);
        let rep = drift_sweep(p, pf, 60);
        assert!(rep.kappa_hat.is_finite());
        assert!(rep.argmax <= 3, "p={p} argmax={}", rep.argmax);
        let max_abs = rep.residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        assert!(max_abs.is_finite() && max_abs < 10.0);
    }
    // E[2^{X'} | x] / 2^x → 5/8
    for x in [20usize, 40, 60] {
        let ratio = drift_residual(2, 2.0, x) / 2f64.powi(x as i32) + gamma_beta(2, 2.0);
        assert!((ratio - 0.625).abs() < 1e-5);
    }
    let r0 = drift_residual(2, 2.0, 0);
    // row at 0: 1/3 δ₀ + 1/2 δ₁ + 1/6 (1/2 δ₀ + 1/2 δ₂) in exact terms 5/12, 1/2, 1/12
    let direct = 5.0 / 12.0 + 0.5 * 2.0 + 4.0 / 12.0 - 0.625;
    assert!((r0 - direct).abs() < 1e-14);
}

#[test]
fn csv_dump() {
    let pr = poonen_rains(2, 40).unwrap();
    let csv = pr.to_csv();
    assert!(csv.starts_with("state,mass\n0,"));
    assert!(csv.trim_end().lines().last().unwrap().starts_with("#truncation_mass,"));
    let total: f64 = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((1.0 - total).abs() < 1e-12);
}

#[test]
fn truncation_errors() {
    assert!(poonen_rains(2, 5).is_err());
    assert!(eplus_eminus(3, 4).is_err());
}
