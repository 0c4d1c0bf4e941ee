use selmerwalk::exact;
use selmerwalk::ffpoly::{factor, FieldSpec, Poly};
use selmerwalk::galois::{place_class_census, CurveSpec, PlaceClass};
use selmerwalk::markov::{local_transition_table, m_step, poonen_rains, tv_distance, RankDist};
use selmerwalk::montecarlo::*;

fn p(c: &[u32]) -> Poly {
    Poly::from_coeffs(c.to_vec())
}

fn test_curve() -> CurveSpec {
    CurveSpec::new(FieldSpec::new(5, 2).unwrap(), p(&[0, 1]), p(&[0, 1])).unwrap()
}

#[test]
fn zero_steps_is_a_point_mass() {
    let cfg = WalkConfig::synthetic(3, 0, 1000, 1).with_r0(InitialRank::Fixed(4));
    let r = synthetic_walk(&cfg).unwrap();
    assert_eq!(r.empirical, RankDist::delta(4));
    assert_eq!(r.counts.iter().sum::<u64>(), 1000);
}

#[test]
fn one_step_matches_m() {
    let r = synthetic_walk(&WalkConfig::synthetic(2, 1, 1_000_000, 42)).unwrap();
    let exact_row: RankDist = RankDist::from_masses(vec![5.0 / 12.0, 0.5, 1.0 / 12.0]);
    assert!(tv_distance(&r.empirical, &exact_row) < 0.005);
    assert_eq!(r.empirical.total(), r.counts.iter().sum::<u64>() as f64 / 1e6);
}

#[test]
fn forty_steps_reach_pr() {
    let r = synthetic_walk(&WalkConfig::synthetic(2, 40, 1_000_000, 42)).unwrap();
    assert!(r.reference("M^40").unwrap().tv < 0.005);
    assert!(r.reference("PR").unwrap().tv < 0.01);
    assert!((r.empirical.parity() - 0.5).abs() < 0.01);
    let cmp = compare_to_pr(&r, 1.0, 60.0).unwrap();
    assert!((cmp.envelope - 60f64.powf(-0.185242)).abs() < 1e-5);
    assert!((cmp.envelope - 0.469).abs() < 1e-3);
    assert!(cmp.pass);
}

#[test]
fn stationary_start_stays_put() {
    let cfg = WalkConfig::synthetic(2, 7, 200_000, 3).with_r0(InitialRank::PoonenRains);
    let r = synthetic_walk(&cfg).unwrap();
    let cmp = compare_to_pr(&r, 0.0, 1.0).unwrap();
    assert!(cmp.pass, "{:?}", cmp.states.iter().filter(|s| s.flagged).collect::<Vec<_>>());
}

#[test]
fn synthetic_grid_tracks_m_iterates() {
    let trials = 20_000u64;
    for p in [2u32, 3, 5] {
        for w in [1usize, 3, 10, 25] {
            let r = synthetic_walk(&WalkConfig::synthetic(p, w, trials, 17)).unwrap();
            let mut d: RankDist = RankDist::delta(0);
            for _ in 0..w {
                d = m_step(&d, p);
            }
            let jmax = d.jmax().max(r.empirical.jmax()) as f64;
            let tv = tv_distance(&r.empirical, &d);
            assert!(tv <= 3.0 * (jmax / trials as f64).sqrt(), "p={p} w={w} tv={tv}");
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = WalkConfig::synthetic(2, 12, 50_000, 5);
    let a = serde_json::to_string(&synthetic_walk(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&synthetic_walk(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let cfg = WalkConfig::arithmetic(test_curve(), 8, 2000, 5);
    let a = serde_json::to_string(&arithmetic_walk(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&arithmetic_walk(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn degree_one_walk_is_a_row_mixture() {
    let e = test_curve();
    let census = place_class_census(&e, 1).unwrap();
    // reference: Σ_k (#𝒫_k(1)/q)·row_k(0), bad places leave rank 0
    let mut mix = vec![0.0; 3];
    for class in PlaceClass::ALL {
        let w = census.counts[class.index()] as f64 / 5.0;
        match class.rank() {
            None => mix[0] += w,
            Some(k) => {
                for (dl, v) in local_transition_table(k, 0, 2).unwrap() {
                    if dl < 0 {
                        assert_eq!(exact::to_f64(&v), 0.0);
                        continue;
                    }
                    mix[dl as usize] += w * exact::to_f64(&v);
                }
            }
        }
    }
    let r = arithmetic_walk(&WalkConfig::arithmetic(e, 1, 100_000, 8)).unwrap();
    assert!(r.step_counts.len() <= 2);
    let reference = RankDist::from_masses(mix);
    assert!(tv_distance(&r.empirical, &reference) < 0.01);
}

#[test]
fn multiplicity_filter() {
    let e = test_curve();
    let fq = e.field().clone();
    let g1 = p(&[4, 1]); // P0
    let g2 = p(&[1, 1]); // P1
    let f = g1.pow(2, &fq).mul(&g2, &fq);
    let plan = plan_steps(&e, &factor(&f, &fq).unwrap(), false).unwrap();
    assert_eq!(plan.classes, vec![1]);
    assert_eq!(plan.factors.len(), 2);
    let f = g1.mul(&g2.pow(4, &fq), &fq).mul(&p(&[0, 1]), &fq);
    let plan = plan_steps(&e, &factor(&f, &fq).unwrap(), false).unwrap();
    assert_eq!(plan.classes, vec![0]);
    assert_eq!(plan.bad, 1);
    let plan = plan_steps(&e, &factor(&f, &fq).unwrap(), true).unwrap();
    assert!(plan.classes.is_empty());
}

#[test]
fn arithmetic_walk_at_degree_sixty() {
    let cfg = WalkConfig::arithmetic(test_curve(), 60, 100_000, 42);
    let r = arithmetic_walk(&cfg).unwrap();
    assert_eq!(r.counts.iter().sum::<u64>(), 100_000);
    let freq = class_frequency_check(&r, 6, 3.0).unwrap();
    for c in &freq {
        assert!(c.pass, "{c:?}");
    }
    let name = format!("M^{}", r.mean_steps.round() as usize);
    let tv = r.reference(&name).unwrap().tv;
    assert!(r.reference("conditional").unwrap().tv < 0.01);
    assert!(tv < 0.03, "TV to {name} = {tv}");
}

#[test]
fn invalid_configs() {
    let mut cfg = WalkConfig::synthetic(2, 3, 0, 1);
    assert!(synthetic_walk(&cfg).is_err());
    cfg.trials = 10;
    assert!(arithmetic_walk(&cfg).is_err());
    let spec = FieldSpec::new(11, 5).unwrap();
    let e = CurveSpec::new(spec, p(&[0, 1]), p(&[0, 1])).unwrap();
    assert!(arithmetic_walk(&WalkConfig::arithmetic(e, 5, 10, 1)).is_err());
    let _ = poonen_rains(2, 40).unwrap();
}
