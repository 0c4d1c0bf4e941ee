use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selmerwalk::ffpoly::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn p(c: &[u32]) -> Poly {
    Poly::from_coeffs(c.to_vec())
}

/// Irreducibility by trial division against every monic of degree ≤ deg/2.
fn irreducible_by_trial_division(f: &Poly, fq: &Fq) -> bool {
    (1..=f.deg() / 2).all(|d| monics(fq, d).all(|g| !f.rem(&g, fq).is_zero()))
}

#[test]
fn factor_examples() {
    let f2 = Fq::new(2).unwrap();
    let fact = factor(&p(&[0, 1, 0, 1]), &f2).unwrap();
    assert_eq!(fact.factors(), &[(p(&[0, 1]), 1), (p(&[1, 1]), 2)]);
    assert_eq!(fact.product(&f2), p(&[0, 1, 0, 1]));
    assert_eq!(factor(&p(&[1, 1, 1]), &f2).unwrap().factors(), &[(p(&[1, 1, 1]), 1)]);

    let f5 = Fq::new(5).unwrap();
    let f = p(&[4, 0, 1]);
    let fact = factor(&f, &f5).unwrap();
    assert_eq!(fact.factors(), &[(p(&[1, 1]), 1), (p(&[4, 1]), 1)]);
    for (g, _) in fact.iter() {
        let root = f5.neg(g.coeff(0));
        assert_eq!(f.eval(root, &f5), 0);
    }
}

#[test]
fn factorizations_reconstruct_and_are_irreducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for q in [2u64, 3, 4, 5, 9] {
        let fq = Fq::new(q).unwrap();
        for _ in 0..2500 {
            let n = rng.gen_range(1..=12);
            let f = sample_monic_with(&fq, n, &mut rng);
            let fact = factor(&f, &fq).unwrap();
            assert_eq!(fact.product(&fq), f, "q={q} f={f}");
            let mut seen = std::collections::BTreeSet::new();
            for (g, e) in fact.iter() {
                assert!(*e >= 1 && g.is_monic());
                assert!(seen.insert(g.clone()), "repeated factor");
                if g.deg() <= 6 {
                    assert!(irreducible_by_trial_division(g, &fq), "{g} over 𝔽_{q}");
                } else {
                    assert!(is_irreducible(g, &fq));
                }
            }
        }
    }
}

#[test]
fn irreducible_counts_match_enumeration() {
    assert_eq!(count_irreducible_u64(2, 1).unwrap(), 2);
    assert_eq!(count_irreducible_u64(2, 3).unwrap(), 2);
    assert_eq!(count_irreducible_u64(3, 2).unwrap(), 3);
    assert!(count_irreducible(5, 0).is_err());
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        let fq = Fq::new(q).unwrap();
        let mut n = 1;
        while (q as u128).pow(n) <= 1_000_000 {
            let brute = monics(&fq, n as usize).filter(|f| is_irreducible(f, &fq)).count() as u64;
            assert_eq!(count_irreducible_u64(q, n).unwrap(), brute, "q={q} n={n}");
            n += 1;
        }
    }
}

#[test]
fn trial_division_agrees_with_rabin() {
    for q in [2u64, 3, 4, 5] {
        let fq = Fq::new(q).unwrap();
        for n in 1..=5 {
            for f in monics(&fq, n) {
                assert_eq!(is_irreducible(&f, &fq), irreducible_by_trial_division(&f, &fq), "{f}");
            }
        }
    }
}

#[test]
fn residue_symbol_examples() {
    let s3 = FieldSpec::new(3, 2).unwrap();
    // t+2 at t = −1 is 1, a square in 𝔽_3
    let squares: Vec<u32> = (1..3).map(|x| s3.field().mul(x, x)).collect();
    assert!(squares.contains(&p(&[2, 1]).eval(2, s3.field())));
    assert_eq!(residue_symbol(&p(&[2, 1]), &p(&[1, 1]), &s3).unwrap().to_string(), "+1");

    let s5 = FieldSpec::new(5, 2).unwrap();
    let h = p(&[2, 0, 1]);
    let r = residue_symbol(&p(&[0, 1]), &h, &s5).unwrap();
    assert_eq!(r.to_string(), "-1");
    // t is not a square in 𝔽_5[t]/(t²+2): check every element
    let m = Modulus::new(h.clone(), s5.field());
    let all: Vec<Poly> = (0..25u32).map(|k| p(&[k % 5, k / 5])).collect();
    assert!(all.iter().all(|x| m.mul(x, x) != p(&[0, 1])));
}

#[test]
fn residue_symbol_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (q, pr) in [(5u64, 2u32), (7, 3), (11, 5), (13, 3), (9, 2)] {
        let spec = FieldSpec::new(q, pr).unwrap();
        let fq = spec.field();
        let hs: Vec<Poly> = (1..=3).flat_map(|d| irreducibles(fq, d, 1 << 20).unwrap().into_iter().take(20)).collect();
        for _ in 0..200 {
            let h = &hs[rng.gen_range(0..hs.len())];
            let v1 = sample_monic_with(fq, rng.gen_range(1..6), &mut rng);
            let v2 = sample_monic_with(fq, rng.gen_range(1..6), &mut rng);
            let (Ok(a), Ok(b)) = (residue_symbol(&v1, h, &spec), residue_symbol(&v2, h, &spec)) else {
                continue;
            };
            let ab = residue_symbol(&v1.mul(&v2, fq), h, &spec).unwrap();
            assert_eq!(ab, a.mul(b));
            assert!(a.pow(pr).is_one());
            let g = sample_monic_with(fq, rng.gen_range(1..5), &mut rng);
            if let Ok(s) = residue_symbol(&g.pow(pr as u64, fq), h, &spec) {
                assert!(s.is_one());
            }
        }
    }
}

#[test]
fn sample_monic_is_uniform() {
    let f2 = Fq::new(2).unwrap();
    assert_eq!(sample_monic(&f2, 3, 99), sample_monic(&f2, 3, 99));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts = [0u64; 8];
    let draws = 100_000;
    for _ in 0..draws {
        let f = sample_monic_with(&f2, 3, &mut rng);
        assert_eq!(f.deg(), 3);
        let idx = (0..3).map(|i| (f.coeff(i) as usize) << i).sum::<usize>();
        counts[idx] += 1;
    }
    let e = draws as f64 / 8.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum();
    assert!(1.0 - ChiSquared::new(7.0).unwrap().cdf(chi2) > 1e-3, "chi2 = {chi2}");

    let f5 = Fq::new(5).unwrap();
    let seen: std::collections::BTreeSet<Poly> = (0..200).map(|s| sample_monic(&f5, 1, s)).collect();
    assert_eq!(seen.len(), 5);
}

#[test]
fn text_round_trip() {
    let f5 = Fq::new(5).unwrap();
    let f = Poly::parse("4+t+3*t^3+t^4", &f5).unwrap();
    assert_eq!(f.coeffs(), &[4, 1, 0, 3, 1]);
    assert_eq!(Poly::parse(&f.to_string(), &f5).unwrap(), f);
    let json = serde_json::to_string(&f).unwrap();
    assert_eq!(json, "[4,1,0,3,1]");
    assert_eq!(serde_json::from_str::<Poly>(&json).unwrap(), f);
}
