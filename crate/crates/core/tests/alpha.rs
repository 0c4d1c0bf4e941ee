use selmerwalk::alpha::{alpha, alpha_objective, erdos_kac_exponent, exponent_report, terms, Term};
use std::time::Instant;

// brute-force sup of the three-way min on a fine grid
fn grid_sup(p: u32) -> (f64, f64) {
    let n = 200_000;
    (1..n)
        .map(|i| {
            let r = i as f64 / n as f64;
            let pf = p as f64;
            let ek = r * r.ln() + 1.0 - r;
            let ch = -r * (pf / (pf * pf - 1.0)).ln();
            let mk = -r * (1.0 - pf / (pf * pf - 1.0)).ln();
            (ek.min(ch).min(mk), r)
        })
        .fold((f64::MIN, 0.0), |a, b| if b.0 > a.0 { b } else { a })
}

#[test]
fn matches_grid_oracle() {
    for p in [2u32, 3, 5, 7, 11, 13] {
        let res = alpha(p, 1e-9).unwrap();
        let (sup, rho) = grid_sup(p);
        assert!(res.alpha >= sup - 1e-12 && res.alpha - sup < 5e-6, "p={p}");
        assert!((res.rho_star - rho).abs() < 1e-4, "p={p} {} {rho}", res.rho_star);
        assert!(!res.non_unimodal);
    }
}

#[test]
fn known_values_and_binding_terms() {
    let start = Instant::now();
    let a2 = alpha(2, 1e-9).unwrap();
    assert!((a2.alpha - 0.185242).abs() < 1e-6);
    assert_eq!(a2.binding_terms, vec![Term::ErdosKac, Term::Chebotarev]);
    let a3 = alpha(3, 1e-9).unwrap();
    assert_eq!(a3.binding_terms, vec![Term::ErdosKac, Term::Markov]);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn objective_domain() {
    assert!(alpha_objective(2, 0.0).is_err());
    assert!(alpha_objective(2, 1.0).is_err());
    assert!(alpha_objective(4, 0.5).is_err());
    assert!(alpha(2, 1e-12).is_err());
    let t = terms(2, 0.5);
    assert_eq!(alpha_objective(2, 0.5).unwrap(), t.iter().copied().fold(f64::MAX, f64::min));
}

#[test]
fn exponent_report_limits() {
    let rho = alpha(2, 1e-9).unwrap().rho_star;
    let r = exponent_report(2, rho, 1e-9, 1e6).unwrap();
    assert!((r.erdos_kac - erdos_kac_exponent(rho)).abs() < 1e-12);
    assert!((r.min - 0.185242).abs() < 1e-5);
}
