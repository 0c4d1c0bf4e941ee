//! Exhaustive censuses over places of a fixed degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::curve::{classify_irreducible, CurveSpec, PlaceClass};
use super::sl2::closed_form_densities;
use crate::error::{Error, Result};
use crate::exact;
use crate::ffpoly::{irreducibles, is_irreducible, residue_symbol, squarefree_decomposition, FieldSpec, Poly};

/// Largest q^d enumerated by the censuses.
pub const CENSUS_BUDGET: u128 = 10_000_000;

/// One line of census CSV output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRow {
    pub degree: usize,
    pub cell: String,
    pub count: u64,
    pub expected: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceCensus {
    pub q: u32,
    pub p: u32,
    pub degree: usize,
    /// #𝒫(d), all monic irreducibles of degree d.
    pub total: u64,
    /// Counts for P0, P1, P2, Bad.
    pub counts: [u64; 4],
    /// ρ₀, ρ₁, ρ₂ from SL₂(𝔽_p).
    pub densities: [f64; 3],
    /// |#𝒫_k(d)/#𝒫(d) − ρ_k|.
    pub deviations: [f64; 3],
    pub max_deviation: f64,
    /// q^{−d/2}.
    pub reference: f64,
}

impl PlaceCensus {
    /// Rows with bound C·q^{−d/2} on each class deviation.
    pub fn rows(&self, constant: f64) -> Vec<CensusRow> {
        let bound = constant * self.reference;
        let mut rows: Vec<CensusRow> = (0..3)
            .map(|k| CensusRow {
                degree: self.degree,
                cell: format!("P{k}"),
                count: self.counts[k],
                expected: self.densities[k] * self.total as f64,
                bound,
                pass: self.deviations[k] <= bound,
            })
            .collect();
        rows.push(CensusRow {
            degree: self.degree,
            cell: "Bad".into(),
            count: self.counts[3],
            expected: 0.0,
            bound: f64::NAN,
            pass: true,
        });
        rows
    }
}

/// Classifies every monic irreducible of degree d.
pub fn place_class_census(curve: &CurveSpec, d: usize) -> Result<PlaceCensus> {
    let fq = curve.field();
    let places = irreducibles(fq, d, CENSUS_BUDGET)?;
    let classes: Vec<PlaceClass> = places.par_iter().map(|v| classify_irreducible(curve, v)).collect::<Result<_>>()?;
    let mut counts = [0u64; 4];
    for c in classes {
        counts[c.index()] += 1;
    }
    let total = places.len() as u64;
    let rho = closed_form_densities(curve.p());
    let densities = [exact::to_f64(&rho[0]), exact::to_f64(&rho[1]), exact::to_f64(&rho[2])];
    let deviations: [f64; 3] = std::array::from_fn(|k| (counts[k] as f64 / total as f64 - densities[k]).abs());
    Ok(PlaceCensus {
        q: fq.q(),
        p: curve.p(),
        degree: d,
        total,
        counts,
        densities,
        deviations,
        max_deviation: deviations.iter().cloned().fold(0.0, f64::max),
        reference: (fq.q() as f64).powf(-(d as f64) / 2.0),
    })
}

/// Least-squares fit of dev ≈ C·q^{−β·x}; returns (C, β). Zero deviations are skipped.
pub fn fit_decay(points: &[(f64, f64)], q: f64) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(_, y)| *y > 0.0).map(|&(x, y)| (x * q.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(((my - slope * mx).exp(), -slope))
}

#[derive(Clone, Debug, Serialize)]
pub struct KummerCensus {
    pub q: u32,
    pub p: u32,
    pub h: String,
    pub degree: usize,
    pub genus_l: u64,
    /// |G|: p, or 1 for the trivial extension h = 1.
    pub group_order: u32,
    /// Places counted per Frobenius, indexed by the exponent e of ζ^e.
    pub counts: Vec<u64>,
    /// Degree-n places coprime to h.
    pub total: u64,
    /// (|C|/|G|)·q^n/n.
    pub main_term: f64,
    pub bound: f64,
    pub deviations: Vec<f64>,
    pub pass: bool,
    /// max_c |count_c/total − 1/|G||.
    pub relative_deviation: f64,
}

impl KummerCensus {
    pub fn rows(&self) -> Vec<CensusRow> {
        self.counts
            .iter()
            .enumerate()
            .map(|(e, &c)| CensusRow {
                degree: self.degree,
                cell: format!("zeta^{e}"),
                count: c,
                expected: self.main_term,
                bound: self.bound,
                pass: self.deviations[e] < self.bound,
            })
            .collect()
    }
}

/// Frobenius distribution in K(h^{1/p}) over places of degree n, with the effective
/// Chebotarev bound at |G| = p, g_K = 0 and caller-supplied g_L.
pub fn chebotarev_kummer_census(spec: &FieldSpec, h: &Poly, n: usize, genus_l: u64) -> Result<KummerCensus> {
    let fq = spec.field();
    let p = spec.p();
    if !h.is_monic() {
        return Err(Error::NotMonic);
    }
    let trivial = h.is_one();
    if !trivial {
        if h.is_constant() {
            return Err(Error::DegenerateExtension("constant h extends the constant field".into()));
        }
        if squarefree_decomposition(h, fq).iter().all(|(_, e)| e % p == 0) {
            return Err(Error::DegenerateExtension(format!("{h} is a perfect {p}-th power")));
        }
    }
    let places: Vec<Poly> =
        irreducibles(fq, n, CENSUS_BUDGET)?.into_iter().filter(|v| !h.rem(v, fq).is_zero()).collect();
    let g = if trivial { 1 } else { p };
    let mut counts = vec![0u64; g as usize];
    if trivial {
        counts[0] = places.len() as u64;
    } else {
        let symbols: Vec<u32> =
            places.par_iter().map(|v| residue_symbol(h, v, spec).map(|s| s.exponent)).collect::<Result<_>>()?;
        for e in symbols {
            counts[e as usize] += 1;
        }
    }
    let qf = fq.q() as f64;
    let nf = n as f64;
    let gf = g as f64;
    let gl = genus_l as f64;
    let main_term = qf.powf(nf) / nf / gf;
    let bound = 2.0 / (nf * gf) * ((gf + gl) * qf.powf(nf / 2.0) + gf * qf.powf(nf / 4.0) + (gf + gl));
    let deviations: Vec<f64> = counts.iter().map(|&c| (c as f64 - main_term).abs()).collect();
    let total = places.len() as u64;
    let relative_deviation = counts.iter().map(|&c| (c as f64 / total as f64 - 1.0 / gf).abs()).fold(0.0, f64::max);
    Ok(KummerCensus {
        q: fq.q(),
        p,
        h: h.to_string(),
        degree: n,
        genus_l,
        group_order: g,
        pass: deviations.iter().all(|&d| d < bound),
        counts,
        total,
        main_term,
        bound,
        deviations,
        relative_deviation: if total == 0 { 0.0 } else { relative_deviation },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolCell {
    /// Exponents e_k with (v/h_k)_p = ζ^{e_k}.
    pub symbols: Vec<u32>,
    pub count: u64,
    pub expected: f64,
    pub deviation: f64,
    /// (Σ deg h_k + 1)·q^{−i/2}/i, as stated for the corollary (strict).
    pub bound: f64,
    pub pass: bool,
    /// Deviation equals the bound exactly.
    pub at_bound: bool,
    /// (1 − p^{−w})·(Σ deg h_k + 1)·q^{i/2}/(i·#places), what Hsu's bound yields directly.
    pub orthogonality_bound: f64,
    pub orthogonality_pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharacterSum {
    /// Character exponents a_k: χ(v) = Π (v/h_k)_p^{a_k}.
    pub exponents: Vec<u32>,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// (deg h_χ + 1)·q^{i/2}/i with h_χ the product of h_k with a_k ≠ 0.
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquidistCensus {
    pub q: u32,
    pub p: u32,
    pub hs: Vec<String>,
    pub degree: usize,
    /// Places of degree i coprime to every h_k.
    pub total: u64,
    pub cells: Vec<SymbolCell>,
    pub characters: Vec<CharacterSum>,
    pub corollary_pass: bool,
    /// The corollary with ≤ in place of <.
    pub corollary_nonstrict_pass: bool,
    pub orthogonality_pass: bool,
    pub hsu_pass: bool,
}

impl EquidistCensus {
    pub fn rows(&self) -> Vec<CensusRow> {
        self.cells
            .iter()
            .map(|c| CensusRow {
                degree: self.degree,
                cell: c.symbols.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(":"),
                count: c.count,
                expected: c.expected,
                bound: c.bound,
                pass: c.pass,
            })
            .collect()
    }
}

fn all_vectors(p: u32, w: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..w {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..p).map(move |e| {
                    let mut u = v.clone();
                    u.push(e);
                    u
                })
            })
            .collect();
    }
    out
}

/// Joint p-th power residue symbols (v/h_1, ..., v/h_w) over v ∈ 𝒫(i).
pub fn equidistribution_census(spec: &FieldSpec, hs: &[Poly], i: usize) -> Result<EquidistCensus> {
    let fq = spec.field();
    let p = spec.p();
    for (k, h) in hs.iter().enumerate() {
        if !h.is_monic() {
            return Err(Error::NotMonic);
        }
        if !is_irreducible(h, fq) {
            return Err(Error::NotIrreducible(h.to_string()));
        }
        if hs[..k].contains(h) {
            return Err(Error::RepeatedCharacter(h.to_string()));
        }
    }
    let w = hs.len();
    let places = irreducibles(fq, i, CENSUS_BUDGET)?;
    // None where v = h_k.
    let symbols: Vec<Vec<Option<u32>>> = places
        .par_iter()
        .map(|v| {
            hs.iter()
                .map(|h| if v == h { Ok(None) } else { residue_symbol(v, h, spec).map(|s| Some(s.exponent)) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut counts: BTreeMap<Vec<u32>, u64> = all_vectors(p, w).into_iter().map(|v| (v, 0)).collect();
    let mut total = 0u64;
    for s in &symbols {
        if let Some(v) = s.iter().cloned().collect::<Option<Vec<u32>>>() {
            *counts.get_mut(&v).expect("all cells present") += 1;
            total += 1;
        }
    }

    let qf = fq.q() as f64;
    let fi = i as f64;
    let deg_sum: usize = hs.iter().map(|h| h.deg()).sum();
    let b = (deg_sum + 1) as f64;
    let pw = (p as u64).pow(w as u32);
    let cells: Vec<SymbolCell> = counts
        .into_iter()
        .map(|(symbols, count)| {
            let dev_num = BigInt::from(count) * BigInt::from(pw) - BigInt::from(total);
            let deviation = dev_num.abs().to_f64().unwrap() / (total as f64 * pw as f64);
            // |count·p^w − total|·i < B·q^{−i/2}·total·p^w, squared to stay in integers.
            let lhs = (dev_num.abs() * BigInt::from(i)).pow(2) * BigInt::from(fq.q()).pow(i as u32);
            let rhs = (BigInt::from((deg_sum + 1) as u64) * BigInt::from(total) * BigInt::from(pw)).pow(2);
            let orthogonality_bound = (1.0 - 1.0 / pw as f64) * b * qf.powf(fi / 2.0) / (fi * total as f64);
            SymbolCell {
                symbols,
                count,
                expected: total as f64 / pw as f64,
                deviation,
                bound: b * qf.powf(-fi / 2.0) / fi,
                pass: total > 0 && lhs < rhs,
                at_bound: total > 0 && lhs == rhs,
                orthogonality_pass: deviation <= orthogonality_bound * (1.0 + 1e-12),
                orthogonality_bound,
            }
        })
        .collect();

    let characters: Vec<CharacterSum> = all_vectors(p, w)
        .into_iter()
        .filter(|a| a.iter().any(|&x| x != 0))
        .map(|a| {
            let deg_h: usize = hs.iter().zip(&a).filter(|(_, &x)| x != 0).map(|(h, _)| h.deg()).sum();
            let mut sum_int = 0i64;
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for s in &symbols {
                let mut e = 0u64;
                let mut vanishes = false;
                for (sk, &ak) in s.iter().zip(&a) {
                    match (sk, ak) {
                        (_, 0) => {}
                        (None, _) => vanishes = true,
                        (Some(x), ak) => e += *x as u64 * ak as u64,
                    }
                }
                if vanishes {
                    continue;
                }
                let e = (e % p as u64) as f64;
                let ang = 2.0 * std::f64::consts::PI * e / p as f64;
                re += ang.cos();
                im += ang.sin();
                if p == 2 {
                    sum_int += if e == 0.0 { 1 } else { -1 };
                }
            }
            let bound = (deg_h + 1) as f64 * qf.powf(fi / 2.0) / fi;
            let pass = if p == 2 {
                // S²·i² ≤ (deg h + 1)²·q^i
                let lhs = BigInt::from(sum_int).pow(2) * BigInt::from(i).pow(2);
                let rhs = BigInt::from((deg_h + 1) as u64).pow(2) * BigInt::from(fq.q()).pow(i as u32);
                lhs <= rhs
            } else {
                re.hypot(im) <= bound * (1.0 + 1e-12)
            };
            CharacterSum { exponents: a, re, im, abs: re.hypot(im), bound, pass }
        })
        .collect();

    Ok(EquidistCensus {
        q: fq.q(),
        p,
        hs: hs.iter().map(|h| h.to_string()).collect(),
        degree: i,
        total,
        corollary_pass: cells.iter().all(|c| c.pass),
        corollary_nonstrict_pass: cells.iter().all(|c| c.pass || c.at_bound),
        orthogonality_pass: cells.iter().all(|c| c.orthogonality_pass),
        hsu_pass: characters.iter().all(|c| c.pass),
        cells,
        characters,
    })
}

/// Every single-character census with h monic irreducible of degree ≤ `max_deg_h` and
/// 1 ≤ i ≤ `max_i`.
pub fn charsum_grid(spec: &FieldSpec, max_deg_h: usize, max_i: usize) -> Result<Vec<EquidistCensus>> {
    let mut out = Vec::new();
    for d in 1..=max_deg_h {
        for h in irreducibles(spec.field(), d, CENSUS_BUDGET)? {
            for i in 1..=max_i {
                out.push(equidistribution_census(spec, std::slice::from_ref(&h), i)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Poly {
        Poly::from_coeffs(v.to_vec())
    }

    #[test]
    fn kummer_small_case() {
        let s3 = FieldSpec::new(3, 2).unwrap();
        let c = chebotarev_kummer_census(&s3, &p(&[0, 1]), 2, 0).unwrap();
        assert_eq!(c.total, 3);
        assert_eq!(c.counts.iter().sum::<u64>(), 3);
        assert!(c.pass);
        let triv = chebotarev_kummer_census(&s3, &Poly::one(), 3, 0).unwrap();
        assert_eq!(triv.counts, vec![8]);
        assert!(chebotarev_kummer_census(&s3, &p(&[0, 0, 1]), 2, 0).is_err());
        assert!(chebotarev_kummer_census(&s3, &p(&[2]), 2, 0).is_err());
    }

    #[test]
    fn charsum_small_case() {
        let s3 = FieldSpec::new(3, 2).unwrap();
        let c = equidistribution_census(&s3, &[p(&[0, 1])], 1).unwrap();
        assert_eq!(c.total, 2);
        assert_eq!(c.characters[0].re, 0.0);
        assert!(c.hsu_pass);
        let empty = equidistribution_census(&s3, &[], 2).unwrap();
        assert_eq!(empty.cells.len(), 1);
        assert_eq!(empty.cells[0].count, 3);
        assert!(equidistribution_census(&s3, &[p(&[0, 1]), p(&[0, 1])], 1).is_err());
    }

    #[test]
    fn decay_fit_recovers_exponent() {
        let pts: Vec<(f64, f64)> = (1..=6).map(|d| (d as f64, 3.0 * 5f64.powf(-0.5 * d as f64))).collect();
        let (c, beta) = fit_decay(&pts, 5.0).unwrap();
        assert!((c - 3.0).abs() < 1e-9 && (beta - 0.5).abs() < 1e-12);
    }
}
