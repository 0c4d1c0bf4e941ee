//! Seeded simulation of the rank walk: synthetic walks with i.i.d. place classes, and
//! arithmetic walks driven by the factorization of random polynomials.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alpha;
use crate::error::{Error, Result};
use crate::ffpoly::{factor, sample_monic_with, Factorization, Fq};
use crate::galois::{classify_irreducible, place_class_census, CurveSpec, PlaceClass};
use crate::markov::{self, m_step, m_weights, poonen_rains, table_row_f64, tv_distance, RankDist};
use crate::seeded::run_blocks;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkMode {
    Synthetic,
    Arithmetic,
}

/// Starting rank of each trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialRank {
    Fixed(u32),
    /// Drawn from the Poonen–Rains law.
    PoonenRains,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkConfig {
    pub mode: WalkMode,
    pub p: u32,
    /// Steps per trial (synthetic) or polynomial degree (arithmetic).
    pub w: usize,
    pub r0: InitialRank,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<CurveSpec>,
    pub trials: u64,
    pub seed: u64,
    /// Arithmetic mode: drop the step of one maximal-degree 𝒫₀ factor per trial.
    pub discount_aux: bool,
}

impl WalkConfig {
    pub fn synthetic(p: u32, w: usize, trials: u64, seed: u64) -> WalkConfig {
        WalkConfig {
            mode: WalkMode::Synthetic,
            p,
            w,
            r0: InitialRank::Fixed(0),
            curve: None,
            trials,
            seed,
            discount_aux: false,
        }
    }

    pub fn arithmetic(curve: CurveSpec, n: usize, trials: u64, seed: u64) -> WalkConfig {
        WalkConfig {
            mode: WalkMode::Arithmetic,
            p: curve.p(),
            w: n,
            r0: InitialRank::Fixed(0),
            curve: Some(curve),
            trials,
            seed,
            discount_aux: false,
        }
    }

    pub fn with_r0(mut self, r0: InitialRank) -> WalkConfig {
        self.r0 = r0;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        match self.mode {
            WalkMode::Synthetic if !crate::nt::is_prime(self.p as u64) => Err(Error::NotPrime(self.p as u64)),
            WalkMode::Arithmetic => match &self.curve {
                None => Err(Error::InvalidParameter("arithmetic mode needs a curve".into())),
                Some(c) if c.p() != self.p => Err(Error::InvalidParameter("p differs from the curve's p".into())),
                Some(_) if self.p != 2 && self.p != 3 => {
                    Err(Error::InvalidParameter(format!("arithmetic mode supports p = 2, 3, got {}", self.p)))
                }
                Some(_) if self.w == 0 => Err(Error::DegreeTooSmall { min: 1, got: 0 }),
                Some(_) => Ok(()),
            },
            WalkMode::Synthetic => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reference {
    pub name: String,
    pub dist: RankDist<f64>,
    pub tv: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkReport {
    pub config: WalkConfig,
    /// Final-rank counts over trials.
    pub counts: Vec<u64>,
    pub empirical: RankDist<f64>,
    pub references: Vec<Reference>,
    /// Histogram of the number of chain steps per trial.
    pub step_counts: Vec<u64>,
    pub mean_steps: f64,
    /// Steps taken per class (P0, P1, P2); bad factors take none.
    pub class_steps: [u64; 3],
    /// Distinct irreducible factors seen, by degree and class (P0, P1, P2, Bad). Arithmetic mode only.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub classes_by_degree: BTreeMap<usize, [u64; 4]>,
    /// Factors skipped for bad reduction.
    pub bad_factors: u64,
    pub seed: u64,
}

impl WalkReport {
    pub fn reference(&self, name: &str) -> Option<&Reference> {
        self.references.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Default)]
struct Tally {
    counts: Vec<u64>,
    steps: Vec<u64>,
    class_steps: [u64; 3],
    by_degree: BTreeMap<usize, [u64; 4]>,
    bad: u64,
    /// Σ over trials of the exact rank law given that trial's class sequence.
    conditional: Vec<f64>,
}

fn bump(v: &mut Vec<u64>, i: usize, by: u64) {
    if v.len() <= i {
        v.resize(i + 1, 0);
    }
    v[i] += by;
}

fn add_into(acc: &mut Vec<f64>, other: &[f64]) {
    if acc.len() < other.len() {
        acc.resize(other.len(), 0.0);
    }
    acc.iter_mut().zip(other).for_each(|(a, b)| *a += b);
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        for (i, c) in o.counts.iter().enumerate() {
            bump(&mut self.counts, i, *c);
        }
        for (i, c) in o.steps.iter().enumerate() {
            bump(&mut self.steps, i, *c);
        }
        for k in 0..3 {
            self.class_steps[k] += o.class_steps[k];
        }
        for (d, c) in o.by_degree {
            let e = self.by_degree.entry(d).or_default();
            e.iter_mut().zip(c).for_each(|(a, b)| *a += b);
        }
        self.bad += o.bad;
        add_into(&mut self.conditional, &o.conditional);
        self
    }
}

fn draw_step<R: Rng + ?Sized>(k: u32, r: u32, p: u32, rng: &mut R) -> u32 {
    let row = table_row_f64(k, r, p).expect("class in 0..3");
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = row[0].0;
    for (d, pr) in row {
        if pr <= 0.0 {
            continue;
        }
        last = d;
        acc += pr;
        if u < acc {
            return (r as i32 + d) as u32;
        }
    }
    (r as i32 + last) as u32
}

fn draw_index<R: Rng + ?Sized>(cdf: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

fn cumulative(v: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    v.iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

/// Exact rank law after applying the class sequence from a start law.
fn apply_classes(start: &[f64], classes: &[u32], p: u32) -> Vec<f64> {
    let mut d = start.to_vec();
    for &k in classes {
        if k == 0 {
            continue;
        }
        let mut next = vec![0.0; d.len() + 2];
        for (r, &m) in d.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for (dl, pr) in table_row_f64(k, r as u32, p).expect("class in 0..3") {
                if pr > 0.0 {
                    next[(r as i32 + dl) as usize] += m * pr;
                }
            }
        }
        while next.len() > 1 && next.last() == Some(&0.0) {
            next.pop();
        }
        d = next;
    }
    d
}

struct Start {
    law: Vec<f64>,
    cdf: Vec<f64>,
}

fn start_law(r0: InitialRank, p: u32) -> Result<Start> {
    let law = match r0 {
        InitialRank::Fixed(r) => RankDist::<f64>::delta(r as usize).masses().to_vec(),
        InitialRank::PoonenRains => poonen_rains(p, markov::default_jmax(p))?.masses().to_vec(),
    };
    let cdf = cumulative(&law);
    Ok(Start { law, cdf })
}

/// i.i.d. classes with the SL₂ densities, one table row per class.
pub fn synthetic_walk(cfg: &WalkConfig) -> Result<WalkReport> {
    if cfg.mode != WalkMode::Synthetic {
        return Err(Error::InvalidParameter("synthetic_walk needs mode = synthetic".into()));
    }
    cfg.validate()?;
    let p = cfg.p;
    let weights = m_weights::<f64>(p);
    let class_cdf = cumulative(&weights);
    let start = start_law(cfg.r0, p)?;
    let run = |rng: &mut ChaCha8Rng, n: u64| {
        let mut t = Tally::default();
        for _ in 0..n {
            let mut r = draw_index(&start.cdf, rng) as u32;
            for _ in 0..cfg.w {
                let k = draw_index(&class_cdf, rng) as u32;
                t.class_steps[k as usize] += 1;
                r = draw_step(k, r, p, rng);
            }
            bump(&mut t.counts, r as usize, 1);
        }
        bump(&mut t.steps, cfg.w, n);
        t
    };
    let tally = run_blocks(cfg.trials, cfg.seed, run, Tally::merge).expect("trials ≥ 1");
    let empirical = RankDist::from_counts(&tally.counts);
    let mut start_dist = RankDist::from_masses(start.law.clone());
    for _ in 0..cfg.w {
        start_dist = m_step(&start_dist, p);
    }
    let jmax = markov::default_jmax(p).max(empirical.jmax()) + 10;
    let pr = poonen_rains(p, jmax)?;
    let references = vec![
        Reference { name: format!("M^{}", cfg.w), tv: tv_distance(&empirical, &start_dist), dist: start_dist },
        Reference { name: "PR".into(), tv: tv_distance(&empirical, &pr), dist: pr },
    ];
    Ok(finish(cfg, tally, empirical, references))
}

fn finish(cfg: &WalkConfig, tally: Tally, empirical: RankDist<f64>, references: Vec<Reference>) -> WalkReport {
    let total: u64 = tally.steps.iter().sum();
    let mean_steps = tally.steps.iter().enumerate().map(|(s, c)| s as f64 * *c as f64).sum::<f64>() / total as f64;
    WalkReport {
        config: cfg.clone(),
        counts: tally.counts,
        empirical,
        references,
        step_counts: tally.steps,
        mean_steps,
        class_steps: tally.class_steps,
        classes_by_degree: tally.by_degree,
        bad_factors: tally.bad,
        seed: cfg.seed,
    }
}

/// The chain steps contributed by one factored polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepPlan {
    /// Classes of the stepping factors, in ascending (degree, polynomial) order.
    pub classes: Vec<u32>,
    /// (degree, class) of every distinct factor, stepping or not.
    pub factors: Vec<(usize, PlaceClass)>,
    /// Factors of multiplicity prime to p that have bad reduction.
    pub bad: u64,
}

/// Distinct factors with multiplicity ≢ 0 mod p and good reduction each give one step.
pub fn plan_steps(curve: &CurveSpec, fact: &Factorization, discount_aux: bool) -> Result<StepPlan> {
    let p = curve.p();
    let mut steps: Vec<(usize, u32)> = Vec::new();
    let mut factors = Vec::new();
    let mut bad = 0;
    for (g, e) in fact.iter() {
        let class = if curve.is_bad(g) { PlaceClass::Bad } else { classify_irreducible(curve, g)? };
        factors.push((g.deg(), class));
        if e % p == 0 {
            continue;
        }
        match class.rank() {
            Some(k) => steps.push((g.deg(), k)),
            None => bad += 1,
        }
    }
    if discount_aux {
        let aux = steps.iter().enumerate().filter(|(_, s)| s.1 == 0).max_by_key(|(i, s)| (s.0, *i));
        if let Some((i, _)) = aux {
            steps.remove(i);
        }
    }
    Ok(StepPlan { classes: steps.into_iter().map(|s| s.1).collect(), factors, bad })
}

/// Random f of degree n; one step per distinct good factor of multiplicity prime to p,
/// in ascending (degree, polynomial) order.
pub fn arithmetic_walk(cfg: &WalkConfig) -> Result<WalkReport> {
    if cfg.mode != WalkMode::Arithmetic {
        return Err(Error::InvalidParameter("arithmetic_walk needs mode = arithmetic".into()));
    }
    cfg.validate()?;
    let curve = cfg.curve.as_ref().expect("validated");
    let fq: &Fq = curve.field();
    let p = cfg.p;
    let start = start_law(cfg.r0, p)?;
    let run = |rng: &mut ChaCha8Rng, n: u64| -> Result<Tally> {
        let mut t = Tally::default();
        for _ in 0..n {
            let f = sample_monic_with(fq, cfg.w, rng);
            let plan = plan_steps(curve, &factor(&f, fq)?, cfg.discount_aux)?;
            for &(d, c) in &plan.factors {
                t.by_degree.entry(d).or_default()[c.index()] += 1;
            }
            t.bad += plan.bad;
            let classes = plan.classes;
            let mut r = draw_index(&start.cdf, rng) as u32;
            for &k in &classes {
                t.class_steps[k as usize] += 1;
                r = draw_step(k, r, p, rng);
            }
            bump(&mut t.counts, r as usize, 1);
            bump(&mut t.steps, classes.len(), 1);
            add_into(&mut t.conditional, &apply_classes(&start.law, &classes, p));
        }
        Ok(t)
    };
    let merge = |a: Result<Tally>, b: Result<Tally>| Ok(a?.merge(b?));
    let tally = run_blocks(cfg.trials, cfg.seed, run, merge).expect("trials ≥ 1")?;
    let empirical = RankDist::from_counts(&tally.counts);
    let trials = cfg.trials as f64;

    let total: u64 = tally.steps.iter().sum();
    let mean = tally.steps.iter().enumerate().map(|(s, c)| s as f64 * *c as f64).sum::<f64>() / total as f64;
    let wbar = mean.round() as usize;
    let smax = tally.steps.len().saturating_sub(1).max(wbar);
    let mut iterates = vec![RankDist::from_masses(start.law.clone())];
    for s in 1..=smax {
        iterates.push(m_step(&iterates[s - 1], p));
    }
    let mut mixture = Vec::new();
    for (s, &c) in tally.steps.iter().enumerate() {
        let scaled: Vec<f64> = iterates[s].masses().iter().map(|m| m * c as f64 / trials).collect();
        add_into(&mut mixture, &scaled);
    }
    let mixture = RankDist::from_masses(mixture);
    let conditional = RankDist::from_masses(tally.conditional.iter().map(|m| m / trials).collect());
    let jmax = markov::default_jmax(p).max(empirical.jmax()) + 10;
    let pr = poonen_rains(p, jmax)?;
    let mut references = Vec::new();
    let mut push = |name: String, dist: RankDist<f64>| {
        references.push(Reference { name, tv: tv_distance(&empirical, &dist), dist });
    };
    push(format!("M^{wbar}"), iterates[wbar].clone());
    push("step_mixture".into(), mixture);
    push("conditional".into(), conditional);
    push("PR".into(), pr);
    Ok(finish(cfg, tally, empirical, references))
}

pub fn run_walk(cfg: &WalkConfig) -> Result<WalkReport> {
    match cfg.mode {
        WalkMode::Synthetic => synthetic_walk(cfg),
        WalkMode::Arithmetic => arithmetic_walk(cfg),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassFrequency {
    pub degree: usize,
    pub class: PlaceClass,
    pub observed: u64,
    pub total: u64,
    pub density: f64,
    pub z: f64,
    pub pass: bool,
}

/// Realized class frequencies of sampled factors against the exhaustive census, per degree.
///
/// The census density #𝒫_k(d)/#𝒫(d) is the exact probability that a uniformly chosen
/// degree-d divisor has class k, since every degree-d place divides f with the same probability.
pub fn class_frequency_check(report: &WalkReport, max_degree: usize, z_max: f64) -> Result<Vec<ClassFrequency>> {
    let curve = report
        .config
        .curve
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("class frequencies need an arithmetic report".into()))?;
    let mut out = Vec::new();
    for (&d, counts) in report.classes_by_degree.range(1..=max_degree) {
        let census = place_class_census(curve, d)?;
        let total: u64 = counts.iter().sum();
        for class in PlaceClass::ALL {
            let density = census.counts[class.index()] as f64 / census.total as f64;
            let observed = counts[class.index()];
            let mean = total as f64 * density;
            let sd = (total as f64 * density * (1.0 - density)).sqrt();
            let z = if sd > 0.0 {
                (observed as f64 - mean) / sd
            } else if observed as f64 == mean {
                0.0
            } else {
                f64::INFINITY
            };
            out.push(ClassFrequency { degree: d, class, observed, total, density, z, pass: z.abs() <= z_max });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct StateDeviation {
    pub state: usize,
    pub empirical: f64,
    pub pr: f64,
    pub deviation: f64,
    pub sampling_error: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrComparison {
    pub states: Vec<StateDeviation>,
    pub max_deviation: f64,
    /// A·n^{−α(p)}.
    pub envelope: f64,
    pub alpha: f64,
    pub parity: f64,
    pub pass: bool,
}

/// Per-state deviation from PR against the envelope A·n^{−α(p)} plus 3 standard errors.
pub fn compare_to_pr(report: &WalkReport, a: f64, n: f64) -> Result<PrComparison> {
    let p = report.config.p;
    let alpha = alpha::alpha(p, 1e-9)?.alpha;
    let envelope = a * n.powf(-alpha);
    let pr = poonen_rains(p, markov::default_jmax(p).max(report.empirical.jmax()))?;
    let trials = report.config.trials as f64;
    let states: Vec<StateDeviation> = (0..=pr.jmax())
        .map(|j| {
            let e = report.empirical.get(j);
            let q = pr.get(j);
            let sampling_error = (q * (1.0 - q) / trials).sqrt();
            let deviation = (e - q).abs();
            StateDeviation {
                state: j,
                empirical: e,
                pr: q,
                deviation,
                sampling_error,
                flagged: deviation > envelope + 3.0 * sampling_error,
            }
        })
        .collect();
    let max_deviation = states.iter().map(|s| s.deviation).fold(0.0, f64::max);
    let pass = states.iter().all(|s| !s.flagged);
    Ok(PrComparison { states, max_deviation, envelope, alpha, parity: report.empirical.parity(), pass })
}
