use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use selmerwalk::alpha::alpha;
use selmerwalk::arithstat::{effective_ek_tail, erdos_kac_experiment, mertens_sum};
use selmerwalk::exact;
use selmerwalk::galois::{
    charsum_grid, chebotarev_kummer_census, classify_place, closed_form_densities, equidistribution_census, fit_decay,
    place_class_census, sl2_densities, three_torsion_oracle, two_torsion_oracle, CurveSpec, EquidistCensus,
};
use selmerwalk::markov::{
    convergence_rate, default_jmax, drift_sweep, eplus_eminus, iterate, local_transition_table, ml_power_row, ml_step,
    poonen_rains, pr_tail, tv_distance, RankDist,
};
use selmerwalk::montecarlo::{class_frequency_check, compare_to_pr, run_walk, InitialRank, WalkConfig, WalkMode};
use selmerwalk::{Error, FieldSpec, Poly};

#[derive(Parser, Debug)]
#[command(name = "selmerwalk", version, about = "Rank-walk and function-field statistics experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Optimize the convergence exponent α(p).
    Alpha(AlphaArgs),
    /// Poonen–Rains distribution truncated at jmax.
    PrDist(PrArgs),
    /// TV convergence of M_L and M, with a geometric rate fit.
    MarkovConverge(ConvergeArgs),
    /// Drift residuals for V(x) = β^x.
    Drift(DriftArgs),
    /// Exact rank transition table at a ramified place.
    Tables(TableArgs),
    /// Class densities of SL₂(𝔽_p) by enumeration.
    Sl2(Sl2Args),
    /// Classify one place of a curve.
    Classify(ClassifyArgs),
    /// Exhaustive place-class census by degree.
    Census(CensusArgs),
    /// Frobenius counts in a Kummer extension against the effective bound.
    Chebotarev(ChebotarevArgs),
    /// Residue-symbol equidistribution and character sums.
    Charsum(CharsumArgs),
    /// Distribution of the number of distinct irreducible factors.
    ErdosKac(ErdosKacArgs),
    /// Mertens-type sum over irreducibles up to a degree threshold.
    Mertens(MertensArgs),
    /// Monte Carlo rank walk.
    Simulate(SimulateArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Alpha(_) => "alpha",
            Command::PrDist(_) => "pr-dist",
            Command::MarkovConverge(_) => "markov-converge",
            Command::Drift(_) => "drift",
            Command::Tables(_) => "tables",
            Command::Sl2(_) => "sl2",
            Command::Classify(_) => "classify",
            Command::Census(_) => "census",
            Command::Chebotarev(_) => "chebotarev",
            Command::Charsum(_) => "charsum",
            Command::ErdosKac(_) => "erdos-kac",
            Command::Mertens(_) => "mertens",
            Command::Simulate(_) => "simulate",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::PrDist(_) => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct AlphaArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct PrArgs {
    #[arg(long)]
    p: u32,
    /// Largest state; defaults to the smallest with tail mass ≤ 1e-12.
    #[arg(long)]
    jmax: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
struct ConvergeArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 0)]
    r0: usize,
    /// Iterations of M.
    #[arg(long, default_value_t = 80)]
    nmax: usize,
    /// Iterations of M_L.
    #[arg(long, default_value_t = 120)]
    ml_steps: usize,
}

#[derive(Args, Debug, Serialize)]
struct DriftArgs {
    #[arg(long)]
    p: u32,
    /// Defaults to β = p.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 60)]
    xmax: usize,
}

#[derive(Args, Debug, Serialize)]
struct TableArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Args, Debug, Serialize)]
struct Sl2Args {
    #[arg(long)]
    p: u32,
}

#[derive(Args, Debug, Serialize)]
struct CurveArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Coefficient A(t) of y² = x³ + A x + B, e.g. "t".
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
}

impl CurveArgs {
    fn curve(&self) -> anyhow::Result<CurveSpec> {
        let spec = FieldSpec::new(self.q, self.p)?;
        let fq = spec.field().clone();
        let a = Poly::parse(&self.a, &fq)?;
        let b = Poly::parse(&self.b, &fq)?;
        Ok(CurveSpec::new(spec, a, b)?)
    }
}

#[derive(Args, Debug, Serialize)]
struct ClassifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    curve: CurveArgs,
    /// Monic irreducible place, e.g. "t^2+2".
    #[arg(long)]
    place: String,
}

#[derive(Args, Debug, Serialize)]
struct CensusArgs {
    #[command(flatten)]
    #[serde(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value_t = 1)]
    dmin: usize,
    #[arg(long, default_value_t = 6)]
    dmax: usize,
    /// Constant C in the reference envelope C·q^{−d/2} for per-cell rows.
    #[arg(long, default_value_t = 1.0)]
    constant: f64,
}

#[derive(Args, Debug, Serialize)]
struct ChebotarevArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long)]
    h: String,
    #[arg(long)]
    n: usize,
    /// Genus of the Kummer extension.
    #[arg(long)]
    genus_l: u64,
}

#[derive(Args, Debug, Serialize)]
struct CharsumArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Modulus h_k; repeat for several.
    #[arg(long)]
    h: Vec<String>,
    /// Place degree.
    #[arg(long)]
    i: Option<usize>,
    /// Sweep every monic irreducible h with deg ≤ max-deg-h and i ≤ max-i.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = 3)]
    max_deg_h: usize,
    #[arg(long, default_value_t = 5)]
    max_i: usize,
}

#[derive(Args, Debug, Serialize)]
struct ErdosKacArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Overridden by the SEED environment variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Also test the effective tail bound at this ρ.
    #[arg(long)]
    rho: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct MertensArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    threshold: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Synthetic,
    Arithmetic,
}

#[derive(Args, Debug, Serialize)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Number of M steps (synthetic mode).
    #[arg(long)]
    w: Option<usize>,
    /// Starting rank, or "pr" to start from the Poonen–Rains law.
    #[arg(long, default_value = "0")]
    r0: String,
    #[arg(long)]
    trials: u64,
    /// Overridden by the SEED environment variable.
    #[arg(long)]
    seed: Option<u64>,
    /// Field size (arithmetic mode).
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    b: Option<String>,
    /// Degree of the sampled twist polynomial (arithmetic mode), or n in the PR envelope.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    discount_aux: bool,
    /// Check realized class frequencies within 3σ for factor degrees up to this bound.
    #[arg(long)]
    check_classes: Option<usize>,
    /// Check deviations from PR against the envelope A·n^{−α(p)}.
    #[arg(long)]
    envelope_a: Option<f64>,
}

/// What a subcommand produced: a JSON result, an optional CSV table, and whether every
/// checked bound held.
struct Outcome {
    result: Value,
    csv: Option<String>,
    pass: bool,
}

impl Outcome {
    fn ok(result: impl Serialize) -> anyhow::Result<Outcome> {
        Ok(Outcome { result: serde_json::to_value(result)?, csv: None, pass: true })
    }
}

fn resolve_seed(flag: Option<u64>) -> anyhow::Result<u64> {
    match std::env::var("SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("SEED={s:?} is not an unsigned integer")),
        Err(_) => flag.ok_or_else(|| anyhow::anyhow!("randomized command needs --seed or SEED")),
    }
}

fn run(cmd: &mut Command) -> anyhow::Result<(Outcome, Option<u64>)> {
    let mut seed = None;
    let out = match cmd {
        Command::Alpha(a) => {
            let res = alpha(a.p, a.tol)?;
            let mut o = Outcome::ok(&res)?;
            let terms: Vec<Value> = res.binding_terms.iter().map(|t| serde_json::to_value(t).unwrap()).collect();
            o.csv = Some(format!(
                "p,alpha,rho_star,binding_terms\n{},{},{},{}\n",
                res.p,
                res.alpha,
                res.rho_star,
                terms.iter().map(|t| t.as_str().unwrap_or_default()).collect::<Vec<_>>().join(";")
            ));
            o
        }
        Command::PrDist(a) => {
            let jmax = a.jmax.unwrap_or_else(|| default_jmax(a.p));
            let d = poonen_rains(a.p, jmax)?;
            let mut o = Outcome::ok(json!({ "p": a.p, "jmax": jmax, "tail": pr_tail(a.p, jmax), "dist": d }))?;
            o.csv = Some(d.to_csv());
            o
        }
        Command::MarkovConverge(a) => {
            let jmax = default_jmax(a.p).max(a.r0 + 1) + 20;
            let (ep, em) = eplus_eminus(a.p, jmax)?;
            let ml = iterate(&RankDist::<f64>::delta(a.r0).with_cap(jmax), a.ml_steps, |d| ml_step(d, a.p));
            let target = if (a.r0 + a.ml_steps) % 2 == 0 { "E+" } else { "E-" };
            let tv_ml = tv_distance(&ml, if target == "E+" { &ep } else { &em });
            let fit = convergence_rate(a.p, &RankDist::delta(a.r0), a.nmax)?;
            let tv_m = *fit.tv.last().unwrap_or(&f64::NAN);
            let mut csv = String::from("n,tv\n");
            for (n, t) in fit.tv.iter().enumerate() {
                writeln!(csv, "{n},{t}")?;
            }
            let pass = fit.pass;
            let mut o = Outcome::ok(json!({
                "ml_target": target,
                "tv_ml_to_target": tv_ml,
                "tv_m_to_pr": tv_m,
                "fit": fit,
            }))?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
        Command::Drift(a) => {
            let beta = *a.beta.get_or_insert(a.p as f64);
            if beta <= 1.0 {
                bail!(Error::InvalidParameter(format!("beta must exceed 1, got {beta}")));
            }
            let rep = drift_sweep(a.p, beta, a.xmax);
            let mut csv = String::from("x,residual\n");
            for (x, r) in rep.residuals.iter().enumerate() {
                writeln!(csv, "{x},{r}")?;
            }
            let pass = rep.gamma < 1.0 && rep.kappa_hat.is_finite();
            let mut o = Outcome::ok(&rep)?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
        Command::Tables(a) => {
            let table = local_transition_table(a.k, a.r, a.p)?;
            let composed = ml_power_row(a.k, a.r, a.p);
            let agree = table.iter().all(|(d, v)| composed.get(d).map_or(*v == exact::zero(), |c| c == v))
                && composed.iter().all(|(d, v)| table.get(d) == Some(v));
            let mut csv = String::from("delta,prob,prob_f64\n");
            let mut row = serde_json::Map::new();
            for (d, v) in &table {
                writeln!(csv, "{d},{v},{}", exact::to_f64(v))?;
                row.insert(d.to_string(), Value::String(v.to_string()));
            }
            let mut o = Outcome::ok(json!({ "p": a.p, "r": a.r, "k": a.k, "row": row, "matches_ml_power": agree }))?;
            o.csv = Some(csv);
            o.pass = agree;
            o
        }
        Command::Sl2(a) => {
            let d = sl2_densities(a.p)?;
            let closed = closed_form_densities(a.p);
            let agree = [&d.rho0, &d.rho1, &d.rho2].into_iter().zip(closed.iter()).all(|(x, y)| x == y);
            let csv = format!(
                "class,enumerated,closed_form\n0,{},{}\n1,{},{}\n2,{},{}\n",
                d.rho0, closed[0], d.rho1, closed[1], d.rho2, closed[2]
            );
            let closed: Vec<String> = closed.iter().map(|c| c.to_string()).collect();
            let mut o = Outcome::ok(json!({ "densities": d, "closed_form": closed, "agree": agree }))?;
            o.csv = Some(csv);
            o.pass = agree;
            o
        }
        Command::Classify(a) => {
            let curve = a.curve.curve()?;
            let v = Poly::parse(&a.place, curve.field())?;
            let class = classify_place(&curve, &v)?;
            let oracle = match curve.p() {
                2 => Some(two_torsion_oracle(&curve, &v)),
                3 => Some(three_torsion_oracle(&curve, &v)),
                _ => None,
            };
            let agree = oracle.map_or(true, |o| o == class);
            let mut o = Outcome::ok(json!({
                "place": v.to_string(),
                "degree": v.deg(),
                "class": class,
                "rank": class.rank(),
                "oracle": oracle,
                "agree": agree,
            }))?;
            o.csv = Some(format!("place,degree,class,oracle\n{v},{},{class:?},{oracle:?}\n", v.deg()));
            o.pass = agree;
            o
        }
        Command::Census(a) => {
            let curve = a.curve.curve()?;
            if a.dmin == 0 || a.dmin > a.dmax {
                bail!(Error::InvalidParameter(format!("need 1 ≤ dmin ≤ dmax, got {}..{}", a.dmin, a.dmax)));
            }
            let mut censuses = Vec::new();
            let mut csv = String::from("degree,cell,count,expected,bound,pass\n");
            for d in a.dmin..=a.dmax {
                let c = place_class_census(&curve, d)?;
                for r in c.rows(a.constant) {
                    writeln!(csv, "{},{},{},{},{},{}", r.degree, r.cell, r.count, r.expected, r.bound, r.pass)?;
                }
                censuses.push(c);
            }
            let pts: Vec<(f64, f64)> = censuses.iter().map(|c| (c.degree as f64, c.max_deviation)).collect();
            let fit = fit_decay(&pts, curve.field().q() as f64).map(|(c, e)| json!({ "c": c, "exponent": e }));
            let mut o = Outcome::ok(json!({ "censuses": censuses, "decay_fit": fit }))?;
            o.csv = Some(csv);
            o
        }
        Command::Chebotarev(a) => {
            let spec = FieldSpec::new(a.q, a.p)?;
            let h = Poly::parse(&a.h, spec.field())?;
            let c = chebotarev_kummer_census(&spec, &h, a.n, a.genus_l)?;
            let mut csv = String::from("degree,cell,count,expected,bound,pass\n");
            for r in c.rows() {
                writeln!(csv, "{},{},{},{},{},{}", r.degree, r.cell, r.count, r.expected, r.bound, r.pass)?;
            }
            let pass = c.pass;
            let mut o = Outcome::ok(&c)?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
        Command::Charsum(a) => {
            let spec = FieldSpec::new(a.q, a.p)?;
            let cs: Vec<EquidistCensus> = if a.grid {
                charsum_grid(&spec, a.max_deg_h, a.max_i)?
            } else {
                if a.h.is_empty() {
                    bail!(Error::InvalidParameter("give --h at least once, or --grid".into()));
                }
                let i = a.i.ok_or_else(|| Error::InvalidParameter("--i is required without --grid".into()))?;
                let hs = a.h.iter().map(|s| Poly::parse(s, spec.field())).collect::<Result<Vec<_>, _>>()?;
                vec![equidistribution_census(&spec, &hs, i)?]
            };
            let count = |f: fn(&EquidistCensus) -> bool| cs.iter().filter(|c| !f(c)).count();
            let summary = json!({
                "censuses": cs.len(),
                "hsu_violations": count(|c| c.hsu_pass),
                "corollary_violations": count(|c| c.corollary_pass),
                "corollary_nonstrict_violations": count(|c| c.corollary_nonstrict_pass),
                "orthogonality_violations": count(|c| c.orthogonality_pass),
            });
            let mut csv = String::from("h,degree,cell,count,expected,bound,pass\n");
            for c in &cs {
                for r in c.rows() {
                    writeln!(
                        csv,
                        "{},{},{},{},{},{},{}",
                        c.hs.join(";"),
                        r.degree,
                        r.cell,
                        r.count,
                        r.expected,
                        r.bound,
                        r.pass
                    )?;
                }
            }
            let pass = cs.iter().all(|c| c.hsu_pass && c.corollary_pass);
            let mut o = Outcome::ok(json!({ "summary": summary, "censuses": cs }))?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
        Command::ErdosKac(a) => {
            let s = resolve_seed(a.seed)?;
            a.seed = Some(s);
            seed = Some(s);
            let rep = erdos_kac_experiment(a.q, a.n, a.trials, s)?;
            let mut csv = String::from("w,z,cdf\n");
            for pt in &rep.empirical.cdf {
                writeln!(csv, "{},{},{}", pt.w, pt.z, pt.cdf)?;
            }
            let (tail, pass) = match a.rho {
                Some(rho) => {
                    let t = effective_ek_tail(a.q, a.n, rho, a.trials, s)?;
                    let pass = t.empirical.pass;
                    (Some(t), pass)
                }
                None => (None, true),
            };
            let mut o = Outcome::ok(json!({ "erdos_kac": rep, "tail": tail }))?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
        Command::Mertens(a) => match mertens_sum(a.q, a.threshold) {
            Ok(m) => {
                let csv = format!("q,threshold,value,bound\n{},{},{},{}\n", a.q, a.threshold, m.value, m.bound);
                let mut o = Outcome::ok(m)?;
                o.csv = Some(csv);
                o
            }
            Err(Error::Invariant(msg)) => Outcome {
                result: json!({ "q": a.q, "threshold": a.threshold, "violation": msg }),
                csv: None,
                pass: false,
            },
            Err(e) => return Err(e.into()),
        },
        Command::Simulate(a) => {
            let s = resolve_seed(a.seed)?;
            a.seed = Some(s);
            seed = Some(s);
            let r0 = match a.r0.as_str() {
                "pr" | "PR" => InitialRank::PoonenRains,
                r => InitialRank::Fixed(r.parse().map_err(|_| Error::InvalidParameter(format!("bad --r0 {r:?}")))?),
            };
            let cfg = match a.mode {
                ModeArg::Synthetic => {
                    let w = a.w.ok_or_else(|| Error::InvalidParameter("--w is required in synthetic mode".into()))?;
                    WalkConfig::synthetic(a.p, w, a.trials, s)
                }
                ModeArg::Arithmetic => {
                    let need = |name: &str| Error::InvalidParameter(format!("--{name} is required in arithmetic mode"));
                    let curve = CurveArgs {
                        q: a.q.ok_or_else(|| need("q"))?,
                        p: a.p,
                        a: a.a.clone().ok_or_else(|| need("a"))?,
                        b: a.b.clone().ok_or_else(|| need("b"))?,
                    }
                    .curve()?;
                    let mut c = WalkConfig::arithmetic(curve, a.n.ok_or_else(|| need("n"))?, a.trials, s);
                    c.discount_aux = a.discount_aux;
                    c
                }
            }
            .with_r0(r0);
            let rep = run_walk(&cfg)?;
            let mut pass = true;
            let classes = match a.check_classes {
                Some(d) if cfg.mode == WalkMode::Arithmetic => {
                    let c = class_frequency_check(&rep, d, 3.0)?;
                    pass &= c.iter().all(|x| x.pass);
                    Some(c)
                }
                Some(_) => bail!(Error::InvalidParameter("--check-classes needs arithmetic mode".into())),
                None => None,
            };
            let envelope = match a.envelope_a {
                Some(amp) => {
                    let n = a.n.ok_or_else(|| Error::InvalidParameter("--envelope-a needs --n".into()))?;
                    let c = compare_to_pr(&rep, amp, n as f64)?;
                    pass &= c.pass;
                    Some(c)
                }
                None => None,
            };
            let mut csv = String::from("state,count,empirical");
            for r in &rep.references {
                write!(csv, ",{}", r.name)?;
            }
            csv.push('\n');
            let states =
                rep.references.iter().map(|r| r.dist.jmax()).max().unwrap_or(0).max(rep.counts.len().saturating_sub(1));
            for j in 0..=states {
                write!(csv, "{j},{},{}", rep.counts.get(j).copied().unwrap_or(0), rep.empirical.get(j))?;
                for r in &rep.references {
                    write!(csv, ",{}", r.dist.get(j))?;
                }
                csv.push('\n');
            }
            let mut o = Outcome::ok(json!({ "report": rep, "class_check": classes, "pr_check": envelope }))?;
            o.csv = Some(csv);
            o.pass = pass;
            o
        }
    };
    Ok((out, seed))
}

fn render(cli: &Cli, outcome: &Outcome, seed: Option<u64>) -> anyhow::Result<String> {
    let format = cli.global.format.unwrap_or_else(|| cli.command.default_format());
    let config = json!({
        "command": cli.command.name(),
        "args": serde_json::to_value(&cli.command)?,
        "format": format,
        "threads": cli.global.threads,
    });
    match format {
        Format::Json => {
            let art = json!({ "config": config, "seed": seed, "pass": outcome.pass, "result": outcome.result });
            Ok(serde_json::to_string_pretty(&art)? + "\n")
        }
        Format::Csv => {
            let body = outcome
                .csv
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter(format!("{} has no CSV form", cli.command.name())))?;
            let mut s = format!("# config: {config}\n");
            if let Some(seed) = seed {
                writeln!(s, "# seed: {seed}")?;
            }
            writeln!(s, "# pass: {}", outcome.pass)?;
            s.push_str(body);
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&mut cli.command).and_then(|(outcome, seed)| {
        let text = render(&cli, &outcome, seed)?;
        match &cli.global.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(outcome.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bound violated; see the `pass` fields in the output");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
