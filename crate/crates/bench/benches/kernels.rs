use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selmerwalk::alpha::alpha;
use selmerwalk::arithstat::PatternSampler;
use selmerwalk::ffpoly::{factor, is_irreducible, monics, residue_symbol, sample_monic};
use selmerwalk::galois::{classify_irreducible, CurveSpec};
use selmerwalk::markov::{default_jmax, m_step, poonen_rains, RankDist};
use selmerwalk::montecarlo::{synthetic_walk, WalkConfig};
use selmerwalk::{FieldSpec, Fq, Poly};

fn ffpoly(c: &mut Criterion) {
    let fq = Fq::new(5).unwrap();
    let f60 = sample_monic(&fq, 60, 1);
    c.bench_function("factor deg 60 over F5", |b| b.iter(|| factor(black_box(&f60), &fq).unwrap()));
    let spec = FieldSpec::new(5, 2).unwrap();
    let v = monics(&fq, 7).find(|m| is_irreducible(m, &fq)).unwrap();
    let h = sample_monic(&fq, 12, 2);
    c.bench_function("quadratic residue symbol deg 12 mod deg 7", |b| {
        b.iter(|| residue_symbol(black_box(&h), &v, &spec).unwrap())
    });
    let curve = CurveSpec::new(spec, Poly::x(), Poly::x()).unwrap();
    c.bench_function("classify place deg 7", |b| b.iter(|| classify_irreducible(&curve, black_box(&v)).unwrap()));
}

fn markov(c: &mut Criterion) {
    let pr = poonen_rains(2, default_jmax(2)).unwrap();
    c.bench_function("M step on PR (p=2)", |b| b.iter(|| m_step(black_box(&pr), 2)));
    let d = RankDist::<f64>::delta(0).with_cap(60);
    c.bench_function("80 M steps from delta_0", |b| b.iter(|| (0..80).fold(d.clone(), |acc, _| m_step(&acc, 2))));
    c.bench_function("alpha(2)", |b| b.iter(|| alpha(black_box(2), 1e-9).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let s = PatternSampler::new(5, 200).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    c.bench_function("factor pattern sample n=200", |b| b.iter(|| s.sample(&mut rng).w()));
    let cfg = WalkConfig::synthetic(2, 40, 4096, 7);
    c.bench_function("synthetic walk 4096 x 40", |b| b.iter(|| synthetic_walk(black_box(&cfg)).unwrap()));
}

criterion_group!(benches, ffpoly, markov, sampling);
criterion_main!(benches);
