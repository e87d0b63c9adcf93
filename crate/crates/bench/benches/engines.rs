use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};

use realiz_core::corpus;
use realiz_core::domain::{denote_closed, level, seq_check, theta, Fin, SeqConfig};
use realiz_core::models::{brute_check, model_check, valid_all_bas, BASpec, ValidityConfig};
use realiz_core::pole::{in_pole_limit, realizes_bounded};
use realiz_core::{evaluate, parse_formula, parse_process, LcTerm, PoleConfig};

fn machine(c: &mut Criterion) {
    let procs = corpus::processes(200, 1);
    c.bench_function("kam/evaluate_corpus_200", |b| {
        b.iter(|| procs.iter().map(|p| evaluate(black_box(p), 200).steps.len()).sum::<usize>())
    });
}

fn models(c: &mut Criterion) {
    let fs = corpus::formulas(100, 3);
    c.bench_function("models/model_check_pf3", |b| {
        b.iter(|| fs.iter().filter(|f| model_check(black_box(f), BASpec::PowerFinite(3)).unwrap_or(false)).count())
    });
    c.bench_function("models/model_check_atomless", |b| {
        b.iter(|| fs.iter().filter(|f| model_check(black_box(f), BASpec::Atomless).unwrap_or(false)).count())
    });
    c.bench_function("models/brute_check_pf2", |b| {
        b.iter(|| fs.iter().filter(|f| brute_check(black_box(f), 2).unwrap_or(false)).count())
    });
    let cfg = ValidityConfig::default();
    c.bench_function("models/valid_all_bas", |b| b.iter(|| fs.iter().filter(|f| valid_all_bas(f, &cfg).is_ok()).count()));
}

fn pole(c: &mut Criterion) {
    let p = parse_process("g{(0 != 1 -> _|_) -> _|_} * g{0 != 1 -> _|_} . []").unwrap();
    c.bench_function("pole/in_pole_limit_cold", |b| {
        b.iter_batched(PoleConfig::default, |cfg| in_pole_limit(&p, &cfg).unwrap(), BatchSize::SmallInput)
    });
    let a = parse_formula("forall z. z != 0 -> z != 0").unwrap();
    c.bench_function("pole/realizes_identity_depth2", |b| {
        b.iter_batched(PoleConfig::default, |cfg| realizes_bounded(&LcTerm::identity(), &a, &cfg, 2).unwrap(), BatchSize::SmallInput)
    });
}

fn domain(c: &mut Criterion) {
    let _ = level(3);
    let terms = corpus::terms(50, 8, 5, false);
    c.bench_function("domain/denote_cc_free_terms", |b| {
        b.iter(|| terms.iter().filter_map(|t| denote_closed(t, 1).ok()?.comp(2).ok()).count())
    });
    c.bench_function("domain/theta_rank2", |b| {
        b.iter(|| level(2).unwrap().elements().map(|i| theta(Fin { rank: 2, idx: i }).unwrap().size()).sum::<usize>())
    });
    let cfg = SeqConfig::default();
    c.bench_function("domain/seq_check_rank2", |b| {
        b.iter(|| level(2).unwrap().elements().filter(|&i| seq_check(Fin { rank: 2, idx: i }, &cfg).is_ok()).count())
    });
}

criterion_group!(benches, machine, models, pole, domain);
criterion_main!(benches);
