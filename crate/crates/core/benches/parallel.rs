use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use wordlab::exec::{self, Mode};
use wordlab::generation::count_generating_tuples;
use wordlab::lattice::gcd_tail_estimate;
use wordlab::measure::{exact_distribution, monte_carlo_distribution};
use wordlab::{Group, GroupSpec, Word};

fn group(s: &str) -> Group {
    Group::construct(&s.parse::<GroupSpec>().unwrap()).unwrap()
}

const MODES: [(&str, Mode); 2] = [
    ("sequential", Mode::Sequential),
    ("parallel", Mode::Parallel),
];

fn word_measures(c: &mut Criterion) {
    let mut g = c.benchmark_group("word_measures");
    g.sample_size(10);
    let psl = group("psl2:7");
    let a6 = group("alternating:6");
    let commutator = Word::parse("1 2 -1 -2", None).unwrap();
    let long = Word::parse("1 2 1 1 -2 1 2 2 -1 2 1 -2 -2 1", None).unwrap();
    for (name, mode) in MODES {
        g.bench_with_input(
            BenchmarkId::new("exact_commutator_psl2_7", name),
            &mode,
            |b, &m| {
                b.iter(|| {
                    exec::with_mode(m, || {
                        exact_distribution(black_box(&commutator), &psl).unwrap()
                    })
                })
            },
        );
        g.bench_with_input(
            BenchmarkId::new("exact_long_word_a6", name),
            &mode,
            |b, &m| {
                b.iter(|| exec::with_mode(m, || exact_distribution(black_box(&long), &a6).unwrap()))
            },
        );
        g.bench_with_input(
            BenchmarkId::new("sampled_long_word_a6", name),
            &mode,
            |b, &m| {
                b.iter(|| {
                    exec::with_mode(m, || {
                        monte_carlo_distribution(black_box(&long), &a6, 200_000, 1).unwrap()
                    })
                })
            },
        );
    }
    g.finish();
}

fn walks_and_generation(c: &mut Criterion) {
    let mut g = c.benchmark_group("walks_and_generation");
    g.sample_size(10);
    let psl = group("psl2:13");
    for (name, mode) in MODES {
        g.bench_with_input(
            BenchmarkId::new("gcd_tail_d2_n1000", name),
            &mode,
            |b, &m| {
                b.iter(|| {
                    exec::with_mode(m, || {
                        gcd_tail_estimate(2, 1000, 30, 20_000, black_box(3)).unwrap()
                    })
                })
            },
        );
        g.bench_with_input(
            BenchmarkId::new("generating_pairs_psl2_13", name),
            &mode,
            |b, &m| {
                b.iter(|| {
                    exec::with_mode(m, || count_generating_tuples(black_box(&psl), 2).unwrap())
                })
            },
        );
    }
    g.finish();
}

criterion_group!(benches, word_measures, walks_and_generation);
criterion_main!(benches);
