use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use maxab::{canonical_rep, classify, enumerate_classes, enumerate_invariants, verify_star, ClassInvariant, Family};

fn reps(family: Family, n: usize) -> Vec<ClassInvariant> {
    enumerate_invariants(family, n).expect("enumeration").into_iter().filter(|i| i.blocks().is_none_or(|b| b.k <= 2)).collect()
}

fn bench_msms(c: &mut Criterion) {
    let mut g = c.benchmark_group("msms_classes");
    for (k, s) in [(1, 3), (2, 2), (2, 3)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("k{k}_s{s}")), &(k, s), |b, &(k, s)| {
            b.iter(|| enumerate_classes(black_box(k), black_box(s)).expect("classes"))
        });
    }
    g.finish();
}

fn bench_round_trip(c: &mut Criterion) {
    let mut g = c.benchmark_group("classify_canonical");
    g.sample_size(10);
    for (family, n) in [(Family::Pu, 8), (Family::Po, 8), (Family::Psp, 6), (Family::Twisted, 8)] {
        let invs = reps(family, n);
        let presentations: Vec<_> = invs.iter().map(|i| canonical_rep(i).expect("rep")).collect();
        g.bench_with_input(BenchmarkId::new(family.name(), n), &presentations, |b, ps| {
            b.iter(|| ps.iter().map(|p| classify(p, 1_000_000).expect("classify")).count())
        });
    }
    g.finish();
}

fn bench_star(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_star");
    g.sample_size(10);
    for (family, n) in [(Family::Pu, 6), (Family::Po, 8), (Family::Psp, 4)] {
        let invs = reps(family, n);
        g.bench_with_input(BenchmarkId::new(family.name(), n), &invs, |b, invs| {
            b.iter(|| invs.iter().filter(|i| verify_star(i).expect("star").star).count())
        });
    }
    g.finish();
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate_po_12", |b| b.iter(|| enumerate_invariants(Family::Po, black_box(12)).expect("enumeration")));
}

criterion_group!(benches, bench_msms, bench_round_trip, bench_star, bench_enumerate);
criterion_main!(benches);
