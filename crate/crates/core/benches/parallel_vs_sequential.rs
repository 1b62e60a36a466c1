use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use defcms::diffop::Model;
use defcms::integrals::{main_identity_check, IntegralFamily};
use defcms::lambda::dimension_table;
use defcms::par;
use defcms::rootsys::{Family, GRS};

fn commute(g: &GRS) -> bool {
    let fam = IntegralFamily::new(g, Model::Geometric).unwrap();
    fam.commute_checks(&[(1, 2), (1, 3), (2, 3)]).unwrap().iter().all(|c| c.holds)
}

fn bench(c: &mut Criterion) {
    let a10 = GRS::build(Family::A, 2, 1).unwrap();
    let ab = GRS::build(Family::AB13, 0, 0).unwrap();
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10).measurement_time(Duration::from_secs(10));
    for (mode, sequential) in [("parallel", false), ("sequential", true)] {
        par::set_sequential(sequential);
        group.bench_with_input(BenchmarkId::new("commute A(1,0) p<=3", mode), &a10, |b, g| {
            b.iter(|| black_box(commute(g)))
        });
        group.bench_with_input(BenchmarkId::new("main identity AB(1,3)", mode), &ab, |b, g| {
            b.iter(|| black_box(main_identity_check(g, Model::Geometric).holds))
        });
        group.bench_function(BenchmarkId::new("dimensions (2,2) N<=6", mode), |b| {
            b.iter(|| black_box(dimension_table(2, 2, 6)))
        });
    }
    par::set_sequential(false);
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
