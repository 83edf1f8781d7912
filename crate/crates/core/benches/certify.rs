use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mindlin_core::batch::Execution;
use mindlin_core::energy::{certify, CertifyOptions};
use mindlin_core::homog::{effective_a, HomogenizationProblem};
use mindlin_core::{sampling, Dim};

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(20);
    for dim in [Dim::Two, Dim::Three] {
        let mut rng = sampling::rng(1, 0);
        let c1 = sampling::spd_c(&mut rng, dim, 0.5);
        let ct = sampling::sym_c(&mut rng, dim);
        let p = HomogenizationProblem::from_c_tilde(c1, &ct, 0.05, 1.0).unwrap();
        let a = effective_a(&p).unwrap().a_eq;
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            let opts = CertifyOptions {
                samples: 256,
                exec,
                ..Default::default()
            };
            group.bench_with_input(BenchmarkId::new(name, dim.n()), &opts, |b, o| {
                b.iter(|| certify(&p, &a, o).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_certify);
criterion_main!(benches);
