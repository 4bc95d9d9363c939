use criterion::{criterion_group, criterion_main, Criterion};
use plyap::{eigenvalue_with, PiecewiseWeight, Sign, SolveOptions};

fn bench_eigenvalue(c: &mut Criterion) {
    let a = PiecewiseWeight::constant(1.0, 1.0).unwrap();
    let rho = PiecewiseWeight::from_steps(&[(0.5, 1.0), (1.0, -1.0)]).unwrap();
    let opts = SolveOptions::default();

    let mut group = c.benchmark_group("eigenvalue");
    group.sample_size(10);
    for k in [1usize, 3] {
        group.bench_function(format!("step_weight_k{k}"), |b| {
            b.iter(|| {
                eigenvalue_with(std::hint::black_box(&a), &rho, 2.0, k, Sign::Plus, &opts)
                    .unwrap()
            })
        });
    }
    group.bench_function("step_weight_k2_p3", |b| {
        b.iter(|| {
            eigenvalue_with(std::hint::black_box(&a), &rho, 3.0, 2, Sign::Plus, &opts).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, bench_eigenvalue);
criterion_main!(benches);
