use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use jordan_kepler::blowup::curvature_with;
use jordan_kepler::exec::{Executor, Rayon, Sequential};
use jordan_kepler::jordan::{
    random_rank_element, seeded_rng, with_spectral_norm, TripleElement, TripleSpace,
};
use jordan_kepler::kernel::{CoefficientSequence, KernelSeries, KernelSpec};
use jordan_kepler::partition::Partition;
use jordan_kepler::radial::{beta_integral_check_with, IntegrationMethod};
use num_complex::Complex64;

fn pairs(n: usize) -> Vec<(TripleElement, TripleElement)> {
    let mut rng = seeded_rng(1);
    (0..n)
        .map(|_| {
            let z = with_spectral_norm(&random_rank_element(3, 4, 2, &mut rng), 0.5);
            let w = with_spectral_norm(&random_rank_element(3, 4, 2, &mut rng), 0.5);
            (z, w)
        })
        .collect()
}

fn kernel_batch<E: Executor>(
    series: &KernelSeries,
    input: &[(TripleElement, TripleElement)],
) -> usize {
    series
        .eval_batch_with::<E>(input)
        .iter()
        .filter(|r| r.is_ok())
        .count()
}

fn beta_mc<E: Executor>(space: &TripleSpace, mu: &Partition) -> f64 {
    let method = IntegrationMethod::MonteCarlo {
        seed: 5,
        samples: 1 << 20,
    };
    beta_integral_check_with::<E>(space, 8.0, mu, method)
        .unwrap()
        .lhs
}

fn stencil<E: Executor>(base: &[Complex64]) -> f64 {
    // an artificially expensive metric so that stencil points dominate
    let h = |x: &[Complex64]| {
        let mut acc = 1.0;
        for k in 1..400 {
            let u: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            acc += (u / k as f64).powi(2) * 1e-3;
        }
        Ok(acc)
    };
    curvature_with::<E, _>(h, base, (1e-3, 5e-4))
        .unwrap()
        .matrix[(0, 0)]
        .re
}

fn benches(c: &mut Criterion) {
    let space = TripleSpace::new(3, 4, 2).unwrap();
    let spec = KernelSpec::new(space, CoefficientSequence::nu_rule(8.0), 10, 0).unwrap();
    let series = KernelSeries::kernel(&spec).unwrap();
    let input = pairs(256);
    let mut g = c.benchmark_group("kernel_batch");
    g.bench_function(BenchmarkId::new("sequential", 256), |b| {
        b.iter(|| kernel_batch::<Sequential>(&series, &input))
    });
    g.bench_function(BenchmarkId::new("rayon", 256), |b| {
        b.iter(|| kernel_batch::<Rayon>(&series, &input))
    });
    g.finish();

    let rank2 = TripleSpace::new(2, 3, 2).unwrap();
    let mu = Partition::new(vec![2, 1]).unwrap();
    let mut g = c.benchmark_group("beta_monte_carlo");
    g.sample_size(10);
    g.bench_function("sequential", |b| {
        b.iter(|| beta_mc::<Sequential>(&rank2, &mu))
    });
    g.bench_function("rayon", |b| b.iter(|| beta_mc::<Rayon>(&rank2, &mu)));
    g.finish();

    let base: Vec<Complex64> = (0..6)
        .map(|k| Complex64::new(0.05 * k as f64, -0.03))
        .collect();
    let mut g = c.benchmark_group("curvature_stencil");
    g.bench_function("sequential", |b| b.iter(|| stencil::<Sequential>(&base)));
    g.bench_function("rayon", |b| b.iter(|| stencil::<Rayon>(&base)));
    g.finish();
}

criterion_group!(parallel_vs_sequential, benches);
criterion_main!(parallel_vs_sequential);
