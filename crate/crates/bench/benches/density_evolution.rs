use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmbc_core::de::optimal_label_distribution;
use qmbc_core::{DeConfig, DegreeDistribution, DensityEvolution, Field, LabelDistribution};

fn iterations(c: &mut Criterion) {
    let mut group = c.benchmark_group("de_run");
    for s in [2u32, 3, 4] {
        let field = Field::new(s).unwrap();
        let de = DensityEvolution::new(&DeConfig::new(
            s,
            DegreeDistribution::regular(3, 27).unwrap(),
            LabelDistribution::uniform(&field),
        ))
        .unwrap();
        let mut eps = vec![0.0; s as usize];
        eps[0] = 0.15;
        group.bench_with_input(BenchmarkId::new("3_27_uniform", 1 << s), &eps, |b, eps| b.iter(|| de.run(eps)));
    }
    group.finish();
}

fn threshold(c: &mut Criterion) {
    let field = Field::new(2).unwrap();
    let de = DensityEvolution::new(&DeConfig::new(
        2,
        DegreeDistribution::regular(3, 6).unwrap(),
        optimal_label_distribution(&field, 1).unwrap(),
    ))
    .unwrap();
    c.bench_function("de_bisect_3_6_q4_optimal", |b| b.iter(|| de.bisect(&[0.0, 0.0], &[1.0, 0.0]).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = iterations, threshold
}
criterion_main!(benches);
