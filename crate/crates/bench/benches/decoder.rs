use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qmbc_bench::{regular_graph, zero_word_patterns};
use qmbc_core::decoder::{ml_decode, SetDecoder, DEFAULT_MAX_ITERS};

fn set_decoder(c: &mut Criterion) {
    let mut group = c.benchmark_group("set_decoder");
    for s in [2u32, 3, 4] {
        let graph = regular_graph(s, 3, 27, 513, 1);
        let patterns = zero_word_patterns(&graph, &[0.05 * s as f64, 0.0, 0.0, 0.0][..s as usize], 64, 2);
        group.bench_with_input(BenchmarkId::new("3_27_n513", 1 << s), &patterns, |b, patterns| {
            let mut dec = SetDecoder::new(&graph);
            let mut i = 0;
            b.iter(|| {
                i = (i + 1) % patterns.len();
                dec.decode_sets(&patterns[i], DEFAULT_MAX_ITERS).unwrap()
            });
        });
    }
    group.finish();
}

fn ml(c: &mut Criterion) {
    let graph = regular_graph(2, 3, 6, 96, 3);
    let patterns = zero_word_patterns(&graph, &[0.3, 0.1], 64, 4);
    c.bench_function("ml_decode_3_6_n96_q4", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % patterns.len();
            ml_decode(&graph, &patterns[i]).unwrap()
        });
    });
}

criterion_group!(benches, set_decoder, ml);
criterion_main!(benches);
