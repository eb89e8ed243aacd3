//! Shared fixtures for the benchmarks.

use qmbc_core::channel::observe;
use qmbc_core::code::sample_graph;
use qmbc_core::rng::stream;
use qmbc_core::{DegreeDistribution, Field, FieldElement, LabelDistribution, QmbcParams, SymbolSet, TannerGraph};

/// A regular `(dv, dc)` graph over GF(2^s) with uniform labels.
pub fn regular_graph(s: u32, dv: usize, dc: usize, n: usize, seed: u64) -> TannerGraph {
    let field = Field::new(s).expect("valid field");
    let dd = DegreeDistribution::regular(dv, dc).expect("valid degrees");
    sample_graph(&field, n, &dd, &LabelDistribution::uniform(&field), seed).expect("feasible length")
}

/// `count` independent zero-codeword channel outputs for `graph`.
pub fn zero_word_patterns(graph: &TannerGraph, eps: &[f64], count: usize, seed: u64) -> Vec<Vec<SymbolSet>> {
    let params = QmbcParams::new(graph.field(), eps.to_vec()).expect("valid channel");
    (0..count as u64)
        .map(|t| {
            let mut r = stream(seed, &[t]);
            (0..graph.n())
                .map(|_| observe(FieldElement::ZERO, params.sample_type(&mut r)))
                .collect()
        })
        .collect()
}
