use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use qmbc_core::channel::observe;
use qmbc_core::code::{random_codeword, sample_graph, to_qalist};
use qmbc_core::decoder::{peel_binary, Direction, Outcome, SetDecoder};
use qmbc_core::rng::stream;
use qmbc_core::{DegreeDistribution, Field, FieldElement, LabelDistribution, SubgroupTable, SymbolSet, TannerGraph};
use rand::Rng;

fn graph(s: u32, n: usize, equal_labels: bool, seed: u64) -> TannerGraph {
    let f = Field::new(s).unwrap();
    let labels = if equal_labels {
        LabelDistribution::degenerate(&f, f.alpha()).unwrap()
    } else {
        LabelDistribution::uniform(&f)
    };
    sample_graph(&f, n, &DegreeDistribution::regular(3, 6).unwrap(), &labels, seed).unwrap()
}

fn random_types(n: usize, s: u32, erase: f64, seed: u64) -> Vec<usize> {
    let mut r = stream(seed, &[]);
    (0..n)
        .map(|_| if r.random_bool(erase) { r.random_range(1..=s as usize) } else { 0 })
        .collect()
}

fn channel(word: &[FieldElement], types: &[usize]) -> Vec<SymbolSet> {
    word.iter().zip(types).map(|(&x, &j)| observe(x, j)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn final_sets_contain_the_codeword_and_sizes_ignore_it(s in 2u32..=4, seed in any::<u64>(), erase in 0.05f64..0.8) {
        let g = graph(s, 24, false, seed);
        let types = random_types(24, s, erase, seed ^ 1);
        let word = random_codeword(&g, &mut stream(seed, &[2]));
        let zero = vec![FieldElement::ZERO; 24];
        let a = SetDecoder::new(&g).decode_sets(&channel(&word, &types), 500).unwrap();
        let b = SetDecoder::new(&g).decode_sets(&channel(&zero, &types), 500).unwrap();
        for (v, set) in a.sets.iter().enumerate() {
            prop_assert!(set.contains(word[v]));
            prop_assert_eq!(set.len(), b.sets[v].len());
        }
        prop_assert_eq!(a.outcome, b.outcome);
    }

    #[test]
    fn messages_only_shrink(s in 2u32..=4, seed in any::<u64>(), erase in 0.05f64..0.8) {
        let g = graph(s, 24, false, seed);
        let types = random_types(24, s, erase, seed ^ 1);
        let word = random_codeword(&g, &mut stream(seed, &[2]));
        let mut dec = SetDecoder::new(&g);
        dec.enable_trace();
        dec.decode_sets(&channel(&word, &types), 500).unwrap();
        let mut last: HashMap<(usize, bool), u64> = HashMap::new();
        for e in dec.take_trace() {
            let key = (e.edge, e.direction == Direction::CheckToVar);
            if let Some(prev) = last.insert(key, e.mask) {
                prop_assert_eq!(e.mask & !prev, 0, "edge {} grew", e.edge);
            }
        }
    }

    #[test]
    fn equal_labels_reduce_to_peeling(s in 2u32..=4, seed in any::<u64>(), erase in 0.05f64..0.8) {
        let g = graph(s, 24, true, seed);
        let types = random_types(24, s, erase, seed ^ 1);
        let result = SetDecoder::new(&g).decode_sets(&channel(&[FieldElement::ZERO; 24], &types), 500).unwrap();
        let erased: Vec<bool> = types.iter().map(|&j| j > 0).collect();
        let cleared = peel_binary(&g, &erased).iter().all(|x| !x);
        prop_assert_eq!(result.outcome == Outcome::Success, cleared);
    }
}

#[test]
fn zero_word_messages_stay_inside_the_subgroup_table() {
    for s in 2..=4u32 {
        let table = SubgroupTable::new(&Field::new(s).unwrap()).unwrap();
        let mut seen = HashSet::new();
        for seed in 0..50 {
            let g = graph(s, 36, false, seed);
            let types = random_types(36, s, 0.5, seed + 1000);
            let mut dec = SetDecoder::new(&g);
            dec.enable_trace();
            dec.decode_sets(&channel(&vec![FieldElement::ZERO; 36], &types), 500).unwrap();
            for e in dec.take_trace() {
                let idx = table.index_of(SymbolSet::from_mask(e.mask));
                assert!(idx.is_some(), "mask {:#x} is not a subgroup", e.mask);
                seen.insert(e.mask);
            }
        }
        assert!(seen.len() <= table.len());
    }
}

#[test]
fn sampled_graphs_balance_degrees_and_serialize_canonically() {
    for seed in 0..10 {
        let g = graph(3, 48, false, seed);
        let var: usize = (0..g.n()).map(|v| g.var_degree(v)).sum();
        let chk: usize = (0..g.m()).map(|c| g.check_degree(c)).sum();
        assert_eq!(var, chk);
        assert_eq!(to_qalist(&g), to_qalist(&graph(3, 48, false, seed)));
    }
}
