use num_bigint::BigUint;
use proptest::prelude::*;
use qmbc_core::ml_analysis::{
    consistent_weight_enum, ldpc_ml_monte_carlo, ldpc_ml_upper_bound, psi_exact_subfield, psi_lower_bound,
    snbre_failure, zero_sum_probability, OrderingStrategy,
};
use qmbc_core::sim::{run_ser_sweep, GraphMode};
use qmbc_core::{ChiTable, DegreeDistribution, ErasureProfile, ExperimentConfig, Field, QmbcParams};

proptest! {
    #[test]
    fn zero_sum_never_exceeds_one_over_q_minus_one(s in 2u32..=6, m in 2usize..40) {
        let q = 1usize << s;
        let p = zero_sum_probability(m, q).unwrap();
        let cap = 1.0 / (q - 1) as f64;
        if m == 2 {
            prop_assert!((p - cap).abs() < 1e-15);
        } else {
            prop_assert!(p < cap);
        }
    }

    #[test]
    fn weight_enumerator_totals(counts in proptest::collection::vec(0usize..12, 1..=4)) {
        let profile = ErasureProfile::erased(&counts).unwrap();
        let total = consistent_weight_enum(&profile).total();
        let bits: usize = counts.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
        prop_assert_eq!(total, BigUint::from(1u32) << bits);
    }

    #[test]
    fn exact_psi_dominates_the_lower_bound(e1 in 0usize..8, e2 in 0usize..8, rows in 1usize..12) {
        let f = Field::new(2).unwrap();
        let profile = ErasureProfile::erased(&[e1, e2]).unwrap();
        let exact = psi_exact_subfield(&f, &profile, rows).unwrap();
        let bound = psi_lower_bound(&profile, rows, &ChiTable::compute(&f), &OrderingStrategy::default());
        prop_assert!(bound <= exact * (1.0 + 1e-12), "{} > {}", bound, exact);
    }
}

#[test]
fn snbre_failure_grows_with_every_erasure_probability() {
    let f = Field::new(3).unwrap();
    let strategy = OrderingStrategy::default();
    let value = |eps: Vec<f64>| snbre_failure(&f, &QmbcParams::new(&f, eps).unwrap(), 40, 30, &strategy).unwrap().value;
    let base = vec![0.05, 0.03, 0.02];
    let v0 = value(base.clone());
    for j in 0..3 {
        let mut up = base.clone();
        up[j] += 0.03;
        assert!(value(up) >= v0, "type {}", j + 1);
    }
}

#[test]
fn ml_failure_does_not_depend_on_the_codeword() {
    let f = Field::new(2).unwrap();
    let params = QmbcParams::new(&f, vec![0.3, 0.1]).unwrap();
    let zero = ldpc_ml_monte_carlo(&f, 3, 6, 24, &params, 4000, 11, false).unwrap();
    let random = ldpc_ml_monte_carlo(&f, 3, 6, 24, &params, 4000, 11, true).unwrap();
    let pooled = (zero.failures + random.failures) as f64 / 8000.0;
    let sigma = (2.0 * pooled * (1.0 - pooled) / 4000.0).sqrt();
    assert!((zero.rate() - random.rate()).abs() <= 4.0 * sigma, "{} vs {}", zero.rate(), random.rate());
}

#[test]
fn partial_erasure_bound_is_below_full_erasure_bound() {
    let f = Field::new(2).unwrap();
    for e in [0.02, 0.04, 0.06] {
        let partial = ldpc_ml_upper_bound(&f, 3, 27, 252, &QmbcParams::new(&f, vec![e, 0.0]).unwrap()).unwrap();
        let full = ldpc_ml_upper_bound(&f, 3, 27, 252, &QmbcParams::new(&f, vec![0.0, e]).unwrap()).unwrap();
        assert!(partial.value < full.value, "eps {e}: {} vs {}", partial.value, full.value);
    }
}

#[test]
fn ser_falls_with_block_length_below_threshold() {
    let ser = |n: usize| {
        let mut config = ExperimentConfig::new(2, DegreeDistribution::regular(3, 27).unwrap(), n, vec![vec![0.13, 0.0]]);
        config.trials = 1500;
        config.seed = 5;
        config.graph_mode = GraphMode::Resample;
        run_ser_sweep(&config).unwrap()[0].ser
    };
    let (short, long) = (ser(513), ser(1026));
    assert!(long < short, "n=513: {short}, n=1026: {long}");
}
