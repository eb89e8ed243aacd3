//! Monte Carlo symbol-erasure-rate experiments.

mod io;

pub use io::{load_ser_csv, read_sidecar, write_ser_csv, write_sidecar, Sidecar};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{observe, QmbcParams};
use crate::code::{sample_graph, DegreeDistribution, LabelDistribution, TannerGraph};
use crate::decoder::{Outcome, Peeler, SetDecoder, DEFAULT_MAX_ITERS};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, SymbolSet};
use crate::labeling::{divisor_fallback, optimize_labels, OptimizeConfig, DEFAULT_RUNS};
use crate::rng;

pub const DEFAULT_TRIALS: u64 = 10_000;

/// How edge labels are chosen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum LabelMode {
    /// i.i.d. uniform over the nonzero elements.
    Uniform,
    /// Uniform labels, then stopping-set-guided relabelling at every grid
    /// point. `eps = None` peels at the point's `eps_jmax` (or at the BEC
    /// threshold of the ensemble when that is zero).
    Optimized { jmax: usize, runs: usize, eps: Option<f64> },
    /// Every edge carries the same label.
    Single { label: u8 },
    /// i.i.d. labels with the given weights, indexed by field element.
    Explicit { weights: Vec<f64> },
}

impl LabelMode {
    pub fn optimized(jmax: usize) -> Self {
        LabelMode::Optimized {
            jmax,
            runs: DEFAULT_RUNS,
            eps: None,
        }
    }

    fn distribution(&self, field: &Field) -> Result<LabelDistribution> {
        match self {
            LabelMode::Uniform | LabelMode::Optimized { .. } => Ok(LabelDistribution::uniform(field)),
            LabelMode::Single { label } => LabelDistribution::degenerate(field, FieldElement::new(*label)),
            LabelMode::Explicit { weights } => LabelDistribution::new(weights.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMode {
    /// One graph for the whole sweep.
    #[default]
    Fixed,
    /// A fresh graph for every trial.
    Resample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub s: u32,
    pub dd: DegreeDistribution,
    pub n: usize,
    pub labels: LabelMode,
    /// Each entry is `eps_1..eps_s`.
    pub grid: Vec<Vec<f64>>,
    pub trials: u64,
    pub max_iters: usize,
    pub seed: u64,
    pub graph_mode: GraphMode,
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn new(s: u32, dd: DegreeDistribution, n: usize, grid: Vec<Vec<f64>>) -> Self {
        ExperimentConfig {
            s,
            dd,
            n,
            labels: LabelMode::Uniform,
            grid,
            trials: DEFAULT_TRIALS,
            max_iters: DEFAULT_MAX_ITERS,
            seed: 0,
            graph_mode: GraphMode::Fixed,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<Field> {
        let field = Field::new(self.s)?;
        if self.grid.is_empty() {
            return Err(Error::Config("the epsilon grid is empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        for eps in &self.grid {
            QmbcParams::new(&field, eps.clone())?;
        }
        self.labels.distribution(&field)?;
        Ok(field)
    }

    fn params(&self, field: &Field) -> Result<Vec<QmbcParams>> {
        self.grid.iter().map(|e| QmbcParams::new(field, e.clone())).collect()
    }
}

/// Per-point SER statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SerPoint {
    pub epsilon: Vec<f64>,
    pub trials: u64,
    pub erased_symbols: u64,
    pub ser: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub outcome_success: u64,
    pub outcome_stalled: u64,
    pub outcome_limit: u64,
}

impl SerPoint {
    fn from_counts(epsilon: Vec<f64>, n: usize, trials: &[(u64, Outcome)]) -> Self {
        let erased: u64 = trials.iter().map(|t| t.0).sum();
        let count = |o: Outcome| trials.iter().filter(|t| t.1 == o).count() as u64;
        let total = trials.len() as u64 * n as u64;
        let (ci_lo, ci_hi) = wilson_interval(erased, total);
        SerPoint {
            epsilon,
            trials: trials.len() as u64,
            erased_symbols: erased,
            ser: erased as f64 / total as f64,
            ci_lo,
            ci_hi,
            outcome_success: count(Outcome::Success),
            outcome_stalled: count(Outcome::Stalled),
            outcome_limit: count(Outcome::IterationLimit),
        }
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    const Z: f64 = 1.959_963_984_540_054;
    let nf = n as f64;
    let p = k as f64 / nf;
    let denom = 1.0 + Z * Z / nf;
    let centre = (p + Z * Z / (2.0 * nf)) / denom;
    let half = Z * (p * (1.0 - p) / nf + Z * Z / (4.0 * nf * nf)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Peeling probability for label optimization at the operating point `eps`.
fn labeling_eps(config: &ExperimentConfig, jmax: usize, fixed: Option<f64>, eps: &[f64]) -> f64 {
    if let Some(e) = fixed {
        return e;
    }
    let j = divisor_fallback(config.s as usize, jmax);
    match eps.get(j - 1) {
        Some(&e) if e > 0.0 => e,
        _ => crate::de::bec_threshold(&config.dd),
    }
}

fn base_graph(field: &Field, config: &ExperimentConfig, seed: u64) -> Result<TannerGraph> {
    let dist = config.labels.distribution(field)?;
    sample_graph(field, config.n, &config.dd, &dist, seed)
}

/// Applies the label mode at operating point `eps` to a uniformly labelled graph.
fn relabel(config: &ExperimentConfig, graph: TannerGraph, eps: &[f64], seed: u64) -> Result<TannerGraph> {
    match &config.labels {
        LabelMode::Optimized { jmax, runs, eps: fixed } => {
            let plan = optimize_labels(
                &graph,
                &OptimizeConfig {
                    jmax: *jmax,
                    runs: *runs,
                    eps: labeling_eps(config, *jmax, *fixed, eps),
                    seed: rng::derive_seed(seed, &[1]),
                },
            )?;
            plan.apply(&graph)
        }
        _ => Ok(graph),
    }
}

/// The graph a fixed-graph sweep decodes at grid point `point`.
pub fn sweep_graph(config: &ExperimentConfig, point: usize) -> Result<TannerGraph> {
    let field = config.validate()?;
    let eps = config
        .grid
        .get(point)
        .ok_or_else(|| Error::Config(format!("grid point {point} out of range")))?;
    let seed = rng::derive_seed(config.seed, &[0]);
    relabel(config, base_graph(&field, config, seed)?, eps, seed)
}

/// Zero codeword through the channel, set-message decoding, SER per point.
pub fn run_ser_sweep(config: &ExperimentConfig) -> Result<Vec<SerPoint>> {
    let field = config.validate()?;
    let params = config.params(&field)?;
    let base_seed = rng::derive_seed(config.seed, &[0]);
    let base = match config.graph_mode {
        GraphMode::Fixed => Some(base_graph(&field, config, base_seed)?),
        GraphMode::Resample => None,
    };
    let mut points = Vec::with_capacity(params.len());
    for (p, chan) in params.iter().enumerate() {
        let fixed = match &base {
            Some(g) => Some(relabel(config, g.clone(), chan.epsilon(), base_seed)?),
            None => None,
        };
        let run = |graph: &TannerGraph, decoder: &mut SetDecoder, t: u64| -> Result<(u64, Outcome)> {
            let mut r = rng::stream(config.seed, &[1, p as u64, t]);
            let sets: Vec<SymbolSet> = (0..graph.n())
                .map(|_| observe(FieldElement::ZERO, chan.sample_type(&mut r)))
                .collect();
            let res = decoder.decode_sets(&sets, config.max_iters)?;
            Ok((res.unresolved_count() as u64, res.outcome))
        };
        let trials: Vec<(u64, Outcome)> = match &fixed {
            Some(g) => (0..config.trials)
                .into_par_iter()
                .map_init(|| SetDecoder::new(g), |dec, t| run(g, dec, t))
                .collect::<Result<_>>()?,
            None => (0..config.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = rng::derive_seed(config.seed, &[2, p as u64, t]);
                    let g = relabel(config, base_graph(&field, config, seed)?, chan.epsilon(), seed)?;
                    run(&g, &mut SetDecoder::new(&g), t)
                })
                .collect::<Result<_>>()?,
        };
        points.push(SerPoint::from_counts(chan.epsilon().to_vec(), config.n, &trials));
    }
    Ok(points)
}

/// Bit-level comparison: the same channel draws, but every symbol is sent as
/// `s` bits over a binary graph of length `s * n` from the same ensemble,
/// a type-`j` event erasing the `j` least significant bits, and decoding is
/// plain peeling. A symbol counts as erased if any of its bits stays erased.
pub fn run_binary_baseline(config: &ExperimentConfig) -> Result<Vec<SerPoint>> {
    let field = config.validate()?;
    let params = config.params(&field)?;
    let s = config.s as usize;
    let binary = Field::new(1)?;
    let ones = LabelDistribution::uniform(&binary);
    let bit_graph = |seed: u64| sample_graph(&binary, s * config.n, &config.dd, &ones, seed);
    let fixed = match config.graph_mode {
        GraphMode::Fixed => Some(bit_graph(rng::derive_seed(config.seed, &[0]))?),
        GraphMode::Resample => None,
    };
    let mut points = Vec::with_capacity(params.len());
    for (p, chan) in params.iter().enumerate() {
        let run = |peeler: &mut Peeler, t: u64| -> (u64, Outcome) {
            let mut r = rng::stream(config.seed, &[1, p as u64, t]);
            let mut erased = vec![false; s * config.n];
            for v in 0..config.n {
                let j = chan.sample_type(&mut r);
                erased[v * s..v * s + j].iter_mut().for_each(|b| *b = true);
            }
            peeler.peel(&mut erased);
            let count = erased.chunks(s).filter(|bits| bits.iter().any(|&b| b)).count() as u64;
            (count, if count == 0 { Outcome::Success } else { Outcome::Stalled })
        };
        let trials: Vec<(u64, Outcome)> = match &fixed {
            Some(g) => (0..config.trials)
                .into_par_iter()
                .map_init(|| Peeler::new(g), |peeler, t| run(peeler, t))
                .collect(),
            None => (0..config.trials)
                .into_par_iter()
                .map(|t| -> Result<(u64, Outcome)> {
                    let g = bit_graph(rng::derive_seed(config.seed, &[2, p as u64, t]))?;
                    Ok(run(&mut Peeler::new(&g), t))
                })
                .collect::<Result<_>>()?,
        };
        points.push(SerPoint::from_counts(chan.epsilon().to_vec(), config.n, &trials));
    }
    Ok(points)
}
