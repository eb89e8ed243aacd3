use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::parse::{parse_labels, parse_list, parse_sweep, LabelSpec, Sweep};

/// A comma-separated list given as one flag value.
pub type FloatList = Vec<f64>;

#[derive(Debug, Parser)]
#[command(
    name = "qmbc",
    version,
    about = "LDPC codes over the q-ary multi-bit channel",
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "QMBC_THREADS")]
    pub threads: Option<usize>,
    /// Output file for the command's CSV artifact (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Text file of `key = value` lines supplying defaults for long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Channel capacity in symbols and bits per channel use.
    Capacity(CapacityArgs),
    /// Density-evolution threshold along one direction.
    DeThreshold(DeThresholdArgs),
    /// Density-evolution threshold region over a fan of directions.
    DeRegion(DeRegionArgs),
    /// Monte Carlo symbol erasure rate sweep.
    Simulate(SimulateArgs),
    /// Stopping-set-guided relabelling of a graph file.
    LabelOptimize(LabelOptimizeArgs),
    /// Expected ML failure over the random ensemble.
    MlSnbre(MlSnbreArgs),
    /// Union bound on ML failure for a regular LDPC ensemble.
    MlLdpcBound(MlLdpcArgs),
    /// Sample a Tanner graph and write it in q-ary alist format.
    GraphGen(GraphGenArgs),
    /// Parse and check a graph file.
    GraphValidate(GraphValidateArgs),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Bits per symbol (q = 2^s).
    #[arg(long)]
    pub s: u32,
    /// Erasure probabilities eps_1..eps_s, comma separated.
    #[arg(long, value_parser = parse_list)]
    pub eps: FloatList,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Bits per symbol (q = 2^s).
    #[arg(long)]
    pub s: u32,
    /// Variable-node degree.
    #[arg(long)]
    pub dv: usize,
    /// Check-node degree.
    #[arg(long)]
    pub dc: usize,
}

#[derive(Debug, Args)]
pub struct DeArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Edge labels: uniform, optimal, single:<element> or explicit:<w_0,...,w_{q-1}>.
    #[arg(long, default_value = "uniform", value_parser = parse_labels)]
    pub labels: LabelSpec,
    /// Dominant erasure type, used by `--labels optimal`.
    #[arg(long, default_value_t = 1)]
    pub jmax: usize,
    /// Target error probability declaring convergence.
    #[arg(long, default_value_t = qmbc_core::de::DEFAULT_DELTA)]
    pub delta: f64,
    /// Iteration cap per density-evolution run.
    #[arg(long, default_value_t = qmbc_core::de::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    /// Bisection tolerance on the threshold (probability units).
    #[arg(long, default_value_t = qmbc_core::de::DEFAULT_BISECTION_TOL)]
    pub tol: f64,
    /// Allow s = 5 (slow, large subgroup table).
    #[arg(long)]
    pub allow_large_field: bool,
}

#[derive(Debug, Args)]
pub struct DeThresholdArgs {
    #[command(flatten)]
    pub de: DeArgs,
    /// Search direction d_1..d_s, comma separated.
    #[arg(long, value_parser = parse_list)]
    pub direction: FloatList,
    /// Starting point eps_1..eps_s (default: origin).
    #[arg(long, value_parser = parse_list)]
    pub base: Option<FloatList>,
    /// Also write the trajectory at this point to the given file.
    #[arg(long, requires = "trajectory_eps")]
    pub trajectory_out: Option<PathBuf>,
    /// Point eps_1..eps_s for `--trajectory-out`.
    #[arg(long, value_parser = parse_list)]
    pub trajectory_eps: Option<FloatList>,
}

#[derive(Debug, Args)]
pub struct DeRegionArgs {
    #[command(flatten)]
    pub de: DeArgs,
    /// Number of directions in the fan.
    #[arg(long, default_value_t = 31)]
    pub resolution: usize,
    /// Plane of the fan as two 1-based erasure types, e.g. `1,2`.
    #[arg(long, default_value = "1,2", value_parser = parse_list)]
    pub axes: FloatList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphModeArg {
    Fixed,
    Resample,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Code length in symbols.
    #[arg(long)]
    pub n: usize,
    /// uniform, optimized, optimal, single:<element> or explicit:<w_0,...,w_{q-1}>.
    #[arg(long, default_value = "uniform", value_parser = parse_labels)]
    pub labels: LabelSpec,
    /// Dominant erasure type for `optimized` and `optimal`.
    #[arg(long, default_value_t = 1)]
    pub jmax: usize,
    /// Peeling runs of the labeling algorithm.
    #[arg(long, default_value_t = qmbc_core::labeling::DEFAULT_RUNS)]
    pub runs: usize,
    /// Peeling probability of the labeling algorithm (default: eps_jmax of each point).
    #[arg(long)]
    pub label_eps: Option<f64>,
    /// Grid: `j=<type>:<start>:<stop>:<points>` or `;`-separated eps vectors.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Sweep,
    /// Trials per grid point.
    #[arg(long, default_value_t = qmbc_core::sim::DEFAULT_TRIALS)]
    pub trials: u64,
    /// Decoder iteration cap.
    #[arg(long, default_value_t = qmbc_core::decoder::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    /// One graph per sweep, or a fresh graph per trial.
    #[arg(long, value_enum, default_value = "fixed")]
    pub graph: GraphModeArg,
    /// Run the bit-expanded binary peeling baseline instead.
    #[arg(long)]
    pub binary: bool,
    /// JSON sidecar path (default: `<out>.json` when `--out` is given).
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LabelOptimizeArgs {
    /// Input graph in q-ary alist format.
    #[arg(long)]
    pub graph: PathBuf,
    /// Dominant erasure type.
    #[arg(long, default_value_t = 1)]
    pub jmax: usize,
    /// Peeling runs.
    #[arg(long, default_value_t = qmbc_core::labeling::DEFAULT_RUNS)]
    pub runs: usize,
    /// Peeling erasure probability (default: BEC threshold of the graph's degrees).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Also write the relabelled graph here.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MlSnbreArgs {
    /// Bits per symbol (q = 2^s).
    #[arg(long)]
    pub s: u32,
    /// Code length in symbols.
    #[arg(long)]
    pub n: usize,
    /// Code dimension in symbols.
    #[arg(long)]
    pub k: usize,
    /// Grid: `j=<type>:<start>:<stop>:<points>` or `;`-separated eps vectors.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Sweep,
    /// Random orderings tried by the lower bound on partial independence.
    #[arg(long, default_value_t = qmbc_core::ml_analysis::DEFAULT_RANDOM_ORDERINGS)]
    pub orderings: usize,
}

#[derive(Debug, Args)]
pub struct MlLdpcArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Code length in symbols.
    #[arg(long)]
    pub n: usize,
    /// Grid: `j=<type>:<start>:<stop>:<points>` or `;`-separated eps vectors.
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Sweep,
    /// Treat every partial erasure as a full erasure.
    #[arg(long)]
    pub full_erasure: bool,
}

#[derive(Debug, Args)]
pub struct GraphGenArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Code length in symbols.
    #[arg(long)]
    pub n: usize,
    /// uniform, optimal, single:<element> or explicit:<w_0,...,w_{q-1}>.
    #[arg(long, default_value = "uniform", value_parser = parse_labels)]
    pub labels: LabelSpec,
    /// Dominant erasure type for `optimal`.
    #[arg(long, default_value_t = 1)]
    pub jmax: usize,
}

#[derive(Debug, Args)]
pub struct GraphValidateArgs {
    /// Graph file in q-ary alist format.
    #[arg(long)]
    pub graph: PathBuf,
}
