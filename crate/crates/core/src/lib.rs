//! LDPC coding over GF(2^s) for the q-ary multi-bit channel (QMBC).
//!
//! A QMBC symbol is either received exactly or partially erased: with
//! probability `eps_j` only its `s - j` most significant bits are known. The
//! crate provides the field and subgroup machinery, the channel model, Tanner
//! graphs, a set-message iterative decoder with peeling and ML companions,
//! density evolution over subgroup-valued messages, resolvable edge labels and
//! the stopping-set-guided labeling algorithm, finite-length ML analysis, and
//! a Monte Carlo harness.

pub mod channel;
pub mod code;
pub mod de;
pub mod decoder;
pub mod error;
pub mod gf;
pub mod labeling;
pub mod ml_analysis;
pub mod rng;
pub mod sim;
pub mod subgroup;

pub use channel::{capacity, mutual_information_numeric, observe, QmbcParams, ReceivedSymbol};
pub use code::{DegreeDistribution, Edge, LabelDistribution, TannerGraph};
pub use de::{DeConfig, DensityEvolution, RegionPoint, ThresholdResult, Trajectory};
pub use decoder::{DecodeResult, MlOutcome, Outcome, SetDecoder};
pub use error::{Error, Result};
pub use gf::{Field, FieldElement, SymbolSet};
pub use labeling::{LabelOverride, LabelingPlan, OptimizeConfig, StoppingSetSample};
pub use ml_analysis::{AnalysisValue, ChiTable, ErasureProfile, Tag, WeightEnumerator};
pub use sim::{ExperimentConfig, GraphMode, LabelMode, SerPoint};
pub use subgroup::{Coset, Subgroup, SubgroupTable};
