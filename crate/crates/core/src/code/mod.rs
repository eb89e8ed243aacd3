//! GF(q) LDPC codes: degree and label distributions, Tanner graphs, ensemble
//! sampling, and the `qalist` file format.

mod distribution;
mod graph;
mod linalg;
mod qalist;

pub use distribution::{design_rate, DegreeDistribution, LabelDistribution};
pub use graph::{sample_graph, Edge, TannerGraph};
pub use linalg::{gf_rank, nullspace_basis, random_codeword};
pub use qalist::{parse_qalist, read_graph, to_qalist, write_graph};
