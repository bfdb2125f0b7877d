//! Hyperedge estimation in d-uniform hypergraphs from subset queries.
//!
//! The hidden hypergraph is only reachable through an [`Oracle`], which
//! answers GPIS-style questions ("is there a hyperedge with exactly one
//! vertex in each of these sets?") and counts every question it is asked.
//! [`estimate_hyperedges`] combines exact counting on small sub-problems,
//! colour-coding sparsification, coarse estimation and importance sampling
//! into a `(1 ± ε)` estimate of the number of hyperedges.
//!
//! Brute-force counters in [`count`] give the ground truth for everything.

pub mod coarse;
pub mod count;
pub mod engine;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generate;
pub mod hypergraph;
pub mod importance;
pub mod io;
pub mod oracle;
pub mod profile;
pub mod rng;
pub mod sparsify;
pub mod tuple;

/// Vertex id; vertices of an `n`-vertex hypergraph are `0..n`.
pub type Vertex = u32;

pub use coarse::{coarse_estimate, verify_estimate, CoarseResult, GuessVector};
pub use count::{brute_count, brute_ordered_count, ordered_count};
pub use engine::{audit_state, estimate_hyperedges, EstimatorState, Phase, RunOutcome};
pub use error::{Error, Result};
pub use exact::{exact_count_or_exceeds, ExactOutcome};
pub use generate::{generate, GeneratorKind, GeneratorSpec};
pub use hypergraph::Hypergraph;
pub use importance::{importance_sample, WeightedEstimate};
pub use io::{read_hypergraph, write_hypergraph};
pub use oracle::{Oracle, OracleConfig, OracleMode, QueryCounts, QueryStats};
pub use profile::{ConstantsProfile, ProfileMode};
pub use sparsify::{sparsify, Coloring, HdHash};
pub use tuple::{CompactTuple, GeneralTuple, Part, PartiteTuple, TupleForm, VertexSet};
