use thiserror::Error;

use crate::Vertex;

/// Errors produced by the hypergraph, oracle and estimation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a hypergraph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("invalid multiplicities {multiplicities:?}: each must be in [1, d] and they must sum to d = {d}")]
    InvalidMultiplicities { multiplicities: Vec<usize>, d: usize },

    #[error("query sets {first} and {second} are not disjoint")]
    NotDisjoint { first: usize, second: usize },

    #[error("expected {expected} sets or vertices, found {found}")]
    Arity { expected: usize, found: usize },

    #[error("hyperedge {0:?} repeats a vertex")]
    RepeatedVertex(Vec<Vertex>),

    #[error("duplicate hyperedge {0:?}")]
    DuplicateEdge(Vec<Vertex>),

    #[error("infeasible generator spec: requested {requested} edges but only {available} exist")]
    Infeasible { requested: u128, available: u128 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
