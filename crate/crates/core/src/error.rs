use thiserror::Error;

use crate::graph::ArcId;
use crate::partitions::{Rational, SubPartition};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("loop at vertex {0}: loops are not allowed")]
    Loop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0} vertices exceed the bit-set capacity of 64")]
    TooManyVertices(usize),
    #[error("duplicate arc id {0}")]
    DuplicateArc(ArcId),
    #[error("unknown arc id {0}")]
    UnknownArc(ArcId),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("ratio undefined on a graph with {0} vertices (need at least 2)")]
    TooFewVertices(usize),
    #[error("{n} vertices exceed the size guard of {limit} (set ARBORPACK_MAX_N to override)")]
    SizeGuard { n: usize, limit: usize },
    #[error("{arcs} arcs exceed the exhaustive search guard of {limit}")]
    ArcGuard { arcs: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a subpartition: {0}")]
    NotSubPartition(String),
    #[error("invalid elimination step: {0}")]
    InvalidStep(String),
    #[error(transparent)]
    HypothesisFails(Box<HypothesisFailure>),
    #[error("construction failure: {0}")]
    Construction(String),
}

/// `ν_f(D) ≤ k + (d-1)/d`, with a subpartition attaining `ν_f`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("hypothesis fails: nu_f = {value} {relation} k+(d-1)/d = {bound}")]
pub struct HypothesisFailure {
    pub value: Rational,
    pub bound: Rational,
    /// `"="` or `"<"`.
    pub relation: &'static str,
    pub witness: SubPartition,
}
