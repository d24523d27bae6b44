//! Packing spanning arborescences in multi-digraphs.
//!
//! The crate computes the fractional packing number `ν_f(D)` exactly, decides
//! root-constrained branching-packing feasibility, constructs packings of `k`
//! spanning arborescences plus a large extra branching whenever
//! `ν_f(D) > k + (d-1)/d`, and generates the extremal instances on which that
//! bound is tight.
//!
//! Everything is exhaustive and exact: intended for certified computation on
//! small instances, not for scale.

pub mod edge_list;
pub mod error;
pub mod feasibility;
pub mod graph;
pub mod limits;
pub mod partitions;
pub mod sharpness;
pub mod solver;
pub mod uncross;
pub mod vertex_set;

pub use error::{Error, HypothesisFailure, Result};
pub use graph::{Arc, ArcId, Digraph, Graph};
pub use partitions::{Rational, SubPartition};
pub use vertex_set::VertexSet;
