//! Packing `k` arc-disjoint spanning arborescences together with one extra
//! spanning branching.
//!
//! Two producers share one certificate format:
//!
//! * [`solve_exhaustive`] is a pruned backtracking search, exact on small
//!   instances and used as the oracle everywhere else.
//! * [`solve_theorem7`] follows the inductive construction: it picks the
//!   number of roots of the extra branching, finds a packing with the fewest
//!   vertices in its smallest component, and shrinks tight sets until a
//!   contraction reduces the instance. Every step is checked and the result
//!   is verified; if a step diverges, the oracle answers instead and the
//!   divergence is recorded in the trace.
//!
//! [`verify_theorem7`] checks any certificate independently of how it was made.

mod branching;
mod proof;
mod search;
mod verify;

use serde::{Deserialize, Serialize};

use crate::graph::{Arc, ArcId};
use crate::vertex_set::VertexSet;

pub use branching::{components, is_branching, BranchingDefect, Component};
pub use proof::{
    minimal_violating_set, solve_theorem7, solve_theorem7_traced, CaseTag, ProofOptions,
    ProofTrace, TightSet, TraceStep,
};
pub use search::{find_arborescence_packing, find_branching_packing, solve_exhaustive};
pub use verify::{verify_theorem7, Clause, Failure, VerificationReport};

/// A spanning arborescence: one root, an in-arc at every other vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arborescence {
    pub root: usize,
    pub arcs: Vec<Arc>,
}

/// A spanning branching given by its arcs and the vertices without an in-arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branching {
    pub roots: VertexSet,
    pub arcs: Vec<Arc>,
}

impl Branching {
    pub fn arc_ids(&self) -> Vec<ArcId> {
        self.arcs.iter().map(|a| a.id).collect()
    }
}

impl Arborescence {
    pub fn arc_ids(&self) -> Vec<ArcId> {
        self.arcs.iter().map(|a| a.id).collect()
    }
}

/// Which producer built a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "proof-trace")]
    ProofTrace,
}

/// `k` arc-disjoint spanning arborescences plus one spanning branching,
/// all arc-disjoint. Arcs are `[tail, head, id]` triples of the input digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingCertificate {
    pub k: usize,
    pub d: usize,
    pub trees: Vec<Arborescence>,
    pub extra: Branching,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<ProofTrace>,
}

/// Arc count the extra branching must exceed, as the least admissible
/// integer: `⌊(d-1)(n-1)/d⌋ + 1`.
pub fn min_extra_arcs(n: usize, d: usize) -> usize {
    (d - 1) * n.saturating_sub(1) / d + 1
}
