use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Arc, ArcId, Digraph};
use crate::vertex_set::VertexSet;

/// Why an arc set is not a branching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchingDefect {
    UnknownArc(ArcId),
    RepeatedArc(ArcId),
    /// Two arcs share this head.
    InDegree(usize),
    /// This vertex lies on a directed cycle.
    Cycle(usize),
}

impl fmt::Display for BranchingDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchingDefect::UnknownArc(id) => write!(f, "arc {id} is not in the digraph"),
            BranchingDefect::RepeatedArc(id) => write!(f, "arc {id} is used twice"),
            BranchingDefect::InDegree(v) => write!(f, "vertex {v} has in-degree at least 2"),
            BranchingDefect::Cycle(v) => write!(f, "vertex {v} lies on a cycle"),
        }
    }
}

/// Checks that `arcs` form a spanning branching of `d` and returns its roots.
///
/// With every in-degree at most one, acyclicity of the underlying forest is
/// the same as having no directed cycle, which is checked by walking parents.
pub fn is_branching(d: &Digraph, arcs: &[ArcId]) -> Result<VertexSet, BranchingDefect> {
    let mut seen = BTreeSet::new();
    let mut parent = vec![None; d.n()];
    for &id in arcs {
        let a = d.arc(id).ok_or(BranchingDefect::UnknownArc(id))?;
        if !seen.insert(id) {
            return Err(BranchingDefect::RepeatedArc(id));
        }
        if parent[a.head].is_some() {
            return Err(BranchingDefect::InDegree(a.head));
        }
        parent[a.head] = Some(a.tail);
    }
    for start in 0..d.n() {
        let mut v = start;
        for _ in 0..d.n() {
            match parent[v] {
                Some(p) => v = p,
                None => break,
            }
        }
        if parent[v].is_some() {
            return Err(BranchingDefect::Cycle(v));
        }
    }
    Ok((0..d.n()).filter(|&v| parent[v].is_none()).collect())
}

/// One tree of a branching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    pub root: usize,
    pub vertices: VertexSet,
}

/// Components of a branching on `n` vertices, ordered by root. The arcs must
/// already form a branching.
pub fn components(n: usize, arcs: &[Arc]) -> Vec<Component> {
    let mut parent = vec![usize::MAX; n];
    for a in arcs {
        parent[a.head] = a.tail;
    }
    let root_of = |mut v: usize| {
        while parent[v] != usize::MAX {
            v = parent[v];
        }
        v
    };
    let mut out: Vec<Component> = (0..n)
        .filter(|&v| parent[v] == usize::MAX)
        .map(|root| Component { root, vertices: VertexSet::EMPTY })
        .collect();
    for v in 0..n {
        let r = root_of(v);
        let c = out.iter_mut().find(|c| c.root == r).expect("root listed");
        c.vertices.insert(v);
    }
    out
}
