//! Subpartition conditions for packing spanning branchings.
//!
//! Three characterizations are decided exhaustively over all subpartitions:
//!
//! * **(1)** `k+1` arc-disjoint spanning branchings `F_i` with
//!   `|R(F_i)| = c_i` and `R(F_i) ⊇ U_i` exist iff for every `I ⊆ [k+1]` and
//!   every subpartition `𝒫`:
//!   `Σ_{X∈𝒫} d⁻(X) ≥ Σ_{X∈𝒫} |P_I(X)| − Σ_{i∈I} (c_i − |U_i|)` with
//!   `P_I(X) = {i ∈ I : X ∩ U_i = ∅}`.
//! * **(2)/(3)**, the specialization to `k` spanning arborescences plus one
//!   `c`-branching whose roots contain `U`:
//!   `Σ d⁻(X) ≥ k(|𝒫|−1)` and
//!   `Σ d⁻(X) ≥ k(|𝒫|−1) + #{X ∈ 𝒫 : X ∩ U = ∅} − (c − |U|)`.
//! * `k` arc-disjoint spanning arborescences exist iff `ν_f(D) ≥ k`.
//!
//! Violations are reported for the first subpartition in canonical order.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::limits;
use crate::partitions::{self, enumerate_subpartitions, SubPartition};
use crate::vertex_set::VertexSet;

/// Target root count `c` and forced roots `U` for one spanning branching.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchingSpec {
    pub roots: usize,
    pub forced: VertexSet,
}

impl BranchingSpec {
    pub fn new(roots: usize, forced: VertexSet) -> Result<Self> {
        if forced.len() > roots {
            return Err(Error::InvalidParameter(format!(
                "{} forced roots exceed the root count {roots}",
                forced.len()
            )));
        }
        Ok(BranchingSpec { roots, forced })
    }

    /// A spanning arborescence: one root, none forced.
    pub fn arborescence() -> Self {
        BranchingSpec { roots: 1, forced: VertexSet::EMPTY }
    }

    fn slack(&self) -> i64 {
        self.roots as i64 - self.forced.len() as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Inequality {
    #[serde(rename = "(1)")]
    PackBranching,
    #[serde(rename = "(2)")]
    Arborescences,
    #[serde(rename = "(3)")]
    ExtraBranching,
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Inequality::PackBranching => "(1)",
            Inequality::Arborescences => "(2)",
            Inequality::ExtraBranching => "(3)",
        })
    }
}

/// A subpartition (and index set) on which a condition fails: `lhs < rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub inequality: Inequality,
    pub parts: SubPartition,
    /// 1-based branching indices.
    #[serde(rename = "I")]
    pub index_set: Vec<usize>,
    pub lhs: i64,
    pub rhs: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "inequality {} fails at {} with I = {:?}: {} < {}",
            self.inequality, self.parts, self.index_set, self.lhs, self.rhs
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible(Violation),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            Verdict::Feasible => None,
            Verdict::Infeasible(v) => Some(v),
        }
    }
}

fn check_spec(n: usize, spec: &BranchingSpec) -> Result<()> {
    BranchingSpec::new(spec.roots, spec.forced)?;
    if spec.roots > n {
        return Err(Error::InvalidParameter(format!(
            "root count {} exceeds the vertex count {n}",
            spec.roots
        )));
    }
    if !spec.forced.within(n) {
        return Err(Error::InvalidParameter(format!("forced roots {} out of range", spec.forced)));
    }
    Ok(())
}

/// Decides condition (1) for `specs.len()` branchings.
///
/// For the first violated subpartition the reported `I` is the set of indices
/// with positive contribution `|{X : X ∩ U_i = ∅}| − (c_i − |U_i|)`, which
/// maximizes the right-hand side.
pub fn check_pack_branching(d: &Digraph, specs: &[BranchingSpec]) -> Result<Verdict> {
    if specs.is_empty() {
        return Err(Error::InvalidParameter("at least one branching spec is required".into()));
    }
    for s in specs {
        check_spec(d.n(), s)?;
    }
    limits::guard(d.n())?;
    let table = d.in_degree_table();
    let mut contrib = vec![0i64; specs.len()];
    let mut it = enumerate_subpartitions(d.n(), 1);
    while let Some(parts) = it.advance() {
        let lhs = partitions::sum_over(&table, parts) as i64;
        for (c, s) in contrib.iter_mut().zip(specs) {
            let free = parts.iter().filter(|x| x.is_disjoint(s.forced)).count() as i64;
            *c = free - s.slack();
        }
        let rhs: i64 = contrib.iter().filter(|&&c| c > 0).sum();
        if lhs < rhs {
            let index_set = contrib
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(i, _)| i + 1)
                .collect();
            return Ok(Verdict::Infeasible(Violation {
                inequality: Inequality::PackBranching,
                parts: SubPartition::new(parts.to_vec())?,
                index_set,
                lhs,
                rhs,
            }));
        }
    }
    Ok(Verdict::Feasible)
}

/// Decides (2) and (3): `k` spanning arborescences plus a spanning branching
/// with exactly `c` roots containing `forced`.
///
/// `k = 0` is accepted; (2) is then vacuous and (3) is condition (1) for a
/// single branching.
pub fn check_k_plus_extra(d: &Digraph, k: usize, c: usize, forced: VertexSet) -> Result<Verdict> {
    check_spec(d.n(), &BranchingSpec { roots: c, forced })?;
    limits::guard(d.n())?;
    let table = d.in_degree_table();
    let slack = c as i64 - forced.len() as i64;
    let k = k as i64;
    let mut it = enumerate_subpartitions(d.n(), 1);
    while let Some(parts) = it.advance() {
        let lhs = partitions::sum_over(&table, parts) as i64;
        let base = k * (parts.len() as i64 - 1);
        let free = parts.iter().filter(|x| x.is_disjoint(forced)).count() as i64;
        let failed = if lhs < base {
            Some((Inequality::Arborescences, base, k))
        } else if lhs < base + free - slack {
            Some((Inequality::ExtraBranching, base + free - slack, k + 1))
        } else {
            None
        };
        if let Some((inequality, rhs, top)) = failed {
            return Ok(Verdict::Infeasible(Violation {
                inequality,
                parts: SubPartition::new(parts.to_vec())?,
                index_set: (1..=top as usize).collect(),
                lhs,
                rhs,
            }));
        }
    }
    Ok(Verdict::Feasible)
}

/// `k` arc-disjoint spanning arborescences exist iff `ν_f(D) ≥ k`. A violation
/// carries the minimizing subpartition of `ν_f` against inequality (2).
pub fn check_spanning_arborescences(d: &Digraph, k: usize) -> Result<Verdict> {
    if d.n() < 2 {
        return Err(Error::TooFewVertices(d.n()));
    }
    if k == 0 {
        return Ok(Verdict::Feasible);
    }
    let nu = partitions::nu_f_digraph(d)?;
    if nu.value >= partitions::rational(k as i64, 1) {
        return Ok(Verdict::Feasible);
    }
    let parts = nu.witness;
    let lhs: usize = parts.parts().iter().map(|&x| d.in_degree(x)).sum();
    Ok(Verdict::Infeasible(Violation {
        inequality: Inequality::Arborescences,
        rhs: (k * (parts.len() - 1)) as i64,
        lhs: lhs as i64,
        index_set: (1..=k).collect(),
        parts,
    }))
}
