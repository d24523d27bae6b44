//! Subpartition enumeration and the exact extremal ratios `ν_f(D)`, `ν_f(G)`
//! and `γ_f(G)`.
//!
//! A subpartition of `V` is a family of pairwise disjoint nonempty subsets
//! that need not cover `V`. All ratios are computed exhaustively with exact
//! rational arithmetic, so callers are bounded by [`crate::limits`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::limits;
use crate::vertex_set::VertexSet;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `k + (d-1)/d`.
pub fn packing_bound(k: usize, d: usize) -> Rational {
    assert!(d >= 1, "d must be positive");
    rational((k * d + d - 1) as i64, d as i64)
}

/// Pairwise disjoint nonempty vertex sets in canonical order (parts sorted by
/// least element). The derived `Ord` is the lexicographic order on the
/// sequence of sorted parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<VertexSet>", into = "Vec<VertexSet>")]
pub struct SubPartition {
    parts: Vec<VertexSet>,
}

impl SubPartition {
    pub fn new(mut parts: Vec<VertexSet>) -> Result<Self> {
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::NotSubPartition("empty part".into()));
        }
        let mut seen = VertexSet::EMPTY;
        for p in &parts {
            if !p.is_disjoint(seen) {
                return Err(Error::NotSubPartition(format!("part {p} overlaps an earlier part")));
            }
            seen = seen | *p;
        }
        parts.sort();
        Ok(SubPartition { parts })
    }

    pub fn from_lists(lists: &[&[usize]]) -> Result<Self> {
        SubPartition::new(lists.iter().map(|l| l.iter().copied().collect()).collect())
    }

    /// `{{0}, {1}, .., {n-1}}`.
    pub fn singletons(n: usize) -> Self {
        SubPartition {
            parts: (0..n).map(VertexSet::singleton).collect(),
        }
    }

    pub(crate) fn from_canonical(parts: Vec<VertexSet>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] < w[1]));
        SubPartition { parts }
    }

    pub fn parts(&self) -> &[VertexSet] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `∪𝒫`.
    pub fn union(&self) -> VertexSet {
        self.parts.iter().fold(VertexSet::EMPTY, |acc, p| acc | *p)
    }

    pub fn is_partition_of(&self, n: usize) -> bool {
        self.union() == VertexSet::full(n)
    }

    pub fn within(&self, n: usize) -> bool {
        self.union().within(n)
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.to_vec()).collect()
    }
}

impl TryFrom<Vec<VertexSet>> for SubPartition {
    type Error = Error;
    fn try_from(parts: Vec<VertexSet>) -> Result<Self> {
        SubPartition::new(parts)
    }
}

impl From<SubPartition> for Vec<VertexSet> {
    fn from(p: SubPartition) -> Self {
        p.parts
    }
}

impl fmt::Display for SubPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Root,
    Open(usize),
    Extend(usize),
}

#[derive(Clone, Debug)]
struct Frame {
    step: Step,
    cursor: usize,
}

/// Streams the subpartitions of `{0..n-1}` in ascending canonical order.
///
/// The search tree builds parts one element at a time: from a node, first
/// close the last part and open a new one (its least element must exceed the
/// least element of the closed part), then extend the last part with a larger
/// element. A pre-order walk of that tree is exactly the lexicographic order.
///
/// [`SubPartitions::advance`] borrows the current parts without allocating;
/// the [`Iterator`] impl clones them into owned [`SubPartition`]s.
#[derive(Clone, Debug)]
pub struct SubPartitions {
    n: usize,
    min_parts: usize,
    covering: bool,
    parts: Vec<VertexSet>,
    used: VertexSet,
    stack: Vec<Frame>,
    started: bool,
}

impl SubPartitions {
    fn new(n: usize, min_parts: usize, covering: bool) -> Self {
        assert!(n <= crate::vertex_set::MAX_VERTICES);
        SubPartitions {
            n,
            min_parts,
            covering,
            parts: Vec::with_capacity(n),
            used: VertexSet::EMPTY,
            stack: Vec::with_capacity(2 * n + 1),
            started: false,
        }
    }

    fn accept(&self) -> bool {
        self.parts.len() >= self.min_parts && (!self.covering || self.used.len() == self.n)
    }

    fn child(&self, cursor: usize) -> Option<Step> {
        let n = self.n;
        let last = self.parts.last();
        if cursor < n {
            let e = cursor;
            if self.used.contains(e) || last.is_some_and(|l| e <= l.first().unwrap()) {
                return None;
            }
            // vertices below a newly opened part's minimum can never be placed later
            if self.covering && !VertexSet::full(e).is_subset(self.used) {
                return None;
            }
            Some(Step::Open(e))
        } else {
            let e = cursor - n;
            let last = last?;
            if self.used.contains(e) || e <= last.last().unwrap() {
                return None;
            }
            Some(Step::Extend(e))
        }
    }

    fn apply(&mut self, step: Step) {
        match step {
            Step::Root => {}
            Step::Open(e) => {
                self.parts.push(VertexSet::singleton(e));
                self.used.insert(e);
            }
            Step::Extend(e) => {
                self.parts.last_mut().unwrap().insert(e);
                self.used.insert(e);
            }
        }
    }

    fn undo(&mut self, step: Step) {
        match step {
            Step::Root => {}
            Step::Open(e) => {
                self.parts.pop();
                self.used.remove(e);
            }
            Step::Extend(e) => {
                self.parts.last_mut().unwrap().remove(e);
                self.used.remove(e);
            }
        }
    }

    /// Moves to the next subpartition and returns its parts.
    pub fn advance(&mut self) -> Option<&[VertexSet]> {
        if !self.started {
            self.started = true;
            self.stack.push(Frame { step: Step::Root, cursor: 0 });
            if self.accept() {
                return Some(&self.parts);
            }
        }
        loop {
            let top = self.stack.last_mut()?;
            let mut cursor = top.cursor;
            let mut found = None;
            // cursor ranges over 2n choices: opens first, then extensions
            while cursor < 2 * self.n {
                let c = cursor;
                cursor += 1;
                if let Some(step) = self.child(c) {
                    found = Some(step);
                    break;
                }
            }
            self.stack.last_mut().unwrap().cursor = cursor;
            match found {
                Some(step) => {
                    self.apply(step);
                    self.stack.push(Frame { step, cursor: 0 });
                    if self.accept() {
                        return Some(&self.parts);
                    }
                }
                None => {
                    let frame = self.stack.pop().unwrap();
                    self.undo(frame.step);
                }
            }
        }
    }
}

impl Iterator for SubPartitions {
    type Item = SubPartition;

    fn next(&mut self) -> Option<SubPartition> {
        self.advance().map(|p| SubPartition::from_canonical(p.to_vec()))
    }
}

/// Every subpartition of `{0..n-1}` with at least `min_parts` parts, each once,
/// in canonical order. Practical up to `n ≈ 12` (`Bell(n+1)` items).
pub fn enumerate_subpartitions(n: usize, min_parts: usize) -> SubPartitions {
    SubPartitions::new(n, min_parts, false)
}

/// Every partition of `{0..n-1}` with at least `min_parts` parts.
pub fn enumerate_partitions(n: usize, min_parts: usize) -> SubPartitions {
    SubPartitions::new(n, min_parts, true)
}

/// An extremal ratio value together with a subpartition attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioWitness {
    pub value: Rational,
    pub witness: SubPartition,
}

/// An extremal ratio value together with a vertex set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityWitness {
    pub value: Rational,
    pub set: VertexSet,
}

/// Running minimum of `num/den` over a canonical-order stream; ties keep the
/// earliest (lexicographically least) candidate.
struct MinRatio {
    best: Option<(u64, u64, Vec<VertexSet>)>,
}

impl MinRatio {
    fn offer(&mut self, num: u64, den: u64, parts: &[VertexSet]) {
        let better = match &self.best {
            None => true,
            Some((bn, bd, _)) => (num as u128) * (*bd as u128) < (*bn as u128) * (den as u128),
        };
        if better {
            self.best = Some((num, den, parts.to_vec()));
        }
    }

    fn finish(self) -> Option<RatioWitness> {
        self.best.map(|(num, den, parts)| RatioWitness {
            value: rational(num as i64, den as i64),
            witness: SubPartition::from_canonical(parts),
        })
    }
}

pub(crate) fn sum_over(table: &[u32], parts: &[VertexSet]) -> u64 {
    parts.iter().map(|p| table[p.bits() as usize] as u64).sum()
}

/// `ν_f(D) = min Σ_{X∈𝒫} d⁻(X) / (|𝒫|-1)` over subpartitions with `|𝒫| > 1`.
///
/// The witness is the lexicographically least minimizing subpartition.
pub fn nu_f_digraph(d: &Digraph) -> Result<RatioWitness> {
    if d.n() < 2 {
        return Err(Error::TooFewVertices(d.n()));
    }
    limits::guard(d.n())?;
    let table = d.in_degree_table();
    let mut acc = MinRatio { best: None };
    let mut it = enumerate_subpartitions(d.n(), 2);
    while let Some(parts) = it.advance() {
        acc.offer(sum_over(&table, parts), parts.len() as u64 - 1, parts);
    }
    Ok(acc.finish().expect("n >= 2 has a two-part subpartition"))
}

/// `ν_f(G) = min |E(𝒫)| / (|𝒫|-1)` over partitions with `|𝒫| > 1`, where
/// `E(𝒫)` are the edges joining different parts.
pub fn nu_f_graph(g: &Graph) -> Result<RatioWitness> {
    if g.n() < 2 {
        return Err(Error::TooFewVertices(g.n()));
    }
    limits::guard(g.n())?;
    let inside = g.edges_within_table();
    let m = g.edge_count() as u64;
    let mut acc = MinRatio { best: None };
    let mut it = enumerate_partitions(g.n(), 2);
    while let Some(parts) = it.advance() {
        let crossing = m - sum_over(&inside, parts);
        acc.offer(crossing, parts.len() as u64 - 1, parts);
    }
    Ok(acc.finish().expect("n >= 2 has a two-part partition"))
}

/// `γ_f(G) = max |E(X)| / (|X|-1)` over `|X| > 1`; ties go to the
/// lexicographically least `X`.
pub fn gamma_f(g: &Graph) -> Result<DensityWitness> {
    if g.n() < 2 {
        return Err(Error::TooFewVertices(g.n()));
    }
    limits::guard(g.n())?;
    let inside = g.edges_within_table();
    let mut best: Option<(u64, u64, VertexSet)> = None;
    for mask in 0..(1u64 << g.n()) {
        let x = VertexSet::from_bits(mask);
        if x.len() < 2 {
            continue;
        }
        let num = inside[mask as usize] as u64;
        let den = x.len() as u64 - 1;
        let replace = match best {
            None => true,
            Some((bn, bd, bx)) => {
                let lhs = num as u128 * bd as u128;
                let rhs = bn as u128 * den as u128;
                lhs > rhs || (lhs == rhs && x < bx)
            }
        };
        if replace {
            best = Some((num, den, x));
        }
    }
    let (num, den, set) = best.expect("n >= 2");
    Ok(DensityWitness {
        value: rational(num as i64, den as i64),
        set,
    })
}

/// Exact test of `ν_f(D) > k + (d-1)/d`.
pub fn hypothesis_holds(d: &Digraph, k: usize, dd: usize) -> Result<bool> {
    if dd == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let nu = nu_f_digraph(d)?;
    Ok(nu.value > packing_bound(k, dd))
}
