//! Backtracking over arc-to-slot assignments.
//!
//! Arcs are decided in id order; each goes to one slot or stays unused. A
//! slot keeps a parent array, so in-degree and cycle checks are local. After
//! each decision the search prunes on arc counts and on vertices that can no
//! longer receive an in-arc in a slot.

use crate::error::{Error, Result};
use crate::feasibility::{self, BranchingSpec};
use crate::graph::{Arc, Digraph};
use crate::limits;
use crate::vertex_set::VertexSet;

use super::branching::components;
use super::{min_extra_arcs, Arborescence, Branching, Mode, PackingCertificate};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Spanning arborescence.
    Tree,
    /// Spanning branching with exactly `count` roots, all of `forced` among them.
    Roots { count: usize, forced: VertexSet },
    /// Spanning branching with more than `(d-1)(n-1)/d` arcs that is spanning
    /// or has a component with at least `d` arcs.
    Large { d: usize },
}

impl Goal {
    fn min_arcs(self, n: usize) -> usize {
        match self {
            Goal::Tree => n - 1,
            Goal::Roots { count, .. } => n - count,
            Goal::Large { d } => min_extra_arcs(n, d),
        }
    }

    fn max_arcs(self, n: usize) -> usize {
        match self {
            Goal::Tree => n - 1,
            Goal::Roots { count, .. } => n - count,
            Goal::Large { .. } => n - 1,
        }
    }

    fn forced(self) -> u64 {
        match self {
            Goal::Roots { forced, .. } => forced.bits(),
            _ => 0,
        }
    }

    fn max_roots(self, n: usize) -> usize {
        n - self.min_arcs(n)
    }
}

struct Slot {
    goal: Goal,
    parent: Vec<usize>,
    has_in: u64,
    arcs: Vec<Arc>,
}

/// Outcome of a visited leaf: `true` stops the search.
pub(crate) type Visit<'v> = dyn FnMut(&[Vec<Arc>]) -> bool + 'v;

pub(crate) struct Search<'a> {
    n: usize,
    full: u64,
    arcs: &'a [Arc],
    /// `suffix_heads[i]`: heads of `arcs[i..]`.
    suffix_heads: Vec<u64>,
    slots: Vec<Slot>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(d: &'a Digraph, goals: &[Goal]) -> Self {
        let arcs = d.arcs();
        let mut suffix_heads = vec![0u64; arcs.len() + 1];
        for i in (0..arcs.len()).rev() {
            suffix_heads[i] = suffix_heads[i + 1] | 1u64 << arcs[i].head;
        }
        Search {
            n: d.n(),
            full: VertexSet::full(d.n()).bits(),
            arcs,
            suffix_heads,
            slots: goals
                .iter()
                .map(|&goal| Slot { goal, parent: vec![NONE; d.n()], has_in: 0, arcs: Vec::new() })
                .collect(),
        }
    }

    /// Visits leaves in search order until the visitor asks to stop.
    pub(crate) fn run(&mut self, visit: &mut Visit<'_>) {
        let n = self.n;
        if self.slots.iter().any(|s| s.goal.max_roots(n) == 0 || s.goal.min_arcs(n) > s.goal.max_arcs(n)) {
            return;
        }
        self.dfs(0, visit);
    }

    fn dfs(&mut self, i: usize, visit: &mut Visit<'_>) -> bool {
        if !self.viable(i) {
            return false;
        }
        if i == self.arcs.len() {
            if self.slots.iter().all(|s| self.leaf_ok(s)) {
                let leaf: Vec<Vec<Arc>> = self.slots.iter().map(|s| s.arcs.clone()).collect();
                return visit(&leaf);
            }
            return false;
        }
        let a = self.arcs[i];
        for s in 0..self.slots.len() {
            if !self.can_place(s, a) {
                continue;
            }
            self.place(s, a);
            let stop = self.dfs(i + 1, visit);
            self.unplace(s, a);
            if stop {
                return true;
            }
        }
        self.dfs(i + 1, visit)
    }

    fn viable(&self, i: usize) -> bool {
        let n = self.n;
        let remaining = self.arcs.len() - i;
        let needed: usize = self
            .slots
            .iter()
            .map(|s| s.goal.min_arcs(n).saturating_sub(s.arcs.len()))
            .sum();
        if needed > remaining {
            return false;
        }
        let future = self.suffix_heads[i];
        self.slots.iter().all(|s| {
            let forced = s.goal.forced();
            let stuck = self.full & !s.has_in & (forced | !future);
            stuck.count_ones() as usize <= s.goal.max_roots(n)
        })
    }

    fn can_place(&self, s: usize, a: Arc) -> bool {
        let slot = &self.slots[s];
        if slot.has_in >> a.head & 1 == 1 || slot.goal.forced() >> a.head & 1 == 1 {
            return false;
        }
        if slot.arcs.len() >= slot.goal.max_arcs(self.n) {
            return false;
        }
        // Identical empty slots are interchangeable: fill the first one.
        if s > 0 && slot.arcs.is_empty() {
            let prev = &self.slots[s - 1];
            if prev.goal == slot.goal && prev.arcs.is_empty() {
                return false;
            }
        }
        let mut v = a.tail;
        while v != NONE {
            if v == a.head {
                return false;
            }
            v = slot.parent[v];
        }
        true
    }

    fn place(&mut self, s: usize, a: Arc) {
        let slot = &mut self.slots[s];
        slot.parent[a.head] = a.tail;
        slot.has_in |= 1u64 << a.head;
        slot.arcs.push(a);
    }

    fn unplace(&mut self, s: usize, a: Arc) {
        let slot = &mut self.slots[s];
        slot.parent[a.head] = NONE;
        slot.has_in &= !(1u64 << a.head);
        slot.arcs.pop();
    }

    fn leaf_ok(&self, s: &Slot) -> bool {
        let n = self.n;
        let count = s.arcs.len();
        if count < s.goal.min_arcs(n) || count > s.goal.max_arcs(n) {
            return false;
        }
        match s.goal {
            Goal::Tree | Goal::Roots { .. } => true,
            Goal::Large { d } => {
                count == n - 1 || components(n, &s.arcs).iter().any(|c| c.vertices.len() > d)
            }
        }
    }
}

pub(crate) fn to_arborescence(n: usize, arcs: Vec<Arc>) -> Arborescence {
    let heads: VertexSet = arcs.iter().map(|a| a.head).collect();
    let root = (VertexSet::full(n) - heads).first().expect("an arborescence has a root");
    Arborescence { root, arcs }
}

pub(crate) fn to_branching(n: usize, arcs: Vec<Arc>) -> Branching {
    let heads: VertexSet = arcs.iter().map(|a| a.head).collect();
    Branching { roots: VertexSet::full(n) - heads, arcs }
}

/// First leaf in search order, if any.
pub(crate) fn first_leaf(d: &Digraph, goals: &[Goal]) -> Option<Vec<Vec<Arc>>> {
    let mut found = None;
    Search::new(d, goals).run(&mut |leaf| {
        found = Some(leaf.to_vec());
        true
    });
    found
}

/// `k` trees and one branching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Packing {
    pub trees: Vec<Arborescence>,
    pub extra: Branching,
}

impl Packing {
    fn from_leaf(n: usize, mut leaf: Vec<Vec<Arc>>) -> Self {
        let extra = to_branching(n, leaf.pop().expect("extra slot"));
        let trees = leaf.into_iter().map(|arcs| to_arborescence(n, arcs)).collect();
        Packing { trees, extra }
    }

    /// Vertex count of the smallest component of the extra branching.
    pub fn smallest_component(&self, n: usize) -> usize {
        components(n, &self.extra.arcs)
            .iter()
            .map(|c| c.vertices.len())
            .min()
            .unwrap_or(0)
    }
}

fn tree_goals(k: usize, extra: Goal) -> Vec<Goal> {
    let mut goals = vec![Goal::Tree; k];
    goals.push(extra);
    goals
}

/// `k` spanning arborescences plus a spanning branching with `spec.roots`
/// roots containing `spec.forced`. With `minimize`, returns the first packing
/// in search order whose extra branching has the smallest possible smallest
/// component.
pub(crate) fn search_k_plus_extra(
    d: &Digraph,
    k: usize,
    spec: BranchingSpec,
    minimize: bool,
) -> Option<Packing> {
    let n = d.n();
    if spec.roots == 0 || spec.roots > n {
        return None;
    }
    let goals = tree_goals(k, Goal::Roots { count: spec.roots, forced: spec.forced });
    if !minimize {
        return first_leaf(d, &goals).map(|leaf| Packing::from_leaf(n, leaf));
    }
    let mut best: Option<(usize, Packing)> = None;
    Search::new(d, &goals).run(&mut |leaf| {
        let p = Packing::from_leaf(n, leaf.to_vec());
        let size = p.smallest_component(n);
        if best.as_ref().is_none_or(|(b, _)| size < *b) {
            best = Some((size, p));
        }
        size <= 1
    });
    best.map(|(_, p)| p)
}

/// `k` arc-disjoint spanning arborescences, or `None`.
pub fn find_arborescence_packing(d: &Digraph, k: usize) -> Result<Option<Vec<Arborescence>>> {
    limits::guard(d.n())?;
    if d.n() == 0 {
        return Err(Error::TooFewVertices(0));
    }
    if k * (d.n() - 1) > d.arc_count() {
        return Ok(None);
    }
    let n = d.n();
    Ok(first_leaf(d, &vec![Goal::Tree; k])
        .map(|leaf| leaf.into_iter().map(|arcs| to_arborescence(n, arcs)).collect()))
}

/// Arc-disjoint spanning branchings, one per spec, with the requested root
/// counts and forced roots; `None` if they do not exist.
pub fn find_branching_packing(d: &Digraph, specs: &[BranchingSpec]) -> Result<Option<Vec<Branching>>> {
    limits::guard(d.n())?;
    if d.n() == 0 {
        return Err(Error::TooFewVertices(0));
    }
    for s in specs {
        if s.roots == 0 || s.roots > d.n() || !s.forced.within(d.n()) || s.forced.len() > s.roots {
            return Err(Error::InvalidParameter(format!(
                "root count {} with {} forced roots on {} vertices",
                s.roots,
                s.forced.len(),
                d.n()
            )));
        }
    }
    let goals: Vec<Goal> = specs
        .iter()
        .map(|s| Goal::Roots { count: s.roots, forced: s.forced })
        .collect();
    let n = d.n();
    Ok(first_leaf(d, &goals)
        .map(|leaf| leaf.into_iter().map(|arcs| to_branching(n, arcs)).collect()))
}

/// Exhaustive search for `k` arc-disjoint spanning arborescences plus a
/// branching with more than `(d-1)(n-1)/d` arcs that is spanning or has a
/// component with at least `d` arcs. `None` means no such packing exists.
pub fn solve_exhaustive(d: &Digraph, k: usize, dd: usize) -> Result<Option<PackingCertificate>> {
    if dd == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if d.n() < 2 {
        return Err(Error::TooFewVertices(d.n()));
    }
    limits::guard_search(d.n(), d.arc_count())?;
    let n = d.n();
    if k * (n - 1) + min_extra_arcs(n, dd) > d.arc_count() {
        return Ok(None);
    }
    if k > 0 && !feasibility::check_spanning_arborescences(d, k)?.is_feasible() {
        return Ok(None);
    }
    Ok(first_leaf(d, &tree_goals(k, Goal::Large { d: dd })).map(|leaf| {
        let p = Packing::from_leaf(n, leaf);
        PackingCertificate {
            k,
            d: dd,
            trees: p.trees,
            extra: p.extra,
            mode: Mode::Oracle,
            trace: None,
        }
    }))
}
