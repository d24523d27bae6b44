//! Uncrossing of set families.
//!
//! Two sets properly intersect when `X ∩ Y`, `X ∖ Y` and `Y ∖ X` are all
//! nonempty. One elimination step replaces such a pair by `X ∪ Y` and `X ∩ Y`.
//! Starting from the multiset union of two subpartitions and eliminating until
//! the family is laminar, the distinct maximal members form a subpartition
//! `F₃` and the leftovers form a subpartition `F₄` with
//! `|F₁| + |F₂| = |F₃| + |F₄|`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::partitions::SubPartition;
use crate::vertex_set::VertexSet;

pub fn properly_intersecting(x: VertexSet, y: VertexSet) -> bool {
    !(x & y).is_empty() && !(x - y).is_empty() && !(y - x).is_empty()
}

/// A multiset of nonempty vertex sets, stored in canonical (sorted) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SetFamily {
    members: Vec<VertexSet>,
}

impl SetFamily {
    pub fn new(mut members: Vec<VertexSet>) -> Result<Self> {
        if members.iter().any(|m| m.is_empty()) {
            return Err(Error::InvalidStep("family members must be nonempty".into()));
        }
        members.sort();
        Ok(SetFamily { members })
    }

    /// Multiset union `F₁ ⊎ F₂`.
    pub fn uplus(a: &SubPartition, b: &SubPartition) -> Self {
        let mut members = a.parts().to_vec();
        members.extend_from_slice(b.parts());
        members.sort();
        SetFamily { members }
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn union(&self) -> VertexSet {
        self.members.iter().fold(VertexSet::EMPTY, |acc, m| acc | *m)
    }

    pub fn multiplicity(&self, x: VertexSet) -> usize {
        self.members.iter().filter(|&&m| m == x).count()
    }

    /// `Σ |X|²`, which strictly increases with every elimination step.
    pub fn potential(&self) -> usize {
        self.members.iter().map(|m| m.len() * m.len()).sum()
    }

    /// `Σ_{X∈F} d⁻(X)` in `d`.
    pub fn in_degree_sum(&self, d: &Digraph) -> usize {
        self.members.iter().map(|&m| d.in_degree(m)).sum()
    }

    pub fn to_subpartition(&self) -> Result<SubPartition> {
        SubPartition::new(self.members.clone())
    }

    /// Properly intersecting pairs by value, in canonical order, without repeats.
    pub fn crossing_pairs(&self) -> Vec<(VertexSet, VertexSet)> {
        let mut pairs = Vec::new();
        for (i, &x) in self.members.iter().enumerate() {
            for &y in &self.members[i + 1..] {
                if properly_intersecting(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        pairs.sort();
        pairs.dedup();
        pairs
    }

    /// Distinct maximal members (`F₃`) and everything else (`F₄`).
    pub fn split_maximal(&self) -> (SetFamily, SetFamily) {
        let mut top = Vec::new();
        let mut rest = Vec::new();
        for (i, &x) in self.members.iter().enumerate() {
            let dominated = self.members.iter().any(|&y| y != x && x.is_subset(y));
            // members are sorted, so equal copies are adjacent
            let repeat = i > 0 && self.members[i - 1] == x;
            if dominated || repeat {
                rest.push(x);
            } else {
                top.push(x);
            }
        }
        (SetFamily { members: top }, SetFamily { members: rest })
    }
}

pub fn is_laminar(f: &SetFamily) -> bool {
    let m = f.members();
    m.iter()
        .enumerate()
        .all(|(i, &x)| m[i + 1..].iter().all(|&y| !properly_intersecting(x, y)))
}

/// One elimination step on the pair `(x, y)`; the family size is unchanged.
pub fn pieo_step(f: &SetFamily, x: VertexSet, y: VertexSet) -> Result<SetFamily> {
    if !properly_intersecting(x, y) {
        return Err(Error::InvalidStep(format!("{x} and {y} do not properly intersect")));
    }
    let mut members = f.members.clone();
    for target in [x, y] {
        let pos = members
            .iter()
            .position(|&m| m == target)
            .ok_or_else(|| Error::InvalidStep(format!("{target} is not in the family")))?;
        members.remove(pos);
    }
    members.push(x | y);
    members.push(x & y);
    members.sort();
    Ok(SetFamily { members })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieoStep {
    pub replaced: (VertexSet, VertexSet),
    /// `(X ∪ Y, X ∩ Y)`.
    pub introduced: (VertexSet, VertexSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PieoTrace {
    pub initial: SetFamily,
    pub steps: Vec<PieoStep>,
    #[serde(rename = "final")]
    pub final_family: SetFamily,
    pub f3: SetFamily,
    pub f4: SetFamily,
}

impl PieoTrace {
    /// `𝒢₀, 𝒢₁, …, 𝒢ₙ` replayed from the recorded steps.
    pub fn families(&self) -> Vec<SetFamily> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut cur = self.initial.clone();
        out.push(cur.clone());
        for s in &self.steps {
            cur = pieo_step(&cur, s.replaced.0, s.replaced.1).expect("recorded step replays");
            out.push(cur.clone());
        }
        out
    }
}

/// Eliminates from `F₁ ⊎ F₂`, always taking the least crossing pair in
/// canonical order.
pub fn pieo_run(f1: &SubPartition, f2: &SubPartition) -> PieoTrace {
    pieo_run_with(f1, f2, |_| 0)
}

/// Eliminates from `F₁ ⊎ F₂` with a caller-chosen pair order: `select` gets
/// the current crossing pairs (canonical order, nonempty) and returns an index.
pub fn pieo_run_with<S>(f1: &SubPartition, f2: &SubPartition, mut select: S) -> PieoTrace
where
    S: FnMut(&[(VertexSet, VertexSet)]) -> usize,
{
    let initial = SetFamily::uplus(f1, f2);
    let mut cur = initial.clone();
    let mut steps = Vec::new();
    loop {
        let pairs = cur.crossing_pairs();
        if pairs.is_empty() {
            break;
        }
        let (x, y) = pairs[select(&pairs).min(pairs.len() - 1)];
        cur = pieo_step(&cur, x, y).expect("selected pair crosses");
        steps.push(PieoStep {
            replaced: (x, y),
            introduced: (x | y, x & y),
        });
    }
    let (f3, f4) = cur.split_maximal();
    PieoTrace {
        initial,
        steps,
        final_family: cur,
        f3,
        f4,
    }
}

/// `Σ d⁻` over each family of the trace, from `𝒢₀` to `𝒢ₙ`.
pub fn chain_sums(d: &Digraph, trace: &PieoTrace) -> Vec<usize> {
    trace.families().iter().map(|f| f.in_degree_sum(d)).collect()
}

/// Walks the trace and returns whether every step kept `Σ d⁻` unchanged.
///
/// Panics if the sum ever increases: `d⁻` is submodular, so each step can
/// only lower it.
pub fn submodular_chain_check(d: &Digraph, trace: &PieoTrace) -> bool {
    let sums = chain_sums(d, trace);
    for (i, w) in sums.windows(2).enumerate() {
        assert!(
            w[1] <= w[0],
            "in-degree sum increased from {} to {} at step {}",
            w[0],
            w[1],
            i + 1
        );
    }
    sums.windows(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn fam(lists: &[&[usize]]) -> SetFamily {
        SetFamily::new(lists.iter().map(|l| set(l)).collect()).unwrap()
    }

    fn sp(lists: &[&[usize]]) -> SubPartition {
        SubPartition::from_lists(lists).unwrap()
    }

    #[test]
    fn proper_intersection() {
        assert!(properly_intersecting(set(&[1, 2]), set(&[2, 3])));
        assert!(!properly_intersecting(set(&[1, 2]), set(&[1, 2])));
        assert!(!properly_intersecting(set(&[1]), set(&[2])));
        assert!(!properly_intersecting(set(&[1]), set(&[1, 2])));
    }

    #[test]
    fn laminarity() {
        assert!(is_laminar(&fam(&[&[1], &[1, 2], &[1, 2, 3]])));
        assert!(!is_laminar(&fam(&[&[1, 2], &[2, 3]])));
        assert!(is_laminar(&SetFamily::default()));
    }

    #[test]
    fn step_examples() {
        let f = fam(&[&[1, 2], &[2, 3]]);
        let g = pieo_step(&f, set(&[1, 2]), set(&[2, 3])).unwrap();
        assert_eq!(g, fam(&[&[1, 2, 3], &[2]]));
        assert_eq!(g.len(), f.len());

        let f = fam(&[&[1, 2], &[1, 2], &[2, 3]]);
        let g = pieo_step(&f, set(&[1, 2]), set(&[2, 3])).unwrap();
        assert_eq!(g, fam(&[&[1, 2], &[1, 2, 3], &[2]]));
        assert_eq!(g.len(), 3);
    }

    #[test]
    fn step_errors() {
        let f = fam(&[&[1, 2], &[2, 3]]);
        assert!(pieo_step(&f, set(&[1, 2]), set(&[1, 2])).is_err());
        assert!(pieo_step(&f, set(&[1, 2]), set(&[2, 4])).is_err());
        // one copy present, both needed
        let f = fam(&[&[1, 2]]);
        assert!(pieo_step(&f, set(&[1, 2]), set(&[2, 3])).is_err());
    }

    #[test]
    fn run_single_crossing() {
        let t = pieo_run(&sp(&[&[1, 2]]), &sp(&[&[2, 3]]));
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.f3, fam(&[&[1, 2, 3]]));
        assert_eq!(t.f4, fam(&[&[2]]));
    }

    #[test]
    fn run_already_laminar() {
        let p = sp(&[&[1], &[2]]);
        let t = pieo_run(&p, &p);
        assert!(t.steps.is_empty());
        assert_eq!(t.f3, fam(&[&[1], &[2]]));
        assert_eq!(t.f4, fam(&[&[1], &[2]]));
    }

    #[test]
    fn run_three_sets() {
        // hand replay: {1,2} and {2,3} cross -> {1,2,3}, {2}; {3} ⊂ {1,2,3}
        let t = pieo_run(&sp(&[&[1, 2], &[3]]), &sp(&[&[2, 3]]));
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.final_family, fam(&[&[1, 2, 3], &[2], &[3]]));
        assert_eq!(t.f3, fam(&[&[1, 2, 3]]));
        assert_eq!(t.f4, fam(&[&[2], &[3]]));
        assert_eq!(t.f3.len() + t.f4.len(), 3);
    }

    #[test]
    fn chain_on_three_cycle() {
        // a=0, b=1, c=2 with arcs a->b, b->c, c->a
        let d = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = pieo_run(&sp(&[&[0, 1]]), &sp(&[&[1, 2]]));
        // d⁻({0,1}) + d⁻({1,2}) = 1 + 1; d⁻({0,1,2}) + d⁻({1}) = 0 + 1
        assert_eq!(chain_sums(&d, &t), vec![2, 1]);
        assert!(!submodular_chain_check(&d, &t));

        let empty = pieo_run(&sp(&[&[0]]), &sp(&[&[1]]));
        assert!(submodular_chain_check(&d, &empty));
    }

    #[test]
    fn families_replay_matches_final() {
        let t = pieo_run(&sp(&[&[0, 1], &[2, 3]]), &sp(&[&[1, 2], &[3, 4]]));
        let fams = t.families();
        assert_eq!(fams.len(), t.steps.len() + 1);
        assert_eq!(fams.last().unwrap(), &t.final_family);
        assert!(is_laminar(&t.final_family));
        assert!(fams.windows(2).all(|w| w[1].potential() > w[0].potential()));
    }

    #[test]
    fn trace_json_shape() {
        let t = pieo_run(&sp(&[&[1, 2]]), &sp(&[&[2, 3]]));
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"initial":[[1,2],[2,3]],"steps":[{"replaced":[[1,2],[2,3]],"introduced":[[1,2,3],[2]]}],"final":[[1,2,3],[2]],"f3":[[1,2,3]],"f4":[[2]]}"#
        );
    }
}
