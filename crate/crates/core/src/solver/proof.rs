//! Inductive construction of the packing.
//!
//! With `c = ⌈(n-1)/d⌉` the hypothesis guarantees `k` spanning arborescences
//! plus a spanning `c`-branching. If one root fewer is feasible, that packing
//! already has enough arcs. Otherwise the construction takes a packing whose
//! designated component `T` (the smallest one of the branching) is as small
//! as possible and, with `U` the vertices outside `T`:
//!
//! * no arc from `U` into `T`: contract `V(T)`, recurse, lift back;
//! * an arc from `U` into `T` entering no member of a tight subpartition:
//!   move it into the branching, which shrinks `T`;
//! * otherwise take the least tight member `X₀` entered from `U`; it lies in
//!   `V(T)`, so either `|X₀| ≥ 2` and `X₀` is contracted, or `X₀` is the
//!   root of `T` and the current packing is already good.
//!
//! Tight means equality in `Σ d⁻(X) ≥ k(|𝒫|-1)` after deleting the arcs of
//! the other components. Each claim the construction relies on is checked as
//! it is used; a failed check is a divergence and hands over to the oracle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, HypothesisFailure, Result};
use crate::feasibility::{check_k_plus_extra, BranchingSpec};
use crate::graph::{Arc, ArcId, Contraction, Digraph};
use crate::partitions::{self, enumerate_subpartitions, packing_bound, SubPartition};
use crate::vertex_set::VertexSet;

use super::branching::{components, Component};
use super::search::{search_k_plus_extra, solve_exhaustive, to_branching, Packing};
use super::verify::verify_theorem7;
use super::{Arborescence, Branching, Mode, PackingCertificate};

/// What the construction did at one level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// `c = 1`: the branching is a spanning arborescence.
    SingleRoot,
    /// `c - 1` roots are feasible.
    FewerRoots,
    /// The designated component is a single vertex.
    SingletonComponent,
    /// No arc enters the designated component from outside; it is contracted.
    ContractComponent,
    /// An arc entering no tight member is moved into the branching.
    Augment,
    /// A tight member with at least two vertices is contracted.
    ContractTightSet,
    /// The least tight member is the root of the designated component.
    TightSingleton,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub depth: usize,
    pub n: usize,
    pub case: CaseTag,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTrace {
    pub steps: Vec<TraceStep>,
    /// Checks that failed during the construction. Nonempty means the
    /// certificate came from the oracle.
    pub divergences: Vec<String>,
}

impl ProofTrace {
    pub fn cases(&self) -> Vec<CaseTag> {
        self.steps.iter().map(|s| s.case).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofOptions {
    /// Start from a packing whose designated component is as small as
    /// possible. When false, any packing is taken and the augmenting step
    /// shrinks the component instead.
    pub minimize_first: bool,
}

impl Default for ProofOptions {
    fn default() -> Self {
        ProofOptions { minimize_first: true }
    }
}

/// A member of a tight subpartition entered by a candidate arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightSet {
    pub set: VertexSet,
    pub arc: ArcId,
    pub partition: SubPartition,
}

struct TightAnalysis {
    /// Candidates that enter no member of any tight subpartition.
    uncovered: Vec<Arc>,
    least: Option<TightSet>,
}

/// Scans every subpartition of `d` that is tight for `Σ d⁻(X) ≥ k(|𝒫|-1)`.
/// `least` is the smallest (then canonically least) member entered by a
/// candidate, which is inclusion-minimal among such members.
fn analyze(d: &Digraph, k: usize, candidates: &[Arc]) -> TightAnalysis {
    let table = d.in_degree_table();
    let mut covered = vec![false; candidates.len()];
    let mut least: Option<TightSet> = None;
    let mut it = enumerate_subpartitions(d.n(), 1);
    while let Some(parts) = it.advance() {
        if partitions::sum_over(&table, parts) != (k * (parts.len() - 1)) as u64 {
            continue;
        }
        for &x in parts {
            let mut first = None;
            for (c, a) in candidates.iter().enumerate() {
                if a.enters(x) {
                    covered[c] = true;
                    first.get_or_insert(a.id);
                }
            }
            let Some(arc) = first else { continue };
            let better = least
                .as_ref()
                .is_none_or(|t| (x.len(), x) < (t.set.len(), t.set));
            if better {
                least = Some(TightSet {
                    set: x,
                    arc,
                    partition: SubPartition::from_canonical(parts.to_vec()),
                });
            }
        }
    }
    let uncovered = candidates
        .iter()
        .zip(covered)
        .filter(|(_, c)| !c)
        .map(|(a, _)| *a)
        .collect();
    TightAnalysis { uncovered, least }
}

/// Least member `X₀` of a tight subpartition of `D - removed` that some
/// candidate arc enters, where tight means `Σ d⁻(X) = k(|𝒫|-1)`. `None` when
/// no candidate enters a tight member.
pub fn minimal_violating_set(
    d: &Digraph,
    removed: &[ArcId],
    candidates: &[ArcId],
    k: usize,
) -> Result<Option<TightSet>> {
    crate::limits::guard(d.n())?;
    let reduced = d.remove_arcs(removed)?;
    let cands = candidates
        .iter()
        .map(|&id| d.arc(id).copied().ok_or(Error::UnknownArc(id)))
        .collect::<Result<Vec<_>>>()?;
    Ok(analyze(&reduced, k, &cands).least)
}

/// Builds the packing by following the inductive construction; falls back to
/// the exhaustive oracle if any step diverges.
pub fn solve_theorem7(d: &Digraph, k: usize, dd: usize) -> Result<PackingCertificate> {
    solve_theorem7_traced(d, k, dd, ProofOptions::default()).map(|(cert, _)| cert)
}

/// As [`solve_theorem7`], also returning the per-level trace.
pub fn solve_theorem7_traced(
    d: &Digraph,
    k: usize,
    dd: usize,
    opts: ProofOptions,
) -> Result<(PackingCertificate, ProofTrace)> {
    if dd == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    let nu = partitions::nu_f_digraph(d)?;
    let bound = packing_bound(k, dd);
    if nu.value <= bound {
        let relation = if nu.value == bound { "=" } else { "<" };
        return Err(Error::HypothesisFails(Box::new(HypothesisFailure {
            value: nu.value,
            bound,
            relation,
            witness: nu.witness,
        })));
    }
    let mut trace = ProofTrace::default();
    let built = Builder { k, dd, opts, trace: &mut trace }.prove(d, 0);
    let cert = match built {
        Ok(p) => {
            let cert = certificate(k, dd, p, Mode::ProofTrace);
            let report = verify_theorem7(d, k, dd, &cert);
            if report.ok {
                Some(cert)
            } else {
                trace.divergences.push(format!("final packing rejected: {report}"));
                None
            }
        }
        Err(why) => {
            trace.divergences.push(why);
            None
        }
    };
    let cert = match cert {
        Some(c) => c,
        None => solve_exhaustive(d, k, dd)?.ok_or_else(|| {
            Error::Construction("no packing exists although the hypothesis holds".into())
        })?,
    };
    Ok((cert, trace))
}

fn certificate(k: usize, dd: usize, p: Packing, mode: Mode) -> PackingCertificate {
    PackingCertificate { k, d: dd, trees: p.trees, extra: p.extra, mode, trace: None }
}

type Step<T> = std::result::Result<T, String>;

struct Builder<'t> {
    k: usize,
    dd: usize,
    opts: ProofOptions,
    trace: &'t mut ProofTrace,
}

impl Builder<'_> {
    fn log(&mut self, depth: usize, n: usize, case: CaseTag, detail: String) {
        self.trace.steps.push(TraceStep { depth, n, case, detail });
    }

    fn search(&self, d: &Digraph, roots: usize, forced: VertexSet, minimize: bool) -> Step<Packing> {
        let spec = BranchingSpec { roots, forced };
        match check_k_plus_extra(d, self.k, roots, forced) {
            Ok(v) if v.is_feasible() => {}
            Ok(v) => {
                let why = v.violation().map(|x| x.to_string()).unwrap_or_default();
                return Err(format!("{roots} roots with forced {forced} infeasible on {} vertices: {why}", d.n()));
            }
            Err(e) => return Err(e.to_string()),
        }
        search_k_plus_extra(d, self.k, spec, minimize)
            .ok_or_else(|| format!("search found no packing with {roots} roots although the conditions hold"))
    }

    fn prove(&mut self, d: &Digraph, depth: usize) -> Step<Packing> {
        let (k, dd, n) = (self.k, self.dd, d.n());
        if depth > 64 {
            return Err("recursion did not shrink the instance".into());
        }
        let c = (n - 1).div_ceil(dd);
        if c <= 1 {
            let p = self.search(d, 1, VertexSet::EMPTY, false)?;
            self.log(depth, n, CaseTag::SingleRoot, "one root".into());
            return self.checked(d, p, depth);
        }
        if check_k_plus_extra(d, k, c - 1, VertexSet::EMPTY)
            .map_err(|e| e.to_string())?
            .is_feasible()
        {
            let p = self.search(d, c - 1, VertexSet::EMPTY, false)?;
            self.log(depth, n, CaseTag::FewerRoots, format!("{} roots suffice", c - 1));
            return self.checked(d, p, depth);
        }

        let mut p = self.search(d, c, VertexSet::EMPTY, self.opts.minimize_first)?;
        loop {
            let comps = components(n, &p.extra.arcs);
            let t = designated(&comps);
            if t.vertices.len() == 1 {
                self.log(depth, n, CaseTag::SingletonComponent, format!("c={c}, root {}", t.root));
                return self.checked(d, p, depth);
            }
            let w = t.vertices;
            let u = d.vertices() - w;
            let candidates: Vec<Arc> = d.arcs_between(u, w).copied().collect();
            if candidates.is_empty() {
                self.log(depth, n, CaseTag::ContractComponent, format!("c={c}, contract {w}"));
                let mut inner = Vec::with_capacity(k + 1);
                for tree in &p.trees {
                    inner.push(restrict(tree, w)?);
                }
                inner.push(restrict_component(&p.extra, t)?);
                let lifted = self.contract_and_lift(d, w, inner, BTreeMap::new(), depth)?;
                return self.checked(d, lifted, depth);
            }

            let others: Vec<ArcId> = p
                .extra
                .arcs
                .iter()
                .filter(|a| u.contains(a.head))
                .map(|a| a.id)
                .collect();
            let reduced = d.remove_arcs(&others).map_err(|e| e.to_string())?;
            let analysis = analyze(&reduced, k, &candidates);

            if let Some(&a) = analysis.uncovered.first() {
                let before = w.len();
                p = self.augment(d, &p, &others, a, u)?;
                let after = designated(&components(n, &p.extra.arcs)).vertices.len();
                if after >= before {
                    return Err(format!("augmenting with {} did not shrink the component", a.id));
                }
                self.log(
                    depth,
                    n,
                    CaseTag::Augment,
                    format!("c={c}, arc {} moves vertex {}; component {before} -> {after}", a.id, a.head),
                );
                continue;
            }

            let x0 = analysis
                .least
                .ok_or("every candidate is covered yet no tight member is entered")?;
            if !x0.set.is_subset(w) {
                return Err(format!("least tight set {} leaves the component {w}", x0.set));
            }
            if x0.set.len() == 1 {
                self.log(
                    depth,
                    n,
                    CaseTag::TightSingleton,
                    format!("c={c}, tight set {} in {}", x0.set, x0.partition),
                );
                return self.checked(d, p, depth);
            }
            self.log(
                depth,
                n,
                CaseTag::ContractTightSet,
                format!("c={c}, contract {} from {}", x0.set, x0.partition),
            );
            let x = x0.set;
            let mut inner = Vec::with_capacity(k + 1);
            for tree in &p.trees {
                inner.push(restrict(tree, x)?);
            }
            inner.push(restrict_component(&p.extra, Component { root: t.root, vertices: x })?);
            let mut entering = BTreeMap::new();
            for a in d.entering(x) {
                let owner = p.trees.iter().position(|tree| tree.arcs.iter().any(|b| b.id == a.id));
                match owner {
                    Some(i) if inner[i].root == a.head && !entering.values().any(|&j| j == i) => {
                        entering.insert(a.id, i);
                    }
                    _ => return Err(format!("arc {} entering {x} is not a tree arc into its root", a.id)),
                }
            }
            let lifted = self.contract_and_lift(d, x, inner, entering, depth)?;
            return self.checked(d, lifted, depth);
        }
    }

    /// Moves `a` into the component holding its tail, forces its head to be
    /// a root and re-solves for the remaining branching on the arcs left.
    fn augment(&self, d: &Digraph, p: &Packing, others: &[ArcId], a: Arc, u: VertexSet) -> Step<Packing> {
        let mut fixed = others.to_vec();
        fixed.push(a.id);
        let u = u.with(a.head);
        let rest = d.remove_arcs(&fixed).map_err(|e| e.to_string())?;
        let verdict = check_k_plus_extra(&rest, self.k, u.len() + 1, u).map_err(|e| e.to_string())?;
        if let Some(v) = verdict.violation() {
            return Err(format!("conditions fail after moving {}: {v}", a.id));
        }
        let q = self.search(&rest, u.len() + 1, u, false)?;
        let mut arcs: Vec<Arc> = p
            .extra
            .arcs
            .iter()
            .filter(|b| others.contains(&b.id))
            .copied()
            .chain([a])
            .chain(q.extra.arcs)
            .collect();
        arcs.sort_by_key(|b| b.id);
        let extra = to_branching(d.n(), arcs);
        if super::is_branching(d, &extra.arc_ids()).is_err() {
            return Err(format!("moving {} does not give a branching", a.id));
        }
        Ok(Packing { trees: q.trees, extra })
    }

    fn contract_and_lift(
        &mut self,
        d: &Digraph,
        w: VertexSet,
        inner: Vec<Arborescence>,
        entering: BTreeMap<ArcId, usize>,
        depth: usize,
    ) -> Step<Packing> {
        let con = d.contract(w).map_err(|e| e.to_string())?;
        match partitions::hypothesis_holds(&con.digraph, self.k, self.dd) {
            Ok(true) => {}
            Ok(false) => return Err(format!("hypothesis fails after contracting {w}")),
            Err(e) => return Err(e.to_string()),
        }
        let sub = self.prove(&con.digraph, depth + 1)?;
        lift(d, &con, sub, &inner, &entering)
    }

    fn checked(&self, d: &Digraph, p: Packing, depth: usize) -> Step<Packing> {
        let cert = certificate(self.k, self.dd, p, Mode::ProofTrace);
        let report = verify_theorem7(d, self.k, self.dd, &cert);
        if !report.ok {
            return Err(format!("packing at depth {depth} rejected: {report}"));
        }
        Ok(Packing { trees: cert.trees, extra: cert.extra })
    }
}

/// Smallest component, ties to the least root.
fn designated(comps: &[Component]) -> Component {
    *comps
        .iter()
        .min_by_key(|c| (c.vertices.len(), c.root))
        .expect("a branching has a component")
}

/// `tree[x]`, which must be an arborescence spanning `x`.
fn restrict(tree: &Arborescence, x: VertexSet) -> Step<Arborescence> {
    restrict_arcs(&tree.arcs, x)
}

fn restrict_component(extra: &Branching, c: Component) -> Step<Arborescence> {
    restrict_arcs(&extra.arcs, c.vertices)
}

fn restrict_arcs(arcs: &[Arc], x: VertexSet) -> Step<Arborescence> {
    let inside: Vec<Arc> = arcs.iter().filter(|a| a.inside(x)).copied().collect();
    if inside.len() + 1 != x.len() {
        return Err(format!("restriction to {x} is not an arborescence"));
    }
    let heads: VertexSet = inside.iter().map(|a| a.head).collect();
    let root = (x - heads).first().expect("one vertex of x has no in-arc");
    Ok(Arborescence { root, arcs: inside })
}

/// Combines a packing of `D/W` with `k+1` arborescences of `D[W]`. A
/// structure whose arc enters the merged vertex takes the arborescence
/// designated for that arc; the others take the remaining ones in order.
pub(crate) fn lift(
    d: &Digraph,
    con: &Contraction,
    sub: Packing,
    inner: &[Arborescence],
    entering: &BTreeMap<ArcId, usize>,
) -> Step<Packing> {
    let w = con.contracted;
    let mut back = vec![usize::MAX; con.digraph.n()];
    for (old, &new) in con.vertex_map.iter().enumerate() {
        if new != w {
            back[new] = old;
        }
    }
    let structures: Vec<&[Arc]> = sub
        .trees
        .iter()
        .map(|t| t.arcs.as_slice())
        .chain([sub.extra.arcs.as_slice()])
        .collect();
    if structures.len() != inner.len() {
        return Err(format!("{} structures to lift with {} arborescences", structures.len(), inner.len()));
    }
    let mut assigned = vec![None; structures.len()];
    let mut used = vec![false; inner.len()];
    for (s, arcs) in structures.iter().enumerate() {
        if let Some(a) = arcs.iter().find(|a| a.head == w) {
            let j = *entering
                .get(&a.id)
                .ok_or_else(|| format!("arc {} enters the contracted set without a designated tree", a.id))?;
            if used[j] {
                return Err(format!("arborescence {j} designated twice"));
            }
            used[j] = true;
            assigned[s] = Some(j);
        }
    }
    let mut spare = (0..inner.len()).filter(|&j| !used[j]);
    for slot in assigned.iter_mut().filter(|s| s.is_none()) {
        *slot = spare.next();
    }

    let original = |a: &Arc| d.arc(a.id).copied().ok_or_else(|| format!("unknown arc {}", a.id));
    let combine = |arcs: &[Arc], j: usize| -> Step<Vec<Arc>> {
        let mut out = arcs.iter().map(original).collect::<Step<Vec<Arc>>>()?;
        out.extend(inner[j].arcs.iter().copied());
        out.sort_by_key(|a| a.id);
        Ok(out)
    };
    let map_root = |r: usize, j: usize| if r == w { inner[j].root } else { back[r] };

    let mut trees = Vec::with_capacity(sub.trees.len());
    for (s, t) in sub.trees.iter().enumerate() {
        let j = assigned[s].expect("every structure is matched");
        trees.push(Arborescence { root: map_root(t.root, j), arcs: combine(&t.arcs, j)? });
    }
    let j = assigned[sub.trees.len()].expect("every structure is matched");
    let extra = Branching {
        roots: sub.extra.roots.iter().map(|r| map_root(r, j)).collect(),
        arcs: combine(&sub.extra.arcs, j)?,
    };
    Ok(Packing { trees, extra })
}
