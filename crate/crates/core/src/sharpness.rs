//! Extremal instances: digraphs with `ν_f(D) = k + (d-1)/d` exactly that
//! admit no packing of `k` spanning arborescences plus a branching with more
//! than `(d-1)(n-1)/d` arcs.
//!
//! The instance lives on `d+1` vertices. An undirected multigraph with
//! `kd+d-1` edges and `γ_f < k+1` splits into `k+1` forests; orienting each
//! forest away from roots chosen to cover every vertex gives the digraph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};
use crate::limits;
use crate::partitions::{self, enumerate_subpartitions, packing_bound, SubPartition};
use crate::solver;
use crate::vertex_set::VertexSet;

/// A generated extremal instance with its intermediate structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpInstance {
    pub k: usize,
    pub d: usize,
    pub graph: Graph,
    /// Edge ids of each of the `k+1` forests.
    pub forests: Vec<Vec<usize>>,
    /// The oriented graph; arc `i` is edge `i`.
    pub digraph: Digraph,
    /// Root set of each oriented forest.
    pub roots: Vec<VertexSet>,
}

impl SharpInstance {
    pub fn build(k: usize, d: usize) -> Result<Self> {
        let graph = build_sharp_graph(k, d)?;
        let forests = nash_williams_decompose(&graph, k + 1)?.ok_or_else(|| {
            Error::Construction(format!("no decomposition into {} forests", k + 1))
        })?;
        let (digraph, roots) = orient_to_branchings(&graph, &forests)?;
        Ok(SharpInstance { k, d, graph, forests, digraph, roots })
    }

    /// Components of each forest, counted on all `d+1` vertices.
    pub fn component_counts(&self) -> Vec<usize> {
        self.roots.iter().map(|r| r.len()).collect()
    }
}

fn check_parameters(k: usize, d: usize) -> Result<()> {
    if d < 1 || k < d + 1 {
        return Err(Error::InvalidParameter(format!(
            "extremal instances need k >= d+1 >= 2, got k={k}, d={d}"
        )));
    }
    Ok(())
}

/// A multigraph on `d+1` vertices with `kd+d-1` edges spread as evenly as
/// possible over the vertex pairs, earlier pairs (lexicographic) taking the
/// extra edges. Fails rather than return a graph with `γ_f ≥ k+1`.
pub fn build_sharp_graph(k: usize, d: usize) -> Result<Graph> {
    check_parameters(k, d)?;
    let n = d + 1;
    limits::guard(n)?;
    let m = k * d + d - 1;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let (q, r) = (m / pairs.len(), m % pairs.len());
    let mut edges = Vec::with_capacity(m);
    for (i, &p) in pairs.iter().enumerate() {
        let copies = q + usize::from(i < r);
        edges.extend(std::iter::repeat_n(p, copies));
    }
    let g = Graph::new(n, &edges)?;
    let gamma = partitions::gamma_f(&g)?;
    if gamma.value >= partitions::rational(k as i64 + 1, 1) {
        return Err(Error::Construction(format!(
            "even distribution has gamma_f = {} >= {} on {}",
            gamma.value,
            k + 1,
            gamma.set
        )));
    }
    Ok(g)
}

/// Splits the edges into `t` forests by backtracking, or `None` if that is
/// impossible. Forests are edge-id lists; the first forest is filled first.
pub fn nash_williams_decompose(g: &Graph, t: usize) -> Result<Option<Vec<Vec<usize>>>> {
    if t == 0 {
        return Err(Error::InvalidParameter("forest count must be at least 1".into()));
    }
    limits::guard_search(g.n(), g.edge_count())?;
    let n = g.n();
    if g.edge_count() > t * n.saturating_sub(1) {
        return Ok(None);
    }
    // Parallel copies are adjacent so that their forests can be forced increasing.
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| {
        let e = g.edges()[i];
        (e.u.min(e.v), e.u.max(e.v), i)
    });
    let mut state = Decompose {
        g,
        order,
        labels: vec![(0..n).collect(); t],
        forests: vec![Vec::new(); t],
        choice: vec![0; g.edge_count()],
    };
    Ok(state.run(0).then(|| {
        let mut forests = state.forests;
        for f in &mut forests {
            f.sort_unstable();
        }
        forests
    }))
}

struct Decompose<'g> {
    g: &'g Graph,
    order: Vec<usize>,
    /// Component label of each vertex, per forest.
    labels: Vec<Vec<usize>>,
    forests: Vec<Vec<usize>>,
    /// Forest chosen for the edge at each position of `order`.
    choice: Vec<usize>,
}

impl Decompose<'_> {
    fn run(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let n = self.g.n();
        let room: usize = self.forests.iter().map(|f| n - 1 - f.len()).sum();
        if room < self.order.len() - pos {
            return false;
        }
        let e = self.g.edges()[self.order[pos]];
        let same_pair = pos > 0 && {
            let p = self.g.edges()[self.order[pos - 1]];
            (p.u.min(p.v), p.u.max(p.v)) == (e.u.min(e.v), e.u.max(e.v))
        };
        let start = if same_pair { self.choice[pos - 1] + 1 } else { 0 };
        let used = self.forests.iter().take_while(|f| !f.is_empty()).count();
        for f in start..self.forests.len().min(used + 1) {
            let (a, b) = (self.labels[f][e.u], self.labels[f][e.v]);
            if a == b {
                continue;
            }
            let saved = self.labels[f].clone();
            for l in &mut self.labels[f] {
                if *l == b {
                    *l = a;
                }
            }
            self.forests[f].push(e.id);
            self.choice[pos] = f;
            if self.run(pos + 1) {
                return true;
            }
            self.forests[f].pop();
            self.labels[f] = saved;
        }
        false
    }
}

/// Orients each forest away from one root per component. Roots are chosen
/// greedily: the least vertex of the component not yet a root of an earlier
/// forest, else the least vertex. Arc `i` is edge `i`.
pub fn orient_to_branchings(g: &Graph, forests: &[Vec<usize>]) -> Result<(Digraph, Vec<VertexSet>)> {
    let n = g.n();
    let mut seen = vec![false; g.edge_count()];
    for &id in forests.iter().flatten() {
        if id >= g.edge_count() || std::mem::replace(&mut seen[id], true) {
            return Err(Error::Construction(format!("edge {id} missing or repeated in the forests")));
        }
    }
    if seen.contains(&false) {
        return Err(Error::Construction("forests do not cover every edge".into()));
    }
    let mut pairs = vec![(0, 0); g.edge_count()];
    let mut covered = VertexSet::EMPTY;
    let mut all_roots = Vec::with_capacity(forests.len());
    for forest in forests {
        let mut label: Vec<usize> = (0..n).collect();
        let mut adj = vec![Vec::new(); n];
        for &id in forest {
            let e = g.edges()[id];
            let (a, b) = (label[e.u], label[e.v]);
            if a == b {
                return Err(Error::Construction(format!("edge {id} closes a cycle in its forest")));
            }
            label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
            adj[e.u].push((e.v, id));
            adj[e.v].push((e.u, id));
        }
        let mut reached = VertexSet::EMPTY;
        let mut roots = VertexSet::EMPTY;
        for start in 0..n {
            if reached.contains(start) {
                continue;
            }
            let comp = reach(&adj, start);
            let root = (comp - covered).first().unwrap_or(start);
            roots.insert(root);
            reached = reached | comp;
            let mut stack = vec![root];
            let mut done = VertexSet::singleton(root);
            while let Some(v) = stack.pop() {
                for &(w, id) in &adj[v] {
                    if done.contains(w) {
                        continue;
                    }
                    pairs[id] = (v, w);
                    done.insert(w);
                    stack.push(w);
                }
            }
        }
        covered = covered | roots;
        all_roots.push(roots);
    }
    if covered != VertexSet::full(n) {
        return Err(Error::Construction(format!("roots cover only {covered}")));
    }
    Ok((Digraph::new(n, &pairs)?, all_roots))
}

fn reach(adj: &[Vec<(usize, usize)>], start: usize) -> VertexSet {
    let mut seen = VertexSet::singleton(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &(w, _) in &adj[v] {
            if !seen.contains(w) {
                seen.insert(w);
                stack.push(w);
            }
        }
    }
    seen
}

/// Result of [`verify_sharp`]; `ok` is the conjunction of the checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpReport {
    pub nu_f: String,
    pub bound: String,
    /// `ν_f` equals `k + (d-1)/d` exactly.
    pub nu_f_at_bound: bool,
    pub witness: SubPartition,
    /// The all-singleton partition is the only minimizer.
    pub singletons_unique_minimizer: bool,
    /// The exhaustive search finds no packing.
    pub no_packing: bool,
    /// `|A(X)| ≤ (k+1)(|X|-1)` for every nonempty `X`.
    pub arcs_within_bound: bool,
    /// ... with equality exactly at singletons.
    pub arcs_within_tight_only_at_singletons: bool,
    /// `Σ_{v∈S} d⁻(v) ≥ (k+1)|S| - (k+2)` for every nonempty `S`.
    pub in_degree_bound: bool,
    /// ... with equality exactly at `S = V`.
    pub in_degree_tight_only_at_full_set: bool,
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Certifies that `dg` on `d+1` vertices is extremal for `(k, d)`. Problems
/// are reported in the result, never raised.
pub fn verify_sharp(dg: &Digraph, k: usize, d: usize) -> SharpReport {
    let mut failures = Vec::new();
    let n = dg.n();
    if d == 0 || n != d + 1 {
        failures.push(format!("expected {} vertices, found {n}", d + 1));
    }
    let bound = if d == 0 { partitions::rational(k as i64, 1) } else { packing_bound(k, d) };

    let (nu_f, witness, at_bound, unique) = match partitions::nu_f_digraph(dg) {
        Ok(nu) => {
            let unique = n >= 2 && nu.witness == SubPartition::singletons(n) && minimizers(dg, &nu.value) == 1;
            (nu.value.to_string(), nu.witness, nu.value == bound, unique)
        }
        Err(e) => {
            failures.push(format!("nu_f: {e}"));
            (String::new(), SubPartition::singletons(0), false, false)
        }
    };
    if !at_bound {
        failures.push(format!("nu_f = {nu_f} differs from {bound}"));
    }
    if !unique {
        failures.push("all-singleton partition is not the unique minimizer".into());
    }

    let no_packing = match solver::solve_exhaustive(dg, k, d.max(1)) {
        Ok(None) => true,
        Ok(Some(_)) => {
            failures.push("a packing exists".into());
            false
        }
        Err(e) => {
            failures.push(format!("exhaustive search: {e}"));
            false
        }
    };

    let big = (k + 1) as i64;
    let (mut within_ok, mut within_tight) = (true, true);
    let (mut indeg_ok, mut indeg_tight) = (true, true);
    let full = VertexSet::full(n.min(64));
    for mask in 1..(1u64 << n.min(20)) {
        let x = VertexSet::from_bits(mask);
        let inside = dg.arcs_within(x) as i64;
        let cap = big * (x.len() as i64 - 1);
        within_ok &= inside <= cap;
        within_tight &= (inside == cap) == (x.len() == 1);
        let sum: i64 = x.iter().map(|v| dg.in_degree(VertexSet::singleton(v)) as i64).sum();
        let floor = big * x.len() as i64 - (big + 1);
        indeg_ok &= sum >= floor;
        indeg_tight &= (sum == floor) == (x == full);
    }
    for (ok, what) in [
        (within_ok, "|A(X)| exceeds (k+1)(|X|-1) somewhere"),
        (within_tight, "|A(X)| = (k+1)(|X|-1) away from singletons"),
        (indeg_ok, "in-degree sum falls below (k+1)|S|-(k+2) somewhere"),
        (indeg_tight, "in-degree sum is tight at a proper subset or slack at V"),
    ] {
        if !ok {
            failures.push(what.into());
        }
    }

    SharpReport {
        nu_f,
        bound: bound.to_string(),
        nu_f_at_bound: at_bound,
        witness,
        singletons_unique_minimizer: unique,
        no_packing,
        arcs_within_bound: within_ok,
        arcs_within_tight_only_at_singletons: within_tight,
        in_degree_bound: indeg_ok,
        in_degree_tight_only_at_full_set: indeg_tight,
        ok: failures.is_empty(),
        failures,
    }
}

/// Number of subpartitions with at least two parts attaining `value`.
fn minimizers(dg: &Digraph, value: &partitions::Rational) -> usize {
    let table = dg.in_degree_table();
    let (num, den) = (value.numer(), value.denom());
    let mut count = 0;
    let mut it = enumerate_subpartitions(dg.n(), 2);
    while let Some(parts) = it.advance() {
        let sum = partitions::sum_over(&table, parts);
        let lhs = num_bigint::BigInt::from(sum) * den;
        let rhs = num * num_bigint::BigInt::from(parts.len() - 1);
        if lhs == rhs {
            count += 1;
        }
    }
    count
}
