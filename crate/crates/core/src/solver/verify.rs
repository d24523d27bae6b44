use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Arc, ArcId, Digraph};
use crate::partitions::rational;

use super::branching::{components, is_branching};
use super::PackingCertificate;

/// The clause of the packing statement a failure refers to. `Input` covers
/// certificates that do not describe the given digraph and parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Clause {
    #[serde(rename = "input")]
    Input,
    #[serde(rename = "(i)")]
    Disjoint,
    #[serde(rename = "(ii)")]
    Arborescences,
    #[serde(rename = "(iii)")]
    Branching,
    #[serde(rename = "(iv)")]
    ArcCount,
    #[serde(rename = "(v)")]
    LargeComponent,
}

impl Clause {
    /// The label used in serialized reports.
    pub fn tag(self) -> &'static str {
        match self {
            Clause::Input => "input",
            Clause::Disjoint => "(i)",
            Clause::Arborescences => "(ii)",
            Clause::Branching => "(iii)",
            Clause::ArcCount => "(iv)",
            Clause::LargeComponent => "(v)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub clause: Clause,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn failed(&self, clause: Clause) -> bool {
        self.failures.iter().any(|f| f.clause == clause)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "certificate valid");
        }
        for (i, fail) in self.failures.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {}", fail.clause.tag(), fail.message)?;
        }
        Ok(())
    }
}

/// Checks a certificate against `d`, `k` and `dd` and lists every failed clause.
///
/// (i) all arcs pairwise distinct across the structures; (ii) `k` spanning
/// arborescences; (iii) the extra arcs form a branching with the stated
/// roots; (iv) it has more than `(d-1)(n-1)/d` arcs; (v) it is spanning or
/// has a component with at least `d` arcs.
pub fn verify_theorem7(d: &Digraph, k: usize, dd: usize, cert: &PackingCertificate) -> VerificationReport {
    let mut failures = Vec::new();
    let mut fail = |clause, message: String| failures.push(Failure { clause, message });
    let n = d.n();

    if cert.k != k || cert.d != dd {
        fail(
            Clause::Input,
            format!("certificate is for k={}, d={}; expected k={k}, d={dd}", cert.k, cert.d),
        );
    }
    if dd == 0 {
        fail(Clause::Input, "d must be at least 1".into());
    }
    let all: Vec<&Arc> = cert
        .trees
        .iter()
        .flat_map(|t| t.arcs.iter())
        .chain(cert.extra.arcs.iter())
        .collect();
    for a in &all {
        if d.arc(a.id) != Some(*a) {
            fail(
                Clause::Input,
                format!("arc [{}, {}, {}] is not an arc of the digraph", a.tail, a.head, a.id.0),
            );
        }
    }

    let mut seen = BTreeSet::new();
    let repeated: BTreeSet<ArcId> = all.iter().filter(|a| !seen.insert(a.id)).map(|a| a.id).collect();
    if !repeated.is_empty() {
        let list: Vec<String> = repeated.iter().map(|id| id.to_string()).collect();
        fail(Clause::Disjoint, format!("arcs used more than once: {}", list.join(", ")));
    }

    if cert.trees.len() != k {
        fail(Clause::Arborescences, format!("{} trees given, {k} required", cert.trees.len()));
    }
    for (i, t) in cert.trees.iter().enumerate() {
        match is_branching(d, &t.arc_ids()) {
            Err(e) => fail(Clause::Arborescences, format!("tree {i}: {e}")),
            Ok(roots) if roots.len() != 1 => fail(
                Clause::Arborescences,
                format!("tree {i} has roots {roots}, so it is not spanning"),
            ),
            Ok(roots) if roots.first() != Some(t.root) => fail(
                Clause::Arborescences,
                format!("tree {i} is rooted at {roots}, not {}", t.root),
            ),
            Ok(_) => {}
        }
    }

    let extra_ok = match is_branching(d, &cert.extra.arc_ids()) {
        Err(e) => {
            fail(Clause::Branching, format!("extra: {e}"));
            false
        }
        Ok(roots) if roots != cert.extra.roots => {
            fail(
                Clause::Branching,
                format!("extra has roots {roots}, certificate states {}", cert.extra.roots),
            );
            true
        }
        Ok(_) => true,
    };

    let size = cert.extra.arcs.len();
    if dd > 0 {
        let bound = rational(((dd - 1) * n.saturating_sub(1)) as i64, dd as i64);
        if rational(size as i64, 1) <= bound {
            fail(Clause::ArcCount, format!("extra has {size} arcs, needs more than {bound}"));
        }
    }

    if extra_ok && dd > 0 {
        let comps = components(n, &cert.extra.arcs);
        let largest = comps.iter().map(|c| c.vertices.len() - 1).max().unwrap_or(0);
        if comps.len() != 1 && largest < dd {
            fail(
                Clause::LargeComponent,
                format!("extra is not spanning and its largest component has {largest} < {dd} arcs"),
            );
        }
    }

    VerificationReport { ok: failures.is_empty(), failures }
}
