//! Loop-free multi-digraphs and multigraphs.
//!
//! Arcs carry stable identities: removing, contracting or restricting a
//! digraph never renumbers the arcs that survive, so packings found on a
//! derived digraph can be lifted back arc-for-arc.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vertex_set::{VertexSet, MAX_VERTICES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArcId(pub usize);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// An arc. Serializes as the triple `[tail, head, id]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: ArcId,
    pub tail: usize,
    pub head: usize,
}

impl Serialize for Arc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.tail, self.head, self.id.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (tail, head, id) = <(usize, usize, usize)>::deserialize(d)?;
        Ok(Arc { id: ArcId(id), tail, head })
    }
}

impl Arc {
    /// Tail outside `x`, head inside.
    pub fn enters(&self, x: VertexSet) -> bool {
        !x.contains(self.tail) && x.contains(self.head)
    }

    pub fn inside(&self, x: VertexSet) -> bool {
        x.contains(self.tail) && x.contains(self.head)
    }
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    Ok(())
}

fn check_endpoints(n: usize, tail: usize, head: usize) -> Result<()> {
    for v in [tail, head] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if tail == head {
        return Err(Error::Loop(tail));
    }
    Ok(())
}

/// A loop-free multi-digraph on vertices `0..n`. Arcs are kept sorted by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
}

/// Result of shrinking a vertex set into a single vertex.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub digraph: Digraph,
    /// Old vertex to new vertex; every member of the shrunk set maps to `contracted`.
    pub vertex_map: Vec<usize>,
    /// Index of the merged vertex in `digraph`.
    pub contracted: usize,
    /// Surviving arcs, old id to new id. Arcs internal to the shrunk set are absent.
    pub arc_map: BTreeMap<ArcId, ArcId>,
}

/// An induced subdigraph together with its vertex correspondence.
#[derive(Clone, Debug)]
pub struct Induced {
    pub digraph: Digraph,
    /// New vertex to old vertex, ascending.
    pub original: Vec<usize>,
}

impl Induced {
    /// Old vertex to new vertex, if the old vertex was kept.
    pub fn local(&self, old: usize) -> Option<usize> {
        self.original.binary_search(&old).ok()
    }
}

impl Digraph {
    /// Builds a digraph with arc ids `0..pairs.len()` in the given order.
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let arcs = pairs
            .iter()
            .enumerate()
            .map(|(i, &(tail, head))| Arc { id: ArcId(i), tail, head })
            .collect();
        Digraph::from_arcs(n, arcs)
    }

    pub fn from_arcs(n: usize, mut arcs: Vec<Arc>) -> Result<Self> {
        check_vertex_count(n)?;
        for a in &arcs {
            check_endpoints(n, a.tail, a.head)?;
        }
        arcs.sort_by_key(|a| a.id);
        if let Some(w) = arcs.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::DuplicateArc(w[0].id));
        }
        Ok(Digraph { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs
            .binary_search_by_key(&id, |a| a.id)
            .ok()
            .map(|i| &self.arcs[i])
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().map(|a| a.id)
    }

    fn assert_in_range(&self, x: VertexSet) {
        assert!(
            x.within(self.n),
            "vertex set {x} out of range for a digraph on {} vertices",
            self.n
        );
    }

    /// `d⁻(X)`: arcs with tail outside `x` and head inside, with multiplicity.
    ///
    /// Panics if `x` mentions a vertex `>= n`.
    pub fn in_degree(&self, x: VertexSet) -> usize {
        self.assert_in_range(x);
        self.arcs.iter().filter(|a| a.enters(x)).count()
    }

    /// `d⁻(X)` for every `X ⊆ V`, indexed by the bit mask of `X`.
    pub fn in_degree_table(&self) -> Vec<u32> {
        let size = 1usize << self.n;
        let mut table = vec![0u32; size];
        for a in &self.arcs {
            let t = 1usize << a.tail;
            let h = 1usize << a.head;
            // masks containing the head but not the tail
            let rest = (size - 1) & !(t | h);
            let mut sub = rest;
            loop {
                table[sub | h] += 1;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        table
    }

    /// `|A(X)|`: arcs with both ends in `x`.
    pub fn arcs_within(&self, x: VertexSet) -> usize {
        self.assert_in_range(x);
        self.arcs.iter().filter(|a| a.inside(x)).count()
    }

    pub fn entering(&self, x: VertexSet) -> impl Iterator<Item = &Arc> + '_ {
        self.arcs.iter().filter(move |a| a.enters(x))
    }

    /// Arcs with tail in `from` and head in `to`.
    pub fn arcs_between(&self, from: VertexSet, to: VertexSet) -> impl Iterator<Item = &Arc> + '_ {
        self.arcs
            .iter()
            .filter(move |a| from.contains(a.tail) && to.contains(a.head))
    }

    /// Shrinks `w` into one vertex: arcs inside `w` are deleted first, then the
    /// members of `w` are merged. Vertices outside `w` keep their relative order
    /// and the merged vertex is numbered last.
    pub fn contract(&self, w: VertexSet) -> Result<Contraction> {
        if w.is_empty() {
            return Err(Error::EmptySet);
        }
        if !w.within(self.n) {
            let vertex = w.last().unwrap_or(0);
            return Err(Error::VertexOutOfRange { vertex, n: self.n });
        }
        let new_n = self.n - w.len() + 1;
        let contracted = new_n - 1;
        let mut vertex_map = vec![contracted; self.n];
        let mut next = 0;
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            if !w.contains(v) {
                *slot = next;
                next += 1;
            }
        }
        let mut arcs = Vec::with_capacity(self.arcs.len());
        let mut arc_map = BTreeMap::new();
        for a in &self.arcs {
            if a.inside(w) {
                continue;
            }
            arcs.push(Arc {
                id: a.id,
                tail: vertex_map[a.tail],
                head: vertex_map[a.head],
            });
            arc_map.insert(a.id, a.id);
        }
        Ok(Contraction {
            digraph: Digraph { n: new_n, arcs },
            vertex_map,
            contracted,
            arc_map,
        })
    }

    /// `D[X]`, with vertices renumbered in ascending order and arc ids kept.
    pub fn induced(&self, x: VertexSet) -> Result<Induced> {
        if x.is_empty() {
            return Err(Error::EmptySet);
        }
        if !x.within(self.n) {
            let vertex = x.last().unwrap_or(0);
            return Err(Error::VertexOutOfRange { vertex, n: self.n });
        }
        let original = x.to_vec();
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in original.iter().enumerate() {
            local[v] = i;
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|a| a.inside(x))
            .map(|a| Arc {
                id: a.id,
                tail: local[a.tail],
                head: local[a.head],
            })
            .collect();
        Ok(Induced {
            digraph: Digraph { n: original.len(), arcs },
            original,
        })
    }

    /// `D - A₀`.
    pub fn remove_arcs(&self, ids: &[ArcId]) -> Result<Digraph> {
        let drop: BTreeSet<ArcId> = ids.iter().copied().collect();
        if let Some(&missing) = drop.iter().find(|&&id| self.arc(id).is_none()) {
            return Err(Error::UnknownArc(missing));
        }
        Ok(Digraph {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .filter(|a| !drop.contains(&a.id))
                .copied()
                .collect(),
        })
    }

    /// Keeps only the arcs whose ids are listed.
    pub fn restrict_arcs(&self, keep: &BTreeSet<ArcId>) -> Digraph {
        Digraph {
            n: self.n,
            arcs: self.arcs.iter().filter(|a| keep.contains(&a.id)).copied().collect(),
        }
    }

    /// `D + A₁`. New arcs get fresh ids above the current maximum, in order.
    pub fn add_arcs(&self, pairs: &[(usize, usize)]) -> Result<(Digraph, Vec<ArcId>)> {
        let first = self.arcs.last().map_or(0, |a| a.id.0 + 1);
        let mut arcs = self.arcs.clone();
        let mut ids = Vec::with_capacity(pairs.len());
        for (i, &(tail, head)) in pairs.iter().enumerate() {
            check_endpoints(self.n, tail, head)?;
            let id = ArcId(first + i);
            arcs.push(Arc { id, tail, head });
            ids.push(id);
        }
        Ok((Digraph { n: self.n, arcs }, ids))
    }

    /// Same arcs with orientation forgotten; edge ids equal arc ids.
    pub fn underlying(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self
                .arcs
                .iter()
                .map(|a| Edge { id: a.id.0, u: a.tail, v: a.head })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: usize,
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn inside(&self, x: VertexSet) -> bool {
        x.contains(self.u) && x.contains(self.v)
    }
}

/// A loop-free multigraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_vertex_count(n)?;
        let mut edges = Vec::with_capacity(pairs.len());
        for (id, &(u, v)) in pairs.iter().enumerate() {
            check_endpoints(n, u, v)?;
            edges.push(Edge { id, u, v });
        }
        Ok(Graph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `|E(X)|`.
    pub fn edges_within(&self, x: VertexSet) -> usize {
        self.edges.iter().filter(|e| e.inside(x)).count()
    }

    /// `|E(X)|` for every `X ⊆ V`, indexed by bit mask.
    pub fn edges_within_table(&self) -> Vec<u32> {
        let size = 1usize << self.n;
        let mut table = vec![0u32; size];
        for e in &self.edges {
            let both = (1usize << e.u) | (1usize << e.v);
            let rest = (size - 1) & !both;
            let mut sub = rest;
            loop {
                table[sub | both] += 1;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        table
    }
}
