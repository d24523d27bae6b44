//! Graph generators and brute-force oracles shared by the integration tests.
//! Nothing here calls the library's own ratio or feasibility code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use arborpack::{Digraph, VertexSet};
use rand::Rng;

/// Ordered pairs `(u, v)`, `u != v`, on `n` vertices.
pub fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every loop-free multi-digraph on exactly `n` vertices with at most
/// `max_arcs` arcs, one per isomorphism class (the lexicographically least
/// sorted arc list under vertex relabeling).
pub fn nonisomorphic_digraphs(n: usize, max_arcs: usize) -> Vec<Digraph> {
    let pairs = ordered_pairs(n);
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut current = Vec::new();
    type Pair = (usize, usize);
    fn rec(start: usize, left: usize, pairs: &[Pair], current: &mut Vec<Pair>, visit: &mut dyn FnMut(&[Pair])) {
        visit(current);
        if left == 0 {
            return;
        }
        for i in start..pairs.len() {
            current.push(pairs[i]);
            rec(i, left - 1, pairs, current, visit);
            current.pop();
        }
    }
    rec(0, max_arcs, &pairs, &mut current, &mut |arcs| {
        let canon = perms
            .iter()
            .map(|p| {
                let mut v: Vec<(usize, usize)> = arcs.iter().map(|&(a, b)| (p[a], p[b])).collect();
                v.sort_unstable();
                v
            })
            .min()
            .unwrap();
        if seen.insert(canon.clone()) {
            out.push(Digraph::new(n, &canon).unwrap());
        }
    });
    out
}

pub fn random_digraph(rng: &mut impl Rng, n: usize, m: usize) -> Digraph {
    let pairs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect();
    Digraph::new(n, &pairs).unwrap()
}

pub fn arcs_of(d: &Digraph) -> Vec<(usize, usize)> {
    d.arcs().iter().map(|a| (a.tail, a.head)).collect()
}

/// `d⁻(X)` by a direct scan.
pub fn in_degree(arcs: &[(usize, usize)], x: u64) -> u64 {
    arcs.iter()
        .filter(|&&(t, h)| x >> t & 1 == 0 && x >> h & 1 == 1)
        .count() as u64
}

/// Exact fraction as `(num, den)` with `den > 0`, compared by cross-multiplication.
pub fn less(a: (u64, u64), b: (u64, u64)) -> bool {
    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
}

/// `ν_f` by labelling each vertex with a part in `0..n` or "outside":
/// `(n+1)^n` labellings. Returns the minimum as an unreduced fraction.
pub fn nu_f_by_labelling(n: usize, arcs: &[(usize, usize)]) -> (u64, u64) {
    let mut best: Option<(u64, u64)> = None;
    let total = (n + 1).pow(n as u32);
    for code in 0..total {
        let mut parts = vec![0u64; n];
        let mut c = code;
        for v in 0..n {
            let label = c % (n + 1);
            c /= n + 1;
            if label < n {
                parts[label] |= 1 << v;
            }
        }
        let used: Vec<u64> = parts.into_iter().filter(|&p| p != 0).collect();
        if used.len() < 2 {
            continue;
        }
        let num: u64 = used.iter().map(|&x| in_degree(arcs, x)).sum();
        let cand = (num, used.len() as u64 - 1);
        if best.is_none_or(|b| less(cand, b)) {
            best = Some(cand);
        }
    }
    best.unwrap()
}

/// Root-count and forced-root target for one branching.
#[derive(Clone, Copy, Debug)]
pub enum Want {
    Tree,
    Roots(usize, u64),
}

/// Decides by enumerating every map from arcs to `{slot 0, .., slot s-1, unused}`
/// whether arc-disjoint spanning branchings meeting `wants` exist.
pub fn naive_packing_exists(n: usize, arcs: &[(usize, usize)], wants: &[Want]) -> bool {
    let s = wants.len();
    let total = (s + 1).pow(arcs.len() as u32);
    'outer: for code in 0..total {
        let mut c = code;
        let mut slots = vec![Vec::new(); s];
        for &a in arcs {
            let pick = c % (s + 1);
            c /= s + 1;
            if pick < s {
                slots[pick].push(a);
            }
        }
        for (slot, want) in slots.iter().zip(wants) {
            let Some(roots) = naive_roots(n, slot) else { continue 'outer };
            let ok = match *want {
                Want::Tree => roots.count_ones() == 1,
                Want::Roots(c, forced) => roots.count_ones() as usize == c && roots & forced == forced,
            };
            if !ok {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

/// Roots of a branching as a bit mask, or `None` if the arcs are not one:
/// a vertex with two in-arcs, or a vertex not reachable from a root.
pub fn naive_roots(n: usize, arcs: &[(usize, usize)]) -> Option<u64> {
    let mut indeg = vec![0; n];
    for &(_, h) in arcs {
        indeg[h] += 1;
        if indeg[h] > 1 {
            return None;
        }
    }
    let roots: u64 = (0..n).filter(|&v| indeg[v] == 0).map(|v| 1u64 << v).sum();
    let mut reached = roots;
    loop {
        let next = arcs
            .iter()
            .filter(|&&(t, _)| reached >> t & 1 == 1)
            .fold(reached, |acc, &(_, h)| acc | 1 << h);
        if next == reached {
            break;
        }
        reached = next;
    }
    (reached.count_ones() as usize == n).then_some(roots)
}

pub fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}
