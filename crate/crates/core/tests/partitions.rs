mod common;

use arborpack::partitions::{self, enumerate_partitions, enumerate_subpartitions, rational};
use arborpack::{Digraph, Graph, VertexSet};
use common::{arcs_of, in_degree, nonisomorphic_digraphs, nu_f_by_labelling};
use proptest::prelude::*;

fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

fn count(mut it: partitions::SubPartitions) -> usize {
    let mut c = 0;
    while it.advance().is_some() {
        c += 1;
    }
    c
}

#[test]
fn enumeration_counts_match_bell_numbers() {
    for n in 1..=7 {
        // A subpartition of n vertices is a partition of n+1 with a marked "outside" block.
        assert_eq!(count(enumerate_subpartitions(n, 1)), bell(n + 1) - 1, "n={n}");
        assert_eq!(count(enumerate_partitions(n, 1)), bell(n), "n={n}");
    }
}

#[test]
fn enumeration_is_strictly_increasing_and_disjoint() {
    let mut it = enumerate_subpartitions(5, 1);
    let mut prev: Option<Vec<VertexSet>> = None;
    while let Some(parts) = it.advance() {
        let mut seen = 0u64;
        for w in parts.windows(2) {
            assert!(w[0] < w[1]);
        }
        for p in parts {
            assert!(!p.is_empty());
            assert_eq!(seen & p.bits(), 0);
            seen |= p.bits();
        }
        if let Some(q) = &prev {
            assert_ne!(q.as_slice(), parts);
        }
        prev = Some(parts.to_vec());
    }
}

#[test]
fn nu_f_matches_labelling_oracle_on_small_digraphs() {
    for n in 2..=4 {
        for d in nonisomorphic_digraphs(n, 5) {
            let (num, den) = nu_f_by_labelling(n, &arcs_of(&d));
            let w = partitions::nu_f_digraph(&d).unwrap();
            assert_eq!(w.value, rational(num as i64, den as i64), "{:?}", arcs_of(&d));
            let attained: u64 = w.witness.parts().iter().map(|x| in_degree(&arcs_of(&d), x.bits())).sum();
            assert_eq!(rational(attained as i64, w.witness.len() as i64 - 1), w.value);
        }
    }
}

#[test]
fn nu_f_of_a_graph_is_minimum_over_partitions() {
    let triangle = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    assert_eq!(partitions::nu_f_graph(&triangle).unwrap().value, rational(3, 2));
    let path = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(partitions::nu_f_graph(&path).unwrap().value, rational(1, 1));
}

fn gamma_by_scan(n: usize, edges: &[(usize, usize)]) -> (u64, u64) {
    let mut best = (0u64, 1u64);
    for x in 0u64..1 << n {
        let size = x.count_ones() as u64;
        if size < 2 {
            continue;
        }
        let inside = edges.iter().filter(|&&(u, v)| x >> u & 1 == 1 && x >> v & 1 == 1).count() as u64;
        if common::less(best, (inside, size - 1)) {
            best = (inside, size - 1);
        }
    }
    best
}

proptest! {
    #[test]
    fn gamma_f_matches_subset_scan(n in 2usize..7, raw in prop::collection::vec((0usize..7, 0usize..7), 0..14)) {
        let edges: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let g = Graph::new(n, &edges).unwrap();
        let (num, den) = gamma_by_scan(n, &edges);
        prop_assert_eq!(partitions::gamma_f(&g).unwrap().value, rational(num as i64, den as i64));
    }

    #[test]
    fn in_degree_is_submodular(n in 2usize..11, raw in prop::collection::vec((0usize..10, 0usize..10), 0..30), x in any::<u64>(), y in any::<u64>()) {
        let arcs: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let d = Digraph::new(n, &arcs).unwrap();
        let mask = (1u64 << n) - 1;
        let (x, y) = (VertexSet::from_bits(x & mask), VertexSet::from_bits(y & mask));
        prop_assert_eq!(d.in_degree(x) as u64, in_degree(&arcs, x.bits()));
        prop_assert!(d.in_degree(x) + d.in_degree(y) >= d.in_degree(x | y) + d.in_degree(x & y));
    }

    #[test]
    fn nu_f_is_monotone_under_adding_arcs(n in 2usize..6, raw in prop::collection::vec((0usize..6, 0usize..6), 0..10), extra in (0usize..6, 0usize..6)) {
        let arcs: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u % n, v % n)).filter(|(u, v)| u != v).collect();
        let (u, v) = (extra.0 % n, extra.1 % n);
        prop_assume!(u != v);
        let d = Digraph::new(n, &arcs).unwrap();
        let (bigger, _) = d.add_arcs(&[(u, v)]).unwrap();
        prop_assert!(partitions::nu_f_digraph(&bigger).unwrap().value >= partitions::nu_f_digraph(&d).unwrap().value);
    }
}
