mod common;

use arborpack::partitions::{self, packing_bound, rational};
use arborpack::sharpness::{build_sharp_graph, nash_williams_decompose, orient_to_branchings, verify_sharp, SharpInstance};
use arborpack::solver::solve_exhaustive;
use arborpack::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut label: Vec<usize> = (0..n).collect();
    for &(u, v) in edges {
        let (a, b) = (label[u], label[v]);
        if a == b {
            return false;
        }
        for l in label.iter_mut() {
            if *l == b {
                *l = a;
            }
        }
    }
    true
}

#[test]
fn decomposition_exists_exactly_when_density_allows() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(0..=9);
        let edges: Vec<(usize, usize)> = (0..m)
            .map(|_| {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                (u, v)
            })
            .collect();
        let g = Graph::new(n, &edges).unwrap();
        let gamma = partitions::gamma_f(&g).unwrap().value;
        for t in 1..=3 {
            let got = nash_williams_decompose(&g, t).unwrap();
            assert_eq!(got.is_some(), gamma <= rational(t as i64, 1), "{edges:?} t={t}");
            if let Some(forests) = got {
                assert_eq!(forests.len(), t);
                let mut all: Vec<usize> = forests.concat();
                all.sort_unstable();
                assert_eq!(all, (0..m).collect::<Vec<_>>());
                for f in &forests {
                    let fe: Vec<(usize, usize)> = f.iter().map(|&i| edges[i]).collect();
                    assert!(is_forest(n, &fe));
                }
            }
        }
    }
}

#[test]
fn zero_forests_is_rejected() {
    let g = Graph::new(2, &[(0, 1)]).unwrap();
    assert!(nash_williams_decompose(&g, 0).is_err());
}

#[test]
fn generated_instances_are_extremal() {
    for (k, d) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
        let inst = SharpInstance::build(k, d).unwrap();
        let n = d + 1;
        assert_eq!(inst.graph.edge_count(), k * d + d - 1);
        assert!(partitions::gamma_f(&inst.graph).unwrap().value < rational(k as i64 + 1, 1));
        assert_eq!(inst.component_counts().iter().sum::<usize>(), k + 2);
        let covered = inst.roots.iter().fold(VertexSet::EMPTY, |a, r| a | *r);
        assert_eq!(covered, VertexSet::full(n));
        for v in 0..n {
            let as_root = inst.roots.iter().filter(|r| r.contains(v)).count();
            assert_eq!(inst.digraph.in_degree(VertexSet::singleton(v)), k + 1 - as_root);
        }
        let nu = partitions::nu_f_digraph(&inst.digraph).unwrap();
        assert_eq!(nu.value, packing_bound(k, d));
        assert!(nu.witness.parts().iter().all(|x| x.len() == 1) && nu.witness.len() == n);
        assert!(solve_exhaustive(&inst.digraph, k, d).unwrap().is_none());
        let report = verify_sharp(&inst.digraph, k, d);
        assert!(report.ok, "{:?}", report.failures);
    }
}

#[test]
fn orientation_rejects_a_non_partition() {
    let g = build_sharp_graph(2, 1).unwrap();
    assert!(orient_to_branchings(&g, &[vec![0], vec![0], vec![]]).is_err());
}

#[test]
fn small_k_is_rejected() {
    assert!(build_sharp_graph(2, 2).is_err());
    assert!(build_sharp_graph(1, 0).is_err());
}
