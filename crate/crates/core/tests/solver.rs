mod common;

use arborpack::partitions::hypothesis_holds;
use arborpack::solver::{
    self, is_branching, min_extra_arcs, minimal_violating_set, solve_exhaustive, solve_theorem7,
    solve_theorem7_traced, verify_theorem7, CaseTag, Clause, ProofOptions,
};
use arborpack::{ArcId, Digraph, Error, VertexSet};
use common::{arcs_of, in_degree, nonisomorphic_digraphs, random_digraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PARAMS: [(usize, usize); 5] = [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1)];

fn check_certificate(d: &Digraph, k: usize, dd: usize, opts: ProofOptions) -> Vec<CaseTag> {
    let (cert, trace) = solve_theorem7_traced(d, k, dd, opts).unwrap();
    let report = verify_theorem7(d, k, dd, &cert);
    assert!(report.ok, "{:?} k={k} d={dd}: {report}", arcs_of(d));
    assert!(trace.divergences.is_empty(), "{:?}: {:?}", arcs_of(d), trace.divergences);
    let n = d.n();
    assert!(cert.extra.arcs.len() >= min_extra_arcs(n, dd));
    // d(|A(F)|) > (d-1)(n-1), independently of the library's helper.
    assert!(dd * cert.extra.arcs.len() > (dd - 1) * (n - 1));
    trace.cases()
}

#[test]
fn exhaustive_small_digraphs_get_verified_certificates() {
    for n in 2..=4 {
        for d in nonisomorphic_digraphs(n, if n == 4 { 6 } else { 7 }) {
            for (k, dd) in PARAMS {
                if hypothesis_holds(&d, k, dd).unwrap() {
                    check_certificate(&d, k, dd, ProofOptions::default());
                    check_certificate(&d, k, dd, ProofOptions { minimize_first: false });
                    assert!(solve_exhaustive(&d, k, dd).unwrap().is_some());
                }
            }
        }
    }
}

#[test]
fn random_digraphs_get_verified_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut hits = 0;
    while hits < 200 {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(n - 1..=10);
        let d = random_digraph(&mut rng, n, m);
        let (k, dd) = PARAMS[rng.gen_range(0..PARAMS.len())];
        if !hypothesis_holds(&d, k, dd).unwrap() {
            continue;
        }
        hits += 1;
        check_certificate(&d, k, dd, ProofOptions::default());
        let oracle = solve_exhaustive(&d, k, dd).unwrap().expect("oracle agrees");
        assert!(verify_theorem7(&d, k, dd, &oracle).ok);
    }
}

#[test]
fn unminimized_start_exercises_the_augmenting_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut augmented = 0;
    for _ in 0..3000 {
        let m = rng.gen_range(8..=9);
        let d = random_digraph(&mut rng, 4, m);
        if !hypothesis_holds(&d, 2, 2).unwrap() {
            continue;
        }
        let cases = check_certificate(&d, 2, 2, ProofOptions { minimize_first: false });
        if cases.contains(&CaseTag::Augment) {
            augmented += 1;
        }
    }
    assert!(augmented > 0);
}

#[test]
fn hypothesis_failure_carries_the_witness() {
    let d = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
    match solve_theorem7(&d, 1, 2) {
        Err(Error::HypothesisFails(f)) => assert_eq!(f.witness.len(), 3),
        other => panic!("expected hypothesis failure, got {other:?}"),
    }
}

#[test]
fn arc_count_clause_is_the_only_thing_wrong_with_a_short_branching() {
    let d = Digraph::new(3, &[(0, 1), (1, 2), (2, 0), (0, 2), (2, 1)]).unwrap();
    let mut cert = solve_theorem7(&d, 1, 2).unwrap();
    assert!(verify_theorem7(&d, 1, 2, &cert).ok);
    cert.extra.arcs.clear();
    cert.extra.roots = VertexSet::full(3);
    let report = verify_theorem7(&d, 1, 2, &cert);
    assert!(report.failed(Clause::ArcCount));
    assert!(!report.failed(Clause::Disjoint));
}

#[test]
fn certificate_arcs_form_branchings_in_the_input() {
    let d = Digraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3), (2, 0), (3, 1)]).unwrap();
    let cert = solve_theorem7(&d, 1, 2).unwrap();
    for t in &cert.trees {
        assert_eq!(is_branching(&d, &t.arc_ids()).unwrap(), VertexSet::singleton(t.root));
    }
    assert_eq!(is_branching(&d, &cert.extra.arc_ids()).unwrap(), cert.extra.roots);
    let json = serde_json_roundtrip(&cert);
    assert!(verify_theorem7(&d, 1, 2, &json).ok);
}

fn serde_json_roundtrip(cert: &solver::PackingCertificate) -> solver::PackingCertificate {
    serde_json::from_str(&serde_json::to_string(cert).unwrap()).unwrap()
}

/// Members of tight subpartitions entered by a candidate, by direct scan.
fn tight_members(n: usize, arcs: &[(usize, usize)], cands: &[(usize, usize)], k: u64) -> Vec<u64> {
    let mut out = Vec::new();
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
        if used.is_empty() {
            continue;
        }
        let sum: u64 = used.iter().map(|&x| in_degree(arcs, x)).sum();
        if sum != k * (used.len() as u64 - 1) {
            continue;
        }
        for &x in &used {
            if cands.iter().any(|&(t, h)| x >> t & 1 == 0 && x >> h & 1 == 1) {
                out.push(x);
            }
        }
    }
    out
}

#[test]
fn minimal_violating_set_is_inclusion_minimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut found = 0;
    for _ in 0..400 {
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(2..=8);
        let d = random_digraph(&mut rng, n, m);
        let removed: Vec<ArcId> = d.arc_ids().filter(|_| rng.gen_bool(0.3)).collect();
        let candidates: Vec<ArcId> = removed.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let k = rng.gen_range(0..=2);
        let kept: Vec<(usize, usize)> = d.arcs().iter().filter(|a| !removed.contains(&a.id)).map(|a| (a.tail, a.head)).collect();
        let cands: Vec<(usize, usize)> = candidates.iter().map(|&id| { let a = d.arc(id).unwrap(); (a.tail, a.head) }).collect();
        let members = tight_members(n, &kept, &cands, k as u64);
        match minimal_violating_set(&d, &removed, &candidates, k).unwrap() {
            None => assert!(members.is_empty()),
            Some(t) => {
                found += 1;
                assert!(members.contains(&t.set.bits()));
                assert!(members.iter().all(|&m| m & t.set.bits() != m || m == t.set.bits()));
                let a = d.arc(t.arc).unwrap();
                assert!(candidates.contains(&t.arc) && a.enters(t.set));
                assert!(t.partition.parts().contains(&t.set));
            }
        }
    }
    assert!(found > 0);
}
