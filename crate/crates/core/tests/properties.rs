//! Cross-module properties at desk scale, anchored by an independent
//! brute-force oracle: raw subset enumeration with no pruning, no
//! fragment theory, and no shared code with the search it checks.

use starkit_core::formulas::{kappa_nkstar_formula, lambda_nkstar_formula, FamilyParams};
use starkit_core::oracle::{exact_kappa_s, exact_lambda_s, OracleOptions};
use starkit_core::perm::{self, Arrangement, Parity};
use starkit_core::topology::{
    build_alternating_network, build_cycle, build_nkstar, build_star, EdgeKind,
};
use starkit_core::{Graph, Measure};

fn path_graph(len: u8) -> Graph {
    let labels = perm::enumerate_arrangements(len, 1).unwrap();
    let edges = (0..len as u32 - 1)
        .map(|v| (v, v + 1, EdgeKind::Plain))
        .collect();
    Graph::new(labels, edges, None).unwrap()
}

/// Minimum size of a vertex set whose deletion leaves the graph
/// disconnected with min degree >= h, by trying every subset.
fn naive_kappa(g: &Graph, h: u32) -> Option<u64> {
    let nv = g.vertex_count();
    assert!(nv <= 16, "naive oracle is for tiny graphs");
    let mut best: Option<u64> = None;
    for mask in 0u32..(1 << nv) {
        let removed = |v: u32| mask >> v & 1 == 1;
        let survivors: Vec<u32> = (0..nv as u32).filter(|&v| !removed(v)).collect();
        if survivors.len() < 2 {
            continue;
        }
        // connectivity by traversal
        let mut seen = vec![false; nv];
        let mut stack = vec![survivors[0]];
        seen[survivors[0] as usize] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !removed(w) && !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached == survivors.len() {
            continue;
        }
        let min_deg = survivors
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| !removed(w)).count() as u32)
            .min()
            .unwrap();
        if min_deg < h {
            continue;
        }
        let size = mask.count_ones() as u64;
        best = Some(best.map_or(size, |b: u64| b.min(size)));
    }
    best
}

/// Same for edge sets.
fn naive_lambda(g: &Graph, h: u32) -> Option<u64> {
    let ne = g.edge_count();
    let nv = g.vertex_count();
    assert!(ne <= 20, "naive oracle is for tiny graphs");
    let edges: Vec<(u32, u32)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut best: Option<u64> = None;
    'masks: for mask in 0u32..(1 << ne) {
        let removed = |u: u32, v: u32| {
            edges
                .iter()
                .enumerate()
                .any(|(i, &(a, b))| (a, b) == (u.min(v), u.max(v)) && mask >> i & 1 == 1)
        };
        let mut seen = vec![false; nv];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !removed(v, w) && !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        if reached == nv {
            continue;
        }
        for v in 0..nv as u32 {
            let deg = g.neighbors(v).iter().filter(|&&w| !removed(v, w)).count() as u32;
            if deg < h {
                continue 'masks;
            }
        }
        let size = mask.count_ones() as u64;
        best = Some(best.map_or(size, |b: u64| b.min(size)));
    }
    best
}

#[test]
fn search_oracle_matches_naive_subset_enumeration() {
    let cases: Vec<(&str, Graph)> = vec![
        ("K4", build_nkstar(4, 1).unwrap()),
        ("C5", build_cycle(5).unwrap()),
        ("C6", build_cycle(6).unwrap()),
        ("path5", path_graph(5)),
        ("S32", build_nkstar(3, 2).unwrap()),
        ("S42", build_nkstar(4, 2).unwrap()),
        ("AN4", build_alternating_network(4).unwrap()),
    ];
    for (name, g) in &cases {
        for h in 0..=3u32 {
            if h as usize >= g.vertex_count() {
                continue;
            }
            let kappa = exact_kappa_s(g, h, &OracleOptions::default()).unwrap();
            assert_eq!(
                kappa.value,
                naive_kappa(g, h),
                "kappa mismatch on {name} h={h}"
            );
            if g.edge_count() <= 20 {
                let lambda = exact_lambda_s(g, h, &OracleOptions::default()).unwrap();
                assert_eq!(
                    lambda.value,
                    naive_lambda(g, h),
                    "lambda mismatch on {name} h={h}"
                );
            }
        }
    }
}

#[test]
fn oracle_matches_formulas_on_s42_and_s43_everywhere() {
    for (n, k) in [(4u32, 2u32), (4, 3)] {
        let g = build_nkstar(n as u8, k as u8).unwrap();
        for h in 0..=n - 2 {
            let p = FamilyParams { n, k, h };
            let kappa = exact_kappa_s(&g, h, &OracleOptions::default()).unwrap();
            let lambda = exact_lambda_s(&g, h, &OracleOptions::default()).unwrap();
            assert_eq!(
                kappa.value,
                Some(kappa_nkstar_formula(&p).unwrap().value),
                "kappa S({n},{k}) h={h}"
            );
            assert_eq!(
                lambda.value,
                Some(lambda_nkstar_formula(&p).unwrap().value),
                "lambda S({n},{k}) h={h}"
            );
        }
    }
}

#[test]
fn arrangement_enumeration_is_sorted_and_counted() {
    for n in 1..=6u8 {
        for k in 1..=n {
            let all = perm::enumerate_arrangements(n, k).unwrap();
            assert_eq!(all.len() as u64, perm::arrangement_count(n, k).unwrap());
            for w in all.windows(2) {
                assert!(w[0] < w[1], "not strictly increasing at {:?}", w);
            }
            for (i, a) in all.iter().enumerate() {
                assert_eq!(perm::rank(a), i as u64);
            }
        }
    }
}

#[test]
fn swap_digit_is_a_fixed_point_free_involution() {
    for (n, k) in [(4u8, 2u8), (5, 3), (4, 4)] {
        for a in perm::enumerate_arrangements(n, k).unwrap() {
            for i in 2..=k as usize {
                let b = a.swap_digit(i).unwrap();
                assert_ne!(a, b);
                assert_eq!(a, b.swap_digit(i).unwrap());
            }
        }
    }
}

#[test]
fn half_of_all_permutations_are_even() {
    for n in 2..=7u8 {
        let all = perm::enumerate_arrangements(n, n).unwrap();
        let even = all
            .iter()
            .filter(|p| p.parity().unwrap() == Parity::Even)
            .count();
        assert_eq!(even * 2, all.len(), "n={n}");
    }
}

#[test]
fn generated_families_are_regular_and_connected() {
    for n in 3..=6u8 {
        for k in 1..n {
            let g = build_nkstar(n, k).unwrap();
            assert_eq!(g.vertex_count() as u64, perm::arrangement_count(n, k).unwrap());
            for v in 0..g.vertex_count() as u32 {
                assert_eq!(g.degree(v), n as u32 - 1);
            }
            assert!(g.is_connected());
        }
    }
    for n in 2..=6u8 {
        let s = build_star(n).unwrap();
        assert!(s.is_connected());
        assert_eq!(2 * s.edge_count(), s.vertex_count() * (n as usize - 1));
    }
}

#[test]
fn labels_round_trip_through_text() {
    for (n, k) in [(5u8, 3u8), (6, 2), (4, 4)] {
        for a in perm::enumerate_arrangements(n, k).unwrap() {
            let text = a.to_label();
            assert_eq!(Arrangement::parse_label(&text, n).unwrap(), a);
        }
    }
}

#[test]
fn oracle_values_respect_certificate_upper_bounds() {
    // where both the certificate and the oracle exist, oracle <= |cert|
    use starkit_core::cuts::{build_cuts_from_x, build_fragment_x};
    for (n, k) in [(4u32, 2u32), (4, 3)] {
        let g = build_nkstar(n as u8, k as u8).unwrap();
        for h in (n - k)..=(n - 2) {
            let p = FamilyParams { n, k, h };
            let x = build_fragment_x(&p).unwrap();
            let (vc, ec) = build_cuts_from_x(&g, &p, &x).unwrap();
            let kappa = exact_kappa_s(&g, h, &OracleOptions::default()).unwrap();
            let lambda = exact_lambda_s(&g, h, &OracleOptions::default()).unwrap();
            assert!(kappa.value.unwrap() <= vc.claimed_size);
            assert!(lambda.value.unwrap() <= ec.claimed_size);
        }
    }
}
