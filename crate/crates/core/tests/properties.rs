use proptest::prelude::*;

use dspack_core::distance::{apsp, rayleigh_lower_bound, rho_d};
use dspack_core::extremal::{build_extremal, ExtremalFamily, ExtremalSpec};
use dspack_core::graph::{decode_graph, encode_graph, Edge, Format, Graph};
use dspack_core::packing::{nu_f_exact, spanning_tree_packing_number};
use dspack_core::rational::to_f64;
use dspack_core::Rational;

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<Edge> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len())
            .prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

/// A spanning path glued to random extra edges.
fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_map(|g| {
        let path: Vec<Edge> = (1..g.n()).map(|v| (v - 1, v)).filter(|&(u, v)| !g.has_edge(u, v)).collect();
        g.add_edges(&path).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph6_roundtrip(g in arb_graph(20)) {
        let bytes = encode_graph(&g, Format::Graph6).unwrap();
        prop_assert_eq!(decode_graph(&bytes, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn edge_list_roundtrip(g in arb_graph(20)) {
        let bytes = encode_graph(&g, Format::EdgeList).unwrap();
        prop_assert_eq!(decode_graph(&bytes, Format::EdgeList).unwrap(), g);
    }

    #[test]
    fn join_edge_count(a in arb_graph(8), b in arb_graph(8)) {
        let j = a.join(&b);
        prop_assert_eq!(j.n(), a.n() + b.n());
        prop_assert_eq!(j.m(), a.m() + b.m() + a.n() * b.n());
        let u = a.disjoint_union(&b);
        prop_assert_eq!(u.m(), a.m() + b.m());
    }

    #[test]
    fn delete_then_add_restores(g in arb_graph(12), pick in any::<prop::sample::Index>()) {
        prop_assume!(g.m() > 0);
        let e = g.edges()[pick.index(g.m())];
        let h = g.delete_edges(&[e]).unwrap();
        prop_assert_eq!(h.m() + 1, g.m());
        prop_assert_eq!(h.add_edges(&[e]).unwrap(), g);
    }

    #[test]
    fn distances_are_a_metric(g in arb_connected(14)) {
        let dm = apsp(&g).unwrap();
        let n = g.n();
        for i in 0..n {
            prop_assert_eq!(dm.get(i, i), 0);
            for j in 0..n {
                prop_assert_eq!(dm.get(i, j), dm.get(j, i));
                prop_assert_eq!(dm.get(i, j) == 1, g.has_edge(i, j));
                for k in 0..n {
                    prop_assert!(dm.get(i, j) <= dm.get(i, k) + dm.get(k, j));
                }
            }
        }
    }

    #[test]
    fn spectral_interval_is_sound(g in arb_connected(16)) {
        let dm = apsp(&g).unwrap();
        let est = rho_d(&dm, 1e-9).unwrap();
        prop_assert!(est.lo <= est.hi);
        prop_assert!(to_f64(&rayleigh_lower_bound(&dm)) <= est.lo + 1e-9);
        prop_assert!(est.hi <= dm.max_row_sum() as f64 + 1e-9);
    }

    #[test]
    fn nu_f_grows_with_edges(g in arb_connected(8), extra in any::<prop::sample::Index>()) {
        prop_assume!(g.n() >= 2);
        let n = g.n();
        let missing: Vec<Edge> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        prop_assume!(!missing.is_empty());
        let h = g.add_edges(&[missing[extra.index(missing.len())]]).unwrap();
        prop_assert!(nu_f_exact(&g, 12).unwrap().0 <= nu_f_exact(&h, 12).unwrap().0);
    }

    #[test]
    fn tau_is_floor_of_nu_f(g in arb_connected(8)) {
        prop_assume!(g.n() >= 2);
        let (nu, _) = nu_f_exact(&g, 12).unwrap();
        let tau = spanning_tree_packing_number(&g).unwrap();
        prop_assert_eq!(Rational::from_integer(tau as i64), nu.floor());
    }

    #[test]
    fn bipartition_separates_every_edge(g in arb_graph(14)) {
        if let Some(b) = g.classify().bipartition {
            for &(u, v) in g.edges() {
                prop_assert_ne!(b.x.contains(&u), b.x.contains(&v));
                prop_assert_ne!(b.y.contains(&u), b.y.contains(&v));
            }
            prop_assert_eq!(b.x.len() + b.y.len(), g.n());
        }
    }

    #[test]
    fn nu_f_zero_iff_disconnected(g in arb_graph(8)) {
        prop_assume!(g.n() >= 2);
        let (nu, _) = nu_f_exact(&g, 12).unwrap();
        prop_assert_eq!(nu == Rational::from_integer(0), !g.is_connected());
    }

    #[test]
    fn spanning_subgraph_has_larger_rho(g in arb_connected(14)) {
        // the spanning path is kept, so h stays connected
        let extra: Vec<Edge> = g.edges().iter().copied().filter(|&(u, v)| v != u + 1).collect();
        let h = g.delete_edges(&extra).unwrap();
        let (dg, dh) = (apsp(&g).unwrap(), apsp(&h).unwrap());
        for i in 0..g.n() {
            for j in 0..g.n() {
                prop_assert!(dg.get(i, j) <= dh.get(i, j));
            }
        }
        prop_assert!(rho_d(&dg, 1e-9).unwrap().lo <= rho_d(&dh, 1e-9).unwrap().hi);
    }
}

#[test]
fn join_extremal_graph_packs_one_tree_fewer() {
    for k in 2..=3 {
        for n in 2 * k + 6..=12 {
            let g = build_extremal(&ExtremalSpec::new(ExtremalFamily::G1Join, k, n)).unwrap();
            assert_eq!(spanning_tree_packing_number(&g).unwrap(), k - 1, "k={k} n={n}");
            let (nu, _) = nu_f_exact(&g, 12).unwrap();
            assert!(nu < Rational::from_integer(k as i64), "k={k} n={n}: nu_f = {nu}");
        }
    }
}
