use faslab::constructions::{
    cycle_blowup, near_acyclic_gadget, oriented_complete_bipartite, random_digraph, random_orientation,
    random_tournament, transitive_tournament, BipartiteMode,
};
use faslab::edgelist::{parse_edge_list, write_edge_list};
use faslab::exact::{beta_exact, pi_exact, tau_partition_exact, tau_star_exact, ExactBudget};
use faslab::graph::{fas_from_ordering, UndirectedGraph};
use faslab::greedy::{random_ordering, restricted_greedy};
use faslab::{Digraph, HalfInt};
use proptest::prelude::*;

fn digraph() -> impl Strategy<Value = Digraph> {
    (1usize..=9).prop_flat_map(|n| {
        proptest::collection::vec(0u8..3, n * (n - 1) / 2).prop_map(move |states| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    match states[k] {
                        1 => edges.push((u, v)),
                        2 => edges.push((v, u)),
                        _ => {}
                    }
                    k += 1;
                }
            }
            Digraph::from_edges(n, edges).unwrap()
        })
    })
}

fn undirected() -> impl Strategy<Value = UndirectedGraph> {
    (1usize..=12).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |keep| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            UndirectedGraph::from_edges(n, pairs.zip(keep).filter(|p| p.1).map(|p| p.0)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tournaments_are_complete_orientations(n in 0usize..30, seed in any::<u64>()) {
        let g = random_tournament(n, seed);
        prop_assert_eq!(g.m(), n * n.saturating_sub(1) / 2);
        prop_assert_eq!(g.underlying_undirected(), UndirectedGraph::complete(n));
        prop_assert_eq!(g, random_tournament(n, seed));
    }

    #[test]
    fn transitive_is_acyclic(n in 0usize..30) {
        let g = transitive_tournament(n);
        prop_assert!(g.is_acyclic());
        prop_assert_eq!(g.m(), n * n.saturating_sub(1) / 2);
    }

    #[test]
    fn bipartite_generators(a in 1usize..8, b in 1usize..8, seed in any::<u64>()) {
        let one_way = oriented_complete_bipartite(a, b, BipartiteMode::OneWay).unwrap();
        prop_assert!(one_way.is_acyclic());
        let random = oriented_complete_bipartite(a, b, BipartiteMode::Random(seed)).unwrap();
        prop_assert_eq!(random.underlying_undirected(), one_way.underlying_undirected());
        prop_assert_eq!(random.m(), a * b);
    }

    #[test]
    fn blowup_counts(r in 2usize..5, t in 1usize..4) {
        let g = cycle_blowup(r, t).unwrap();
        prop_assert_eq!(g.n(), (r + 1) * t);
        prop_assert_eq!(g.m(), (r + 1) * t * t);
        prop_assert_eq!(g.directed_girth(), Some(r + 1));
        for v in 0..g.n() {
            prop_assert_eq!(g.imbalance(v), 0);
        }
    }

    #[test]
    fn gadget_shape(big_n in 2usize..7) {
        let g = near_acyclic_gadget(big_n).unwrap();
        prop_assert_eq!(g.n(), 3 * big_n);
        prop_assert!(!g.is_acyclic());
    }

    #[test]
    fn random_digraph_has_requested_size(n in 2usize..15, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let m = ((n * (n - 1) / 2) as f64 * frac) as usize;
        let g = random_digraph(n, m, seed).unwrap();
        prop_assert_eq!(g.m(), m);
        prop_assert_eq!(g.n(), n);
    }

    #[test]
    fn orientation_preserves_underlying(h in undirected(), seed in any::<u64>()) {
        let g = random_orientation(&h, seed);
        prop_assert_eq!(g.underlying_undirected(), h);
    }

    #[test]
    fn edge_list_round_trip(g in digraph()) {
        let text = write_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn beta_zero_iff_acyclic(g in digraph()) {
        let beta = beta_exact(&g, &ExactBudget::default()).unwrap();
        prop_assert_eq!(beta.size == 0, g.is_acyclic());
        prop_assert!(beta.verify(&g));
    }

    #[test]
    fn reversal_preserves_beta_and_pi(g in digraph()) {
        let budget = ExactBudget::default();
        let r = g.reversed();
        prop_assert_eq!(beta_exact(&g, &budget).unwrap().size, beta_exact(&r, &budget).unwrap().size);
        prop_assert_eq!(pi_exact(&g, &budget).unwrap(), pi_exact(&r, &budget).unwrap());
    }

    #[test]
    fn orderings_never_beat_beta(g in digraph(), seed in any::<u64>()) {
        let budget = ExactBudget::default();
        let beta = beta_exact(&g, &budget).unwrap().size;
        let order = random_ordering(g.n(), seed);
        prop_assert!(fas_from_ordering(&g, &order).size >= beta);
        let run = restricted_greedy(&g, &order);
        prop_assert!(run.result.verify(&g));
        prop_assert!(run.result.size >= beta);
    }

    #[test]
    fn discrepancies_bound_surplus(g in digraph()) {
        let budget = ExactBudget::default();
        let pi = pi_exact(&g, &budget).unwrap();
        let star = tau_star_exact(&g, &budget).unwrap().difference;
        let part = tau_partition_exact(&g, &budget).unwrap().difference;
        prop_assert!(part <= star);
        prop_assert!(HalfInt::from_twice(star) <= pi + pi);
        prop_assert!(pi >= HalfInt::ZERO);
    }

    #[test]
    fn isolated_vertices_change_nothing(g in digraph(), extra in 0usize..3) {
        let budget = ExactBudget::default();
        let padded = g.with_isolated_vertices(extra);
        prop_assert_eq!(beta_exact(&g, &budget).unwrap().size, beta_exact(&padded, &budget).unwrap().size);
        prop_assert_eq!(
            tau_star_exact(&g, &budget).unwrap().difference,
            tau_star_exact(&padded, &budget).unwrap().difference
        );
    }
}
