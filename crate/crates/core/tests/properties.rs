use proptest::prelude::*;

use tricolor::dimacs::{load_dimacs, write_dimacs};
use tricolor::exact::brute;
use tricolor::rounding::greedy_min_degree;
use tricolor::{
    approx_color, approx_independent_set, bounded_degree_is_with, degree_reduce_is, derive_params,
    exact_3color, exact_max_independent_set, gen_planted_3col, hyperplane_round, leaf_count_bound,
    solve_vector_3coloring, verify_coloring, verify_independent_set, ColorConfig, Graph, IsConfig,
    RoundingConfig, SolverConfig, ThresholdGrid, VertexSet,
};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..=n * 3).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap()
        })
    })
}

fn planted() -> impl Strategy<Value = (Graph, u64)> {
    (12usize..80, 2usize..10, any::<u64>())
        .prop_map(|(n, d, seed)| (gen_planted_3col(n, d, seed).unwrap().graph, seed))
}

fn fast_color() -> ColorConfig {
    ColorConfig {
        per_round_calls: Some(2),
        ..ColorConfig::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimacs_round_trips(g in graph(30)) {
        prop_assert_eq!(load_dimacs(&write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn deletion_keeps_graph_well_formed(g in graph(30), mask in any::<u64>()) {
        let drop: Vec<usize> = (0..g.vertex_count()).filter(|&v| mask >> (v % 64) & 1 == 1).collect();
        let (rest, map) = g.delete_vertices(&VertexSet::new(drop.clone())).unwrap();
        prop_assert!(rest.is_well_formed());
        prop_assert_eq!(rest.vertex_count() + drop.len(), g.vertex_count());
        for (u, v) in rest.edges() {
            prop_assert!(g.has_edge(map[u], map[v]));
        }
    }

    #[test]
    fn exact_mis_matches_enumeration(g in graph(14)) {
        let s = exact_max_independent_set(&g, u64::MAX).unwrap();
        let expected = brute::max_independent_set(&g);
        prop_assert_eq!(s.members(), expected.as_slice());
    }

    #[test]
    fn exact_3color_matches_enumeration(g in graph(11)) {
        let found = exact_3color(&g, u64::MAX).unwrap();
        prop_assert_eq!(found.is_some(), brute::three_coloring(&g).is_some());
        if let Some(c) = found {
            prop_assert!(verify_coloring(&g, &c).unwrap());
        }
    }

    #[test]
    fn branching_with_exact_leaves_is_exact(g in graph(16), r in 2.0f64..4.0) {
        let params = derive_params(g.vertex_count(), r, 0.05).unwrap();
        let base = |leaf: &Graph, _: &[usize]| exact_max_independent_set(leaf, u64::MAX);
        let (s, stats) = degree_reduce_is(&g, &params, base, u64::MAX).unwrap();
        prop_assert!(verify_independent_set(&g, &s).unwrap());
        prop_assert_eq!(s.len(), brute::max_independent_set(&g).len());
        prop_assert!(stats.leaves_explored >= 1);
        prop_assert!(stats.leaves_explored as f64 <= leaf_count_bound(g.vertex_count(), &params));
    }

    #[test]
    fn greedy_meets_degree_bound(g in graph(40)) {
        let s = greedy_min_degree(&g);
        prop_assert!(verify_independent_set(&g, &s).unwrap());
        prop_assert!(s.len() * (g.max_degree() + 1) >= g.vertex_count());
    }

    #[test]
    fn derived_params_invariants(n in 1usize..100_000, r in 2.0f64..50.0, beta in 0.01f64..4.0) {
        let p = derive_params(n, r, beta).unwrap();
        prop_assert!(p.d as f64 >= 2.0 * r);
        prop_assert!(p.r_prime >= 1.0);
        prop_assert_eq!(p.batch, p.d);
        prop_assert!(p.t > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rounding_outputs_are_independent((g, seed) in planted(), c in 0.05f64..2.5) {
        let emb = solve_vector_3coloring(&g, &SolverConfig::default().with_seed(seed)).unwrap();
        let s = hyperplane_round(&g, &emb, c, seed).unwrap();
        prop_assert!(verify_independent_set(&g, &s).unwrap());
        prop_assert!(!s.is_empty());

        let cfg = RoundingConfig::default().with_seed(seed);
        let best = bounded_degree_is_with(&g, 2.0, &cfg, &emb).unwrap();
        prop_assert!(verify_independent_set(&g, &best).unwrap());
        prop_assert!(best.len() * (g.max_degree() + 1) >= g.vertex_count());
    }

    #[test]
    fn larger_rounding_budget_never_hurts((g, seed) in planted()) {
        let emb = solve_vector_3coloring(&g, &SolverConfig::default()).unwrap();
        let small = RoundingConfig { trials: 2, threshold_grid: ThresholdGrid::Relative(vec![1.0]), seed };
        let large = RoundingConfig { trials: 5, threshold_grid: ThresholdGrid::Relative(vec![0.7, 1.0, 1.3]), seed };
        let a = bounded_degree_is_with(&g, 2.0, &small, &emb).unwrap();
        let b = bounded_degree_is_with(&g, 2.0, &large, &emb).unwrap();
        prop_assert!(b.len() >= a.len());
    }

    #[test]
    fn approx_is_is_independent_and_max_of_repetitions((g, seed) in planted(), r in 1.0f64..6.0) {
        let cfg = IsConfig { time_cap_factor: f64::INFINITY, ..IsConfig::default() };
        let (s, rep) = approx_independent_set(&g, r, &cfg, seed).unwrap();
        prop_assert!(verify_independent_set(&g, &s).unwrap());
        prop_assert_eq!(rep.repetition_sizes.len(), r.ceil() as usize);
        prop_assert_eq!(Some(&s.len()), rep.repetition_sizes.iter().max());
    }

    #[test]
    fn colorings_are_valid_partitions((g, seed) in planted(), r in 2.0f64..5.0) {
        let (c, rep) = approx_color(&g, r, &fast_color(), seed).unwrap();
        prop_assert!(verify_coloring(&g, &c).unwrap());
        prop_assert!(rep.valid);
        prop_assert_eq!(c.len(), g.vertex_count());
        prop_assert_eq!(rep.colors_used, c.colors_used());
        prop_assert_eq!(rep.per_round_sizes.iter().sum::<usize>() + rep.residual_vertices, g.vertex_count());
        prop_assert!((rep.residual_vertices as f64) < rep.t.max(1.0));
        for (i, w) in rep.per_round_vertices.windows(2).enumerate() {
            prop_assert_eq!(w[1], w[0] - rep.per_round_sizes[i]);
        }
        if rep.rounds_met_guarantee {
            prop_assert!(rep.rounds <= rep.round_bound());
            prop_assert!(rep.colors_used <= rep.color_bound());
        }
        prop_assert!(!rep.promise_violation);
    }

    #[test]
    fn colorings_survive_broken_promises(g in graph(24), r in 2.0f64..4.0) {
        let (c, rep) = approx_color(&g, r, &fast_color(), 1).unwrap();
        prop_assert!(verify_coloring(&g, &c).unwrap());
        prop_assert!(rep.valid);
    }
}
