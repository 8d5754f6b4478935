use proptest::prelude::*;

use sgline_core::balance::{balanced_per_block_after_suppression, is_balanced, is_balanced_cut, is_balanced_switching};
use sgline_core::constructions::{
    apply_plan_a, apply_plan_b, apply_plan_c, apply_plan_d, sample_plan_a, sample_plan_b, sample_plan_c, sample_plan_d,
    SamplerParams,
};
use sgline_core::linegraph::is_line_consistent_oracle;
use sgline_core::properties::{corollary2_check, is_line_consistent, property2_literal, property3_local};
use sgline_core::random::{random_signing, random_two_connected, rng};
use sgline_core::recovery::{recover_plan, round_trip_check};
use sgline_core::structure::{enumerate_circles, suppress_divalent};
use sgline_core::{EdgeId, Graph, Sign, SignedGraph};

fn signed_multigraph(max_n: usize, max_m: usize) -> impl Strategy<Value = SignedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec((0..n, 0..n, any::<bool>()), 0..=max_m).prop_map(move |edges| {
            SignedGraph::from_edges(
                n,
                edges
                    .into_iter()
                    .enumerate()
                    .map(|(i, (a, b, neg))| (EdgeId(i), a, b, if neg { Sign::Negative } else { Sign::Positive })),
            )
            .unwrap()
        })
    })
}

fn signed_simple_graph(max_n: usize) -> impl Strategy<Value = SignedGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let k = pairs.len();
        (prop::collection::vec(any::<bool>(), k), prop::collection::vec(any::<bool>(), k)).prop_map(
            move |(keep, neg)| {
                let chosen: Vec<(usize, usize, bool)> =
                    (0..k).filter(|&i| keep[i]).map(|i| (pairs[i].0, pairs[i].1, neg[i])).collect();
                SignedGraph::from_edges(
                    n,
                    chosen
                        .into_iter()
                        .enumerate()
                        .map(|(i, (a, b, neg))| (EdgeId(i), a, b, if neg { Sign::Negative } else { Sign::Positive })),
                )
                .unwrap()
            },
        )
    })
}

// balance straight from the definition: every circle positive
fn balanced_by_circles(s: &SignedGraph) -> bool {
    enumerate_circles(s.graph(), 1_000_000).unwrap().iter().all(|c| s.path_sign(c).unwrap() == Sign::Positive)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn balance_routes_agree(s in signed_multigraph(7, 10)) {
        let switching = is_balanced_switching(&s);
        prop_assert_eq!(switching.balanced, is_balanced_cut(&s));
        prop_assert_eq!(switching.balanced, balanced_by_circles(&s));
        prop_assert_eq!(switching.balanced, balanced_per_block_after_suppression(&s));
        if let Some(c) = &switching.witness_circle {
            prop_assert_eq!(s.path_sign(c).unwrap(), Sign::Negative);
        }
    }

    #[test]
    fn suppression_keeps_balance_and_cycle_rank(s in signed_multigraph(8, 12)) {
        let r = suppress_divalent(&s);
        prop_assert_eq!(is_balanced(&s).unwrap().balanced, is_balanced(&r.reduced).unwrap().balanced);
        prop_assert_eq!(s.graph().cycle_rank(), r.reduced.graph().cycle_rank());
    }

    #[test]
    fn literal_and_local_conditions_agree(s in signed_multigraph(7, 10)) {
        let literal = property2_literal(&s, 1_000_000).unwrap();
        prop_assert_eq!(literal.holds, property3_local(&s).holds);
    }

    #[test]
    fn fast_decision_matches_line_graph_oracle(s in signed_simple_graph(7)) {
        let fast = is_line_consistent(&s).unwrap().line_consistent.unwrap();
        prop_assert_eq!(fast, is_line_consistent_oracle(&s, 1_000_000).unwrap());
    }

    #[test]
    fn graphs_meeting_the_conditions_round_trip(s in signed_multigraph(8, 10)) {
        if property3_local(&s).holds {
            prop_assert!(round_trip_check(&s).unwrap());
        } else {
            prop_assert!(recover_plan(&s).is_err());
        }
    }

    #[test]
    fn construction_outputs_meet_the_conditions(seed in any::<u64>()) {
        let params = SamplerParams::default();
        let b = sample_plan_b(seed, &params).unwrap();
        let s = apply_plan_b(&b).unwrap();
        prop_assert!(property3_local(&s).holds);
        prop_assert_eq!(recover_plan(&s).unwrap(), b);

        let c = sample_plan_c(seed, &params).unwrap();
        let (s, derived) = apply_plan_c(&c).unwrap();
        prop_assert!(property3_local(&s).holds);
        let as_b = sgline_core::constructions::PlanB { base: derived, steps: c.steps.clone() };
        prop_assert_eq!(apply_plan_b(&as_b).unwrap(), s);

        let d = sample_plan_d(seed, &params).unwrap();
        let s = apply_plan_d(&d).unwrap();
        prop_assert!(is_balanced(&s).unwrap().balanced);
        prop_assert!(property3_local(&s).holds);
        if s.graph().is_simple() && s.graph().edge_count() <= 16 {
            prop_assert!(is_line_consistent_oracle(&s, 1_000_000).unwrap());
        }
    }

    #[test]
    fn construction_a_outputs_meet_the_conditions(s in signed_multigraph(8, 10), seed in any::<u64>()) {
        let g: Graph = s.graph().clone();
        let out = apply_plan_a(&sample_plan_a(&g, seed)).unwrap();
        prop_assert!(property3_local(&out).holds);
        prop_assert!(round_trip_check(&out).unwrap());
    }

    #[test]
    fn two_connected_shortcut(seed in any::<u64>(), n in 3usize..=8, chords in 0usize..=8, p in 0.05f64..0.6) {
        let mut r = rng(seed);
        let g = random_two_connected(&mut r, n, chords);
        let s = random_signing(&mut r, g, p);
        let fast = is_line_consistent(&s).unwrap().line_consistent.unwrap();
        prop_assert_eq!(corollary2_check(&s).unwrap(), fast);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn local_clause_labels_match_literal_reading(s in signed_multigraph(7, 10)) {
        let literal = property2_literal(&s, 1_000_000).unwrap();
        let labelled = sgline_core::properties::property2_clauses(&s);
        let lit_vertices: std::collections::BTreeSet<usize> = literal.violations.iter().map(|v| v.vertex).collect();
        let lab_vertices: std::collections::BTreeSet<usize> = labelled.violations.iter().map(|v| v.vertex).collect();
        prop_assert_eq!(lit_vertices, lab_vertices);
        for v in &labelled.violations {
            prop_assert!(literal.violations.iter().any(|l| l.vertex == v.vertex && l.clause == v.clause));
            if let Some(c) = &v.circle {
                let walk = c.trace(s.graph()).unwrap();
                prop_assert!(walk.contains(&v.vertex));
                let missed = s.negative_edges().filter(|e| e.is_incident(v.vertex)).any(|e| !c.contains_edge(e.id));
                prop_assert!(missed);
            }
        }
    }
}
