//! Line search: order-only satisfaction, piecewise constancy and
//! breakpoint completeness.

use contralocal_core::embedding::*;
use contralocal_core::graph_cut::PivotRule;
use contralocal_core::rational::{int, ratio, Rational};
use contralocal_core::trace::Termination;
use contralocal_core::triplets::{Semantics, Triplet, TripletInstance};
use num_traits::Signed;
use proptest::prelude::*;

fn semantics() -> impl Strategy<Value = Semantics> {
    prop_oneof![Just(Semantics::Contrastive), Just(Semantics::Betweenness), Just(Semantics::NonBetweenness)]
}

/// Instance on 3..=7 points with distinct rational positions.
fn instance_and_positions(sem: impl Strategy<Value = Semantics>) -> impl Strategy<Value = (TripletInstance, Embedding)> {
    (3usize..=7, sem).prop_flat_map(|(n, sem)| {
        let triplet = (0..n, 0..n, 0..n, 1i64..=6).prop_filter("distinct", |(a, b, c, _)| a != b && b != c && a != c);
        (
            Just(n),
            Just(sem),
            proptest::collection::vec(triplet, 1..=10),
            proptest::collection::btree_set(-40i64..=40, n),
            proptest::sample::subsequence((1i64..=4).collect::<Vec<_>>(), 1),
        )
            .prop_map(|(n, sem, ts, pos, den)| {
                let names = (0..n).map(|i| format!("p{i}")).collect();
                let triplets = ts.into_iter().map(|(a, b, c, w)| Triplet::new(a, b, c, int(w))).collect();
                let t = TripletInstance::new(names, sem, triplets, 1, None).unwrap();
                let mut pos: Vec<Rational> = pos.into_iter().map(|p| ratio(p, den[0])).collect();
                pos.reverse();
                (t, Embedding::line(pos))
            })
    })
}

fn with(e: &Embedding, v: usize, x: Rational) -> Embedding {
    let mut f = e.clone();
    f.set_point(v, vec![x]);
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn order_determined_semantics_ignore_monotone_rescaling(
        (t, e) in instance_and_positions(prop_oneof![Just(Semantics::Betweenness), Just(Semantics::NonBetweenness)])
    ) {
        // x ↦ x³ + 2x is strictly increasing
        let warped = Embedding::line((0..e.len()).map(|p| { let x = e.coord(p, 0); x * x * x + int(2) * x }).collect());
        prop_assert_eq!(objective(&t, &e).unwrap(), objective(&t, &warped).unwrap());
    }

    #[test]
    fn gain_is_constant_between_breakpoints((t, e) in instance_and_positions(semantics())) {
        for v in 0..e.len() {
            let bps = move_breakpoints_1d(&t, &e, v).unwrap();
            if bps.is_empty() { continue; }
            let mut probes: Vec<(Rational, Rational)> = bps.windows(2)
                .map(|w| (&w[0] + (&w[1] - &w[0]) * ratio(1, 3), &w[0] + (&w[1] - &w[0]) * ratio(2, 3)))
                .collect();
            probes.push((&bps[0] - int(1), &bps[0] - int(7)));
            probes.push((bps.last().unwrap() + int(1), bps.last().unwrap() + int(7)));
            for (x, y) in probes {
                prop_assert_eq!(move_gain(&t, &e, v, &[x]).unwrap(), move_gain(&t, &e, v, &[y]).unwrap());
            }
        }
    }

    #[test]
    fn best_move_dominates_a_dense_grid((t, e) in instance_and_positions(semantics())) {
        for v in 0..e.len() {
            let best = best_move_1d(&t, &e, v).unwrap();
            let bound = best.as_ref().map(|(_, g)| g.clone()).unwrap_or_else(|| int(0));
            if let Some((to, g)) = &best {
                prop_assert!(g.is_positive());
                prop_assert_eq!(&move_gain(&t, &e, v, std::slice::from_ref(to)).unwrap(), g);
                prop_assert!((0..e.len()).all(|p| p == v || e.coord(p, 0) != to));
            }
            for k in -400i64..=400 {
                let x = ratio(k, 8);
                if (0..e.len()).any(|p| p != v && *e.coord(p, 0) == x) { continue; }
                prop_assert!(move_gain(&t, &e, v, &[x.clone()]).unwrap() <= bound, "v={} x={}", v, x);
            }
        }
    }

    #[test]
    fn search_ends_at_a_local_optimum((t, e) in instance_and_positions(semantics())) {
        for rule in [PivotRule::BestImprovement, PivotRule::FirstImprovement] {
            let (end, trace) = local_search_1d(&t, &e, rule, 10_000).unwrap();
            prop_assert_eq!(trace.termination, Termination::LocalOptimum);
            prop_assert!(trace.is_strictly_increasing());
            prop_assert!(end.is_injective());
            prop_assert!(is_local_opt_1d(&t, &end).unwrap());
            let last = trace.steps.last().map(|s| s.after.clone()).unwrap_or_else(|| objective(&t, &e).unwrap());
            prop_assert_eq!(objective(&t, &end).unwrap(), last);
        }
    }

    #[test]
    fn embedding_text_round_trips((t, e) in instance_and_positions(semantics())) {
        prop_assert_eq!(Embedding::parse(&e.to_text(&t.points), &t.points, 1).unwrap(), e);
    }

    #[test]
    fn shifted_candidates_avoid_other_points((t, e) in instance_and_positions(semantics())) {
        let pos: Vec<Rational> = (0..e.len()).map(|p| e.coord(p, 0).clone()).collect();
        for v in 0..e.len() {
            let bps = move_breakpoints_1d(&t, &e, v).unwrap();
            let cand = move_candidates_1d(&bps, &pos, v);
            prop_assert!(cand.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(cand.iter().all(|c| pos.iter().enumerate().all(|(p, x)| p == v || x != c)));
        }
    }
}

#[test]
fn moving_a_point_off_the_grid_is_seen() {
    // single contrastive triplet violated; anchor must cross the midpoint 2
    let t = TripletInstance::new(
        vec!["x".into(), "y".into(), "z".into()],
        Semantics::Contrastive,
        vec![Triplet::new(0, 1, 2, int(1))],
        1,
        None,
    )
    .unwrap();
    let e = Embedding::line(vec![int(0), int(3), int(1)]);
    let (to, _) = best_move_1d(&t, &e, 0).unwrap().unwrap();
    assert!(to >= int(2));
    assert_eq!(objective(&t, &with(&e, 0, to)).unwrap(), int(1));
}
