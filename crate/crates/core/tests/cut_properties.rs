//! Invariants of the max-cut model and flip search.

mod common;

use contralocal_core::graph_cut::{flip_local_search, CutInstance, CutState, PivotRule};
use contralocal_core::trace::Termination;
use proptest::prelude::*;

proptest! {
    #[test]
    fn flip_gain_matches_recomputation((g, s) in common::graph_and_cut(2, 9)) {
        let base = g.cut_value(&s).unwrap();
        for v in 0..g.n() {
            let after = g.cut_value(&s.flipped(v)).unwrap();
            prop_assert_eq!(g.flip_gain(&s, v).unwrap(), after - &base);
        }
    }

    #[test]
    fn search_increases_strictly_and_stops_at_local_max((g, s) in common::graph_and_cut(2, 10)) {
        for rule in [PivotRule::BestImprovement, PivotRule::FirstImprovement] {
            let (end, trace) = flip_local_search(&g, &s, rule, 100_000).unwrap();
            prop_assert_eq!(trace.termination, Termination::LocalOptimum);
            prop_assert!(trace.is_strictly_increasing());
            prop_assert!(g.is_local_max_cut(&end).unwrap());
            if let Some(last) = trace.steps.last() {
                prop_assert_eq!(&last.after, &g.cut_value(&end).unwrap());
            }
        }
    }

    #[test]
    fn cap_is_flagged_only_when_moves_remain((g, s) in common::graph_and_cut(3, 8)) {
        let (_, full) = flip_local_search(&g, &s, PivotRule::default(), 100_000).unwrap();
        if full.iterations() > 0 {
            let cap = (full.iterations() - 1) as u64;
            let (_, capped) = flip_local_search(&g, &s, PivotRule::default(), cap).unwrap();
            prop_assert_eq!(capped.termination, Termination::Cap);
            prop_assert_eq!(capped.movers(), full.movers()[..full.iterations() - 1].to_vec());
        }
    }

    #[test]
    fn graph_text_round_trips(g in common::graph(2, 9)) {
        prop_assert_eq!(CutInstance::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn cut_bits_round_trip(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
        let s = CutState::new(bits);
        prop_assert_eq!(CutState::from_bits(&s.to_bits()).unwrap(), s);
    }
}
