//! Trees: relocation neighbourhood, child-swap invariance and search.

mod common;

use contralocal_core::graph_cut::PivotRule;
use contralocal_core::rational::int;
use contralocal_core::trace::Termination;
use contralocal_core::tree::*;
use contralocal_core::triplets::{Triplet, TreeTripletInstance};
use proptest::prelude::*;

fn instance(leaves: usize, raw: &[(usize, usize, usize, i64)]) -> TreeTripletInstance {
    let ts = raw
        .iter()
        .map(|&(a, b, c, w)| (a % leaves, b % leaves, c % leaves, w))
        .filter(|(a, b, c, _)| a != b && b != c && a != c)
        .map(|(a, b, c, w)| Triplet::new(a, b, c, int(w)))
        .collect();
    TreeTripletInstance::new((0..leaves).map(|i| format!("t{i}")).collect(), ts, None).unwrap()
}

fn raw_triplets() -> impl Strategy<Value = Vec<(usize, usize, usize, i64)>> {
    proptest::collection::vec((0usize..64, 0usize..64, 0usize..64, 1i64..=5), 1..20)
}

proptest! {
    #[test]
    fn every_leaf_has_2l_minus_3_sites(t in common::tree_strategy(2, 50)) {
        let l = t.leaf_count();
        for leaf in 0..l {
            prop_assert_eq!(t.relocation_sites(leaf).unwrap().len(), 2 * l - 3);
        }
    }

    #[test]
    fn relocation_is_undone_by_its_return_site(t in common::tree_strategy(3, 12), pick in 0usize..1000) {
        let leaf = pick % t.leaf_count();
        let sites = t.relocation_sites(leaf).unwrap();
        let mut u = t.clone();
        let back = u.relocate(leaf, sites[pick % sites.len()]).unwrap();
        // other leaves keep their induced topology
        let others: Vec<usize> = (0..t.leaf_count()).filter(|&x| x != leaf).collect();
        for &a in &others { for &b in &others { for &c in &others {
            if a != b && b != c && a != c {
                prop_assert_eq!(t.satisfies(a, b, c), u.satisfies(a, b, c));
            }
        }}}
        u.relocate(leaf, back).unwrap();
        prop_assert_eq!(u, t);
    }

    #[test]
    fn child_swaps_preserve_the_objective(t in common::tree_strategy(3, 10), raw in raw_triplets(), swaps in proptest::collection::vec(0usize..100, 0..10)) {
        let inst = instance(t.leaf_count(), &raw);
        let before = objective_tree(&inst, &t).unwrap();
        let mut u = t.clone();
        for s in swaps {
            u.swap_children(t.leaf_count() + s % (t.node_count() - t.leaf_count()));
        }
        prop_assert_eq!(objective_tree(&inst, &u).unwrap(), before);
        prop_assert_eq!(u.canonical_key(), t.canonical_key());
    }

    #[test]
    fn exactly_one_of_three_rooted_triplets_holds(t in common::tree_strategy(3, 12), a in 0usize..100, b in 0usize..100, c in 0usize..100) {
        let l = t.leaf_count();
        let (a, b, c) = (a % l, b % l, c % l);
        if a != b && b != c && a != c {
            let n = [t.satisfies(a, b, c), t.satisfies(a, c, b), t.satisfies(b, c, a)].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
            prop_assert_eq!(t.satisfies(a, b, c), t.satisfies(b, a, c));
        }
    }

    #[test]
    fn search_ends_at_local_optimum(t in common::tree_strategy(3, 8), raw in raw_triplets()) {
        let inst = instance(t.leaf_count(), &raw);
        for rule in [PivotRule::BestImprovement, PivotRule::FirstImprovement] {
            let (end, trace) = tree_local_search(&inst, &t, rule, 10_000).unwrap();
            prop_assert_eq!(trace.termination, Termination::LocalOptimum);
            prop_assert!(trace.is_strictly_increasing());
            prop_assert!(is_local_opt_tree(&inst, &end).unwrap());
        }
    }

    #[test]
    fn newick_round_trips(t in common::tree_strategy(1, 15)) {
        let names: Vec<String> = (0..t.leaf_count()).map(|i| if i % 3 == 0 { format!("n {i}'") } else { format!("n{i}") }).collect();
        prop_assert_eq!(TreeLayout::parse_newick(&t.to_newick(&names), &names).unwrap(), t);
    }
}

#[test]
fn non_binary_newick_is_rejected() {
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    assert!(TreeLayout::parse_newick("(a,b,c);", &names).is_err());
    assert!(TreeLayout::parse_newick("((a),b,c);", &names).is_err());
}
