//! Shared proptest strategies.
#![allow(dead_code)]

use contralocal_core::graph_cut::{CutInstance, CutState};
use contralocal_core::rational::ratio;
use contralocal_core::tree::{TreeBuilder, TreeLayout};
use proptest::prelude::*;

/// Simple graph on `lo..=hi` vertices with at least one edge and positive
/// rational weights.
pub fn graph(lo: usize, hi: usize) -> impl Strategy<Value = CutInstance> {
    (lo..=hi).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = pairs.len();
        (Just(n), Just(pairs), proptest::collection::vec((any::<bool>(), 1i64..=12, 1i64..=3), k))
            .prop_filter_map("needs an edge", |(n, pairs, pick)| {
                let edges: Vec<_> = pairs
                    .iter()
                    .zip(pick)
                    .filter(|(_, (keep, _, _))| *keep)
                    .map(|(&(u, v), (_, p, q))| (u, v, ratio(p, q)))
                    .collect();
                (!edges.is_empty()).then(|| CutInstance::new(n, edges).unwrap())
            })
    })
}

/// A graph together with a cut of matching length.
pub fn graph_and_cut(lo: usize, hi: usize) -> impl Strategy<Value = (CutInstance, CutState)> {
    graph(lo, hi).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(any::<bool>(), n).prop_map(CutState::new))
    })
}

/// Random rooted binary tree from a sequence of join choices.
pub fn tree(leaves: usize, choices: &[usize]) -> TreeLayout {
    let mut b = TreeBuilder::new(leaves);
    let mut roots: Vec<usize> = (0..leaves).collect();
    let mut c = choices.iter().cycle();
    while roots.len() > 1 {
        let i = c.next().copied().unwrap_or(0) % roots.len();
        let x = roots.swap_remove(i);
        let j = c.next().copied().unwrap_or(0) % roots.len();
        let y = roots.swap_remove(j);
        roots.push(b.join(x, y));
    }
    b.finish(roots[0]).unwrap()
}

pub fn tree_strategy(lo: usize, hi: usize) -> impl Strategy<Value = TreeLayout> {
    (lo..=hi, proptest::collection::vec(0usize..1000, 1..64)).prop_map(|(l, c)| tree(l, &c))
}
