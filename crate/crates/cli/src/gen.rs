//! Seeded random inputs: graphs, cuts, line embeddings, trees, programs.

use contralocal_core::embedding::Embedding;
use contralocal_core::graph_cut::{CutInstance, CutState};
use contralocal_core::rational::{int, ratio};
use contralocal_core::tree::{TreeBuilder, TreeLayout};
use contralocal_core::triplet_loss::QuadraticProgram;
use contralocal_core::triplets::{Semantics, Triplet, TripletInstance};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Simple graph on `n` vertices, each pair present with probability `p`,
/// weights `a/b` with `a ∈ 1..=20`, `b ∈ 1..=4`; at least one edge.
pub fn graph(rng: &mut impl Rng, n: usize, p: f64) -> CutInstance {
    assert!(n >= 2, "a graph with an edge needs two vertices");
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v, ratio(rng.gen_range(1..=20), rng.gen_range(1..=4))));
                }
            }
        }
        if !edges.is_empty() {
            return CutInstance::new(n, edges).expect("generated graph is simple");
        }
    }
}

/// Graph with `2..=max_n` vertices and a random edge density.
pub fn any_graph(rng: &mut impl Rng, max_n: usize) -> CutInstance {
    let n = rng.gen_range(2..=max_n.max(2));
    let p = rng.gen_range(0.2..0.7);
    graph(rng, n, p)
}

pub fn cut(rng: &mut impl Rng, n: usize) -> CutState {
    CutState::new((0..n).map(|_| rng.gen_bool(0.5)).collect())
}

/// Distinct integer positions in random order.
pub fn line_embedding(rng: &mut impl Rng, points: usize) -> Embedding {
    let mut pool: Vec<i64> = (-(5 * points as i64)..=(5 * points as i64)).collect();
    pool.shuffle(rng);
    Embedding::line(pool[..points].iter().map(|&x| int(x)).collect())
}

/// Random rooted binary tree by repeatedly joining two random subtrees.
pub fn tree(rng: &mut impl Rng, leaves: usize) -> TreeLayout {
    let mut b = TreeBuilder::new(leaves);
    let mut roots: Vec<usize> = (0..leaves).collect();
    while roots.len() > 1 {
        let x = roots.swap_remove(rng.gen_range(0..roots.len()));
        let y = roots.swap_remove(rng.gen_range(0..roots.len()));
        roots.push(b.join(x, y));
    }
    b.finish(roots[0]).expect("random joins build a complete tree")
}

/// Random 1-D instance on `points` points with `triplets` triplets.
pub fn line_instance(rng: &mut impl Rng, points: usize, triplets: usize, semantics: Semantics) -> TripletInstance {
    let ts = (0..triplets)
        .map(|_| {
            let mut ids: Vec<usize> = (0..points).collect();
            ids.shuffle(rng);
            Triplet::new(ids[0], ids[1], ids[2], int(rng.gen_range(1..=6)))
        })
        .collect();
    TripletInstance::new((0..points).map(|i| format!("p{i}")).collect(), semantics, ts, 1, None).expect("valid random instance")
}

/// Symmetric program with entries uniform in `[−5, 5]`.
pub fn qp(rng: &mut impl Rng, n: usize) -> QuadraticProgram {
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-5.0..=5.0);
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    let b = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    QuadraticProgram::new(q, b).expect("symmetric by construction")
}

/// Positive semidefinite program `Q = AᵀA / n` with `A` uniform in `[−2, 2]`.
pub fn psd_qp(rng: &mut impl Rng, n: usize) -> QuadraticProgram {
    let a: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2.0..=2.0)).collect()).collect();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[k][i] * a[k][j]).sum::<f64>() / n as f64).collect())
        .collect();
    // exact symmetry: copy the upper triangle
    let q: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i <= j { q[i][j] } else { q[j][i] }).collect()).collect();
    let b = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
    QuadraticProgram::new(q, b).expect("symmetric by construction")
}

/// Point with coordinates uniform in `[lo, 1 − lo]`.
pub fn interior_point(rng: &mut impl Rng, len: usize, lo: f64) -> Vec<f64> {
    (0..len).map(|_| rng.gen_range(lo..=1.0 - lo)).collect()
}
