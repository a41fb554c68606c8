//! Brute-force reference oracles for cross-checking the search engines.
//!
//! Nothing here reuses the engines' evaluation code: cut values, flip
//! conditions, order-based satisfaction and tree consistency are all
//! recomputed from the raw instance data. Every enumeration is guarded by an
//! [`OracleBudget`].

use contralocal_core::graph_cut::{CutInstance, CutState};
use contralocal_core::rational::Rational;
use contralocal_core::tree::{TreeBuilder, TreeLayout};
use contralocal_core::triplets::{Semantics, TreeTripletInstance, TripletInstance};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{what}: size {got} exceeds oracle budget {max}")]
    BudgetExceeded { what: &'static str, got: usize, max: usize },
    #[error("budget limits must be positive")]
    InvalidBudget,
    #[error("contrastive satisfaction depends on distances, not on the order of points")]
    NotOrderDetermined,
    #[error("coordinate {index} at {value} is within h = {h} of the box boundary")]
    BoundaryProximity { index: usize, value: f64, h: f64 },
}

/// Size limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_cut_vertices: usize,
    pub max_order_points: usize,
    pub max_tree_leaves: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_cut_vertices: 12, max_order_points: 8, max_tree_leaves: 7 }
    }
}

impl OracleBudget {
    fn check(&self, what: &'static str, got: usize, max: usize) -> Result<(), OracleError> {
        if self.max_cut_vertices == 0 || self.max_order_points == 0 || self.max_tree_leaves == 0 {
            return Err(OracleError::InvalidBudget);
        }
        if got > max {
            return Err(OracleError::BudgetExceeded { what, got, max });
        }
        Ok(())
    }
}

/// Crossing weight computed from the edge list.
pub fn cut_weight(g: &CutInstance, side: &[bool]) -> Rational {
    g.edges().iter().filter(|e| side[e.u] != side[e.v]).fold(Rational::zero(), |acc, e| acc + &e.w)
}

/// Single-flip optimality: for every vertex, the weight to its own side is
/// at most the weight across.
fn flip_stable(g: &CutInstance, side: &[bool]) -> bool {
    let mut same = vec![Rational::zero(); g.n()];
    let mut across = vec![Rational::zero(); g.n()];
    for e in g.edges() {
        let bucket = if side[e.u] == side[e.v] { &mut same } else { &mut across };
        bucket[e.u] += &e.w;
        bucket[e.v] += &e.w;
    }
    same.iter().zip(&across).all(|(s, a)| s <= a)
}

/// Every local max cut, one representative per side swap (vertex 0 on the
/// `false` side), in increasing bitmask order.
pub fn enumerate_local_max_cuts(g: &CutInstance, budget: &OracleBudget) -> Result<Vec<CutState>, OracleError> {
    budget.check("cut enumeration", g.n(), budget.max_cut_vertices)?;
    let n = g.n();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if mask & 1 == 1 {
            continue;
        }
        let side: Vec<bool> = (0..n).map(|v| mask >> v & 1 == 1).collect();
        if flip_stable(g, &side) {
            out.push(CutState::new(side));
        }
    }
    Ok(out)
}

/// Maximum cut weight by enumeration.
pub fn max_cut_value(g: &CutInstance, budget: &OracleBudget) -> Result<Rational, OracleError> {
    budget.check("cut enumeration", g.n(), budget.max_cut_vertices)?;
    let n = g.n();
    Ok((0u64..(1u64 << n))
        .map(|mask| cut_weight(g, &(0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>()))
        .max()
        .unwrap_or_else(Rational::zero))
}

fn order_satisfied(semantics: Semantics, ra: usize, rb: usize, rc: usize) -> bool {
    let between = (ra < rb && rb < rc) || (rc < rb && rb < ra);
    match semantics {
        Semantics::Betweenness => between,
        Semantics::NonBetweenness => !between,
        Semantics::Contrastive => unreachable!("rejected before enumeration"),
    }
}

/// Best objective over all orderings of the points on the line; only for
/// order-determined semantics.
pub fn enumerate_orderings_1d(t: &TripletInstance, budget: &OracleBudget) -> Result<Rational, OracleError> {
    if t.semantics == Semantics::Contrastive {
        return Err(OracleError::NotOrderDetermined);
    }
    let n = t.point_count();
    budget.check("ordering enumeration", n, budget.max_order_points)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rank = vec![0usize; n];
    let mut best: Option<Rational> = None;
    let mut eval = |perm: &[usize]| {
        for (r, &p) in perm.iter().enumerate() {
            rank[p] = r;
        }
        let v = t
            .triplets
            .iter()
            .filter(|x| order_satisfied(t.semantics, rank[x.a], rank[x.b], rank[x.c]))
            .fold(Rational::zero(), |acc, x| acc + &x.w);
        if best.as_ref().is_none_or(|b| v > *b) {
            best = Some(v);
        }
    };
    // Heap's algorithm
    let mut c = vec![0usize; n];
    eval(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            eval(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(best.unwrap_or_else(Rational::zero))
}

/// Rooted binary topology as nested pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Leaf(usize),
    Join(Box<Topology>, Box<Topology>),
}

impl Topology {
    fn leaves(&self, out: &mut Vec<usize>) {
        match self {
            Topology::Leaf(l) => out.push(*l),
            Topology::Join(a, b) => {
                a.leaves(out);
                b.leaves(out);
            }
        }
    }

    /// Leaf sets of all internal nodes.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn go(t: &Topology, out: &mut Vec<Vec<usize>>) {
            if let Topology::Join(a, b) = t {
                let mut s = Vec::new();
                t.leaves(&mut s);
                s.sort_unstable();
                out.push(s);
                go(a, out);
                go(b, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// `ab|c` iff some cluster contains `a` and `b` but not `c`.
    pub fn satisfies(&self, a: usize, b: usize, c: usize) -> bool {
        self.clusters().iter().any(|s| s.contains(&a) && s.contains(&b) && !s.contains(&c))
    }

    /// Children-sorted string, independent of child order.
    pub fn key(&self) -> String {
        match self {
            Topology::Leaf(l) => l.to_string(),
            Topology::Join(a, b) => {
                let (mut x, mut y) = (a.key(), b.key());
                if y < x {
                    std::mem::swap(&mut x, &mut y);
                }
                format!("({x},{y})")
            }
        }
    }

    /// The same topology as an engine [`TreeLayout`] over `leaves` leaves.
    pub fn to_layout(&self, leaves: usize) -> TreeLayout {
        fn build(t: &Topology, b: &mut TreeBuilder) -> usize {
            match t {
                Topology::Leaf(l) => *l,
                Topology::Join(x, y) => {
                    let (x, y) = (build(x, b), build(y, b));
                    b.join(x, y)
                }
            }
        }
        let mut b = TreeBuilder::new(leaves);
        let root = build(self, &mut b);
        b.finish(root).expect("enumerated topology covers every leaf")
    }

    /// Every way to hang a new leaf on an edge of `self` (or above its root).
    fn insertions(&self, leaf: usize) -> Vec<Topology> {
        let mut out = vec![Topology::Join(Box::new(self.clone()), Box::new(Topology::Leaf(leaf)))];
        if let Topology::Join(a, b) = self {
            for a2 in a.insertions(leaf) {
                out.push(Topology::Join(Box::new(a2), b.clone()));
            }
            for b2 in b.insertions(leaf) {
                out.push(Topology::Join(a.clone(), Box::new(b2)));
            }
        }
        out
    }
}

impl Topology {
    /// The topology with `leaf` removed (its parent is suppressed); `None`
    /// if `leaf` was the only leaf.
    pub fn without(&self, leaf: usize) -> Option<Topology> {
        match self {
            Topology::Leaf(l) => (*l != leaf).then(|| self.clone()),
            Topology::Join(a, b) => match (a.without(leaf), b.without(leaf)) {
                (Some(x), Some(y)) => Some(Topology::Join(Box::new(x), Box::new(y))),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
        }
    }

    /// Every topology obtained by pruning `leaf` and hanging it back on any
    /// edge, including the original position.
    pub fn relocations(&self, leaf: usize) -> Vec<Topology> {
        match self.without(leaf) {
            Some(rest) => rest.insertions(leaf),
            None => vec![self.clone()],
        }
    }
}

/// All rooted binary topologies on leaves `0..leaves`, each exactly once.
pub fn enumerate_trees(leaves: usize, budget: &OracleBudget) -> Result<Vec<Topology>, OracleError> {
    budget.check("tree enumeration", leaves, budget.max_tree_leaves)?;
    if leaves == 0 {
        return Ok(Vec::new());
    }
    let mut all = vec![Topology::Leaf(0)];
    for l in 1..leaves {
        all = all.iter().flat_map(|t| t.insertions(l)).collect();
    }
    Ok(all)
}

/// Best tree objective over all topologies.
pub fn best_tree_objective(t: &TreeTripletInstance, budget: &OracleBudget) -> Result<Rational, OracleError> {
    let trees = enumerate_trees(t.leaf_count(), budget)?;
    Ok(trees
        .iter()
        .map(|tree| tree_objective(t, tree))
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Weighted satisfied `ab|c` constraints, via clusters.
pub fn tree_objective(t: &TreeTripletInstance, tree: &Topology) -> Rational {
    let clusters = tree.clusters();
    t.triplets
        .iter()
        .filter(|x| clusters.iter().any(|s| s.contains(&x.a) && s.contains(&x.b) && !s.contains(&x.c)))
        .fold(Rational::zero(), |acc, x| acc + &x.w)
}

/// Central differences `(f(p + h·e_i) − f(p − h·e_i)) / 2h` on the box; every
/// coordinate must be at least `h` away from 0 and 1.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, p: &[f64], h: f64) -> Result<Vec<f64>, OracleError> {
    if let Some((index, &value)) = p.iter().enumerate().find(|(_, &v)| v - h < 0.0 || v + h > 1.0) {
        return Err(OracleError::BoundaryProximity { index, value, h });
    }
    Ok((0..p.len())
        .map(|i| {
            let mut up = p.to_vec();
            let mut down = p.to_vec();
            up[i] += h;
            down[i] -= h;
            (f(&up) - f(&down)) / (2.0 * h)
        })
        .collect())
}
