//! Compilers from weighted max-cut into triplet-constraint problems, the
//! canonical configurations that realize a given cut in each target, and the
//! decoders that read a cut back.
//!
//! Every compiler puts graph vertex `i` at point id `i` and appends gadget
//! points after the vertices. Heavy gadget weights are chosen so that a
//! gadget constraint is never worth sacrificing for edge constraints; the
//! resulting weight tiers are exposed through [`ReductionWeights`].
//!
//! | target            | points                   | triplets                              |
//! |-------------------|--------------------------|---------------------------------------|
//! | contrastive, d=1  | V ∪ {X, Y, Z}            | \|E\| + 2\|V\| + 2                    |
//! | betweenness, d=1  | V ∪ {X, Y}               | \|E\| + 2\|V\|                        |
//! | betweenness, d≥2  | V ∪ {X_1..X_d}           | \|E\| + 2\|V\|·C(d,2) + 3·C(d,3)      |
//! | contrastive, d≥2  | V ∪ {X_1..X_d, Y, Z}     | 2·(betweenness count) + 1 + 2\|V\|    |
//! | non-betweenness   | V ∪ {X, Y}               | \|V\| + 2\|E\|                        |
//! | tree              | V ∪ {X, X', Y, Z}        | 3\|V\| + 2\|E\| + 3                   |

use std::cmp::Ordering;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::embedding::Embedding;
use crate::geometry::{axial_sign, centroid, simplex_axis, GadgetFrame};
use crate::graph_cut::{CutInstance, CutState};
use crate::rational::{int, ratio, Rational};
use crate::tree::{TreeBuilder, TreeLayout};
use crate::triplets::{Origin, ReductionKind, Semantics, Triplet, TreeTripletInstance, TripletInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("dimension {0} not supported here (need d >= 2)")]
    Dimension(usize),
    #[error("instance was not compiled from a graph (no origin recorded)")]
    NoOrigin,
    #[error("instance was compiled for {expected} vertices, graph/state has {got}")]
    VertexMismatch { expected: usize, got: usize },
    #[error("instance kind {0} does not match this operation")]
    WrongKind(String),
    #[error("embedding does not cover every point in dimension {0}")]
    IncompleteEmbedding(usize),
    #[error("cannot decode: {0}")]
    Undecodable(String),
}

/// Name of graph vertex `i`.
pub fn vertex_name(i: usize) -> String {
    format!("v{i}")
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Weight tiers used by the compilers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionWeights {
    /// `W`, the total edge weight.
    pub w_total: Rational,
    /// `M = W + 1`.
    pub m: Rational,
    /// `M' = (2|V| + 1)·M`.
    pub m_prime: Rational,
    /// `(k, M_k)` for `k = 3..=d` (betweenness in d ≥ 2 only).
    pub hierarchy: Vec<(usize, Rational)>,
    /// Tree type A weight `W`.
    pub tree_a: Rational,
    /// Tree type B weight `|V|·W + |V| + 1`.
    pub tree_b: Rational,
    /// Tree type C weight `W + 1`.
    pub tree_c: Rational,
}

impl ReductionWeights {
    /// Tiers for graph `g`; the hierarchy is filled for dimension `d` (empty when `d < 3`).
    pub fn new(g: &CutInstance, d: usize) -> Self {
        let w_total = g.total_weight();
        let nv = int(g.n() as i64);
        let m = &w_total + Rational::one();
        let m_prime = (int(2) * &nv + int(1)) * &m;
        let base = int((2 * g.n() * binom(d, 2)) as i64) * &m + &w_total;
        // M_k > Σ_{j>k} 3·C(j−1,2)·M_j + 2|V|·C(d,2)·M + W, filled from k = d down.
        let mut desc: Vec<(usize, Rational)> = Vec::new();
        let mut above = Rational::zero();
        for k in (3..=d).rev() {
            let mk = &above + &base + Rational::one();
            above += int(3 * binom(k - 1, 2) as i64) * &mk;
            desc.push((k, mk));
        }
        desc.reverse();
        ReductionWeights {
            tree_a: w_total.clone(),
            tree_b: &nv * &w_total + &nv + Rational::one(),
            tree_c: &w_total + Rational::one(),
            w_total,
            m,
            m_prime,
            hierarchy: desc,
        }
    }

    /// `M_k` for `3 ≤ k ≤ d`.
    pub fn hierarchy_weight(&self, k: usize) -> Option<&Rational> {
        self.hierarchy.iter().find(|(j, _)| *j == k).map(|(_, w)| w)
    }

    /// Checks `M_k > Σ_{j>k} 3·C(j−1,2)·M_j + 2|V|·C(d,2)·M + W` for every k.
    pub fn hierarchy_holds(&self, n: usize, d: usize) -> bool {
        let base = int((2 * n * binom(d, 2)) as i64) * &self.m + &self.w_total;
        self.hierarchy.iter().all(|(k, mk)| {
            let above: Rational = self
                .hierarchy
                .iter()
                .filter(|(j, _)| j > k)
                .map(|(j, mj)| int(3 * binom(j - 1, 2) as i64) * mj)
                .sum();
            *mk > above + &base
        })
    }
}

fn names(n: usize, gadgets: &[&str]) -> Vec<String> {
    (0..n).map(vertex_name).chain(gadgets.iter().map(|s| s.to_string())).collect()
}

/// Max-cut → contrastive triplets on the line.
pub fn reduce_contrastive_1d(g: &CutInstance) -> TripletInstance {
    let n = g.n();
    let rw = ReductionWeights::new(g, 1);
    let (x, y, z) = (n, n + 1, n + 2);
    let mut t = Vec::with_capacity(g.m() + 2 * n + 2);
    for e in g.edges() {
        t.push(Triplet::new(e.u, x, e.v, e.w.clone()));
    }
    for v in 0..n {
        t.push(Triplet::new(x, y, v, rw.m.clone()));
        t.push(Triplet::new(x, v, z, rw.m.clone()));
    }
    t.push(Triplet::new(y, z, x, rw.m_prime.clone()));
    t.push(Triplet::new(x, y, z, rw.m_prime.clone()));
    let origin = Origin { kind: ReductionKind::Contrastive1d, vertices: n };
    TripletInstance::new(names(n, &["X", "Y", "Z"]), Semantics::Contrastive, t, 1, Some(origin))
        .expect("compiled instance is valid")
}

/// Max-cut → betweenness triplets on the line.
///
/// The default form has two special points `X, Y` and per-vertex boundary
/// constraints `(X, Y, v)`, `(Y, X, v)`. With `degenerate = true` only `X`
/// and the edge constraints `(u, X, v)` are emitted.
pub fn reduce_betweenness_1d(g: &CutInstance, degenerate: bool) -> TripletInstance {
    let n = g.n();
    let x = n;
    let mut t: Vec<Triplet> = g.edges().iter().map(|e| Triplet::new(e.u, x, e.v, e.w.clone())).collect();
    if degenerate {
        let origin = Origin { kind: ReductionKind::Betweenness1dDegenerate, vertices: n };
        return TripletInstance::new(names(n, &["X"]), Semantics::Betweenness, t, 1, Some(origin))
            .expect("compiled instance is valid");
    }
    let rw = ReductionWeights::new(g, 1);
    let y = n + 1;
    for v in 0..n {
        t.push(Triplet::new(x, y, v, rw.m.clone()));
        t.push(Triplet::new(y, x, v, rw.m.clone()));
    }
    let origin = Origin { kind: ReductionKind::Betweenness1d, vertices: n };
    TripletInstance::new(names(n, &["X", "Y"]), Semantics::Betweenness, t, 1, Some(origin))
        .expect("compiled instance is valid")
}

fn simplex_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("X{i}")).collect()
}

fn betweenness_d_triplets(g: &CutInstance, d: usize, rw: &ReductionWeights) -> Vec<Triplet> {
    let n = g.n();
    let xs: Vec<usize> = (0..d).map(|i| n + i).collect();
    let mut t: Vec<Triplet> = g.edges().iter().map(|e| Triplet::new(e.u, xs[0], e.v, e.w.clone())).collect();
    for v in 0..n {
        for k in 0..d {
            for l in k + 1..d {
                t.push(Triplet::new(xs[k], xs[l], v, rw.m.clone()));
                t.push(Triplet::new(xs[l], xs[k], v, rw.m.clone()));
            }
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            for l in k + 1..d {
                let w = rw.hierarchy_weight(l + 1).expect("hierarchy covers 3..=d").clone();
                t.push(Triplet::new(xs[j], xs[k], xs[l], w.clone()));
                t.push(Triplet::new(xs[k], xs[l], xs[j], w.clone()));
                t.push(Triplet::new(xs[l], xs[j], xs[k], w));
            }
        }
    }
    t
}

/// Max-cut → betweenness triplets in ℝᵈ, d ≥ 2.
pub fn reduce_betweenness_d(g: &CutInstance, d: usize) -> Result<TripletInstance, ReductionError> {
    if d < 2 {
        return Err(ReductionError::Dimension(d));
    }
    let n = g.n();
    let rw = ReductionWeights::new(g, d);
    let t = betweenness_d_triplets(g, d, &rw);
    let mut pts: Vec<String> = (0..n).map(vertex_name).collect();
    pts.extend(simplex_names(d));
    let origin = Origin { kind: ReductionKind::BetweennessD(d), vertices: n };
    Ok(TripletInstance::new(pts, Semantics::Betweenness, t, d, Some(origin)).expect("compiled instance is valid"))
}

/// Top weight tiers of the contrastive construction in ℝᵈ: `(per-vertex
/// segment weight, (Y, Z, X_1) weight)`. The first exceeds the total weight of
/// all converted constraints; the second is `(2|V| + 1)` times the first.
pub fn contrastive_d_top_weights(g: &CutInstance, d: usize) -> (Rational, Rational) {
    let rw = ReductionWeights::new(g, d);
    let converted: Rational = betweenness_d_triplets(g, d, &rw).iter().map(|t| int(2) * &t.w).sum();
    let top = converted + Rational::one();
    let top_prime = int(2 * g.n() as i64 + 1) * &top;
    (top, top_prime)
}

/// Max-cut → contrastive triplets in ℝᵈ, d ≥ 2: each betweenness constraint
/// `(x, y, z)` becomes `(x, y, z)` and `(z, y, x)`, plus a segment gadget
/// `(Y, Z, X_1)`, `(X_1, Y, v)`, `(X_1, v, Z)` on top.
pub fn reduce_contrastive_d(g: &CutInstance, d: usize) -> Result<TripletInstance, ReductionError> {
    if d < 2 {
        return Err(ReductionError::Dimension(d));
    }
    let n = g.n();
    let rw = ReductionWeights::new(g, d);
    let (top, top_prime) = contrastive_d_top_weights(g, d);
    let (x1, y, z) = (n, n + d, n + d + 1);
    let mut t = Vec::new();
    for b in betweenness_d_triplets(g, d, &rw) {
        t.push(Triplet::new(b.a, b.b, b.c, b.w.clone()));
        t.push(Triplet::new(b.c, b.b, b.a, b.w));
    }
    t.push(Triplet::new(y, z, x1, top_prime));
    for v in 0..n {
        t.push(Triplet::new(x1, y, v, top.clone()));
        t.push(Triplet::new(x1, v, z, top.clone()));
    }
    let mut pts: Vec<String> = (0..n).map(vertex_name).collect();
    pts.extend(simplex_names(d));
    pts.push("Y".into());
    pts.push("Z".into());
    let origin = Origin { kind: ReductionKind::ContrastiveD(d), vertices: n };
    Ok(TripletInstance::new(pts, Semantics::Contrastive, t, d, Some(origin)).expect("compiled instance is valid"))
}

/// Max-cut → non-betweenness triplets on the line.
pub fn reduce_nonbetweenness_1d(g: &CutInstance) -> TripletInstance {
    let n = g.n();
    let w = g.total_weight();
    let (x, y) = (n, n + 1);
    let mut t: Vec<Triplet> = (0..n).map(|v| Triplet::new(x, v, y, w.clone())).collect();
    for e in g.edges() {
        t.push(Triplet::new(e.u, e.v, x, e.w.clone()));
        t.push(Triplet::new(e.v, e.u, x, e.w.clone()));
    }
    let origin = Origin { kind: ReductionKind::NonBetweenness1d, vertices: n };
    TripletInstance::new(names(n, &["X", "Y"]), Semantics::NonBetweenness, t, 1, Some(origin))
        .expect("compiled instance is valid")
}

/// Max-cut → `ab|c` tree triplets. Leaf ids: vertices, then `X, X', Y, Z`.
pub fn reduce_tree(g: &CutInstance) -> TreeTripletInstance {
    let n = g.n();
    let rw = ReductionWeights::new(g, 1);
    let (x, xp, y, z) = (n, n + 1, n + 2, n + 3);
    let mut t = Vec::with_capacity(3 * n + 2 * g.m() + 3);
    t.push(Triplet::new(x, xp, y, rw.tree_a.clone()));
    t.push(Triplet::new(x, xp, z, rw.tree_a.clone()));
    for v in 0..n {
        t.push(Triplet::new(x, xp, v, rw.tree_a.clone()));
    }
    t.push(Triplet::new(x, y, z, rw.tree_b.clone()));
    for v in 0..n {
        t.push(Triplet::new(y, v, x, rw.tree_c.clone()));
        t.push(Triplet::new(z, v, x, rw.tree_c.clone()));
    }
    let half = ratio(1, 2);
    for e in g.edges() {
        t.push(Triplet::new(e.u, x, e.v, &e.w * &half));
        t.push(Triplet::new(e.v, x, e.u, &e.w * &half));
    }
    let origin = Origin { kind: ReductionKind::Tree, vertices: n };
    TreeTripletInstance::new(names(n, &["X", "X'", "Y", "Z"]), t, Some(origin)).expect("compiled instance is valid")
}

/// Objective value of the canonical configuration minus the cut (or half
/// the cut, for trees): the weight of every gadget constraint that the
/// canonical configuration satisfies.
pub fn gadget_constant(kind: ReductionKind, g: &CutInstance) -> Rational {
    let d_of = |kind| match kind {
        ReductionKind::BetweennessD(d) | ReductionKind::ContrastiveD(d) => d,
        _ => 1,
    };
    let rw = ReductionWeights::new(g, d_of(kind));
    let nv = int(g.n() as i64);
    match kind {
        ReductionKind::Contrastive1d => int(2) * &nv * &rw.m + int(2) * &rw.m_prime,
        // In 1-D exactly one of (X, Y, v) and (Y, X, v) can hold for each v.
        ReductionKind::Betweenness1d => &nv * &rw.m,
        ReductionKind::Betweenness1dDegenerate => Rational::zero(),
        ReductionKind::NonBetweenness1d => (&nv + Rational::one()) * &rw.w_total,
        ReductionKind::Tree => (&nv + int(2)) * &rw.tree_a + &rw.tree_b + &nv * &rw.tree_c,
        ReductionKind::BetweennessD(d) => {
            let t = betweenness_d_triplets(g, d, &rw);
            t[g.m()..].iter().map(|t| t.w.clone()).sum()
        }
        ReductionKind::ContrastiveD(d) => {
            let t = betweenness_d_triplets(g, d, &rw);
            let gadget: Rational = t[g.m()..].iter().map(|t| int(2) * &t.w).sum();
            let (top, top_prime) = contrastive_d_top_weights(g, d);
            gadget + top_prime + int(2) * nv * top
        }
    }
}

/// Factor relating the cut value to the objective on canonical
/// configurations: `objective = gadget_constant + cut_multiplier · cut`.
/// Converted contrastive constraints come in mirrored pairs (factor 2); tree
/// edge constraints carry half weights (factor 1/2).
pub fn cut_multiplier(kind: ReductionKind) -> Rational {
    match kind {
        ReductionKind::ContrastiveD(_) => int(2),
        ReductionKind::Tree => ratio(1, 2),
        _ => int(1),
    }
}

/// Position offset of vertex `i` within its segment: `(i+1)/(n+1)`.
fn spread(i: usize, n: usize) -> Rational {
    ratio(i as i64 + 1, n as i64 + 1)
}

fn origin_for(t: &TripletInstance, g: &CutInstance, s: &CutState) -> Result<Origin, ReductionError> {
    let o = t.origin.ok_or(ReductionError::NoOrigin)?;
    for got in [g.n(), s.len()] {
        if got != o.vertices {
            return Err(ReductionError::VertexMismatch { expected: o.vertices, got });
        }
    }
    Ok(o)
}

/// Embedding realizing cut `s` in target `t` with every gadget constraint
/// satisfied. Side-S vertices (`true`) go to the side that holds `Y` (or the
/// positive axis ray in d ≥ 2).
pub fn canonical_embedding(g: &CutInstance, s: &CutState, t: &TripletInstance) -> Result<Embedding, ReductionError> {
    let o = origin_for(t, g, s)?;
    let n = o.vertices;
    let line = |p: Rational| vec![p];
    let coords: Vec<Vec<Rational>> = match o.kind {
        ReductionKind::Contrastive1d => {
            let mut c: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    let p = int(2) + spread(i, n);
                    line(if s.side(i) { p } else { -p })
                })
                .collect();
            c.extend([line(int(0)), line(int(2)), line(int(3))]);
            c
        }
        ReductionKind::Betweenness1d | ReductionKind::NonBetweenness1d => {
            let mut c: Vec<Vec<Rational>> = (0..n)
                .map(|i| line(if s.side(i) { int(1) + spread(i, n) } else { -spread(i, n) }))
                .collect();
            c.extend([line(int(0)), line(int(1))]);
            c
        }
        ReductionKind::Betweenness1dDegenerate => {
            let mut c: Vec<Vec<Rational>> =
                (0..n).map(|i| line(if s.side(i) { spread(i, n) } else { -spread(i, n) })).collect();
            c.push(line(int(0)));
            c
        }
        ReductionKind::BetweennessD(d) | ReductionKind::ContrastiveD(d) => {
            let frame = GadgetFrame::new(d);
            // τ ∈ (1, 2): beyond the threshold t₀ since t₀²/d = (d+1)/d² < 1.
            let mut c: Vec<Vec<Rational>> = (0..n)
                .map(|i| {
                    let tau = int(1) + spread(i, n);
                    frame.on_axis(&if s.side(i) { tau } else { -tau })
                })
                .collect();
            c.extend(frame.simplex.iter().cloned());
            if matches!(o.kind, ReductionKind::ContrastiveD(_)) {
                c.push(frame.on_axis(&int(1)));
                c.push(frame.on_axis(&int(2)));
            }
            c
        }
        ReductionKind::Tree => return Err(ReductionError::WrongKind(o.kind.tag())),
    };
    Ok(Embedding::new(t.dim, coords))
}

/// Rooted binary tree realizing cut `s`: `X, X'` siblings under the node that
/// also holds the subtree `T_Y` (Y plus side-S vertices), and the root joining
/// that with `T_Z` (Z plus the remaining vertices). Each subtree is a
/// caterpillar in vertex-index order.
pub fn canonical_tree(g: &CutInstance, s: &CutState, t: &TreeTripletInstance) -> Result<TreeLayout, ReductionError> {
    let o = t.origin.ok_or(ReductionError::NoOrigin)?;
    if o.kind != ReductionKind::Tree {
        return Err(ReductionError::WrongKind(o.kind.tag()));
    }
    for got in [g.n(), s.len()] {
        if got != o.vertices {
            return Err(ReductionError::VertexMismatch { expected: o.vertices, got });
        }
    }
    let n = o.vertices;
    let (x, xp, y, z) = (n, n + 1, n + 2, n + 3);
    let mut b = TreeBuilder::new(n + 4);
    let xx = b.join(x, xp);
    let mut ty = y;
    let mut tz = z;
    for v in 0..n {
        if s.side(v) {
            ty = b.join(ty, v);
        } else {
            tz = b.join(tz, v);
        }
    }
    let a = b.join(xx, ty);
    let root = b.join(a, tz);
    Ok(b.finish(root).expect("canonical tree is a valid layout"))
}

/// Read the cut encoded by an embedding of a compiled instance.
///
/// On the line, a vertex is on side S when it lies on the same side of `X`
/// as `Y` (contrastive, betweenness, non-betweenness) or to the right of `X`
/// (degenerate betweenness). In ℝᵈ the axis is recomputed from the embedded
/// `X_1..X_d`, so perturbed gadgets still decode.
pub fn decode_cut_embedding(t: &TripletInstance, e: &Embedding) -> Result<CutState, ReductionError> {
    let o = t.origin.ok_or(ReductionError::NoOrigin)?;
    if e.len() != t.point_count() || e.dim() != t.dim {
        return Err(ReductionError::IncompleteEmbedding(t.dim));
    }
    let n = o.vertices;
    let side_of = |reference: &Rational, toward: Option<&Rational>| -> Result<Vec<bool>, ReductionError> {
        let positive = match toward {
            Some(y) => match y.cmp(reference) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => return Err(ReductionError::Undecodable("Y coincides with X".into())),
            },
            None => true,
        };
        (0..n)
            .map(|v| match e.coord(v, 0).cmp(reference) {
                Ordering::Greater => Ok(positive),
                Ordering::Less => Ok(!positive),
                Ordering::Equal => Err(ReductionError::Undecodable(format!("vertex {v} coincides with X"))),
            })
            .collect()
    };
    let sides = match o.kind {
        ReductionKind::Contrastive1d | ReductionKind::Betweenness1d | ReductionKind::NonBetweenness1d => {
            side_of(e.coord(n, 0), Some(e.coord(n + 1, 0)))?
        }
        ReductionKind::Betweenness1dDegenerate => side_of(e.coord(n, 0), None)?,
        ReductionKind::BetweennessD(d) | ReductionKind::ContrastiveD(d) => {
            let xs: Vec<Vec<Rational>> = (0..d).map(|i| e.point(n + i).to_vec()).collect();
            let axis = simplex_axis(&xs);
            if axis.iter().all(Zero::is_zero) {
                return Err(ReductionError::Undecodable("simplex points are affinely dependent".into()));
            }
            let c = centroid(&xs);
            (0..n)
                .map(|v| match axial_sign(e.point(v), &c, &axis) {
                    Ordering::Greater => Ok(true),
                    Ordering::Less => Ok(false),
                    Ordering::Equal => Err(ReductionError::Undecodable(format!("vertex {v} lies on the simplex hyperplane"))),
                })
                .collect::<Result<_, _>>()?
        }
        ReductionKind::Tree => return Err(ReductionError::WrongKind(o.kind.tag())),
    };
    Ok(CutState::new(sides))
}

/// Read the cut encoded by a tree layout of a compiled tree instance.
///
/// Each leaf `p` attaches to the path from `X` to the root at `lca(p, X)`.
/// The deeper of the two attachment points of `Y` and `Z` splits that path: a
/// vertex attached at or below it is on that point's side, every other vertex
/// on the other side. `Y`'s side is side S.
pub fn decode_cut_tree(t: &TreeTripletInstance, layout: &TreeLayout) -> Result<CutState, ReductionError> {
    let o = t.origin.ok_or(ReductionError::NoOrigin)?;
    if o.kind != ReductionKind::Tree {
        return Err(ReductionError::WrongKind(o.kind.tag()));
    }
    let n = o.vertices;
    if layout.leaf_count() != t.leaf_count() {
        return Err(ReductionError::Undecodable("layout leaf count differs from instance".into()));
    }
    let (x, y, z) = (n, n + 2, n + 3);
    let attach_depth = |p: usize| layout.depth(layout.lca(p, x));
    let (dy, dz) = (attach_depth(y), attach_depth(z));
    if dy == dz {
        return Err(ReductionError::Undecodable("Y and Z attach at the same point".into()));
    }
    let (deeper, deeper_is_y) = if dy > dz { (dy, true) } else { (dz, false) };
    Ok(CutState::new((0..n).map(|v| (attach_depth(v) >= deeper) == deeper_is_y).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::objective;

    fn k3() -> CutInstance {
        CutInstance::new(3, vec![(0, 1, int(1)), (1, 2, int(1)), (0, 2, int(1))]).unwrap()
    }

    fn edge() -> CutInstance {
        CutInstance::new(2, vec![(0, 1, int(1))]).unwrap()
    }

    #[test]
    fn contrastive_1d_weights_and_counts() {
        let g = k3();
        let rw = ReductionWeights::new(&g, 1);
        assert_eq!((rw.w_total.clone(), rw.m.clone(), rw.m_prime.clone()), (int(3), int(4), int(28)));
        let t = reduce_contrastive_1d(&g);
        assert_eq!(t.triplets.len(), 11);
        assert_eq!(t.point_count(), 6);
        let rw = ReductionWeights::new(&edge(), 1);
        assert_eq!((rw.w_total, rw.m, rw.m_prime), (int(1), int(2), int(10)));
        assert_eq!(reduce_contrastive_1d(&edge()).triplets.len(), 7);
    }

    #[test]
    fn betweenness_1d_counts() {
        let t = reduce_betweenness_1d(&k3(), false);
        assert_eq!((t.point_count(), t.triplets.len()), (5, 9));
        let edgeless = CutInstance::new(4, vec![]).unwrap();
        assert_eq!(reduce_betweenness_1d(&edgeless, false).triplets.len(), 8);
        let deg = reduce_betweenness_1d(&k3(), true);
        assert_eq!((deg.point_count(), deg.triplets.len()), (4, 3));
    }

    #[test]
    fn betweenness_d_counts() {
        assert_eq!(reduce_betweenness_d(&k3(), 2).unwrap().triplets.len(), 9);
        assert_eq!(reduce_betweenness_d(&edge(), 3).unwrap().triplets.len(), 16);
        assert_eq!(reduce_betweenness_d(&k3(), 1), Err(ReductionError::Dimension(1)));
        let rw = ReductionWeights::new(&k3(), 2);
        assert_eq!(rw.m, int(4));
        for d in 3..=6 {
            let rw = ReductionWeights::new(&k3(), d);
            assert_eq!(rw.hierarchy.len(), d - 2);
            assert!(rw.hierarchy_holds(3, d));
        }
    }

    #[test]
    fn contrastive_d_counts() {
        assert_eq!(reduce_contrastive_d(&k3(), 2).unwrap().triplets.len(), 25);
        let single = CutInstance::new(1, vec![]).unwrap();
        assert_eq!(reduce_contrastive_d(&single, 2).unwrap().triplets.len(), 7);
        assert!(reduce_contrastive_d(&k3(), 0).is_err());
    }

    #[test]
    fn nonbetweenness_counts() {
        let t = reduce_nonbetweenness_1d(&k3());
        assert_eq!((t.point_count(), t.triplets.len()), (5, 9));
        assert_eq!(t.triplets[0].w, int(3));
        let t = reduce_nonbetweenness_1d(&edge());
        assert_eq!((t.point_count(), t.triplets.len()), (4, 4));
        assert_eq!(reduce_nonbetweenness_1d(&CutInstance::new(2, vec![]).unwrap()).triplets.len(), 2);
    }

    #[test]
    fn tree_counts_and_weights() {
        let t = reduce_tree(&k3());
        assert_eq!(t.triplets.len(), 18);
        let rw = ReductionWeights::new(&k3(), 1);
        assert_eq!(rw.tree_b, int(13));
        let t = reduce_tree(&edge());
        assert_eq!(t.triplets.len(), 11);
        assert!(t.triplets[t.triplets.len() - 2..].iter().all(|x| x.w == ratio(1, 2)));
    }

    #[test]
    fn canonical_round_trips_small() {
        let g = k3();
        for bits in 0..8u32 {
            let s = CutState::new((0..3).map(|i| bits >> i & 1 == 1).collect());
            for t in [
                reduce_contrastive_1d(&g),
                reduce_betweenness_1d(&g, false),
                reduce_betweenness_1d(&g, true),
                reduce_nonbetweenness_1d(&g),
                reduce_betweenness_d(&g, 2).unwrap(),
                reduce_betweenness_d(&g, 3).unwrap(),
                reduce_contrastive_d(&g, 2).unwrap(),
                reduce_contrastive_d(&g, 4).unwrap(),
            ] {
                let e = canonical_embedding(&g, &s, &t).unwrap();
                assert_eq!(decode_cut_embedding(&t, &e).unwrap(), s, "{:?}", t.origin);
                let kind = t.origin.unwrap().kind;
                let want = gadget_constant(kind, &g) + cut_multiplier(kind) * g.cut_value(&s).unwrap();
                assert_eq!(objective(&t, &e).unwrap(), want, "{kind:?}");
            }
            let tt = reduce_tree(&g);
            let layout = canonical_tree(&g, &s, &tt).unwrap();
            assert_eq!(decode_cut_tree(&tt, &layout).unwrap(), s);
        }
    }

    #[test]
    fn mismatched_provenance_is_rejected() {
        let t = reduce_contrastive_1d(&k3());
        let s = CutState::all_one_side(2);
        assert!(matches!(canonical_embedding(&edge(), &s, &t), Err(ReductionError::VertexMismatch { .. })));
        let tree = reduce_tree(&k3());
        assert!(matches!(canonical_tree(&edge(), &s, &tree), Err(ReductionError::VertexMismatch { .. })));
    }
}
