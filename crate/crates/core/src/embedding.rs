//! Satisfaction and objective evaluation in ℝᵈ, and an exact single-point
//! relocation search on the line.
//!
//! With every other point fixed, whether a triplet is satisfied changes only
//! at a few *breakpoints* of the moving point's position. The 1-D engine
//! evaluates the objective at every breakpoint, at the midpoint between
//! consecutive breakpoints, and one unit beyond the outermost ones. This
//! covers every position the point could take, so a configuration with no
//! improving candidate is a genuine local optimum for single-point moves.
//! Candidates that land on another point are shifted right by `δ`, half the
//! minimum spacing among candidates and occupied positions, because points
//! must stay distinct.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::geometry::dist2;
use crate::graph_cut::PivotRule;
use crate::rational::{format_rational, int, parse_rational, ratio, Rational};
use crate::trace::{Location, MoveStep, MoveTrace, SearchSummary, Termination, TraceSink};
use crate::triplets::{Semantics, Triplet, TripletInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("embedding has {got} points, instance has {expected}")]
    Incomplete { expected: usize, got: usize },
    #[error("point {point} has {got} coordinates, instance dimension is {expected}")]
    DimensionMismatch { point: usize, expected: usize, got: usize },
    #[error("operation requires a 1-D instance, got dimension {0}")]
    NotOneDimensional(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Exact positions for every point of an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    dim: usize,
    coords: Vec<Vec<Rational>>,
}

impl Embedding {
    pub fn new(dim: usize, coords: Vec<Vec<Rational>>) -> Self {
        Embedding { dim, coords }
    }

    /// 1-D embedding from positions.
    pub fn line(positions: Vec<Rational>) -> Self {
        Embedding { dim: 1, coords: positions.into_iter().map(|p| vec![p]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, p: usize) -> &[Rational] {
        &self.coords[p]
    }

    pub fn coord(&self, p: usize, k: usize) -> &Rational {
        &self.coords[p][k]
    }

    pub fn set_point(&mut self, p: usize, x: Vec<Rational>) {
        self.coords[p] = x;
    }

    /// True when no two points coincide.
    pub fn is_injective(&self) -> bool {
        let mut sorted: Vec<&Vec<Rational>> = self.coords.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| w[0] != w[1])
    }

    /// Check that the embedding covers `t` in its dimension.
    pub fn check(&self, t: &TripletInstance) -> Result<(), EmbeddingError> {
        if self.coords.len() != t.point_count() {
            return Err(EmbeddingError::Incomplete { expected: t.point_count(), got: self.coords.len() });
        }
        for (point, c) in self.coords.iter().enumerate() {
            if c.len() != t.dim {
                return Err(EmbeddingError::DimensionMismatch { point, expected: t.dim, got: c.len() });
            }
        }
        Ok(())
    }

    /// `name x1 x2 …` per line, in point order.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (name, c) in names.iter().zip(&self.coords) {
            let coords: Vec<String> = c.iter().map(format_rational).collect();
            let _ = writeln!(s, "{name} {}", coords.join(" "));
        }
        s
    }

    /// Parse the format of [`Embedding::to_text`]; every name must appear once.
    pub fn parse(text: &str, names: &[String], dim: usize) -> Result<Self, EmbeddingError> {
        let mut coords: Vec<Option<Vec<Rational>>> = vec![None; names.len()];
        for (i, l) in text.lines().enumerate() {
            let line = i + 1;
            let l = l.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let err = |message: String| EmbeddingError::Parse { line, message };
            let f: Vec<&str> = l.split_whitespace().collect();
            let id = names.iter().position(|n| n == f[0]).ok_or_else(|| err(format!("unknown point `{}`", f[0])))?;
            if f.len() != dim + 1 {
                return Err(err(format!("expected {dim} coordinates for `{}`", f[0])));
            }
            let c = f[1..].iter().map(|x| parse_rational(x).map_err(|e| err(e.to_string()))).collect::<Result<_, _>>()?;
            if coords[id].replace(c).is_some() {
                return Err(err(format!("point `{}` given twice", f[0])));
            }
        }
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or(EmbeddingError::Parse { line: 0, message: format!("missing point `{}`", names[i]) }))
            .collect::<Result<_, _>>()?;
        Ok(Embedding { dim, coords })
    }
}

/// Whether `(a, b, c)` holds under `semantics` at the given positions.
/// Ties count as satisfied in every semantics (closed comparisons).
pub fn satisfied(semantics: Semantics, a: &[Rational], b: &[Rational], c: &[Rational]) -> bool {
    let (ab, ac, bc) = (dist2(a, b), dist2(a, c), dist2(b, c));
    match semantics {
        Semantics::Contrastive => ab <= ac,
        Semantics::Betweenness => ac >= ab && ac >= bc,
        Semantics::NonBetweenness => ac <= ab || ac <= bc,
    }
}

/// [`satisfied`] specialised to the line.
pub fn satisfied_1d(semantics: Semantics, a: &Rational, b: &Rational, c: &Rational) -> bool {
    let ab = (a - b).abs();
    let ac = (a - c).abs();
    match semantics {
        Semantics::Contrastive => ab <= ac,
        Semantics::Betweenness => {
            let bc = (b - c).abs();
            ac >= ab && ac >= bc
        }
        Semantics::NonBetweenness => {
            let bc = (b - c).abs();
            ac <= ab || ac <= bc
        }
    }
}

/// Weighted count of satisfied triplets.
pub fn objective(t: &TripletInstance, e: &Embedding) -> Result<Rational, EmbeddingError> {
    e.check(t)?;
    Ok(t.triplets
        .iter()
        .filter(|x| satisfied(t.semantics, e.point(x.a), e.point(x.b), e.point(x.c)))
        .fold(Rational::zero(), |acc, x| acc + &x.w))
}

/// Objective change if point `v` moved to `to` (any dimension).
pub fn move_gain(t: &TripletInstance, e: &Embedding, v: usize, to: &[Rational]) -> Result<Rational, EmbeddingError> {
    e.check(t)?;
    let at = |p: usize, moved: bool| if moved && p == v { to } else { e.point(p) };
    let mut gain = Rational::zero();
    for x in t.triplets.iter().filter(|x| x.contains(v)) {
        let before = satisfied(t.semantics, e.point(x.a), e.point(x.b), e.point(x.c));
        let after = satisfied(t.semantics, at(x.a, true), at(x.b, true), at(x.c, true));
        match (before, after) {
            (false, true) => gain += &x.w,
            (true, false) => gain -= &x.w,
            _ => {}
        }
    }
    Ok(gain)
}

/// Evaluation-only local optimality in any dimension: true iff no point in
/// `moves` has a strictly improving destination among its candidates.
pub fn is_local_opt_among(
    t: &TripletInstance,
    e: &Embedding,
    moves: &[(usize, Vec<Vec<Rational>>)],
) -> Result<bool, EmbeddingError> {
    for (v, candidates) in moves {
        for c in candidates {
            if move_gain(t, e, *v, c)?.is_positive() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) * ratio(1, 2)
}

/// Positions of `v` at which triplet `x` (which contains `v`) can change status.
fn triplet_breakpoints(semantics: Semantics, x: &Triplet, v: usize, pos: &[Rational]) -> Vec<Rational> {
    let (pa, pb, pc) = (&pos[x.a], &pos[x.b], &pos[x.c]);
    let mut out = match semantics {
        Semantics::Contrastive => {
            if x.a == v {
                vec![midpoint(pb, pc)]
            } else if x.b == v {
                let r = (pa - pc).abs();
                vec![pa - &r, pa + &r]
            } else {
                let r = (pa - pb).abs();
                vec![pa - &r, pa + &r]
            }
        }
        Semantics::Betweenness | Semantics::NonBetweenness => {
            if x.b == v {
                vec![pa.clone(), pc.clone()]
            } else if x.a == v {
                vec![midpoint(pb, pc), pb.clone(), int(2) * pc - pb]
            } else {
                vec![midpoint(pb, pa), pb.clone(), int(2) * pa - pb]
            }
        }
    };
    out.sort();
    out.dedup();
    out
}

fn positions_1d(t: &TripletInstance, e: &Embedding) -> Result<Vec<Rational>, EmbeddingError> {
    if t.dim != 1 {
        return Err(EmbeddingError::NotOneDimensional(t.dim));
    }
    e.check(t)?;
    Ok((0..e.len()).map(|p| e.coord(p, 0).clone()).collect())
}

/// Sorted, deduplicated breakpoints of point `v` over all its triplets.
pub fn move_breakpoints_1d(t: &TripletInstance, e: &Embedding, v: usize) -> Result<Vec<Rational>, EmbeddingError> {
    let pos = positions_1d(t, e)?;
    let mut out: Vec<Rational> =
        t.triplets.iter().filter(|x| x.contains(v)).flat_map(|x| triplet_breakpoints(t.semantics, x, v, &pos)).collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// Candidate destinations for `v`: breakpoints, midpoints between them, and
/// the outermost breakpoints ±1, with occupied spots shifted right by `δ`.
/// Sorted ascending and distinct.
pub fn move_candidates_1d(breakpoints: &[Rational], pos: &[Rational], v: usize) -> Vec<Rational> {
    if breakpoints.is_empty() {
        return Vec::new();
    }
    let mut cand: Vec<Rational> = Vec::with_capacity(2 * breakpoints.len() + 1);
    cand.push(&breakpoints[0] - Rational::one());
    for (i, b) in breakpoints.iter().enumerate() {
        if i > 0 {
            cand.push(midpoint(&breakpoints[i - 1], b));
        }
        cand.push(b.clone());
    }
    cand.push(&breakpoints[breakpoints.len() - 1] + Rational::one());
    let mut occupied: Vec<&Rational> = pos.iter().enumerate().filter(|(p, _)| *p != v).map(|(_, x)| x).collect();
    occupied.sort();
    occupied.dedup();
    if !cand.iter().any(|c| occupied.binary_search(&c).is_ok()) {
        return cand;
    }
    let mut all: Vec<&Rational> = cand.iter().chain(occupied.iter().copied()).collect();
    all.sort();
    all.dedup();
    let delta = all
        .windows(2)
        .map(|w| w[1] - w[0])
        .min()
        .map(|gap| gap * ratio(1, 2))
        .unwrap_or_else(|| ratio(1, 2));
    let mut out: Vec<Rational> =
        cand.into_iter().map(|c| if occupied.binary_search(&&c).is_ok() { c + &delta } else { c }).collect();
    out.sort();
    out.dedup();
    out
}

/// Reusable state for evaluating single-point moves on one 1-D instance.
struct LineMover<'a> {
    t: &'a TripletInstance,
    incidence: Vec<Vec<usize>>,
}

impl<'a> LineMover<'a> {
    fn new(t: &'a TripletInstance) -> Self {
        LineMover { t, incidence: t.incidence() }
    }

    fn sat_with(&self, x: &Triplet, v: usize, at: &Rational, pos: &[Rational]) -> bool {
        let p = |q: usize| if q == v { at } else { &pos[q] };
        satisfied_1d(self.t.semantics, p(x.a), p(x.b), p(x.c))
    }

    /// Best strictly improving destination of `v`: maximal gain, smallest
    /// position on ties.
    ///
    /// Each triplet's status is constant on the pieces cut out by its own
    /// breakpoints, so it is evaluated once per piece and its weight is
    /// spread over the candidate index range of that piece with a
    /// difference array.
    fn best_move(&self, pos: &[Rational], v: usize) -> Option<(Rational, Rational)> {
        let inc = &self.incidence[v];
        if inc.is_empty() {
            return None;
        }
        let local: Vec<Vec<Rational>> =
            inc.iter().map(|&i| triplet_breakpoints(self.t.semantics, &self.t.triplets[i], v, pos)).collect();
        let mut all: Vec<Rational> = local.iter().flatten().cloned().collect();
        all.sort();
        all.dedup();
        let cand = move_candidates_1d(&all, pos, v);
        let lower = |b: &Rational| cand.partition_point(|c| c < b);
        let upper = |b: &Rational| cand.partition_point(|c| c <= b);
        let mut diff = vec![Rational::zero(); cand.len() + 1];
        let mut current = Rational::zero();
        let mut add = |lo: usize, hi: usize, w: &Rational| {
            if lo < hi {
                diff[lo] += w;
                diff[hi] -= w;
            }
        };
        for (&i, bps) in inc.iter().zip(&local) {
            let x = &self.t.triplets[i];
            if self.sat_with(x, v, &pos[v], pos) {
                current += &x.w;
            }
            let first = &bps[0];
            let last = &bps[bps.len() - 1];
            if self.sat_with(x, v, &(first - Rational::one()), pos) {
                add(0, lower(first), &x.w);
            }
            for (k, b) in bps.iter().enumerate() {
                if self.sat_with(x, v, b, pos) {
                    add(lower(b), upper(b), &x.w);
                }
                if let Some(next) = bps.get(k + 1) {
                    if self.sat_with(x, v, &midpoint(b, next), pos) {
                        add(upper(b), lower(next), &x.w);
                    }
                }
            }
            if self.sat_with(x, v, &(last + Rational::one()), pos) {
                add(upper(last), cand.len(), &x.w);
            }
        }
        let mut best: Option<(usize, Rational)> = None;
        let mut running = Rational::zero();
        for (k, d) in diff.iter().take(cand.len()).enumerate() {
            running += d;
            let gain = &running - &current;
            if gain.is_positive() && best.as_ref().is_none_or(|(_, g)| gain > *g) {
                best = Some((k, gain));
            }
        }
        best.map(|(k, g)| (cand[k].clone(), g))
    }
}

/// Best strictly improving destination for point `v` on the line, as
/// `(new position, gain)`; `None` if no move improves.
pub fn best_move_1d(t: &TripletInstance, e: &Embedding, v: usize) -> Result<Option<(Rational, Rational)>, EmbeddingError> {
    let pos = positions_1d(t, e)?;
    Ok(LineMover::new(t).best_move(&pos, v))
}

/// True iff no point has a strictly improving move.
pub fn is_local_opt_1d(t: &TripletInstance, e: &Embedding) -> Result<bool, EmbeddingError> {
    let pos = positions_1d(t, e)?;
    let mover = LineMover::new(t);
    Ok((0..pos.len()).all(|v| mover.best_move(&pos, v).is_none()))
}

/// Single-point relocation search on the line with a full in-memory trace.
pub fn local_search_1d(
    t: &TripletInstance,
    e0: &Embedding,
    rule: PivotRule,
    cap: u64,
) -> Result<(Embedding, MoveTrace), EmbeddingError> {
    let mut trace = MoveTrace::new();
    let (e, summary) = local_search_1d_with(t, e0, rule, cap, &mut trace)?;
    trace.termination = summary.termination;
    Ok((e, trace))
}

/// Single-point relocation search on the line reporting moves to `sink`.
/// Every point, gadget points included, may move.
pub fn local_search_1d_with(
    t: &TripletInstance,
    e0: &Embedding,
    rule: PivotRule,
    cap: u64,
    sink: &mut dyn TraceSink,
) -> Result<(Embedding, SearchSummary), EmbeddingError> {
    let mut pos = positions_1d(t, e0)?;
    let mover = LineMover::new(t);
    let mut value = objective(t, e0)?;
    let mut iterations = 0u64;
    loop {
        let pick = match rule {
            PivotRule::FirstImprovement => (0..pos.len()).find_map(|v| mover.best_move(&pos, v).map(|m| (v, m))),
            PivotRule::BestImprovement => {
                let mut best: Option<(usize, (Rational, Rational))> = None;
                for v in 0..pos.len() {
                    if let Some(m) = mover.best_move(&pos, v) {
                        if best.as_ref().is_none_or(|(_, (_, g))| m.1 > *g) {
                            best = Some((v, m));
                        }
                    }
                }
                best
            }
        };
        let Some((v, (to, gain))) = pick else {
            return Ok((Embedding::line(pos), SearchSummary { iterations, termination: Termination::LocalOptimum, objective: value }));
        };
        if iterations >= cap {
            return Ok((Embedding::line(pos), SearchSummary { iterations, termination: Termination::Cap, objective: value }));
        }
        let before = value.clone();
        value += &gain;
        let from = std::mem::replace(&mut pos[v], to.clone());
        iterations += 1;
        sink.record(&MoveStep { mover: v, from: Location::Position(from), to: Location::Position(to), before, after: value.clone() });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn one(semantics: Semantics, w: i64) -> TripletInstance {
        TripletInstance::new(vec!["x".into(), "y".into(), "z".into()], semantics, vec![Triplet::new(0, 1, 2, int(w))], 1, None)
            .unwrap()
    }

    #[test]
    fn satisfaction_examples() {
        assert!(satisfied_1d(Semantics::Contrastive, &int(0), &int(1), &int(3)));
        assert!(satisfied_1d(Semantics::Betweenness, &int(0), &int(1), &int(2)));
        assert!(!satisfied_1d(Semantics::Betweenness, &int(0), &int(3), &int(2)));
        assert!(satisfied_1d(Semantics::NonBetweenness, &int(0), &int(3), &int(2)));
        assert!(!satisfied_1d(Semantics::NonBetweenness, &int(0), &int(1), &int(2)));
        // ties are satisfied
        assert!(satisfied_1d(Semantics::Contrastive, &int(0), &int(1), &int(-1)));
    }

    #[test]
    fn breakpoint_examples() {
        let t = one(Semantics::Contrastive, 1);
        let e = Embedding::line(vec![int(0), int(1), int(3)]);
        assert_eq!(move_breakpoints_1d(&t, &e, 0).unwrap(), vec![int(2)]);
        let t = one(Semantics::Betweenness, 1);
        let e = Embedding::line(vec![int(0), int(7), int(4)]);
        assert_eq!(move_breakpoints_1d(&t, &e, 1).unwrap(), vec![int(0), int(4)]);
    }

    #[test]
    fn objective_single_triplet() {
        let t = one(Semantics::Contrastive, 5);
        assert_eq!(objective(&t, &Embedding::line(vec![int(0), int(1), int(3)])).unwrap(), int(5));
        assert_eq!(objective(&t, &Embedding::line(vec![int(0), int(3), int(1)])).unwrap(), int(0));
    }

    #[test]
    fn unsatisfied_single_triplet_move_gains_its_weight() {
        let t = one(Semantics::Contrastive, 5);
        let e = Embedding::line(vec![int(0), int(3), int(1)]);
        let (to, gain) = best_move_1d(&t, &e, 0).unwrap().unwrap();
        assert_eq!(gain, int(5));
        let mut moved = e.clone();
        moved.set_point(0, vec![to]);
        assert_eq!(objective(&t, &moved).unwrap(), int(5));
        let (_, trace) = local_search_1d(&t, &e, PivotRule::default(), 10).unwrap();
        assert_eq!(trace.iterations(), 1);
        assert!(trace.is_strictly_increasing());
    }

    #[test]
    fn isolated_point_has_no_move() {
        let t = TripletInstance::new(
            vec!["x".into(), "y".into(), "z".into(), "w".into()],
            Semantics::Contrastive,
            vec![Triplet::new(0, 1, 2, int(1))],
            1,
            None,
        )
        .unwrap();
        let e = Embedding::line(vec![int(0), int(1), int(3), int(9)]);
        assert_eq!(best_move_1d(&t, &e, 3).unwrap(), None);
        assert!(is_local_opt_1d(&t, &e).unwrap());
    }

    #[test]
    fn occupied_candidates_are_shifted() {
        let bps = vec![int(0), int(2)];
        let pos = vec![int(5), int(0), int(1)];
        let c = move_candidates_1d(&bps, &pos, 0);
        assert!(c.iter().all(|x| *x != int(0) && *x != int(1)));
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_round_trip() {
        let names: Vec<String> = vec!["a".into(), "b".into()];
        let e = Embedding::new(2, vec![vec![int(1), ratio(1, 3)], vec![int(-2), int(0)]]);
        assert_eq!(Embedding::parse(&e.to_text(&names), &names, 2).unwrap(), e);
        assert!(Embedding::parse("a 1 2\n", &names, 2).is_err());
    }
}
