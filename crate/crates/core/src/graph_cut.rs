//! Weighted max-cut instances, the flip neighborhood, and flip local search.
//!
//! A [`CutInstance`] is an undirected graph with nonnegative exact rational
//! edge weights; a [`CutState`] assigns every vertex to side S (`true`) or its
//! complement. A state is a *local max cut* when no single vertex can move to
//! the other side and strictly increase the weight of crossing edges.
//!
//! Text format (shared with hard-instance ingestion): first line `n m`, then
//! `m` lines `u v w` with 0-based vertex ids and `w` written as `p/q`, an
//! integer, or a finite decimal.

use std::collections::HashSet;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};
use crate::trace::{Location, MoveStep, MoveTrace, SearchSummary, Termination, TraceSink};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CutError {
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("edge {index}: vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index}: self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index}: negative weight {weight}")]
    NegativeWeight { index: usize, weight: String },
    #[error("state has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {0} does not exist")]
    InvalidVertex(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// One weighted undirected edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: Rational,
}

/// Weighted undirected graph with validated structure and adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutInstance {
    n: usize,
    edges: Vec<Edge>,
    /// `adj[v]` lists `(neighbor, edge index)`.
    adj: Vec<Vec<(usize, usize)>>,
}

impl CutInstance {
    /// Validate and build an instance.
    pub fn new(n: usize, edges: Vec<(usize, usize, Rational)>) -> Result<Self, CutError> {
        if n == 0 {
            return Err(CutError::EmptyGraph);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        let mut out = Vec::with_capacity(edges.len());
        for (index, (u, v, w)) in edges.into_iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(CutError::VertexOutOfRange { index, vertex, n });
                }
            }
            if u == v {
                return Err(CutError::SelfLoop { index, vertex: u });
            }
            if w.is_negative() {
                return Err(CutError::NegativeWeight { index, weight: format_rational(&w) });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(CutError::DuplicateEdge { index, u, v });
            }
            adj[u].push((v, index));
            adj[v].push((u, index));
            out.push(Edge { u, v, w });
        }
        Ok(CutInstance { n, edges: out, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `W`: the sum of all edge weights.
    pub fn total_weight(&self) -> Rational {
        self.edges.iter().fold(Rational::zero(), |acc, e| acc + &e.w)
    }

    fn check_state(&self, s: &CutState) -> Result<(), CutError> {
        if s.len() != self.n {
            return Err(CutError::LengthMismatch { expected: self.n, got: s.len() });
        }
        Ok(())
    }

    /// Total weight of edges whose endpoints lie on different sides.
    pub fn cut_value(&self, s: &CutState) -> Result<Rational, CutError> {
        self.check_state(s)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| s.side(e.u) != s.side(e.v))
            .fold(Rational::zero(), |acc, e| acc + &e.w))
    }

    /// Change in cut value if `v` switched sides, from `v`'s incident edges only.
    pub fn flip_gain(&self, s: &CutState, v: usize) -> Result<Rational, CutError> {
        self.check_state(s)?;
        if v >= self.n {
            return Err(CutError::InvalidVertex(v));
        }
        Ok(self.gain_unchecked(s, v))
    }

    fn gain_unchecked(&self, s: &CutState, v: usize) -> Rational {
        let mut g = Rational::zero();
        for &(u, e) in &self.adj[v] {
            if s.side(u) == s.side(v) {
                g += &self.edges[e].w;
            } else {
                g -= &self.edges[e].w;
            }
        }
        g
    }

    /// True iff no single flip strictly increases the cut.
    pub fn is_local_max_cut(&self, s: &CutState) -> Result<bool, CutError> {
        self.check_state(s)?;
        Ok((0..self.n).all(|v| !self.gain_unchecked(s, v).is_positive()))
    }

    /// Parse the `n m` / `u v w` text format.
    pub fn parse(text: &str) -> Result<Self, CutError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(CutError::Parse { line: 1, message: "missing `n m` header".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || CutError::Parse { line: hl, message: format!("expected `n m`, got `{header}`") };
        if parts.len() != 2 {
            return Err(bad_header());
        }
        let n: usize = parts[0].parse().map_err(|_| bad_header())?;
        let m: usize = parts[1].parse().map_err(|_| bad_header())?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            if f.len() != 3 {
                return Err(CutError::Parse { line, message: format!("expected `u v w`, got `{l}`") });
            }
            let vertex = |t: &str| -> Result<usize, CutError> {
                t.parse().map_err(|_| CutError::Parse { line, message: format!("bad vertex id `{t}`") })
            };
            let w = parse_rational(f[2]).map_err(|e| CutError::Parse { line, message: e.to_string() })?;
            edges.push((vertex(f[0])?, vertex(f[1])?, w));
        }
        if edges.len() != m {
            return Err(CutError::Parse { line: hl, message: format!("header declares {m} edges, found {}", edges.len()) });
        }
        CutInstance::new(n, edges)
    }

    /// Serialize to the text format; `parse(to_text(g)) == g`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, format_rational(&e.w));
        }
        s
    }
}

/// Two-sided vertex partition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutState {
    side: Vec<bool>,
}

impl CutState {
    pub fn new(side: Vec<bool>) -> Self {
        CutState { side }
    }

    /// Every vertex on side S' (`false`).
    pub fn all_one_side(n: usize) -> Self {
        CutState { side: vec![false; n] }
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn side(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn sides(&self) -> &[bool] {
        &self.side
    }

    pub fn flip(&mut self, v: usize) {
        self.side[v] = !self.side[v];
    }

    pub fn flipped(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.flip(v);
        s
    }

    /// Parse a bitstring such as `0110` (whitespace ignored).
    pub fn from_bits(text: &str) -> Result<Self, CutError> {
        let mut side = Vec::new();
        for (i, c) in text.chars().filter(|c| !c.is_whitespace()).enumerate() {
            match c {
                '0' => side.push(false),
                '1' => side.push(true),
                _ => return Err(CutError::Parse { line: 1, message: format!("character {i}: expected 0 or 1, got `{c}`") }),
            }
        }
        Ok(CutState { side })
    }

    pub fn to_bits(&self) -> String {
        self.side.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// Which improving move a search takes at each iteration. Scans always run
/// in fixed index order, so runs are deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Take the lowest-index mover with a strictly improving move.
    FirstImprovement,
    /// Take the mover with the largest gain; lowest index wins ties.
    #[default]
    BestImprovement,
}

impl std::str::FromStr for PivotRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" | "first-improvement" => Ok(PivotRule::FirstImprovement),
            "best" | "best-improvement" => Ok(PivotRule::BestImprovement),
            _ => Err(format!("unknown pivot rule `{s}` (expected `first` or `best`)")),
        }
    }
}

/// Flip local search with a complete in-memory trace.
pub fn flip_local_search(
    g: &CutInstance,
    s0: &CutState,
    rule: PivotRule,
    cap: u64,
) -> Result<(CutState, MoveTrace), CutError> {
    let mut trace = MoveTrace::new();
    let (s, summary) = flip_local_search_with(g, s0, rule, cap, &mut trace)?;
    trace.termination = summary.termination;
    Ok((s, trace))
}

/// Flip local search reporting moves to `sink`.
///
/// Gains are maintained incrementally: flipping `v` negates its own gain and
/// shifts each neighbor's gain by `±2·w`. Only strictly positive gains are
/// taken. Reaching `cap` while an improving flip still exists is reported as
/// [`Termination::Cap`].
pub fn flip_local_search_with(
    g: &CutInstance,
    s0: &CutState,
    rule: PivotRule,
    cap: u64,
    sink: &mut dyn TraceSink,
) -> Result<(CutState, SearchSummary), CutError> {
    g.check_state(s0)?;
    let mut s = s0.clone();
    let mut gains: Vec<Rational> = (0..g.n).map(|v| g.gain_unchecked(&s, v)).collect();
    let mut value = g.cut_value(&s)?;
    let mut iterations = 0u64;
    loop {
        let pick = match rule {
            PivotRule::FirstImprovement => gains.iter().position(|x| x.is_positive()),
            PivotRule::BestImprovement => {
                let mut best: Option<usize> = None;
                for (v, x) in gains.iter().enumerate() {
                    if x.is_positive() && best.is_none_or(|b| *x > gains[b]) {
                        best = Some(v);
                    }
                }
                best
            }
        };
        let Some(v) = pick else {
            return Ok((s, SearchSummary { iterations, termination: Termination::LocalOptimum, objective: value }));
        };
        if iterations >= cap {
            return Ok((s, SearchSummary { iterations, termination: Termination::Cap, objective: value }));
        }
        let gain = gains[v].clone();
        let before = value.clone();
        value += &gain;
        let from = s.side(v);
        s.flip(v);
        gains[v] = -gain;
        for &(u, e) in &g.adj[v] {
            let w2 = &g.edges[e].w * Rational::from_integer(2.into());
            if s.side(u) == s.side(v) {
                gains[u] += w2;
            } else {
                gains[u] -= w2;
            }
        }
        iterations += 1;
        sink.record(&MoveStep { mover: v, from: Location::Side(from), to: Location::Side(!from), before, after: value.clone() });
    }
}
