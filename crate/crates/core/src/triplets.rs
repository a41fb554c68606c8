//! Triplet-constraint instances and their text serialization.
//!
//! A [`TripletInstance`] is a point set with weighted ordered triplets
//! `(a, b, c)` interpreted under one [`Semantics`] in ℝᵈ. A
//! [`TreeTripletInstance`] holds `ab|c` constraints for rooted binary trees.
//! Instances compiled from a max-cut graph carry an [`Origin`] recording the
//! reduction and the number of graph vertices; graph vertex `i` is always
//! point `i`, and gadget points follow.
//!
//! Text format:
//!
//! ```text
//! semantics contrastive        # or betweenness, non-betweenness, tree
//! dim 1                        # omitted for tree instances
//! origin ctr1d 3               # optional: reduction tag and vertex count
//! points v0 v1 v2 X Y Z
//! v0 X v1 1                    # one triplet per line: a b c w
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::Signed;
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("triplet {index}: point id {id} out of range ({points} points)")]
    PointOutOfRange { index: usize, id: usize, points: usize },
    #[error("triplet {index}: points are not pairwise distinct")]
    RepeatedPoint { index: usize },
    #[error("triplet {index}: negative weight")]
    NegativeWeight { index: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("duplicate point name `{0}`")]
    DuplicateName(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// How a triplet `(a, b, c)` is judged in ℝᵈ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// `d(a,b) ≤ d(a,c)`.
    Contrastive,
    /// `b` between `a` and `c`: `d(a,c) ≥ max(d(a,b), d(b,c))`.
    Betweenness,
    /// `a` and `c` not the farthest pair: `d(a,c) ≤ max(d(a,b), d(b,c))`.
    NonBetweenness,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::Contrastive => "contrastive",
            Semantics::Betweenness => "betweenness",
            Semantics::NonBetweenness => "non-betweenness",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "contrastive" => Some(Semantics::Contrastive),
            "betweenness" => Some(Semantics::Betweenness),
            "non-betweenness" => Some(Semantics::NonBetweenness),
            _ => None,
        }
    }
}

/// Which compiler produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    Contrastive1d,
    Betweenness1d,
    /// Single special point, edge constraints only.
    Betweenness1dDegenerate,
    BetweennessD(usize),
    ContrastiveD(usize),
    NonBetweenness1d,
    Tree,
}

impl ReductionKind {
    pub fn tag(self) -> String {
        match self {
            ReductionKind::Contrastive1d => "ctr1d".into(),
            ReductionKind::Betweenness1d => "btw1d".into(),
            ReductionKind::Betweenness1dDegenerate => "btw1d-degenerate".into(),
            ReductionKind::BetweennessD(d) => format!("btw-d{d}"),
            ReductionKind::ContrastiveD(d) => format!("ctr-d{d}"),
            ReductionKind::NonBetweenness1d => "nbtw1d".into(),
            ReductionKind::Tree => "tree".into(),
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "ctr1d" => ReductionKind::Contrastive1d,
            "btw1d" => ReductionKind::Betweenness1d,
            "btw1d-degenerate" => ReductionKind::Betweenness1dDegenerate,
            "nbtw1d" => ReductionKind::NonBetweenness1d,
            "tree" => ReductionKind::Tree,
            _ => {
                if let Some(d) = s.strip_prefix("btw-d") {
                    ReductionKind::BetweennessD(d.parse().ok()?)
                } else if let Some(d) = s.strip_prefix("ctr-d") {
                    ReductionKind::ContrastiveD(d.parse().ok()?)
                } else {
                    return None;
                }
            }
        })
    }
}

/// Provenance of a compiled instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Origin {
    pub kind: ReductionKind,
    /// Graph vertices occupy point ids `0..vertices`.
    pub vertices: usize,
}

/// Weighted ordered triple of point ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triplet {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub w: Rational,
}

impl Triplet {
    pub fn new(a: usize, b: usize, c: usize, w: Rational) -> Self {
        Triplet { a, b, c, w }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.a == p || self.b == p || self.c == p
    }
}

fn validate(points: &[String], triplets: &[Triplet]) -> Result<(), InstanceError> {
    let mut names = HashMap::with_capacity(points.len());
    for (i, name) in points.iter().enumerate() {
        if names.insert(name.as_str(), i).is_some() {
            return Err(InstanceError::DuplicateName(name.clone()));
        }
    }
    for (index, t) in triplets.iter().enumerate() {
        for id in [t.a, t.b, t.c] {
            if id >= points.len() {
                return Err(InstanceError::PointOutOfRange { index, id, points: points.len() });
            }
        }
        if t.a == t.b || t.b == t.c || t.a == t.c {
            return Err(InstanceError::RepeatedPoint { index });
        }
        if t.w.is_negative() {
            return Err(InstanceError::NegativeWeight { index });
        }
    }
    Ok(())
}

/// For each point, the indices of the triplets that mention it.
pub fn incidence(points: usize, triplets: &[Triplet]) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); points];
    for (i, t) in triplets.iter().enumerate() {
        inc[t.a].push(i);
        inc[t.b].push(i);
        inc[t.c].push(i);
    }
    inc
}

/// Weighted triplets over named points, judged in ℝᵈ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripletInstance {
    pub points: Vec<String>,
    pub semantics: Semantics,
    pub triplets: Vec<Triplet>,
    pub dim: usize,
    pub origin: Option<Origin>,
}

impl TripletInstance {
    pub fn new(
        points: Vec<String>,
        semantics: Semantics,
        triplets: Vec<Triplet>,
        dim: usize,
        origin: Option<Origin>,
    ) -> Result<Self, InstanceError> {
        if dim == 0 {
            return Err(InstanceError::ZeroDimension);
        }
        validate(&points, &triplets)?;
        Ok(TripletInstance { points, semantics, triplets, dim, origin })
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn point_id(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn total_weight(&self) -> Rational {
        self.triplets.iter().map(|t| t.w.clone()).sum()
    }

    pub fn incidence(&self) -> Vec<Vec<usize>> {
        incidence(self.points.len(), &self.triplets)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("semantics {}\ndim {}\n", self.semantics.name(), self.dim);
        write_body(&mut s, self.origin, &self.points, &self.triplets);
        s
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw = parse_raw(text)?;
        let semantics = Semantics::from_name(&raw.semantics)
            .ok_or(InstanceError::Parse { line: raw.semantics_line, message: format!("unknown semantics `{}`", raw.semantics) })?;
        let dim = raw.dim.ok_or(InstanceError::Parse { line: 1, message: "missing `dim` line".into() })?;
        TripletInstance::new(raw.points, semantics, raw.triplets, dim, raw.origin)
    }
}

/// Weighted `ab|c` constraints over named leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTripletInstance {
    pub leaves: Vec<String>,
    pub triplets: Vec<Triplet>,
    pub origin: Option<Origin>,
}

impl TreeTripletInstance {
    pub fn new(leaves: Vec<String>, triplets: Vec<Triplet>, origin: Option<Origin>) -> Result<Self, InstanceError> {
        validate(&leaves, &triplets)?;
        Ok(TreeTripletInstance { leaves, triplets, origin })
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf_id(&self, name: &str) -> Option<usize> {
        self.leaves.iter().position(|p| p == name)
    }

    pub fn total_weight(&self) -> Rational {
        self.triplets.iter().map(|t| t.w.clone()).sum()
    }

    pub fn incidence(&self) -> Vec<Vec<usize>> {
        incidence(self.leaves.len(), &self.triplets)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("semantics tree\n");
        write_body(&mut s, self.origin, &self.leaves, &self.triplets);
        s
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let raw = parse_raw(text)?;
        if raw.semantics != "tree" {
            return Err(InstanceError::Parse { line: raw.semantics_line, message: "expected `semantics tree`".into() });
        }
        TreeTripletInstance::new(raw.points, raw.triplets, raw.origin)
    }
}

fn write_body(s: &mut String, origin: Option<Origin>, points: &[String], triplets: &[Triplet]) {
    if let Some(o) = origin {
        let _ = writeln!(s, "origin {} {}", o.kind.tag(), o.vertices);
    }
    let _ = writeln!(s, "points {}", points.join(" "));
    for t in triplets {
        let _ = writeln!(s, "{} {} {} {}", points[t.a], points[t.b], points[t.c], format_rational(&t.w));
    }
}

struct RawInstance {
    semantics: String,
    semantics_line: usize,
    dim: Option<usize>,
    origin: Option<Origin>,
    points: Vec<String>,
    triplets: Vec<Triplet>,
}

/// Either a complete instance of one of the two kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyInstance {
    Embedding(TripletInstance),
    Tree(TreeTripletInstance),
}

impl AnyInstance {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
        if first == "semantics tree" {
            TreeTripletInstance::parse(text).map(AnyInstance::Tree)
        } else {
            TripletInstance::parse(text).map(AnyInstance::Embedding)
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            AnyInstance::Embedding(t) => t.to_text(),
            AnyInstance::Tree(t) => t.to_text(),
        }
    }
}

fn parse_raw(text: &str) -> Result<RawInstance, InstanceError> {
    let mut semantics = None;
    let mut dim = None;
    let mut origin = None;
    let mut points: Option<(Vec<String>, HashMap<String, usize>)> = None;
    let mut triplets = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let err = |message: String| InstanceError::Parse { line, message };
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[0] {
            "semantics" if f.len() == 2 => semantics = Some((f[1].to_string(), line)),
            "dim" if f.len() == 2 => dim = Some(f[1].parse().map_err(|_| err(format!("bad dimension `{}`", f[1])))?),
            "origin" if f.len() == 3 => {
                let kind = ReductionKind::from_tag(f[1]).ok_or_else(|| err(format!("unknown origin `{}`", f[1])))?;
                let vertices = f[2].parse().map_err(|_| err(format!("bad vertex count `{}`", f[2])))?;
                origin = Some(Origin { kind, vertices });
            }
            "points" => {
                let names: Vec<String> = f[1..].iter().map(|s| s.to_string()).collect();
                let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
                points = Some((names, index));
            }
            _ => {
                let (_, index) = points.as_ref().ok_or_else(|| err("triplet before `points` line".into()))?;
                if f.len() != 4 {
                    return Err(err(format!("expected `a b c w`, got `{l}`")));
                }
                let id = |name: &str| index.get(name).copied().ok_or_else(|| err(format!("unknown point `{name}`")));
                let w = parse_rational(f[3]).map_err(|e| err(e.to_string()))?;
                triplets.push(Triplet::new(id(f[0])?, id(f[1])?, id(f[2])?, w));
            }
        }
    }
    let (semantics, semantics_line) = semantics.ok_or(InstanceError::Parse { line: 1, message: "missing `semantics` line".into() })?;
    let (points, _) = points.ok_or(InstanceError::Parse { line: 1, message: "missing `points` line".into() })?;
    Ok(RawInstance { semantics, semantics_line, dim, origin, points, triplets })
}
