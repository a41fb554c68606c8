//! One search run of any problem started from a cut or a random
//! configuration, with the final state decoded back to a cut.

use std::fmt;
use std::str::FromStr;

use contralocal_core::embedding::{local_search_1d_with, Embedding};
use contralocal_core::graph_cut::{flip_local_search_with, CutInstance, CutState, PivotRule};
use contralocal_core::rational::Rational;
use contralocal_core::reductions::{
    canonical_embedding, canonical_tree, decode_cut_embedding, decode_cut_tree, reduce_betweenness_1d, reduce_contrastive_1d,
    reduce_nonbetweenness_1d, reduce_tree, vertex_name,
};
use contralocal_core::trace::{Termination, TraceSink};
use contralocal_core::tree::{tree_local_search_with, TreeLayout};
use contralocal_core::triplets::{TreeTripletInstance, TripletInstance};

use crate::{gen, HarnessError};

/// Searchable problem: max-cut itself or one of its 1-D / tree targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    Maxcut,
    Ctr1d,
    Btw1d,
    Btw1dDegenerate,
    Nbtw1d,
    Tree,
}

impl Problem {
    pub const ALL: [Problem; 6] =
        [Problem::Maxcut, Problem::Ctr1d, Problem::Btw1d, Problem::Btw1dDegenerate, Problem::Nbtw1d, Problem::Tree];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Maxcut => "maxcut",
            Problem::Ctr1d => "ctr1d",
            Problem::Btw1d => "btw1d",
            Problem::Btw1dDegenerate => "btw1d-degenerate",
            Problem::Nbtw1d => "nbtw1d",
            Problem::Tree => "tree",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = HarnessError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Problem::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| HarnessError::Input(format!("unknown problem `{s}` (expected one of maxcut, ctr1d, btw1d, btw1d-degenerate, nbtw1d, tree)")))
    }
}

/// Compiled form of a graph for one problem.
pub enum Compiled {
    Maxcut(CutInstance),
    Line(TripletInstance),
    Tree(TreeTripletInstance),
}

pub fn compile(problem: Problem, g: &CutInstance) -> Compiled {
    match problem {
        Problem::Maxcut => Compiled::Maxcut(g.clone()),
        Problem::Ctr1d => Compiled::Line(reduce_contrastive_1d(g)),
        Problem::Btw1d => Compiled::Line(reduce_betweenness_1d(g, false)),
        Problem::Btw1dDegenerate => Compiled::Line(reduce_betweenness_1d(g, true)),
        Problem::Nbtw1d => Compiled::Line(reduce_nonbetweenness_1d(g)),
        Problem::Tree => Compiled::Tree(reduce_tree(g)),
    }
}

impl Compiled {
    /// Printable names of the movers.
    pub fn names(&self) -> Vec<String> {
        match self {
            Compiled::Maxcut(g) => (0..g.n()).map(vertex_name).collect(),
            Compiled::Line(t) => t.points.clone(),
            Compiled::Tree(t) => t.leaves.clone(),
        }
    }
}

/// Where a search starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Start {
    /// The configuration realizing this cut (the cut itself for max-cut).
    Cut(CutState),
    /// A seeded random cut, line embedding or tree.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub iterations: u64,
    pub termination: Termination,
    pub objective: Rational,
    /// Final configuration read back as a cut, or why that failed.
    pub decoded: Result<CutState, String>,
}

/// Starting configuration for a compiled problem.
pub enum StartConfig {
    Cut(CutState),
    Line(Embedding),
    Tree(TreeLayout),
}

pub fn start_config(compiled: &Compiled, g: &CutInstance, start: &Start) -> Result<StartConfig, HarnessError> {
    Ok(match (compiled, start) {
        (Compiled::Maxcut(_), Start::Cut(s)) => StartConfig::Cut(s.clone()),
        (Compiled::Maxcut(_), Start::Random(seed)) => StartConfig::Cut(gen::cut(&mut gen::rng(*seed), g.n())),
        (Compiled::Line(t), Start::Cut(s)) => StartConfig::Line(canonical_embedding(g, s, t)?),
        (Compiled::Line(t), Start::Random(seed)) => StartConfig::Line(gen::line_embedding(&mut gen::rng(*seed), t.point_count())),
        (Compiled::Tree(t), Start::Cut(s)) => StartConfig::Tree(canonical_tree(g, s, t)?),
        (Compiled::Tree(t), Start::Random(seed)) => StartConfig::Tree(gen::tree(&mut gen::rng(*seed), t.leaf_count())),
    })
}

/// Run `problem` on `g` from `start`, reporting moves to `sink`.
pub fn run(
    problem: Problem,
    g: &CutInstance,
    start: &Start,
    rule: PivotRule,
    cap: u64,
    sink: &mut dyn TraceSink,
) -> Result<RunOutcome, HarnessError> {
    let compiled = compile(problem, g);
    run_compiled(&compiled, start_config(&compiled, g, start)?, rule, cap, sink)
}

/// Run the engine matching `compiled` from `start`.
pub fn run_compiled(
    compiled: &Compiled,
    start: StartConfig,
    rule: PivotRule,
    cap: u64,
    sink: &mut dyn TraceSink,
) -> Result<RunOutcome, HarnessError> {
    Ok(match (compiled, start) {
        (Compiled::Maxcut(g), StartConfig::Cut(s)) => {
            let (end, sum) = flip_local_search_with(g, &s, rule, cap, sink)?;
            RunOutcome { iterations: sum.iterations, termination: sum.termination, objective: sum.objective, decoded: Ok(end) }
        }
        (Compiled::Line(t), StartConfig::Line(e)) => {
            let (end, sum) = local_search_1d_with(t, &e, rule, cap, sink)?;
            let decoded = decode_cut_embedding(t, &end).map_err(|e| e.to_string());
            RunOutcome { iterations: sum.iterations, termination: sum.termination, objective: sum.objective, decoded }
        }
        (Compiled::Tree(t), StartConfig::Tree(l)) => {
            let (end, sum) = tree_local_search_with(t, &l, rule, cap, sink)?;
            let decoded = decode_cut_tree(t, &end).map_err(|e| e.to_string());
            RunOutcome { iterations: sum.iterations, termination: sum.termination, objective: sum.objective, decoded }
        }
        _ => return Err(HarnessError::Input("start configuration does not match the problem".into())),
    })
}
