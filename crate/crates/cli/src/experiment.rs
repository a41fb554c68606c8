//! Hard-family experiment: one summary row per instance with the compiled
//! sizes and the iteration count, plus a two-column vertices/iterations file
//! for plotting.
//!
//! Instances run in parallel, one thread each; every search run is
//! single-threaded, so traces stay deterministic. A failing instance is
//! recorded and the others carry on.

use std::path::{Path, PathBuf};

use contralocal_core::graph_cut::PivotRule;
use contralocal_core::hard_family::{self, HardInstance};
use contralocal_core::trace::{MoverLog, Termination};
use serde::{Deserialize, Serialize};

use crate::run::{compile, run_compiled, start_config, Problem, Start};
use crate::suites::compiled_size;
use crate::HarnessError;

/// Start of each run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartSpec {
    /// The instance's designated start cut.
    #[default]
    Designated,
    /// A random configuration; instance `k` uses seed `seed + k`.
    Random(u64),
}

fn default_problems() -> Vec<Problem> {
    vec![Problem::Maxcut, Problem::Btw1d, Problem::Ctr1d, Problem::Tree]
}

fn default_rule() -> String {
    "best".into()
}

fn default_cap() -> u64 {
    10_000_000
}

/// Experiment configuration, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_problems")]
    pub problems: Vec<Problem>,
    pub k_min: u32,
    pub k_max: u32,
    #[serde(default = "default_rule")]
    pub rule: String,
    #[serde(default)]
    pub start: StartSpec,
    #[serde(default = "default_cap")]
    pub cap: u64,
    /// Summary CSV path.
    pub csv: PathBuf,
    /// Vertices/iterations data path.
    pub fig4: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| HarnessError::Input(format!("{}: {e}", path.display())))?;
        // relative output paths are relative to the config file
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.csv = base.join(&cfg.csv);
        cfg.fig4 = base.join(&cfg.fig4);
        Ok(cfg)
    }

    pub fn pivot_rule(&self) -> Result<PivotRule, HarnessError> {
        self.rule.parse().map_err(HarnessError::Input)
    }
}

/// One line of the summary table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub label: String,
    pub maxcut_n: usize,
    pub maxcut_m: usize,
    pub btw1d_n: usize,
    pub btw1d_m: usize,
    pub ctr1d_n: usize,
    pub ctr1d_m: usize,
    pub tree_n: usize,
    pub tree_m: usize,
    pub iterations: u64,
}

/// A row that could not be produced, or a run that misbehaved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowFailure {
    pub k: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<SummaryRow>,
    pub failures: Vec<RowFailure>,
    /// Some run stopped at the iteration cap.
    pub capped: bool,
}

/// Sizes of the four compiled forms of `g`, with the iteration count left
/// at zero.
pub fn size_row(label: String, g: &contralocal_core::graph_cut::CutInstance) -> SummaryRow {
    let size = |p| compiled_size(&compile(p, g), g);
    let (btw1d_n, btw1d_m) = size(Problem::Btw1d);
    let (ctr1d_n, ctr1d_m) = size(Problem::Ctr1d);
    let (tree_n, tree_m) = size(Problem::Tree);
    SummaryRow { label, maxcut_n: g.n(), maxcut_m: g.m(), btw1d_n, btw1d_m, ctr1d_n, ctr1d_m, tree_n, tree_m, iterations: 0 }
}

/// A row and whether a run hit the cap, or why the row failed.
type RowResult = Result<(SummaryRow, bool), String>;

/// Row for one instance. Every requested problem is run; they must agree on
/// the iteration count and, from the designated start, on the mover
/// sequence.
fn instance_row(h: &HardInstance, cfg: &ExperimentConfig, rule: PivotRule) -> RowResult {
    let mut row = size_row(format!("H_{}", h.k), &h.graph);
    let start = match cfg.start {
        StartSpec::Designated => Start::Cut(h.start.clone()),
        StartSpec::Random(seed) => Start::Random(seed.wrapping_add(h.k as u64)),
    };
    let mut first: Option<(Problem, u64, Vec<usize>)> = None;
    let mut capped = false;
    for &p in &cfg.problems {
        let compiled = compile(p, &h.graph);
        let config = start_config(&compiled, &h.graph, &start).map_err(|e| format!("{p}: {e}"))?;
        let mut log = MoverLog::default();
        let out = run_compiled(&compiled, config, rule, cfg.cap, &mut log).map_err(|e| format!("{p}: {e}"))?;
        capped |= out.termination == Termination::Cap;
        match &first {
            None => first = Some((p, out.iterations, log.movers)),
            Some((q, iters, movers)) => {
                if out.iterations != *iters {
                    return Err(format!("{p} took {} iterations, {q} took {iters}", out.iterations));
                }
                if cfg.start == StartSpec::Designated && log.movers != *movers {
                    return Err(format!("{p} and {q} moved different points"));
                }
            }
        }
    }
    row.iterations = first.map(|(_, i, _)| i).unwrap_or(0);
    Ok((row, capped))
}

/// Run the experiment without writing files.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, HarnessError> {
    let rule = cfg.pivot_rule()?;
    if cfg.k_min == 0 {
        return Err(HarnessError::Input("k_min must be at least 1".into()));
    }
    let ks: Vec<u32> = (cfg.k_min..=cfg.k_max).collect();
    let results: Vec<(u32, RowResult)> = std::thread::scope(|scope| {
        let handles: Vec<_> = ks
            .iter()
            .map(|&k| {
                scope.spawn(move || {
                    let res = hard_family::obtain(k).map_err(|e| e.to_string()).and_then(|h| instance_row(&h, cfg, rule));
                    (k, res)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("experiment worker panicked")).collect()
    });
    let mut report = ExperimentReport::default();
    for (k, res) in results {
        match res {
            Ok((row, capped)) => {
                report.capped |= capped;
                report.rows.push(row);
            }
            Err(detail) => report.failures.push(RowFailure { k, detail }),
        }
    }
    Ok(report)
}

/// Write the summary CSV (header always present) and the plot data.
pub fn write_outputs(report: &ExperimentReport, csv_path: &Path, fig4_path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(csv_path)?;
    w.write_record(["label", "maxcut_n", "maxcut_m", "btw1d_n", "btw1d_m", "ctr1d_n", "ctr1d_m", "tree_n", "tree_m", "iterations"])?;
    for row in &report.rows {
        w.serialize(row)?;
    }
    w.flush()?;
    let mut f = csv::Writer::from_path(fig4_path)?;
    f.write_record(["vertices", "iterations"])?;
    for row in &report.rows {
        f.write_record([row.maxcut_n.to_string(), row.iterations.to_string()])?;
    }
    f.flush()?;
    Ok(())
}
