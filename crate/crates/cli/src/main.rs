//! `contralocal`: compile max-cut instances into triplet problems, run the
//! local searches, encode quadratic programs as triplet losses, check KKT
//! points, reproduce the hard-family table and run the verification suites.
//!
//! Exit codes: 0 success, 2 iteration cap reached, 3 verification failure,
//! 4 input error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use contralocal_cli::experiment::{run_experiment, write_outputs, ExperimentConfig};
use contralocal_cli::run::{compile, run_compiled, start_config, Compiled, Problem, RunOutcome, Start, StartConfig};
use contralocal_cli::gen;
use contralocal_cli::suites::{verify, SuiteOptions, VERIFY_SUITES};
use contralocal_core::embedding::Embedding;
use contralocal_core::graph_cut::{CutInstance, CutState, PivotRule};
use contralocal_core::rational::format_rational;
use contralocal_core::reductions::{reduce_betweenness_d, reduce_contrastive_d};
use contralocal_core::trace::{JsonlSink, MoverLog, Tee, Termination};
use contralocal_core::tree::TreeLayout;
use contralocal_core::triplet_loss::{
    encode_qp, encode_qp_highd, gradient, in_box, kkt_residual_qp, kkt_residual_tripletloss, loss,
    projected_gradient_descent, EncoderWeights, QuadraticProgram, TripletLossInstance,
};
use contralocal_core::triplets::{AnyInstance, ReductionKind};
use serde_json::json;

const EXIT_CAP: u8 = 2;
const EXIT_VERIFY: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "contralocal", version, about = "Local search on max-cut and the triplet problems it reduces to")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a max-cut graph into a triplet instance.
    Reduce {
        graph: PathBuf,
        /// Target: ctr1d, btw1d, btw1d-degenerate, nbtw1d, tree, btw-d<d> or ctr-d<d>.
        #[arg(long = "to")]
        target: String,
        /// Instance file to write (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run local search (or projected gradient descent on a triplet-loss
    /// instance) and print a summary line.
    Search {
        /// Graph, reduced instance, or triplet-loss instance.
        instance: PathBuf,
        /// Problem to compile a graph into before searching.
        #[arg(long, default_value = "maxcut")]
        problem: Problem,
        /// `designated` (the `.start` file next to the graph), `zero`,
        /// `random`, or a path to a start file (cut bits, positions, Newick
        /// tree or loss point).
        #[arg(long, default_value = "designated")]
        start: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "best")]
        rule: PivotRule,
        /// Maximum number of moves (or gradient steps).
        #[arg(long, default_value_t = 10_000_000)]
        cap: u64,
        /// Residual tolerance for projected gradient descent.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// JSONL trace file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// File receiving the mover sequence, one name per line.
        #[arg(long)]
        movers: Option<PathBuf>,
    },
    /// Encode a box-constrained quadratic program as a triplet loss.
    EncodeQp {
        qp: PathBuf,
        /// Instance file; the weight ledger goes to `<out>.weights.jsonl`.
        #[arg(long)]
        out: PathBuf,
        /// Embedding dimension (margin = dimension).
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Report KKT residuals of a point on the box.
    Kkt {
        /// Triplet-loss instance.
        instance: PathBuf,
        /// Whitespace-separated coordinates.
        #[arg(long)]
        point: PathBuf,
        /// Program the instance encodes; adds its residual to the report.
        #[arg(long)]
        qp: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run the hard-family experiment described by a JSON config.
    Experiment { config: PathBuf },
    /// Run a verification suite and print a JSON report.
    Verify {
        /// One of reductions, dynamics, trees, gradients, encoder.
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of random cases.
        #[arg(long, default_value_t = 50)]
        cases: usize,
        /// Largest random instance.
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        /// Report file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Reduce { graph, target, out } => reduce(&graph, &target, out.as_deref()),
        Command::Search { instance, problem, start, seed, rule, cap, tol, out, movers } => {
            search(&instance, problem, &start, seed, rule, cap, tol, out.as_deref(), movers.as_deref())
        }
        Command::EncodeQp { qp, out, dim, seed } => encode(&qp, &out, dim, seed),
        Command::Kkt { instance, point, qp, tol } => kkt(&instance, &point, qp.as_deref(), tol),
        Command::Experiment { config } => experiment(&config),
        Command::Verify { suite, seed, cases, max_size, out } => run_verify(&suite, seed, cases, max_size, out.as_deref()),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<CutInstance> {
    CutInstance::parse(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn reduce(graph: &Path, target: &str, out: Option<&Path>) -> Result<u8> {
    let g = read_graph(graph)?;
    let kind = ReductionKind::from_tag(target).ok_or_else(|| anyhow!("unknown reduction target `{target}`"))?;
    let instance = match kind {
        ReductionKind::BetweennessD(d) => AnyInstance::Embedding(reduce_betweenness_d(&g, d)?),
        ReductionKind::ContrastiveD(d) => AnyInstance::Embedding(reduce_contrastive_d(&g, d)?),
        _ => {
            let problem: Problem = target.parse()?;
            match compile(problem, &g) {
                Compiled::Line(t) => AnyInstance::Embedding(t),
                Compiled::Tree(t) => AnyInstance::Tree(t),
                Compiled::Maxcut(_) => unreachable!("max-cut is not a reduction target"),
            }
        }
    };
    write_or_print(out, &instance.to_text())?;
    let summary = match &instance {
        AnyInstance::Embedding(t) => format!("points={} triplets={}", t.point_count(), t.triplets.len()),
        AnyInstance::Tree(t) => format!("leaves={} triplets={}", t.leaf_count(), t.triplets.len()),
    };
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(0)
}

enum Loaded {
    Graph(CutInstance),
    Reduced(AnyInstance),
    Loss(TripletLossInstance),
}

fn first_word(text: &str) -> Option<(&str, Option<&str>)> {
    let line = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'))?;
    let mut words = line.split_whitespace();
    Some((words.next()?, words.next()))
}

fn load_instance(path: &Path) -> Result<Loaded> {
    let text = read(path)?;
    let ctx = || format!("parsing {}", path.display());
    Ok(match first_word(&text) {
        Some(("semantics", Some("triplet-loss"))) => Loaded::Loss(TripletLossInstance::parse(&text).with_context(ctx)?),
        Some(("semantics", _)) | Some(("leaves", _)) => Loaded::Reduced(AnyInstance::parse(&text).with_context(ctx)?),
        _ => Loaded::Graph(CutInstance::parse(&text).with_context(ctx)?),
    })
}

/// Start file next to a graph: `foo.graph` → `foo.start`.
fn designated_start(graph: &Path) -> PathBuf {
    graph.with_extension("start")
}

#[allow(clippy::too_many_arguments)]
fn search(
    path: &Path,
    problem: Problem,
    start: &str,
    seed: u64,
    rule: PivotRule,
    cap: u64,
    tol: f64,
    out: Option<&Path>,
    movers: Option<&Path>,
) -> Result<u8> {
    let (compiled, config) = match load_instance(path)? {
        Loaded::Loss(t) => return search_loss(&t, start, seed, cap, tol, out),
        Loaded::Graph(g) => {
            let start = match start {
                "random" => Start::Random(seed),
                "zero" => Start::Cut(CutState::all_one_side(g.n())),
                "designated" => Start::Cut(read_bits(&designated_start(path))?),
                file => Start::Cut(read_bits(Path::new(file))?),
            };
            let compiled = compile(problem, &g);
            let config = start_config(&compiled, &g, &start)?;
            (compiled, config)
        }
        Loaded::Reduced(AnyInstance::Embedding(t)) => {
            if t.dim != 1 {
                bail!("search runs on one-dimensional instances; this one has dimension {}", t.dim);
            }
            let e = match start {
                "random" => gen::line_embedding(&mut gen::rng(seed), t.point_count()),
                "designated" | "zero" => bail!("a reduced instance needs `--start random` or a positions file"),
                file => Embedding::parse(&read(Path::new(file))?, &t.points, 1)?,
            };
            (Compiled::Line(t), StartConfig::Line(e))
        }
        Loaded::Reduced(AnyInstance::Tree(t)) => {
            let layout = match start {
                "random" => gen::tree(&mut gen::rng(seed), t.leaf_count()),
                "designated" | "zero" => bail!("a tree instance needs `--start random` or a Newick file"),
                file => TreeLayout::parse_newick(&read(Path::new(file))?, &t.leaves)?,
            };
            (Compiled::Tree(t), StartConfig::Tree(layout))
        }
    };
    let names = compiled.names();
    let mut log = MoverLog::default();
    let outcome = match out {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            let mut jsonl = JsonlSink::new(BufWriter::new(file), names.clone());
            let outcome = run_compiled(&compiled, config, rule, cap, &mut Tee(&mut jsonl, &mut log))?;
            jsonl.finish().with_context(|| format!("writing {}", p.display()))?;
            outcome
        }
        None => run_compiled(&compiled, config, rule, cap, &mut log)?,
    };
    if let Some(p) = movers {
        let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
        for &m in &log.movers {
            writeln!(w, "{}", names[m])?;
        }
        w.flush()?;
    }
    println!("{}", summary_line(&compiled, &outcome));
    Ok(if outcome.termination == Termination::Cap { EXIT_CAP } else { 0 })
}

fn read_bits(path: &Path) -> Result<CutState> {
    CutState::from_bits(read(path)?.trim()).with_context(|| format!("parsing start cut {}", path.display()))
}

fn summary_line(compiled: &Compiled, o: &RunOutcome) -> String {
    let termination = match o.termination {
        Termination::LocalOptimum => "local-optimum",
        Termination::Cap => "cap",
    };
    let mut s = format!("iterations={} termination={termination} objective={}", o.iterations, format_rational(&o.objective));
    let graph = match compiled {
        Compiled::Maxcut(g) => Some(g),
        _ => None,
    };
    match (&o.decoded, graph) {
        (Ok(cut), Some(g)) => s.push_str(&format!(" cut={}", format_rational(&g.cut_value(cut).expect("matching cut")))),
        (Ok(cut), None) => s.push_str(&format!(" decoded={}", cut.to_bits())),
        (Err(e), _) => s.push_str(&format!(" decoded=none ({e})")),
    }
    s
}

fn read_point(path: &Path) -> Result<Vec<f64>> {
    read(path)?
        .split_whitespace()
        .map(|t| t.parse::<f64>().with_context(|| format!("bad coordinate `{t}` in {}", path.display())))
        .collect()
}

fn search_loss(t: &TripletLossInstance, start: &str, seed: u64, cap: u64, tol: f64, out: Option<&Path>) -> Result<u8> {
    let p0 = match start {
        "random" => gen::interior_point(&mut gen::rng(seed), t.len(), 0.0),
        "designated" | "zero" => vec![0.5; t.len()],
        file => read_point(Path::new(file))?,
    };
    if p0.len() != t.len() {
        bail!("start point has {} coordinates, instance needs {}", p0.len(), t.len());
    }
    // each triplet's Hessian has spectral norm at most 8w, so 1/(8·Σw) is
    // below the inverse smoothness constant
    let total: f64 = t.triplets().iter().map(|x| x.w).sum();
    let step = 1.0 / (8.0 * total + 1.0);
    let run = projected_gradient_descent(t, &p0, step, tol, usize::try_from(cap).unwrap_or(usize::MAX));
    if let Some(p) = out {
        let mut w = BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?);
        for (i, l) in run.losses.iter().enumerate() {
            writeln!(w, "{}", json!({ "iteration": i, "loss": l }))?;
        }
        w.flush()?;
    }
    let point: Vec<String> = run.point.iter().map(|x| format!("{x}")).collect();
    println!(
        "iterations={} termination={} loss={} residual={:e} point={}",
        run.iterations,
        if run.converged { "converged" } else { "cap" },
        run.losses.last().copied().unwrap_or(f64::NAN),
        run.residual,
        point.join(",")
    );
    Ok(if run.converged { 0 } else { EXIT_CAP })
}

fn ledger_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".weights.jsonl");
    PathBuf::from(s)
}

fn write_ledger(path: &Path, w: &EncoderWeights) -> Result<()> {
    let mut f = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    for p in &w.pairs {
        let line = json!({ "a": p.a.name(), "b": p.b.name(), "c": p.c.name(), "target": p.target, "w": p.w, "w_dual": p.w_dual });
        writeln!(f, "{line}")?;
    }
    f.flush()?;
    Ok(())
}

fn encode(qp_path: &Path, out: &Path, dim: usize, seed: u64) -> Result<u8> {
    let qp = QuadraticProgram::parse(&read(qp_path)?).with_context(|| format!("parsing {}", qp_path.display()))?;
    if dim == 0 {
        bail!("dimension must be at least 1");
    }
    let (t, w) = if dim == 1 { encode_qp(&qp) } else { encode_qp_highd(&qp, dim) };
    std::fs::write(out, t.to_text()).with_context(|| format!("writing {}", out.display()))?;
    let ledger = ledger_path(out);
    write_ledger(&ledger, &w)?;
    // self-check at a random interior point: analytic gradient against the
    // lifted program's gradient and central differences
    let lifted = qp.block_lift(dim);
    let x = gen::interior_point(&mut gen::rng(seed), t.len(), 0.05);
    let g = gradient(&t, &x);
    let qp_err = g.iter().zip(lifted.gradient(&x)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let fd = contralocal_oracles::finite_difference_gradient(|p| loss(&t, p), &x, 1e-5).map_err(|e| anyhow!(e))?;
    let fd_err = g.iter().zip(&fd).map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0)).fold(0.0, f64::max);
    let ok = qp_err <= 1e-8 && fd_err <= 1e-6;
    println!(
        "variables={} dim={} triplets={} ledger={} gradient-check={} qp-error={qp_err:e} fd-error={fd_err:e}",
        qp.n(),
        dim,
        t.triplets().len(),
        ledger.display(),
        if ok { "pass" } else { "fail" }
    );
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn kkt(instance: &Path, point: &Path, qp: Option<&Path>, tol: f64) -> Result<u8> {
    let t = TripletLossInstance::parse(&read(instance)?).with_context(|| format!("parsing {}", instance.display()))?;
    let p = read_point(point)?;
    if p.len() != t.len() {
        bail!("point has {} coordinates, instance needs {}", p.len(), t.len());
    }
    if !in_box(&p) {
        bail!("point lies outside the unit box");
    }
    let r_loss = kkt_residual_tripletloss(&t, &p);
    let mut ok = r_loss <= tol;
    let mut line = format!("tripletloss_residual={r_loss:e}");
    if let Some(qp_path) = qp {
        let q = QuadraticProgram::parse(&read(qp_path)?).with_context(|| format!("parsing {}", qp_path.display()))?;
        if q.n() * t.dim() != t.len() {
            bail!("program has {} variables; instance has {} points in dimension {}", q.n(), t.n(), t.dim());
        }
        let r_qp = kkt_residual_qp(&q.block_lift(t.dim()), &p);
        ok &= r_qp <= tol;
        line.push_str(&format!(" qp_residual={r_qp:e}"));
    }
    println!("{line} tol={tol:e} {}", if ok { "PASS" } else { "FAIL" });
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn experiment(config: &Path) -> Result<u8> {
    let cfg = ExperimentConfig::load(config)?;
    let report = run_experiment(&cfg)?;
    write_outputs(&report, &cfg.csv, &cfg.fig4)?;
    for f in &report.failures {
        eprintln!("H_{}: {}", f.k, f.detail);
    }
    println!("rows={} failures={} csv={} fig4={}", report.rows.len(), report.failures.len(), cfg.csv.display(), cfg.fig4.display());
    Ok(if !report.failures.is_empty() {
        EXIT_VERIFY
    } else if report.capped {
        EXIT_CAP
    } else {
        0
    })
}

fn run_verify(suite: &str, seed: u64, cases: usize, max_size: usize, out: Option<&Path>) -> Result<u8> {
    let opts = SuiteOptions { seed, cases, max_size };
    let report = verify(suite, opts).ok_or_else(|| anyhow!("unknown suite `{suite}` (expected one of {})", VERIFY_SUITES.join(", ")))?;
    write_or_print(out, &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
    for f in &report.failures {
        eprintln!("FAIL {} (seed {}): {}", f.property, f.seed, f.detail);
    }
    Ok(if report.passed() { 0 } else { EXIT_VERIFY })
}
