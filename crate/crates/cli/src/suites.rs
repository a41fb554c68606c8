//! Verification suites. Each suite draws its cases from consecutive seeds
//! (`seed`, `seed + 1`, …) so that a failure names the seed that rebuilds
//! its counterexample.

use contralocal_core::embedding::{best_move_1d, is_local_opt_1d, move_breakpoints_1d, move_gain};
use contralocal_core::graph_cut::{flip_local_search_with, CutInstance, CutState, PivotRule};
use contralocal_core::hard_family::{self, HardFamilyError, HardInstance, TABLE};
use contralocal_core::rational::{int, ratio, Rational};
use contralocal_core::reductions::{
    canonical_embedding, canonical_tree, cut_multiplier, gadget_constant, reduce_betweenness_1d, reduce_contrastive_1d,
    reduce_nonbetweenness_1d, reduce_tree,
};
use contralocal_core::trace::{MoverLog, NullSink, Termination};
use contralocal_core::tree::{is_local_opt_tree, objective_tree, rooted_topology_count};
use contralocal_core::triplet_loss::{
    encode_qp, encode_qp_highd, gradient, kkt_residual_qp, kkt_residual_tripletloss, loss, projected_gradient_descent,
    QuadraticProgram,
};
use contralocal_core::triplets::{AnyInstance, ReductionKind, Semantics};
use contralocal_oracles::{enumerate_trees, finite_difference_gradient, OracleBudget};
use num_traits::Signed;
use rand::Rng;
use serde::Serialize;

use crate::gen;
use crate::run::{compile, run_compiled, Compiled, Problem, StartConfig};

/// One violated property.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub property: String,
    pub seed: u64,
    pub detail: String,
}

/// Machine-readable outcome of a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    /// Cases that could not run (for example, missing instances).
    pub skipped: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport { suite: suite.into(), cases: 0, failures: Vec::new(), skipped: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, property: &str, seed: u64, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(Failure { property: property.into(), seed, detail: detail() });
        }
    }

    fn merge(&mut self, other: SuiteReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
        self.skipped.extend(other.skipped);
    }
}

/// Sizes and seed for a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Number of random cases.
    pub cases: usize,
    /// Largest random instance (vertices, leaves or variables).
    pub max_size: usize,
}

/// Suites reachable from `verify`.
pub const VERIFY_SUITES: [&str; 5] = ["reductions", "dynamics", "trees", "gradients", "encoder"];

/// Run a named `verify` suite. `None` for an unknown name.
pub fn verify(name: &str, opts: SuiteOptions) -> Option<SuiteReport> {
    let mut report = match name {
        "reductions" => {
            let mut r = sizes(1..=hard_family::TABULATED_MAX);
            r.merge(linkage(opts));
            r.merge(round_trips(opts));
            r.merge(decode_soundness(SuiteOptions { max_size: opts.max_size.min(20), ..opts }, DecodeStart::Random));
            r
        }
        "dynamics" => dynamics(opts),
        "trees" => trees(opts),
        "gradients" => gradients(opts),
        "encoder" => {
            let mut r = encoder(opts);
            r.merge(kkt_transfer(opts));
            r
        }
        _ => return None,
    };
    report.suite = name.into();
    Some(report)
}

fn row_kinds() -> [(Problem, &'static str); 3] {
    [(Problem::Btw1d, "btw1d"), (Problem::Ctr1d, "ctr1d"), (Problem::Tree, "tree")]
}

/// `(points or leaves, triplets)` of a compiled problem.
pub fn compiled_size(c: &Compiled, g: &CutInstance) -> (usize, usize) {
    match c {
        Compiled::Maxcut(_) => (g.n(), g.m()),
        Compiled::Line(t) => (t.point_count(), t.triplets.len()),
        Compiled::Tree(t) => (t.leaf_count(), t.triplets.len()),
    }
}

/// The graph whose sizes stand for `H_k`: the ingested instance when one is
/// available, otherwise the size surrogate.
fn sized_graph(k: u32) -> CutInstance {
    match hard_family::obtain(k) {
        Ok(h) => h.graph,
        Err(_) => hard_family::size_surrogate(k),
    }
}

/// Compiled sizes against the reference table.
pub fn sizes(ks: std::ops::RangeInclusive<u32>) -> SuiteReport {
    let mut r = SuiteReport::new("sizes");
    for k in ks {
        let Some(row) = TABLE.iter().find(|row| row.k == k) else {
            r.skipped.push(format!("k={k}: no reference row"));
            continue;
        };
        r.cases += 1;
        let g = sized_graph(k);
        r.check((g.n(), g.m()) == (row.n, row.m), "maxcut size", k as u64, || format!("got ({}, {})", g.n(), g.m()));
        for (p, name) in row_kinds() {
            let want = match p {
                Problem::Btw1d => row.btw1d,
                Problem::Ctr1d => row.ctr1d,
                _ => row.tree,
            };
            let got = compiled_size(&compile(p, &g), &g);
            r.check(got == want, &format!("{name} size"), k as u64, || format!("H_{k}: got {got:?}, expected {want:?}"));
        }
    }
    r
}

/// Hard instances `1..=k_max` that are available, and the indices that are not.
pub fn available_hard_instances(k_max: u32) -> (Vec<HardInstance>, Vec<(u32, String)>) {
    let mut have = Vec::new();
    let mut missing = Vec::new();
    for k in 1..=k_max {
        match hard_family::obtain(k) {
            Ok(h) => have.push(h),
            Err(e @ HardFamilyError::Unsupported(_)) => missing.push((k, e.to_string())),
            Err(e) => missing.push((k, format!("invalid instance: {e}"))),
        }
    }
    (have, missing)
}

/// Flip search from the designated start against the reference counts.
pub fn hard_iterations(k_max: u32, rule: PivotRule) -> SuiteReport {
    let mut r = SuiteReport::new("hard-iterations");
    let (have, missing) = available_hard_instances(k_max);
    r.skipped.extend(missing.into_iter().map(|(k, why)| format!("H_{k}: {why}")));
    for h in have {
        r.cases += 1;
        let out = flip_local_search_with(&h.graph, &h.start, rule, h.expected_iterations + 1, &mut NullSink);
        match out {
            Ok((_, sum)) => r.check(
                sum.iterations == h.expected_iterations && sum.termination == Termination::LocalOptimum,
                "reference iteration count",
                h.k as u64,
                || format!("H_{}: {} iterations ({:?}), expected {}", h.k, sum.iterations, sum.termination, h.expected_iterations),
            ),
            Err(e) => r.check(false, "reference iteration count", h.k as u64, || e.to_string()),
        }
    }
    r
}

/// Compare every reduced search's mover sequence from the canonical start
/// with flip search from `s`. `Err` names the first problem that differs.
pub fn dynamics_identity(g: &CutInstance, s: &CutState, rule: PivotRule, cap: u64) -> Result<(), String> {
    let mut flip = MoverLog::default();
    let (_, fsum) = flip_local_search_with(g, s, rule, cap, &mut flip).map_err(|e| e.to_string())?;
    for p in [Problem::Ctr1d, Problem::Btw1d, Problem::Nbtw1d, Problem::Tree] {
        let c = compile(p, g);
        let start = match &c {
            Compiled::Line(t) => StartConfig::Line(canonical_embedding(g, s, t).map_err(|e| e.to_string())?),
            Compiled::Tree(t) => StartConfig::Tree(canonical_tree(g, s, t).map_err(|e| e.to_string())?),
            Compiled::Maxcut(_) => unreachable!(),
        };
        let mut log = MoverLog::default();
        let out = run_compiled(&c, start, rule, cap, &mut log).map_err(|e| e.to_string())?;
        if log.movers != flip.movers || out.iterations != fsum.iterations {
            let at = log.movers.iter().zip(&flip.movers).position(|(a, b)| a != b).unwrap_or(log.movers.len().min(flip.movers.len()));
            return Err(format!(
                "{p}: {} moves vs {} flips, first difference at step {at}",
                out.iterations, fsum.iterations
            ));
        }
    }
    Ok(())
}

/// Mover-sequence identity on random graphs from random cuts, under both
/// pivot rules.
pub fn dynamics(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("dynamics");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let g = gen::any_graph(&mut rng, opts.max_size);
        let s = gen::cut(&mut rng, g.n());
        r.cases += 1;
        for rule in [PivotRule::BestImprovement, PivotRule::FirstImprovement] {
            let res = dynamics_identity(&g, &s, rule, 1_000_000);
            r.check(res.is_ok(), "mover sequences equal flip search", seed, || format!("{rule:?}: {}", res.unwrap_err()));
        }
    }
    r
}

/// Mover-sequence identity on the available hard instances.
pub fn hard_dynamics(k_max: u32, rule: PivotRule) -> SuiteReport {
    let mut r = SuiteReport::new("hard-dynamics");
    let (have, missing) = available_hard_instances(k_max);
    r.skipped.extend(missing.into_iter().map(|(k, why)| format!("H_{k}: {why}")));
    for h in have {
        r.cases += 1;
        let res = dynamics_identity(&h.graph, &h.start, rule, h.expected_iterations + 1);
        r.check(res.is_ok(), "mover sequences equal flip search", h.k as u64, || res.unwrap_err());
    }
    r
}

/// Where the searches of [`decode_soundness`] start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStart {
    /// Random line positions or a random tree.
    Random,
    /// The canonical configuration of a random cut.
    Canonical,
}

/// Every uncapped local optimum of every reduced problem decodes to a local
/// max cut.
pub fn decode_soundness(opts: SuiteOptions, from: DecodeStart) -> SuiteReport {
    let mut r = SuiteReport::new("decode");
    let problems = [Problem::Ctr1d, Problem::Btw1d, Problem::Btw1dDegenerate, Problem::Nbtw1d, Problem::Tree];
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let g = gen::any_graph(&mut rng, opts.max_size);
        r.cases += 1;
        for p in problems {
            let c = compile(p, &g);
            let s = gen::cut(&mut rng, g.n());
            let start = match (&c, from) {
                (Compiled::Line(t), DecodeStart::Random) => StartConfig::Line(gen::line_embedding(&mut rng, t.point_count())),
                (Compiled::Tree(t), DecodeStart::Random) => StartConfig::Tree(gen::tree(&mut rng, t.leaf_count())),
                (Compiled::Line(t), DecodeStart::Canonical) => StartConfig::Line(canonical_embedding(&g, &s, t).expect("matching cut")),
                (Compiled::Tree(t), DecodeStart::Canonical) => StartConfig::Tree(canonical_tree(&g, &s, t).expect("matching cut")),
                (Compiled::Maxcut(_), _) => unreachable!(),
            };
            let out = match run_compiled(&c, start, PivotRule::default(), 1_000_000, &mut NullSink) {
                Ok(o) => o,
                Err(e) => {
                    r.check(false, "search runs", seed, || format!("{p}: {e}"));
                    continue;
                }
            };
            if out.termination == Termination::Cap {
                r.skipped.push(format!("seed {seed} {p}: capped"));
                continue;
            }
            match out.decoded {
                Ok(cut) => {
                    let ok = g.is_local_max_cut(&cut).unwrap_or(false);
                    r.check(ok, "decoded optimum is a local max cut", seed, || format!("{p}: decoded {}", cut.to_bits()));
                }
                Err(e) => r.check(false, "local optimum decodes", seed, || format!("{p}: {e}")),
            }
        }
    }
    r
}

/// Objective on canonical configurations equals gadget constant plus the
/// scaled cut value.
pub fn linkage(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("linkage");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let g = gen::any_graph(&mut rng, opts.max_size);
        let s = gen::cut(&mut rng, g.n());
        let cut = g.cut_value(&s).expect("matching cut");
        r.cases += 1;
        let line = [
            (ReductionKind::Contrastive1d, reduce_contrastive_1d(&g)),
            (ReductionKind::Betweenness1d, reduce_betweenness_1d(&g, false)),
            (ReductionKind::Betweenness1dDegenerate, reduce_betweenness_1d(&g, true)),
            (ReductionKind::NonBetweenness1d, reduce_nonbetweenness_1d(&g)),
        ];
        for (kind, t) in line {
            let got = canonical_embedding(&g, &s, &t).map_err(|e| e.to_string()).and_then(|e| {
                contralocal_core::embedding::objective(&t, &e).map_err(|e| e.to_string())
            });
            let want = gadget_constant(kind, &g) + cut_multiplier(kind) * &cut;
            r.check(got.as_ref() == Ok(&want), "canonical objective linkage", seed, || format!("{}: got {got:?}, want {want}", kind.tag()));
        }
        // non-betweenness constant is (|V| + 1)·W
        let nb = (int(g.n() as i64) + int(1)) * g.total_weight();
        r.check(gadget_constant(ReductionKind::NonBetweenness1d, &g) == nb, "non-betweenness constant", seed, || {
            format!("constant {} != (|V|+1)·W = {nb}", gadget_constant(ReductionKind::NonBetweenness1d, &g))
        });
        let t = reduce_tree(&g);
        let got = canonical_tree(&g, &s, &t).map_err(|e| e.to_string()).and_then(|l| objective_tree(&t, &l).map_err(|e| e.to_string()));
        let want = gadget_constant(ReductionKind::Tree, &g) + &cut * ratio(1, 2);
        r.check(got.as_ref() == Ok(&want), "canonical objective linkage", seed, || format!("tree: got {got:?}, want {want}"));
    }
    r
}

/// Compiled instances survive a text round trip and obey the size laws.
pub fn round_trips(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("round-trips");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let g = gen::any_graph(&mut gen::rng(seed), opts.max_size);
        r.cases += 1;
        let gt = g.to_text();
        r.check(CutInstance::parse(&gt).map(|h| h.to_text()).as_ref() == Ok(&gt), "graph text round trip", seed, String::new);
        let (n, m) = (g.n(), g.m());
        for p in [Problem::Ctr1d, Problem::Btw1d, Problem::Nbtw1d, Problem::Tree] {
            let c = compile(p, &g);
            let text = match &c {
                Compiled::Line(t) => t.to_text(),
                Compiled::Tree(t) => t.to_text(),
                Compiled::Maxcut(_) => unreachable!(),
            };
            let back = AnyInstance::parse(&text).map(|a| a.to_text());
            r.check(back.as_ref() == Ok(&text), "instance text round trip", seed, || format!("{p}"));
            let want = match p {
                Problem::Ctr1d => Some((n + 3, m + 2 * n + 2)),
                Problem::Btw1d => Some((n + 2, m + 2 * n)),
                Problem::Tree => Some((n + 4, 3 * n + 2 * m + 3)),
                _ => None,
            };
            if let Some(want) = want {
                let got = compiled_size(&c, &g);
                r.check(got == want, "size identity", seed, || format!("{p}: got {got:?}, want {want:?}"));
            }
        }
    }
    r
}

/// Relocation-site counts on random trees and the enumeration count check.
pub fn tree_structure(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("tree-structure");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let leaves = rng.gen_range(2..=opts.max_size.max(2));
        let layout = gen::tree(&mut rng, leaves);
        r.cases += 1;
        for leaf in 0..leaves {
            let sites = layout.relocation_sites(leaf).map(|s| s.len());
            r.check(sites == Ok(2 * leaves - 3), "2L−3 relocation sites", seed, || format!("L={leaves}, leaf {leaf}: {sites:?}"));
        }
    }
    let budget = OracleBudget::default();
    for l in 1..=budget.max_tree_leaves {
        r.cases += 1;
        let got = enumerate_trees(l, &budget).map(|t| t.len() as u128);
        let want = if l == 1 { 1 } else { rooted_topology_count(l) };
        r.check(got == Ok(want), "topology count (2L−3)!!", l as u64, || format!("L={l}: {got:?} vs {want}"));
    }
    r
}

/// Tree structure plus local optimality of the tree search on small
/// random instances.
pub fn trees(opts: SuiteOptions) -> SuiteReport {
    let mut r = tree_structure(SuiteOptions { max_size: opts.max_size.max(3), ..opts });
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let g = gen::any_graph(&mut rng, 8);
        let t = reduce_tree(&g);
        let start = gen::tree(&mut rng, t.leaf_count());
        r.cases += 1;
        let out = run_compiled(&Compiled::Tree(t.clone()), StartConfig::Tree(start.clone()), PivotRule::default(), 100_000, &mut NullSink);
        r.check(matches!(out, Ok(ref o) if o.termination == Termination::LocalOptimum), "tree search terminates", seed, || format!("{out:?}"));
        let (end, _) = contralocal_core::tree::tree_local_search(&t, &start, PivotRule::default(), 100_000).expect("valid start");
        r.check(is_local_opt_tree(&t, &end).unwrap_or(false), "tree search ends locally optimal", seed, String::new);
    }
    r
}

/// Piecewise constancy between breakpoints and completeness of the best
/// move against a 1/8 grid, on random line instances.
pub fn line_structure(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("line-structure");
    let sems = [Semantics::Contrastive, Semantics::Betweenness, Semantics::NonBetweenness];
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let points = rng.gen_range(3..=7);
        let count = rng.gen_range(1..=10);
        let t = gen::line_instance(&mut rng, points, count, sems[i % 3]);
        let e = gen::line_embedding(&mut rng, points);
        r.cases += 1;
        for v in 0..points {
            let bps = move_breakpoints_1d(&t, &e, v).expect("matching embedding");
            let gain = |x: &Rational| move_gain(&t, &e, v, std::slice::from_ref(x)).expect("matching embedding");
            if !bps.is_empty() {
                let mut probes: Vec<(Rational, Rational)> = bps
                    .windows(2)
                    .map(|w| (&w[0] + (&w[1] - &w[0]) * ratio(1, 3), &w[0] + (&w[1] - &w[0]) * ratio(2, 3)))
                    .collect();
                probes.push((&bps[0] - int(1), &bps[0] - int(7)));
                probes.push((bps.last().unwrap() + int(1), bps.last().unwrap() + int(7)));
                for (x, y) in probes {
                    r.check(gain(&x) == gain(&y), "gain constant between breakpoints", seed, || format!("point {v}: {x} vs {y}"));
                }
            }
            let best = best_move_1d(&t, &e, v).expect("matching embedding");
            let bound = best.as_ref().map(|(_, g)| g.clone()).unwrap_or_else(|| int(0));
            if let Some((_, g)) = &best {
                r.check(g.is_positive(), "best move improves", seed, || format!("point {v}: gain {g}"));
            }
            let span = 5 * points as i64 + 10;
            for k in -8 * span..=8 * span {
                let x = ratio(k, 8);
                if (0..points).any(|p| p != v && *e.coord(p, 0) == x) {
                    continue;
                }
                r.check(gain(&x) <= bound, "best move dominates the grid", seed, || format!("point {v} at {x}"));
            }
        }
        let local = is_local_opt_1d(&t, &e).expect("matching embedding");
        let any_move = (0..points).any(|v| best_move_1d(&t, &e, v).expect("matching embedding").is_some());
        r.check(local != any_move, "local optimality agrees with best moves", seed, String::new);
    }
    r
}

/// Both structural halves together.
pub fn structural(opts: SuiteOptions) -> SuiteReport {
    let mut r = tree_structure(SuiteOptions { max_size: 50, ..opts });
    r.merge(line_structure(opts));
    r.suite = "structural".into();
    r
}

fn random_qp(rng: &mut impl Rng, max_n: usize) -> QuadraticProgram {
    let n = rng.gen_range(1..=max_n.max(1));
    gen::qp(rng, n)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Encoded gradient equals `2Qx + b` and central differences; hinge
/// arguments stay nonnegative on the box for `d = 1, 2, 3`.
pub fn encoder(opts: SuiteOptions) -> SuiteReport {
    let mut r = gradients(opts);
    r.suite = "encoder".into();
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let q = random_qp(&mut rng, opts.max_size);
        for d in 1..=3 {
            let (t, _) = if d == 1 { encode_qp(&q) } else { encode_qp_highd(&q, d) };
            let len = q.n() * d;
            for j in 0..20 {
                // half the probes are box corners
                let p: Vec<f64> = if j % 2 == 0 {
                    (0..len).map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 }).collect()
                } else {
                    gen::interior_point(&mut rng, len, 0.0)
                };
                let low = t.hinge_arguments(&p).into_iter().fold(f64::INFINITY, f64::min);
                r.check(low >= 0.0, "hinge arguments nonnegative on the box", seed, || format!("d={d}: min argument {low}"));
            }
        }
    }
    r
}

/// Gradient checks of the encoded loss at random interior points.
pub fn gradients(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("gradients");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let q = random_qp(&mut rng, opts.max_size);
        let (t, _) = encode_qp(&q);
        r.cases += 1;
        for _ in 0..100 {
            let x = gen::interior_point(&mut rng, q.n(), 0.01);
            let g = gradient(&t, &x);
            let want = q.gradient(&x);
            let err = g.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            r.check(err <= 1e-8, "gradient equals 2Qx + b", seed, || format!("max abs error {err:e}"));
            let fd = finite_difference_gradient(|p| loss(&t, p), &x, 1e-5).expect("interior point");
            let ok = g.iter().zip(&fd).all(|(a, b)| close(*a, *b, 1e-6));
            r.check(ok, "gradient matches finite differences", seed, || format!("analytic {g:?} vs {fd:?}"));
        }
    }
    r
}

/// PGD on encoded programs: convex programs reach both residual bounds;
/// every fixed point found on indefinite programs satisfies the program's
/// residual bound.
pub fn kkt_transfer(opts: SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("kkt-transfer");
    for i in 0..opts.cases {
        let seed = opts.seed + i as u64;
        let mut rng = gen::rng(seed);
        let n = rng.gen_range(1..=opts.max_size.max(1));
        for convex in [true, false] {
            let q = if convex { gen::psd_qp(&mut rng, n) } else { gen::qp(&mut rng, n) };
            let (t, _) = encode_qp(&q);
            let start = gen::interior_point(&mut rng, n, 0.0);
            let run = projected_gradient_descent(&t, &start, q.default_step(), 1e-7, 1_000_000);
            r.cases += 1;
            let r_loss = kkt_residual_tripletloss(&t, &run.point);
            let r_qp = kkt_residual_qp(&q, &run.point);
            if convex {
                r.check(run.converged && r_loss <= 1e-6, "PGD reaches a KKT point", seed, || {
                    format!("n={n}: residual {r_loss:e} after {} iterations", run.iterations)
                });
            } else if !run.converged {
                r.skipped.push(format!("seed {seed}: indefinite program did not reach a fixed point"));
                continue;
            }
            r.check(r_qp <= 1e-5, "program residual at the PGD point", seed, || format!("n={n}, convex={convex}: {r_qp:e}"));
        }
    }
    r
}
