//! End-to-end checks of the `contralocal` binary: outputs, determinism and
//! the exit-code contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use contralocal_cli::gen;
use contralocal_core::hard_family::{size_surrogate, HardInstance};
use contralocal_core::graph_cut::CutState;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_contralocal"));
    c.env_remove("CONTRALOCAL_CACHE");
    c
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn random_graph(dir: &Path, seed: u64, n: usize) {
    let mut rng = gen::rng(seed);
    let g = gen::graph(&mut rng, n, 0.5);
    let s = gen::cut(&mut rng, n);
    write(dir, "g.graph", &g.to_text());
    write(dir, "g.start", &format!("{}\n", s.to_bits()));
}

#[test]
fn reduce_reports_sizes_of_a_family_sized_graph() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "h1.graph", &size_surrogate(1).to_text());
    let o = run(&["reduce", "h1.graph", "--to", "ctr1d", "--out", "h1.ctr"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "points=40 triplets=121");
    let o = run(&["reduce", "h1.graph", "--to", "tree", "--out", "h1.tree"], dir.path());
    assert_eq!(stdout(&o).trim(), "leaves=41 triplets=204");
    let o = run(&["reduce", "h1.graph", "--to", "btw1d", "--out", "h1.btw"], dir.path());
    assert_eq!(stdout(&o).trim(), "points=39 triplets=119");
}

#[test]
fn malformed_graph_is_an_input_error_with_a_line_number() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.graph", "3 2\n0 1 1\n1 x 1\n");
    let o = run(&["reduce", "bad.graph", "--to", "ctr1d"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = run(&["reduce", "missing.graph", "--to", "ctr1d"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    let o = run(&["frobnicate"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn reduced_searches_move_the_same_vertices_as_flip_search() {
    let dir = tempfile::tempdir().unwrap();
    random_graph(dir.path(), 11, 12);
    let o = run(&["search", "g.graph", "--movers", "maxcut.movers"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let reference = std::fs::read_to_string(dir.path().join("maxcut.movers")).unwrap();
    assert!(!reference.is_empty());
    for p in ["ctr1d", "btw1d", "nbtw1d", "tree"] {
        let file = format!("{p}.movers");
        let o = run(&["search", "g.graph", "--problem", p, "--movers", &file], dir.path());
        assert!(o.status.success(), "{p}: {}", stderr(&o));
        assert_eq!(std::fs::read_to_string(dir.path().join(&file)).unwrap(), reference, "{p}");
    }
}

#[test]
fn traces_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    random_graph(dir.path(), 5, 10);
    for (p, start) in [("maxcut", "designated"), ("tree", "designated"), ("ctr1d", "random")] {
        let a = run(&["search", "g.graph", "--problem", p, "--start", start, "--seed", "7", "--out", "a.jsonl"], dir.path());
        let b = run(&["search", "g.graph", "--problem", p, "--start", start, "--seed", "7", "--out", "b.jsonl"], dir.path());
        assert!(a.status.success() && b.status.success());
        assert_eq!(stdout(&a), stdout(&b));
        let ta = std::fs::read(dir.path().join("a.jsonl")).unwrap();
        assert_eq!(ta, std::fs::read(dir.path().join("b.jsonl")).unwrap(), "{p}");
        let lines = String::from_utf8(ta).unwrap();
        for l in lines.lines() {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert!(v.get("mover").is_some());
        }
    }
}

#[test]
fn summary_line_reports_iterations_and_decoded_cut() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.graph", "3 3\n0 1 1\n1 2 1\n0 2 1\n");
    write(dir.path(), "k3.start", "000\n");
    let o = run(&["search", "k3.graph"], dir.path());
    assert_eq!(stdout(&o).trim(), "iterations=1 termination=local-optimum objective=2 cut=2");
    let o = run(&["search", "k3.graph", "--problem", "ctr1d", "--start", "random", "--seed", "7"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("termination=local-optimum") && stdout(&o).contains("decoded="), "{}", stdout(&o));
}

#[test]
fn reaching_the_cap_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "k3.graph", "3 3\n0 1 1\n1 2 1\n0 2 1\n");
    write(dir.path(), "k3.start", "000\n");
    for p in ["maxcut", "ctr1d", "tree"] {
        let o = run(&["search", "k3.graph", "--problem", p, "--cap", "0"], dir.path());
        assert_eq!(o.status.code(), Some(2), "{p}");
        assert!(stdout(&o).contains("termination=cap"));
    }
}

#[test]
fn reduced_instance_files_search_from_random_starts() {
    let dir = tempfile::tempdir().unwrap();
    random_graph(dir.path(), 3, 8);
    for p in ["btw1d", "tree"] {
        let file = format!("g.{p}");
        assert!(run(&["reduce", "g.graph", "--to", p, "--out", &file], dir.path()).status.success());
        let o = run(&["search", &file, "--start", "random", "--seed", "2"], dir.path());
        assert!(o.status.success(), "{p}: {}", stderr(&o));
        assert!(stdout(&o).contains("decoded="));
        let o = run(&["search", &file], dir.path());
        assert_eq!(o.status.code(), Some(4), "{p}: designated start needs a graph");
    }
}

#[test]
fn encode_then_descend_then_verify_kkt() {
    let dir = tempfile::tempdir().unwrap();
    let q = gen::psd_qp(&mut gen::rng(9), 3);
    write(dir.path(), "q.qp", &q.to_text());
    let o = run(&["encode-qp", "q.qp", "--out", "q.loss"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("gradient-check=pass"), "{}", stdout(&o));
    let ledger = std::fs::read_to_string(dir.path().join("q.loss.weights.jsonl")).unwrap();
    assert_eq!(ledger.lines().count(), 3 + 2 * 3);
    let o = run(&["search", "q.loss", "--tol", "1e-9"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    let point = stdout(&o).trim().rsplit("point=").next().unwrap().replace(',', " ");
    write(dir.path(), "x.txt", &point);
    let o = run(&["kkt", "q.loss", "--point", "x.txt", "--qp", "q.qp", "--tol", "1e-6"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("qp_residual=") && stdout(&o).trim().ends_with("PASS"));
    write(dir.path(), "out.txt", "1.5 0 0");
    assert_eq!(run(&["kkt", "q.loss", "--point", "out.txt"], dir.path()).status.code(), Some(4));
    write(dir.path(), "asym.qp", "2\n1 2\n3 1\n0 0\n");
    assert_eq!(run(&["encode-qp", "asym.qp", "--out", "a.loss"], dir.path()).status.code(), Some(4));
}

#[test]
fn kkt_fails_with_three_away_from_stationarity() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "q.qp", "2\n1 0\n0 1\n-1 -1\n");
    assert!(run(&["encode-qp", "q.qp", "--out", "q.loss"], dir.path()).status.success());
    write(dir.path(), "x.txt", "0.9 0.1");
    let o = run(&["kkt", "q.loss", "--point", "x.txt", "--qp", "q.qp"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).trim().ends_with("FAIL"));
}

#[test]
fn experiment_writes_header_only_for_an_empty_range() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "e.json", r#"{"k_min": 1, "k_max": 0, "csv": "t.csv", "fig4": "f.csv"}"#);
    let o = run(&["experiment", "e.json"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("t.csv")).unwrap(),
        "label,maxcut_n,maxcut_m,btw1d_n,btw1d_m,ctr1d_n,ctr1d_m,tree_n,tree_m,iterations\n"
    );
    assert_eq!(std::fs::read_to_string(dir.path().join("f.csv")).unwrap(), "vertices,iterations\n");
}

#[test]
fn experiment_records_missing_instances_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    // a law-abiding stand-in for H_1 only; H_2 is missing
    HardInstance::validate(1, size_surrogate(1), CutState::all_one_side(37)).unwrap().store(&cache).unwrap();
    write(dir.path(), "e.json", r#"{"k_min": 1, "k_max": 2, "csv": "t.csv", "fig4": "f.csv"}"#);
    let o = bin().args(["experiment", "e.json"]).current_dir(dir.path()).env("CONTRALOCAL_CACHE", &cache).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("H_2"));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("H_1,37,45,39,119,40,121,41,204,"), "{}", rows[1]);
}

#[test]
fn verify_prints_a_report_and_names_unknown_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "dynamics", "--cases", "5", "--max-size", "8"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["suite"], "dynamics");
    assert_eq!(report["cases"], 5);
    assert!(report["failures"].as_array().unwrap().is_empty());
    for suite in ["trees", "gradients", "encoder"] {
        let o = run(&["verify", suite, "--cases", "3", "--max-size", "6"], dir.path());
        assert!(o.status.success(), "{suite}: {}", stderr(&o));
    }
    let o = run(&["verify", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(4));
}
