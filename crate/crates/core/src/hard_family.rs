//! The family `H_1, H_2, …` of bounded-degree max-cut instances on which flip
//! local search from a designated start takes exponentially many steps.
//!
//! The graphs come from an external construction that is not reproduced
//! here. [`generate`] therefore reports [`HardFamilyError::Unsupported`];
//! instances are brought in with [`ingest`] (graph file plus start
//! bitstring) and validated against the family's size and degree laws.
//! A cache directory named by `CONTRALOCAL_CACHE` holds ingested instances
//! as `h{k}.graph` / `h{k}.start`.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::graph_cut::{CutError, CutInstance, CutState};

/// Environment variable naming the instance cache directory.
pub const CACHE_ENV: &str = "CONTRALOCAL_CACHE";

/// Largest family index with tabulated statistics.
pub const TABULATED_MAX: u32 = 15;

#[derive(Debug, Error)]
pub enum HardFamilyError {
    #[error("no generator for H_{0}: the construction is external; place h{0}.graph and h{0}.start in the directory named by CONTRALOCAL_CACHE")]
    Unsupported(u32),
    #[error("family index must be at least 1")]
    BadIndex,
    #[error("H_{k} violates {invariant}")]
    Invariant { k: u32, invariant: String },
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One row of the reference statistics: the max-cut instance, its three
/// compiled sizes (points or leaves, triplets) and the iteration count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub k: u32,
    pub n: usize,
    pub m: usize,
    pub btw1d: (usize, usize),
    pub ctr1d: (usize, usize),
    pub tree: (usize, usize),
    pub iterations: u64,
}

const fn row(k: u32, n: usize, m: usize, btw1d: (usize, usize), ctr1d: (usize, usize), tree: (usize, usize), iterations: u64) -> TableRow {
    TableRow { k, n, m, btw1d, ctr1d, tree, iterations }
}

/// Reference statistics for `H_1..H_15`.
pub const TABLE: [TableRow; 15] = [
    row(1, 37, 45, (39, 119), (40, 121), (41, 204), 63),
    row(2, 65, 81, (67, 211), (68, 213), (69, 360), 167),
    row(3, 93, 117, (95, 303), (96, 305), (97, 516), 375),
    row(4, 121, 153, (123, 395), (124, 397), (125, 672), 791),
    row(5, 149, 189, (151, 487), (152, 489), (153, 828), 1623),
    row(6, 177, 225, (179, 579), (180, 581), (181, 984), 3287),
    row(7, 205, 261, (207, 671), (208, 673), (209, 1140), 6615),
    row(8, 233, 297, (235, 763), (236, 765), (237, 1296), 13_271),
    row(9, 261, 333, (263, 855), (264, 857), (265, 1452), 26_583),
    row(10, 289, 369, (291, 947), (292, 949), (293, 1608), 53_207),
    row(11, 317, 405, (319, 1039), (320, 1041), (321, 1764), 106_455),
    row(12, 345, 441, (347, 1131), (348, 1133), (349, 1920), 212_951),
    row(13, 373, 477, (375, 1223), (376, 1225), (377, 2076), 425_943),
    row(14, 401, 513, (403, 1315), (404, 1317), (405, 2232), 851_927),
    row(15, 429, 549, (431, 1407), (432, 1409), (433, 2388), 1_703_895),
];

/// `28k + 9`.
pub fn vertex_count(k: u32) -> usize {
    28 * k as usize + 9
}

/// `36k + 9`.
pub fn edge_count(k: u32) -> usize {
    36 * k as usize + 9
}

/// `104·2^(k−1) − 41`, the solution of `iter(k) = 2·iter(k−1) + 41`,
/// `iter(1) = 63`.
pub fn expected_iterations(k: u32) -> u64 {
    assert!(k >= 1, "family index starts at 1");
    104 * (1u64 << (k - 1)) - 41
}

pub const MAX_DEGREE: usize = 4;

/// A validated family member with its designated start.
#[derive(Debug, Clone, PartialEq)]
pub struct HardInstance {
    pub k: u32,
    pub graph: CutInstance,
    pub start: CutState,
    pub expected_iterations: u64,
}

impl HardInstance {
    /// Check every family invariant for index `k`.
    pub fn validate(k: u32, graph: CutInstance, start: CutState) -> Result<Self, HardFamilyError> {
        if k == 0 {
            return Err(HardFamilyError::BadIndex);
        }
        let fail = |invariant: String| Err(HardFamilyError::Invariant { k, invariant });
        if graph.n() != vertex_count(k) {
            return fail(format!("vertex count {} != 28k+9 = {}", graph.n(), vertex_count(k)));
        }
        if graph.m() != edge_count(k) {
            return fail(format!("edge count {} != 36k+9 = {}", graph.m(), edge_count(k)));
        }
        if graph.max_degree() > MAX_DEGREE {
            return fail(format!("maximum degree {} > {MAX_DEGREE}", graph.max_degree()));
        }
        if start.len() != graph.n() {
            return fail(format!("start cut has {} sides for {} vertices", start.len(), graph.n()));
        }
        Ok(HardInstance { k, graph, start, expected_iterations: expected_iterations(k) })
    }

    /// `(graph text, start bitstring)`.
    pub fn to_text(&self) -> (String, String) {
        (self.graph.to_text(), format!("{}\n", self.start.to_bits()))
    }

    /// Write `h{k}.graph` and `h{k}.start` into `dir`.
    pub fn store(&self, dir: &Path) -> Result<(), HardFamilyError> {
        let (g, s) = self.to_text();
        let (gp, sp) = cache_paths(dir, self.k);
        std::fs::create_dir_all(dir).map_err(|source| HardFamilyError::Io { path: dir.to_path_buf(), source })?;
        std::fs::write(&gp, g).map_err(|source| HardFamilyError::Io { path: gp.clone(), source })?;
        std::fs::write(&sp, s).map_err(|source| HardFamilyError::Io { path: sp.clone(), source })?;
        Ok(())
    }
}

/// Construct `H_k`. The construction is external, so this always fails with
/// [`HardFamilyError::Unsupported`].
pub fn generate(k: u32) -> Result<HardInstance, HardFamilyError> {
    if k == 0 {
        return Err(HardFamilyError::BadIndex);
    }
    Err(HardFamilyError::Unsupported(k))
}

/// Parse and validate an instance given as text.
pub fn ingest_text(graph: &str, start: &str, k: u32) -> Result<HardInstance, HardFamilyError> {
    HardInstance::validate(k, CutInstance::parse(graph)?, CutState::from_bits(start)?)
}

fn read(path: &Path) -> Result<String, HardFamilyError> {
    std::fs::read_to_string(path).map_err(|source| HardFamilyError::Io { path: path.to_path_buf(), source })
}

/// Read a graph file and a start bitstring file declared as `H_k`.
pub fn ingest(graph_path: &Path, start_path: &Path, k: u32) -> Result<HardInstance, HardFamilyError> {
    ingest_text(&read(graph_path)?, &read(start_path)?, k)
}

/// Cache directory from the environment, if set.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn cache_paths(dir: &Path, k: u32) -> (PathBuf, PathBuf) {
    (dir.join(format!("h{k}.graph")), dir.join(format!("h{k}.start")))
}

/// `H_k` from `dir` if both files exist.
pub fn load_from(dir: &Path, k: u32) -> Result<Option<HardInstance>, HardFamilyError> {
    let (g, s) = cache_paths(dir, k);
    if !g.exists() || !s.exists() {
        return Ok(None);
    }
    ingest(&g, &s, k).map(Some)
}

/// `H_k` from the configured cache, falling back to [`generate`].
pub fn obtain(k: u32) -> Result<HardInstance, HardFamilyError> {
    if let Some(dir) = cache_dir() {
        if let Some(h) = load_from(&dir, k)? {
            return Ok(h);
        }
    }
    generate(k)
}

/// A degree-≤4 graph with the same vertex and edge counts as `H_k`: a cycle
/// plus `8k` chords `(i, i+2)`, unit weights. It is **not** a hard instance;
/// compiled sizes depend only on the two counts, so it stands in for `H_k`
/// where only sizes matter.
pub fn size_surrogate(k: u32) -> CutInstance {
    let n = vertex_count(k);
    let one = crate::rational::int(1);
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, one.clone())).collect();
    edges.extend((0..edge_count(k) - n).map(|i| (i, i + 2, one.clone())));
    CutInstance::new(n, edges).expect("surrogate graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_match_table() {
        for r in TABLE {
            assert_eq!(r.n, vertex_count(r.k));
            assert_eq!(r.m, edge_count(r.k));
            assert_eq!(r.iterations, expected_iterations(r.k));
            assert_eq!(r.btw1d, (r.n + 2, r.m + 2 * r.n));
            assert_eq!(r.ctr1d, (r.n + 3, r.m + 2 * r.n + 2));
            assert_eq!(r.tree, (r.n + 4, 3 * r.n + 2 * r.m + 3));
        }
        for k in 2..=TABULATED_MAX as usize {
            assert_eq!(TABLE[k - 1].iterations, 2 * TABLE[k - 2].iterations + 41);
        }
    }

    #[test]
    fn generate_is_unsupported() {
        assert!(matches!(generate(1), Err(HardFamilyError::Unsupported(1))));
    }

    #[test]
    fn surrogate_obeys_size_and_degree_laws() {
        for k in 1..=TABULATED_MAX {
            let g = size_surrogate(k);
            let s = CutState::new(vec![false; g.n()]);
            assert!(HardInstance::validate(k, g, s).is_ok());
        }
    }

    #[test]
    fn ingest_rejects_wrong_declared_index_and_high_degree() {
        let g = size_surrogate(1);
        let start = "0".repeat(g.n());
        let h1 = ingest_text(&g.to_text(), &start, 1).unwrap();
        let (gt, st) = h1.to_text();
        assert_eq!(ingest_text(&gt, &st, 1).unwrap().to_text(), (gt.clone(), st.clone()));
        assert!(matches!(ingest_text(&gt, &st, 2), Err(HardFamilyError::Invariant { .. })));
        // replace one edge by a fifth edge at vertex 2
        let mut edges: Vec<_> = g.edges().iter().map(|e| (e.u, e.v, e.w.clone())).collect();
        edges.pop();
        edges.push((2, 20, crate::rational::int(1)));
        let star = CutInstance::new(g.n(), edges).unwrap();
        assert!(star.max_degree() > MAX_DEGREE);
        assert!(matches!(ingest_text(&star.to_text(), &start, 1), Err(HardFamilyError::Invariant { .. })));
    }
}
