//! Rooted binary trees over labelled leaves, `ab|c` satisfaction, and
//! leaf-relocation (prune and regraft) local search.
//!
//! Nodes live in an arena: leaves are `0..L`, internal nodes follow. A leaf
//! is relocated by pruning it together with its parent node and regrafting
//! that node onto the edge above a *site*, which is any node of the pruned
//! tree (the root stands for a new root above it). The leaf's old sibling is
//! one of the sites, so "stay" is always among the options and the `2L − 3`
//! sites cover every topology reachable by one relocation.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::graph_cut::PivotRule;
use crate::rational::Rational;
use crate::trace::{Location, MoveStep, MoveTrace, SearchSummary, Termination, TraceSink};
use crate::triplets::{Triplet, TreeTripletInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree needs at least one leaf")]
    NoLeaves,
    #[error("node {0} is not the root of a complete binary tree over all leaves")]
    Incomplete(usize),
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("node {0} is not a leaf")]
    NotALeaf(usize),
    #[error("node {site} is not a relocation site for leaf {leaf}")]
    InvalidSite { leaf: usize, site: usize },
    #[error("tree has {got} leaves, instance has {expected}")]
    LeafCountMismatch { expected: usize, got: usize },
    #[error("newick: {0}")]
    Newick(String),
}

/// Incremental construction of a [`TreeLayout`] by joining subtrees.
#[derive(Debug, Clone)]
pub struct TreeBuilder {
    leaves: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Option<[usize; 2]>>,
}

impl TreeBuilder {
    pub fn new(leaves: usize) -> Self {
        TreeBuilder { leaves, parent: vec![None; leaves], children: vec![None; leaves] }
    }

    /// New internal node with children `a` and `b`.
    ///
    /// # Panics
    /// If either node is unknown or already has a parent.
    pub fn join(&mut self, a: usize, b: usize) -> usize {
        assert!(a != b && a < self.parent.len() && b < self.parent.len(), "join of unknown or equal nodes");
        assert!(self.parent[a].is_none() && self.parent[b].is_none(), "node already joined");
        let id = self.parent.len();
        self.parent.push(None);
        self.children.push(Some([a, b]));
        self.parent[a] = Some(id);
        self.parent[b] = Some(id);
        id
    }

    pub fn finish(self, root: usize) -> Result<TreeLayout, TreeError> {
        if self.leaves == 0 {
            return Err(TreeError::NoLeaves);
        }
        if root >= self.parent.len() {
            return Err(TreeError::NodeOutOfRange(root));
        }
        let orphans = self.parent.iter().filter(|p| p.is_none()).count();
        if self.parent.len() != 2 * self.leaves - 1 || orphans != 1 || self.parent[root].is_some() {
            return Err(TreeError::Incomplete(root));
        }
        let mut t = TreeLayout { leaves: self.leaves, parent: self.parent, children: self.children, root, depth: Vec::new() };
        t.refresh_depth();
        Ok(t)
    }
}

/// A rooted binary tree whose leaves are `0..leaf_count()`.
#[derive(Debug, Clone)]
pub struct TreeLayout {
    leaves: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Option<[usize; 2]>>,
    root: usize,
    depth: Vec<usize>,
}

impl PartialEq for TreeLayout {
    /// Equality of topology; child order and internal node ids are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.leaves == other.leaves && self.canonical_key() == other.canonical_key()
    }
}

impl Eq for TreeLayout {}

impl TreeLayout {
    /// Caterpillar `(((0,1),2),…)`.
    pub fn caterpillar(leaves: usize) -> Self {
        let mut b = TreeBuilder::new(leaves);
        let root = (1..leaves).fold(0, |acc, l| b.join(acc, l));
        b.finish(root).expect("caterpillar is complete")
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn children(&self, node: usize) -> Option<[usize; 2]> {
        self.children[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node < self.leaves
    }

    /// Edges from the root.
    pub fn depth(&self, node: usize) -> usize {
        self.depth[node]
    }

    fn refresh_depth(&mut self) {
        self.depth = vec![0; self.parent.len()];
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            if let Some(ch) = self.children[u] {
                for c in ch {
                    self.depth[c] = self.depth[u] + 1;
                    stack.push(c);
                }
            }
        }
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root has a parent");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root has a parent");
        }
        while a != b {
            a = self.parent[a].expect("non-root has a parent");
            b = self.parent[b].expect("non-root has a parent");
        }
        a
    }

    /// Whether `u` is an ancestor of `v` (or equal to it).
    pub fn is_ancestor(&self, u: usize, mut v: usize) -> bool {
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("non-root has a parent");
        }
        u == v
    }

    /// Leaves below `node`, ascending.
    pub fn leaves_below(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(u) = stack.pop() {
            match self.children[u] {
                Some(ch) => stack.extend(ch),
                None => out.push(u),
            }
        }
        out.sort_unstable();
        out
    }

    /// `ab|c`: `a` and `b` meet strictly below where they meet `c`.
    pub fn satisfies(&self, a: usize, b: usize, c: usize) -> bool {
        !self.is_ancestor(self.lca(a, b), c)
    }

    /// Swap the two children of an internal node (topology unchanged).
    pub fn swap_children(&mut self, node: usize) {
        if let Some([l, r]) = self.children[node] {
            self.children[node] = Some([r, l]);
        }
    }

    fn check_leaf(&self, leaf: usize) -> Result<(), TreeError> {
        if leaf >= self.node_count() {
            Err(TreeError::NodeOutOfRange(leaf))
        } else if !self.is_leaf(leaf) {
            Err(TreeError::NotALeaf(leaf))
        } else {
            Ok(())
        }
    }

    /// Current sibling of a leaf; `None` for a single-leaf tree.
    pub fn sibling(&self, leaf: usize) -> Option<usize> {
        let q = self.parent[leaf]?;
        let [l, r] = self.children[q].expect("parent is internal");
        Some(if l == leaf { r } else { l })
    }

    /// Nodes of the tree with `leaf` pruned, ascending; includes the current
    /// sibling ("stay").
    pub fn relocation_sites(&self, leaf: usize) -> Result<Vec<usize>, TreeError> {
        self.check_leaf(leaf)?;
        let Some(q) = self.parent[leaf] else {
            return Ok(Vec::new());
        };
        Ok((0..self.node_count()).filter(|&u| u != leaf && u != q).collect())
    }

    fn replace_child(&mut self, parent: Option<usize>, old: usize, new: usize) {
        match parent {
            Some(g) => {
                let ch = self.children[g].as_mut().expect("parent is internal");
                if ch[0] == old {
                    ch[0] = new;
                } else {
                    ch[1] = new;
                }
            }
            None => self.root = new,
        }
        self.parent[new] = parent;
    }

    /// Move `leaf` onto the edge above `site`. Returns the old sibling, which
    /// as a site undoes the move.
    pub fn relocate(&mut self, leaf: usize, site: usize) -> Result<usize, TreeError> {
        self.check_leaf(leaf)?;
        let Some(q) = self.parent[leaf] else {
            return Err(TreeError::InvalidSite { leaf, site });
        };
        if site >= self.node_count() || site == leaf || site == q {
            return Err(TreeError::InvalidSite { leaf, site });
        }
        let s = self.sibling(leaf).expect("leaf has a parent");
        let leaf_first = self.children[q].expect("parent is internal")[0] == leaf;
        // prune
        let g = self.parent[q];
        self.replace_child(g, q, s);
        // regraft q above site
        let above = self.parent[site];
        self.replace_child(above, site, q);
        self.children[q] = Some(if leaf_first { [leaf, site] } else { [site, leaf] });
        self.parent[site] = Some(q);
        self.parent[leaf] = Some(q);
        self.refresh_depth();
        Ok(s)
    }

    /// Canonical string of the topology: children ordered by their keys.
    pub fn canonical_key(&self) -> String {
        fn key(t: &TreeLayout, u: usize) -> String {
            match t.children[u] {
                None => u.to_string(),
                Some([l, r]) => {
                    let (mut a, mut b) = (key(t, l), key(t, r));
                    if b < a {
                        std::mem::swap(&mut a, &mut b);
                    }
                    format!("({a},{b})")
                }
            }
        }
        key(self, self.root)
    }

    /// Newick string with the given leaf names, e.g. `((a,b),c);`.
    pub fn to_newick(&self, names: &[String]) -> String {
        fn go(t: &TreeLayout, u: usize, names: &[String], out: &mut String) {
            match t.children[u] {
                None => out.push_str(&quote_newick(&names[u])),
                Some([l, r]) => {
                    out.push('(');
                    go(t, l, names, out);
                    out.push(',');
                    go(t, r, names, out);
                    out.push(')');
                }
            }
        }
        let mut s = String::new();
        go(self, self.root, names, &mut s);
        s.push(';');
        s
    }

    /// Parse a rooted binary Newick tree whose leaves are exactly `names`.
    /// Branch lengths and internal labels are not accepted.
    pub fn parse_newick(text: &str, names: &[String]) -> Result<Self, TreeError> {
        let mut p = NewickParser { s: text.trim().as_bytes(), i: 0, names, builder: TreeBuilder::new(names.len()), seen: vec![false; names.len()] };
        let root = p.node()?;
        p.skip_ws();
        if p.peek() != Some(b';') {
            return Err(p.err("expected `;`"));
        }
        p.i += 1;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(p.err("trailing input"));
        }
        if let Some(m) = p.seen.iter().position(|s| !s) {
            return Err(TreeError::Newick(format!("leaf `{}` missing", names[m])));
        }
        p.builder.finish(root)
    }
}

fn quote_newick(name: &str) -> String {
    if name.chars().any(|c| "()[]':;,".contains(c) || c.is_whitespace()) {
        format!("'{}'", name.replace('\'', "''"))
    } else {
        name.to_string()
    }
}

struct NewickParser<'a> {
    s: &'a [u8],
    i: usize,
    names: &'a [String],
    builder: TreeBuilder,
    seen: Vec<bool>,
}

impl NewickParser<'_> {
    fn err(&self, m: &str) -> TreeError {
        TreeError::Newick(format!("{m} at byte {}", self.i))
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.i).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.i += 1;
        }
    }

    fn node(&mut self) -> Result<usize, TreeError> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.i += 1;
            let mut kids = vec![self.node()?];
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(b',') => {
                        self.i += 1;
                        kids.push(self.node()?);
                    }
                    Some(b')') => {
                        self.i += 1;
                        break;
                    }
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
            if kids.len() != 2 {
                return Err(TreeError::Newick(format!("node with {} children; only binary trees are supported", kids.len())));
            }
            Ok(self.builder.join(kids[0], kids[1]))
        } else {
            let name = self.label()?;
            let id = self.names.iter().position(|n| *n == name).ok_or_else(|| TreeError::Newick(format!("unknown leaf `{name}`")))?;
            if std::mem::replace(&mut self.seen[id], true) {
                return Err(TreeError::Newick(format!("leaf `{name}` appears twice")));
            }
            Ok(id)
        }
    }

    fn label(&mut self) -> Result<String, TreeError> {
        if self.peek() == Some(b'\'') {
            self.i += 1;
            let mut out = Vec::new();
            loop {
                match self.peek() {
                    None => return Err(self.err("unterminated quote")),
                    Some(b'\'') if self.s.get(self.i + 1) == Some(&b'\'') => {
                        out.push(b'\'');
                        self.i += 2;
                    }
                    Some(b'\'') => {
                        self.i += 1;
                        break;
                    }
                    Some(c) => {
                        out.push(c);
                        self.i += 1;
                    }
                }
            }
            return String::from_utf8(out).map_err(|_| self.err("invalid utf-8"));
        }
        let start = self.i;
        while self.peek().is_some_and(|c| !b"()[]':;,".contains(&c) && !c.is_ascii_whitespace()) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a leaf name"));
        }
        String::from_utf8(self.s[start..self.i].to_vec()).map_err(|_| self.err("invalid utf-8"))
    }
}

fn check_instance(t: &TreeTripletInstance, layout: &TreeLayout) -> Result<(), TreeError> {
    if layout.leaf_count() != t.leaf_count() {
        return Err(TreeError::LeafCountMismatch { expected: t.leaf_count(), got: layout.leaf_count() });
    }
    Ok(())
}

fn weight_satisfied<'a>(layout: &TreeLayout, xs: impl Iterator<Item = &'a Triplet>) -> Rational {
    xs.filter(|x| layout.satisfies(x.a, x.b, x.c)).fold(Rational::zero(), |acc, x| acc + &x.w)
}

/// Weighted count of satisfied `ab|c` triplets.
pub fn objective_tree(t: &TreeTripletInstance, layout: &TreeLayout) -> Result<Rational, TreeError> {
    check_instance(t, layout)?;
    Ok(weight_satisfied(layout, t.triplets.iter()))
}

struct TreeMover<'a> {
    t: &'a TreeTripletInstance,
    incidence: Vec<Vec<usize>>,
}

impl<'a> TreeMover<'a> {
    fn new(t: &'a TreeTripletInstance) -> Self {
        TreeMover { t, incidence: t.incidence() }
    }

    fn local(&self, layout: &TreeLayout, leaf: usize) -> Rational {
        weight_satisfied(layout, self.incidence[leaf].iter().map(|&i| &self.t.triplets[i]))
    }

    /// Best strictly improving site for `leaf`; first site on ties. Only the
    /// leaf's own triplets can change, since pruning and regrafting a leaf
    /// keeps the topology induced on the other leaves.
    fn best_move(&self, layout: &mut TreeLayout, leaf: usize) -> Option<(usize, Rational)> {
        if self.incidence[leaf].is_empty() {
            return None;
        }
        let sites = layout.relocation_sites(leaf).ok()?;
        let current = self.local(layout, leaf);
        let mut best: Option<(usize, Rational)> = None;
        for site in sites {
            let back = layout.relocate(leaf, site).expect("listed site is valid");
            let gain = self.local(layout, leaf) - &current;
            layout.relocate(leaf, back).expect("undo is valid");
            if gain.is_positive() && best.as_ref().is_none_or(|(_, g)| gain > *g) {
                best = Some((site, gain));
            }
        }
        best
    }
}

/// Best strictly improving relocation of `leaf` as `(site, gain)`.
pub fn best_relocation(t: &TreeTripletInstance, layout: &TreeLayout, leaf: usize) -> Result<Option<(usize, Rational)>, TreeError> {
    check_instance(t, layout)?;
    layout.check_leaf(leaf)?;
    Ok(TreeMover::new(t).best_move(&mut layout.clone(), leaf))
}

/// True iff no leaf relocation strictly improves the objective.
pub fn is_local_opt_tree(t: &TreeTripletInstance, layout: &TreeLayout) -> Result<bool, TreeError> {
    check_instance(t, layout)?;
    let mover = TreeMover::new(t);
    let mut work = layout.clone();
    Ok((0..t.leaf_count()).all(|p| mover.best_move(&mut work, p).is_none()))
}

/// Leaf-relocation search with a full in-memory trace.
pub fn tree_local_search(
    t: &TreeTripletInstance,
    start: &TreeLayout,
    rule: PivotRule,
    cap: u64,
) -> Result<(TreeLayout, MoveTrace), TreeError> {
    let mut trace = MoveTrace::new();
    let (layout, summary) = tree_local_search_with(t, start, rule, cap, &mut trace)?;
    trace.termination = summary.termination;
    Ok((layout, trace))
}

/// Leaf-relocation search reporting moves to `sink`. A step's `from` is the
/// leaf's old sibling and `to` the chosen site.
pub fn tree_local_search_with(
    t: &TreeTripletInstance,
    start: &TreeLayout,
    rule: PivotRule,
    cap: u64,
    sink: &mut dyn TraceSink,
) -> Result<(TreeLayout, SearchSummary), TreeError> {
    check_instance(t, start)?;
    let mover = TreeMover::new(t);
    let mut layout = start.clone();
    let mut value = objective_tree(t, &layout)?;
    let mut iterations = 0u64;
    loop {
        let pick = match rule {
            PivotRule::FirstImprovement => (0..t.leaf_count()).find_map(|p| mover.best_move(&mut layout, p).map(|m| (p, m))),
            PivotRule::BestImprovement => {
                let mut best: Option<(usize, (usize, Rational))> = None;
                for p in 0..t.leaf_count() {
                    if let Some(m) = mover.best_move(&mut layout, p) {
                        if best.as_ref().is_none_or(|(_, (_, g))| m.1 > *g) {
                            best = Some((p, m));
                        }
                    }
                }
                best
            }
        };
        let Some((leaf, (site, gain))) = pick else {
            return Ok((layout, SearchSummary { iterations, termination: Termination::LocalOptimum, objective: value }));
        };
        if iterations >= cap {
            return Ok((layout, SearchSummary { iterations, termination: Termination::Cap, objective: value }));
        }
        let before = value.clone();
        value += &gain;
        let from = layout.relocate(leaf, site)?;
        iterations += 1;
        sink.record(&MoveStep { mover: leaf, from: Location::Site(from), to: Location::Site(site), before, after: value.clone() });
    }
}

/// `(2L − 3)!!`, the number of rooted binary topologies on `L ≥ 2` leaves.
pub fn rooted_topology_count(leaves: usize) -> u128 {
    (2..leaves).fold(1u128, |acc, k| acc * (2 * k as u128 - 1))
}

/// Text summary `leaf: depth` lines, for debugging output.
pub fn describe(layout: &TreeLayout, names: &[String]) -> String {
    let mut s = String::new();
    for (i, n) in names.iter().enumerate().take(layout.leaf_count()) {
        let _ = writeln!(s, "{n}: depth {}", layout.depth(i));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("l{i}")).collect()
    }

    #[test]
    fn caterpillar_satisfaction() {
        let t = TreeLayout::caterpillar(4);
        assert!(t.satisfies(0, 1, 2));
        assert!(t.satisfies(1, 0, 3));
        assert!(!t.satisfies(0, 2, 1));
        assert_eq!(t.depth(0), 3);
        assert_eq!(t.lca(0, 3), t.root());
    }

    #[test]
    fn relocation_sites_count_and_undo() {
        let mut t = TreeLayout::caterpillar(5);
        let orig = t.clone();
        for leaf in 0..5 {
            let sites = t.relocation_sites(leaf).unwrap();
            assert_eq!(sites.len(), 2 * 5 - 3);
            for s in sites {
                let back = t.relocate(leaf, s).unwrap();
                t.relocate(leaf, back).unwrap();
                assert_eq!(t, orig);
            }
        }
    }

    #[test]
    fn single_relocation_reaches_all_neighbours() {
        let t = TreeLayout::caterpillar(4);
        let mut keys = std::collections::BTreeSet::new();
        for leaf in 0..4 {
            for s in t.relocation_sites(leaf).unwrap() {
                let mut u = t.clone();
                u.relocate(leaf, s).unwrap();
                keys.insert(u.canonical_key());
            }
        }
        assert!(keys.contains(&t.canonical_key()));
        assert!(keys.len() > 1 && keys.len() as u128 <= rooted_topology_count(4));
    }

    #[test]
    fn newick_round_trip_and_quoting() {
        let n: Vec<String> = vec!["a".into(), "X'".into(), "c d".into()];
        let t = TreeLayout::caterpillar(3);
        let s = t.to_newick(&n);
        assert_eq!(s, "((a,'X'''),'c d');");
        assert_eq!(TreeLayout::parse_newick(&s, &n).unwrap(), t);
        assert!(TreeLayout::parse_newick("(a,'X''','c d');", &n).is_err());
        assert!(TreeLayout::parse_newick("((a,a),'c d');", &n).is_err());
    }

    #[test]
    fn search_satisfies_single_triplet() {
        let t = TreeTripletInstance::new(names(3), vec![Triplet::new(0, 2, 1, int(4))], None).unwrap();
        let start = TreeLayout::caterpillar(3);
        assert_eq!(objective_tree(&t, &start).unwrap(), int(0));
        let (end, trace) = tree_local_search(&t, &start, PivotRule::default(), 10).unwrap();
        assert_eq!(objective_tree(&t, &end).unwrap(), int(4));
        assert_eq!(trace.iterations(), 1);
        assert!(is_local_opt_tree(&t, &end).unwrap());
    }

    #[test]
    fn topology_counts() {
        assert_eq!(rooted_topology_count(2), 1);
        assert_eq!(rooted_topology_count(3), 3);
        assert_eq!(rooted_topology_count(5), 105);
    }
}
