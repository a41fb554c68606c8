//! Continuous triplet loss on the box `[0,1]^d`, its gradient, an encoder
//! from box-constrained quadratic programs, projected gradient descent and
//! first-order stationarity (KKT) residuals.
//!
//! A triplet `(a, b, c)` with weight `w` costs
//! `w · max(‖a − b‖² − ‖a − c‖² + α, 0)`. Two fixed pivots are available:
//! `A0` at the origin and `B½` at the all-halves vector.
//!
//! The encoder uses the identities (in one coordinate, `A = 0`, `B = ½`)
//!
//! * `(x_i, A, x_j)` contributes `2·x_i·x_j − x_j²`,
//! * `(A, x_k, B)` contributes `x_k²`,
//! * `(x_k, A, B)` contributes `x_k`,
//!
//! each up to an additive constant, and its dual `(a, c, b)` contributes the
//! negation. A signed target `τ` is realized by the pair
//! `(max(τ, 0), max(−τ, 0))`. With `α = d` no hinge is ever clipped on the
//! box, so the encoded loss is exactly `xᵀQx + bᵀx` plus a constant in every
//! coordinate slice.
//!
//! This module works in binary64; tolerances are explicit at call sites.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TripletLossError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("non-finite entry")]
    NonFinite,
    #[error("vector length {got} does not match {expected}")]
    Length { expected: usize, got: usize },
    #[error("negative triplet weight {0}")]
    NegativeWeight(f64),
    #[error("margin must be positive, got {0}")]
    Margin(f64),
    #[error("variable {0} out of range")]
    VariableOutOfRange(usize),
    #[error("input {0} is not the matching standard basis vector")]
    NonBasisInput(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Minimize `xᵀQx + bᵀx` over `x ∈ [0,1]ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticProgram {
    q: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl QuadraticProgram {
    pub fn new(q: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self, TripletLossError> {
        let n = q.len();
        if q.iter().any(|r| r.len() != n) {
            return Err(TripletLossError::NotSquare);
        }
        if b.len() != n {
            return Err(TripletLossError::Length { expected: n, got: b.len() });
        }
        if q.iter().flatten().chain(&b).any(|v| !v.is_finite()) {
            return Err(TripletLossError::NonFinite);
        }
        for i in 0..n {
            for j in i + 1..n {
                if q[i][j] != q[j][i] {
                    return Err(TripletLossError::Asymmetric { i, j });
                }
            }
        }
        Ok(QuadraticProgram { q, b })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn q(&self) -> &[Vec<f64>] {
        &self.q
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let quad: f64 = (0..self.n()).map(|i| x[i] * (0..self.n()).map(|j| self.q[i][j] * x[j]).sum::<f64>()).sum();
        quad + self.b.iter().zip(x).map(|(b, x)| b * x).sum::<f64>()
    }

    /// `2Qx + b`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n()).map(|i| 2.0 * (0..self.n()).map(|j| self.q[i][j] * x[j]).sum::<f64>() + self.b[i]).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.q.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `1 / (2‖Q‖_F + 1)`, below the inverse smoothness constant of `q`.
    pub fn default_step(&self) -> f64 {
        1.0 / (2.0 * self.frobenius() + 1.0)
    }

    /// The `dn`-variable program whose `(i, j)` block is `Q_ij·I_d` and whose
    /// linear part repeats `b_i` over variable `i`'s block; coordinate `k` of
    /// variable `i` has index `i·d + k`.
    pub fn block_lift(&self, d: usize) -> QuadraticProgram {
        let n = self.n();
        let mut q = vec![vec![0.0; n * d]; n * d];
        let mut b = vec![0.0; n * d];
        for i in 0..n {
            for k in 0..d {
                b[i * d + k] = self.b[i];
                for j in 0..n {
                    q[i * d + k][j * d + k] = self.q[i][j];
                }
            }
        }
        QuadraticProgram { q, b }
    }

    /// `n`, then `n` rows of `Q`, then one row of `b`.
    pub fn parse(text: &str) -> Result<Self, TripletLossError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let row = |(i, l): (usize, &str)| -> Result<Vec<f64>, TripletLossError> {
            l.split_whitespace()
                .map(|v| v.parse::<f64>().map_err(|e| TripletLossError::Parse { line: i + 1, message: e.to_string() }))
                .collect()
        };
        let (i, first) = lines.next().ok_or(TripletLossError::Parse { line: 0, message: "empty input".into() })?;
        let n: usize = first.trim().parse().map_err(|_| TripletLossError::Parse { line: i + 1, message: "expected n".into() })?;
        let mut q = Vec::with_capacity(n);
        for _ in 0..n {
            let l = lines.next().ok_or(TripletLossError::Parse { line: 0, message: "missing row of Q".into() })?;
            q.push(row(l)?);
        }
        let b = match lines.next() {
            Some(l) => row(l)?,
            None => return Err(TripletLossError::Parse { line: 0, message: "missing b".into() }),
        };
        if let Some((i, _)) = lines.next() {
            return Err(TripletLossError::Parse { line: i + 1, message: "trailing input".into() });
        }
        QuadraticProgram::new(q, b)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n());
        for r in self.q.iter().chain(std::iter::once(&self.b)) {
            let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", cells.join(" "));
        }
        s
    }
}

/// A triplet endpoint: a variable point or one of the fixed pivots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointRef {
    Var(usize),
    /// The origin.
    A0,
    /// The all-halves vector.
    BHalf,
}

impl PointRef {
    pub fn name(self) -> String {
        match self {
            PointRef::Var(i) => format!("x{i}"),
            PointRef::A0 => "A0".into(),
            PointRef::BHalf => "B½".into(),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "A0" => Some(PointRef::A0),
            "B½" => Some(PointRef::BHalf),
            _ => s.strip_prefix('x')?.parse().ok().map(PointRef::Var),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossTriplet {
    pub a: PointRef,
    pub b: PointRef,
    pub c: PointRef,
    pub w: f64,
}

/// Which one-sided derivative a hinge contributes when its argument is
/// exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Kink {
    /// The clipped branch: no contribution. Used for general instances.
    #[default]
    Inactive,
    /// The linear branch. Encoded instances use this: their hinges are
    /// never clipped on the box, so the loss is exactly quadratic there and
    /// this is the derivative from inside the feasible set.
    Active,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TripletLossInstance {
    n: usize,
    dim: usize,
    alpha: f64,
    triplets: Vec<LossTriplet>,
    kink: Kink,
}

impl TripletLossInstance {
    pub fn new(n: usize, dim: usize, alpha: f64, triplets: Vec<LossTriplet>) -> Result<Self, TripletLossError> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(TripletLossError::Margin(alpha));
        }
        for t in &triplets {
            if !(t.w >= 0.0 && t.w.is_finite()) {
                return Err(TripletLossError::NegativeWeight(t.w));
            }
            for p in [t.a, t.b, t.c] {
                if let PointRef::Var(i) = p {
                    if i >= n {
                        return Err(TripletLossError::VariableOutOfRange(i));
                    }
                }
            }
        }
        Ok(TripletLossInstance { n, dim, alpha, triplets, kink: Kink::Inactive })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn triplets(&self) -> &[LossTriplet] {
        &self.triplets
    }

    pub fn kink(&self) -> Kink {
        self.kink
    }

    pub fn with_kink(mut self, kink: Kink) -> Self {
        self.kink = kink;
        self
    }

    /// Length of a point vector: `n·d`.
    pub fn len(&self) -> usize {
        self.n * self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("semantics triplet-loss\ndim {}\nmargin {}\n", self.dim, self.alpha);
        if self.kink == Kink::Active {
            s.push_str("kink active\n");
        }
        s.push_str("points");
        for i in 0..self.n {
            let _ = write!(s, " x{i}");
        }
        s.push('\n');
        for t in &self.triplets {
            let _ = writeln!(s, "{} {} {} {}", t.a.name(), t.b.name(), t.c.name(), t.w);
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, TripletLossError> {
        let (mut dim, mut alpha, mut n, mut kink) = (None, None, None, Kink::Inactive);
        let mut triplets = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: &str| TripletLossError::Parse { line, message: message.into() };
            let f: Vec<&str> = l.split_whitespace().collect();
            match f.as_slice() {
                [] => {}
                [h, ..] if h.starts_with('#') => {}
                ["semantics", "triplet-loss"] => {}
                ["dim", d] => dim = Some(d.parse().map_err(|_| err("bad dim"))?),
                ["kink", "active"] => kink = Kink::Active,
                ["kink", "inactive"] => kink = Kink::Inactive,
                ["margin", a] => alpha = Some(a.parse().map_err(|_| err("bad margin"))?),
                ["points", names @ ..] => {
                    for (k, nm) in names.iter().enumerate() {
                        if PointRef::parse(nm) != Some(PointRef::Var(k)) {
                            return Err(err("variable points must be named x0, x1, … in order"));
                        }
                    }
                    n = Some(names.len());
                }
                [a, b, c, w] => {
                    let p = |s: &str| PointRef::parse(s).ok_or_else(|| err("unknown point"));
                    triplets.push(LossTriplet { a: p(a)?, b: p(b)?, c: p(c)?, w: w.parse().map_err(|_| err("bad weight"))? });
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        let missing = |what: &str| TripletLossError::Parse { line: 0, message: format!("missing {what}") };
        Ok(TripletLossInstance::new(n.ok_or(missing("points"))?, dim.ok_or(missing("dim"))?, alpha.ok_or(missing("margin"))?, triplets)?
            .with_kink(kink))
    }

    fn coords<'a>(&self, p: &'a [f64], r: PointRef, pivots: &'a [Vec<f64>; 2]) -> &'a [f64] {
        match r {
            PointRef::Var(i) => &p[i * self.dim..(i + 1) * self.dim],
            PointRef::A0 => &pivots[0],
            PointRef::BHalf => &pivots[1],
        }
    }

    fn pivots(&self) -> [Vec<f64>; 2] {
        [vec![0.0; self.dim], vec![0.5; self.dim]]
    }

    /// `‖a − b‖² − ‖a − c‖² + α` for each triplet.
    pub fn hinge_arguments(&self, p: &[f64]) -> Vec<f64> {
        assert_eq!(p.len(), self.len(), "point length must be n·d");
        let pv = self.pivots();
        self.triplets
            .iter()
            .map(|t| {
                let (a, b, c) = (self.coords(p, t.a, &pv), self.coords(p, t.b, &pv), self.coords(p, t.c, &pv));
                sq_dist(a, b) - sq_dist(a, c) + self.alpha
            })
            .collect()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Whether every coordinate lies in `[0, 1]`.
pub fn in_box(p: &[f64]) -> bool {
    p.iter().all(|v| (0.0..=1.0).contains(v))
}

/// Componentwise projection onto `[0, 1]`.
pub fn clamp_box(p: &mut [f64]) {
    for v in p {
        *v = v.clamp(0.0, 1.0);
    }
}

/// Total hinge loss.
pub fn loss(t: &TripletLossInstance, p: &[f64]) -> f64 {
    t.triplets.iter().zip(t.hinge_arguments(p)).map(|(x, h)| x.w * h.max(0.0)).sum()
}

/// Gradient with respect to the variable coordinates. A triplet contributes
/// when its hinge argument is positive; at exactly zero the instance's
/// [`Kink`] rule decides.
pub fn gradient(t: &TripletLossInstance, p: &[f64]) -> Vec<f64> {
    let d = t.dim;
    let pv = t.pivots();
    let mut g = vec![0.0; t.len()];
    for (x, h) in t.triplets.iter().zip(t.hinge_arguments(p)) {
        let active = h > 0.0 || (h == 0.0 && t.kink == Kink::Active);
        if !active || x.w == 0.0 {
            continue;
        }
        let (a, b, c) = (t.coords(p, x.a, &pv), t.coords(p, x.b, &pv), t.coords(p, x.c, &pv));
        for k in 0..d {
            let (ab, ac) = (a[k] - b[k], a[k] - c[k]);
            let mut add = |r: PointRef, v: f64| {
                if let PointRef::Var(i) = r {
                    g[i * d + k] += x.w * v;
                }
            };
            add(x.a, 2.0 * ab - 2.0 * ac);
            add(x.b, -2.0 * ab);
            add(x.c, 2.0 * ac);
        }
    }
    g
}

/// Box stationarity residual for gradient `g` at `p`: `|g_i|` inside,
/// `max(0, −g_i)` at 0, `max(0, g_i)` at 1; the maximum over coordinates.
pub fn kkt_residual(p: &[f64], g: &[f64]) -> f64 {
    p.iter()
        .zip(g)
        .map(|(&x, &g)| if x <= 0.0 { (-g).max(0.0) } else if x >= 1.0 { g.max(0.0) } else { g.abs() })
        .fold(0.0, f64::max)
}

pub fn kkt_residual_tripletloss(t: &TripletLossInstance, p: &[f64]) -> f64 {
    kkt_residual(p, &gradient(t, p))
}

pub fn kkt_residual_qp(qp: &QuadraticProgram, x: &[f64]) -> f64 {
    kkt_residual(x, &qp.gradient(x))
}

/// One signed target and its nonnegative split for a triplet and its dual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodedPair {
    pub a: PointRef,
    pub b: PointRef,
    pub c: PointRef,
    pub target: f64,
    /// Weight of `(a, b, c)`.
    pub w: f64,
    /// Weight of the dual `(a, c, b)`.
    pub w_dual: f64,
}

impl EncodedPair {
    pub fn new(a: PointRef, b: PointRef, c: PointRef, target: f64) -> Self {
        EncodedPair { a, b, c, target, w: target.max(0.0), w_dual: (-target).max(0.0) }
    }

    fn emit(&self, out: &mut Vec<LossTriplet>) {
        if self.w > 0.0 {
            out.push(LossTriplet { a: self.a, b: self.b, c: self.c, w: self.w });
        }
        if self.w_dual > 0.0 {
            out.push(LossTriplet { a: self.a, b: self.c, c: self.b, w: self.w_dual });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EncoderWeights {
    pub pairs: Vec<EncodedPair>,
}

impl EncoderWeights {
    /// Triplets with positive weight, at margin `alpha` in dimension `dim`.
    pub fn instance(&self, n: usize, dim: usize, alpha: f64) -> TripletLossInstance {
        let mut ts = Vec::new();
        for p in &self.pairs {
            p.emit(&mut ts);
        }
        TripletLossInstance::new(n, dim, alpha, ts).expect("encoder emits valid triplets").with_kink(Kink::Active)
    }
}

/// Pairwise signed targets realizing `xᵀQx + bᵀx` (up to a constant).
pub fn encoder_targets(qp: &QuadraticProgram) -> EncoderWeights {
    let n = qp.n();
    let (q, b) = (qp.q(), qp.b());
    let mut pairs = Vec::new();
    use PointRef::*;
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(EncodedPair::new(Var(i), A0, Var(j), q[i][j]));
        }
    }
    for k in 0..n {
        let sq = q[k][k] + (0..k).map(|i| q[i][k]).sum::<f64>();
        pairs.push(EncodedPair::new(A0, Var(k), BHalf, sq));
        pairs.push(EncodedPair::new(Var(k), A0, BHalf, b[k]));
    }
    EncoderWeights { pairs }
}

/// One-dimensional encoding with margin 1.
pub fn encode_qp(qp: &QuadraticProgram) -> (TripletLossInstance, EncoderWeights) {
    let w = encoder_targets(qp);
    (w.instance(qp.n(), 1, 1.0), w)
}

/// Encoding in `ℝᵈ` with margin `d`: the same triplets, so every coordinate
/// slice carries a copy of the program.
pub fn encode_qp_highd(qp: &QuadraticProgram, d: usize) -> (TripletLossInstance, EncoderWeights) {
    let w = encoder_targets(qp);
    (w.instance(qp.n(), d, d as f64), w)
}

/// First coordinate of every variable.
pub fn decode_kkt_highd(p: &[f64], n: usize, d: usize) -> Vec<f64> {
    assert_eq!(p.len(), n * d, "point length must be n·d");
    (0..n).map(|i| p[i * d]).collect()
}

/// The twelve-triplet template over three variables `x, y, z` (ids 0, 1, 2)
/// for `q = c₁x² + c₂y² + c₃z² + c₄xy + c₅xz + c₆yz + c₇x + c₈y + c₉z`.
pub fn template_triplets() -> [(PointRef, PointRef, PointRef); 12] {
    use PointRef::*;
    let (x, y, z) = (Var(0), Var(1), Var(2));
    [
        (x, A0, y),
        (y, A0, x),
        (x, A0, z),
        (z, A0, x),
        (y, A0, z),
        (z, A0, y),
        (x, A0, BHalf),
        (y, A0, BHalf),
        (z, A0, BHalf),
        (A0, x, BHalf),
        (A0, y, BHalf),
        (A0, z, BHalf),
    ]
}

/// Signed targets of the template triplets for coefficients `c₁..c₉`.
pub fn template_targets(c: [f64; 9]) -> [f64; 12] {
    let [c1, c2, c3, c4, c5, c6, c7, c8, c9] = c;
    [
        -c2,
        c2 + c4 / 2.0,
        -c3 - c6 / 2.0,
        c3 + c5 / 2.0 + c6 / 2.0,
        c6 / 2.0,
        0.0,
        c7,
        c8,
        c9,
        c1 + c2 + c3 + c4 / 2.0 + c5 / 2.0 + c6 / 2.0,
        0.0,
        0.0,
    ]
}

/// Template encoding as an instance over three variables.
pub fn encode_template(c: [f64; 9]) -> (TripletLossInstance, EncoderWeights) {
    let pairs = template_triplets().iter().zip(template_targets(c)).map(|(&(a, b, cc), t)| EncodedPair::new(a, b, cc, t)).collect();
    let w = EncoderWeights { pairs };
    (w.instance(3, 1, 1.0), w)
}

/// Outcome of projected gradient descent.
#[derive(Debug, Clone, PartialEq)]
pub struct PgdRun {
    pub point: Vec<f64>,
    /// Objective at the start and after every step.
    pub losses: Vec<f64>,
    pub iterations: usize,
    /// True when the residual fell to `tol`; false when `maxit` was hit.
    pub converged: bool,
    pub residual: f64,
}

/// Projected gradient descent for any objective on the box. With
/// `backtrack`, a step that increases the objective is retried at half the
/// step size (at most 50 halvings).
pub fn pgd_generic(
    f: impl Fn(&[f64]) -> f64,
    grad: impl Fn(&[f64]) -> Vec<f64>,
    p0: &[f64],
    step: f64,
    tol: f64,
    maxit: usize,
    backtrack: bool,
) -> PgdRun {
    assert!(step > 0.0, "step must be positive");
    let mut p = p0.to_vec();
    clamp_box(&mut p);
    let mut value = f(&p);
    let mut losses = vec![value];
    let mut iterations = 0;
    loop {
        let g = grad(&p);
        let residual = kkt_residual(&p, &g);
        if residual <= tol {
            return PgdRun { point: p, losses, iterations, converged: true, residual };
        }
        if iterations >= maxit {
            return PgdRun { point: p, losses, iterations, converged: false, residual };
        }
        let mut s = step;
        let mut next;
        let mut halvings = 0;
        loop {
            next = p.iter().zip(&g).map(|(x, g)| x - s * g).collect::<Vec<f64>>();
            clamp_box(&mut next);
            let v = f(&next);
            if !backtrack || v <= value || halvings >= 50 {
                value = v;
                break;
            }
            s /= 2.0;
            halvings += 1;
        }
        p = next;
        losses.push(value);
        iterations += 1;
    }
}

/// Projected gradient descent on a triplet-loss instance.
pub fn projected_gradient_descent(t: &TripletLossInstance, p0: &[f64], step: f64, tol: f64, maxit: usize) -> PgdRun {
    pgd_generic(|p| loss(t, p), |p| gradient(t, p), p0, step, tol, maxit, false)
}

/// As [`projected_gradient_descent`], halving the step whenever it would
/// increase the loss.
pub fn projected_gradient_descent_backtracking(
    t: &TripletLossInstance,
    p0: &[f64],
    step: f64,
    tol: f64,
    maxit: usize,
) -> PgdRun {
    pgd_generic(|p| loss(t, p), |p| gradient(t, p), p0, step, tol, maxit, true)
}

fn check_basis(t: &TripletLossInstance, inputs: &[Vec<f64>]) -> Result<(), TripletLossError> {
    if t.dim != 1 {
        return Err(TripletLossError::Length { expected: 1, got: t.dim });
    }
    if inputs.len() != t.n {
        return Err(TripletLossError::Length { expected: t.n, got: inputs.len() });
    }
    for (i, x) in inputs.iter().enumerate() {
        let ok = x.len() == t.n && x.iter().enumerate().all(|(j, &v)| v == if i == j { 1.0 } else { 0.0 });
        if !ok {
            return Err(TripletLossError::NonBasisInput(i));
        }
    }
    Ok(())
}

fn linear_features(theta: &[f64], inputs: &[Vec<f64>]) -> Vec<f64> {
    inputs.iter().map(|x| x.iter().zip(theta).map(|(a, b)| a * b).sum()).collect()
}

/// Loss of the linear model `f_θ(x) = θᵀx` on standard-basis inputs, where
/// input `i` is embedded at `θᵀe_i = θ_i`.
pub fn linear_model_loss(t: &TripletLossInstance, theta: &[f64], inputs: &[Vec<f64>]) -> Result<f64, TripletLossError> {
    check_basis(t, inputs)?;
    Ok(loss(t, &linear_features(theta, inputs)))
}

/// Gradient in `θ` by the chain rule `∑_i ∂L/∂p_i · x_i`.
pub fn linear_model_gradient(t: &TripletLossInstance, theta: &[f64], inputs: &[Vec<f64>]) -> Result<Vec<f64>, TripletLossError> {
    check_basis(t, inputs)?;
    let g = gradient(t, &linear_features(theta, inputs));
    let mut out = vec![0.0; theta.len()];
    for (gi, x) in g.iter().zip(inputs) {
        for (o, xv) in out.iter_mut().zip(x) {
            *o += gi * xv;
        }
    }
    Ok(out)
}

/// Standard basis `e_0..e_{n−1}`.
pub fn standard_basis(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single() -> TripletLossInstance {
        TripletLossInstance::new(1, 1, 1.0, vec![LossTriplet { a: PointRef::Var(0), b: PointRef::A0, c: PointRef::BHalf, w: 1.0 }]).unwrap()
    }

    #[test]
    fn single_triplet_loss_and_slope() {
        let t = single();
        assert_eq!(loss(&t, &[0.0]), 0.75);
        assert!((gradient(&t, &[0.3])[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_weight_has_zero_gradient() {
        let t = TripletLossInstance::new(2, 1, 1.0, vec![LossTriplet { a: PointRef::Var(0), b: PointRef::Var(1), c: PointRef::A0, w: 0.0 }]).unwrap();
        assert_eq!(gradient(&t, &[0.2, 0.7]), vec![0.0, 0.0]);
    }

    #[test]
    fn qp_residual_examples() {
        let id = QuadraticProgram::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]).unwrap();
        assert_eq!(kkt_residual_qp(&id, &[0.0, 0.0]), 0.0);
        let up = QuadraticProgram::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![1.0, 1.0]).unwrap();
        assert_eq!(kkt_residual_qp(&up, &[0.0, 0.0]), 0.0);
        let down = QuadraticProgram::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![-1.0, -1.0]).unwrap();
        assert_eq!(kkt_residual_qp(&down, &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn asymmetric_rejected() {
        assert_eq!(
            QuadraticProgram::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![0.0, 0.0]),
            Err(TripletLossError::Asymmetric { i: 0, j: 1 })
        );
    }

    #[test]
    fn template_targets_match_known_list() {
        let c = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
        let t = template_targets(c);
        assert_eq!(t[0], -2.0);
        assert_eq!(t[1], 2.0 + 2.0);
        assert_eq!(t[9], 1.0 + 2.0 + 3.0 + 2.0 + 2.5 + 3.0);
    }

    #[test]
    fn template_reproduces_polynomial() {
        let c = [1.5, -2.0, 0.5, 3.0, -1.0, 2.5, -0.7, 0.2, 1.1];
        let q = |x: f64, y: f64, z: f64| {
            c[0] * x * x + c[1] * y * y + c[2] * z * z + c[3] * x * y + c[4] * x * z + c[5] * y * z + c[6] * x + c[7] * y + c[8] * z
        };
        let (t, _) = encode_template(c);
        let l0 = loss(&t, &[0.0; 3]);
        for p in [[0.1, 0.9, 0.4], [1.0, 0.0, 0.3], [0.5, 0.5, 0.5]] {
            let lhs = loss(&t, &p) - l0;
            assert!((lhs - q(p[0], p[1], p[2])).abs() < 1e-12, "{lhs} vs {}", q(p[0], p[1], p[2]));
        }
    }

    #[test]
    fn pgd_reaches_interior_minimum() {
        // q(x) = x² − x/2 has its minimum at 1/4
        let qp = QuadraticProgram::new(vec![vec![1.0]], vec![-0.5]).unwrap();
        let (t, _) = encode_qp(&qp);
        let run = projected_gradient_descent(&t, &[0.9], qp.default_step(), 1e-9, 10_000);
        assert!(run.converged);
        assert!((run.point[0] - 0.25).abs() < 1e-8);
        assert!(run.losses.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        let again = projected_gradient_descent(&t, &run.point, qp.default_step(), 1e-9, 10_000);
        assert_eq!(again.iterations, 0);
    }

    #[test]
    fn text_round_trips() {
        let qp = QuadraticProgram::new(vec![vec![1.0, -0.5], vec![-0.5, 2.0]], vec![0.25, -3.0]).unwrap();
        assert_eq!(QuadraticProgram::parse(&qp.to_text()).unwrap(), qp);
        let (t, _) = encode_qp(&qp);
        assert_eq!(TripletLossInstance::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn linear_model_rejects_non_basis() {
        let t = single();
        assert!(linear_model_loss(&t, &[0.2], &[vec![2.0]]).is_err());
        assert_eq!(linear_model_loss(&t, &[0.2], &standard_basis(1)).unwrap(), loss(&t, &[0.2]));
    }
}
