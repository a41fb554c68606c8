//! Exact Euclidean geometry on rational coordinates.
//!
//! Distances are only ever compared, so squared distances suffice and stay
//! rational. The [`GadgetFrame`] is the regular-simplex gadget used to encode
//! a cut in ℝᵈ (d ≥ 2): the special points `X_1..X_d` are the standard basis
//! vectors (pairwise distance `ℓ = √2`), and graph vertices sit on the two
//! opposing rays of the axis through their centroid, perpendicular to the
//! simplex.

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// `‖p − q‖²`.
pub fn dist2(p: &[Rational], q: &[Rational]) -> Rational {
    p.iter().zip(q).fold(Rational::zero(), |acc, (a, b)| {
        let d = a - b;
        acc + &d * &d
    })
}

/// Determinant by fraction-preserving Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &p;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Normal direction of the hyperplane through `x[0..d]` in ℝᵈ, oriented so
/// that for the standard simplex it is `+(1, …, 1)` scaled. Zero when the
/// points are affinely dependent (degenerate gadget).
pub fn simplex_axis(x: &[Vec<Rational>]) -> Vec<Rational> {
    let d = x.len();
    assert!(d >= 2, "simplex axis needs at least two points");
    assert!(x.iter().all(|p| p.len() == d), "simplex points must live in ℝᵈ with d = point count");
    let rows: Vec<Vec<Rational>> = (1..d).map(|i| x[i].iter().zip(&x[0]).map(|(a, b)| a - b).collect()).collect();
    // Generalized cross product with 0-based column signs (−1)^(d+k); for the
    // standard simplex it points along (−1)^d·(1,…,1), so one extra sign fixes
    // the orientation to +.
    let orient = if d % 2 == 0 { int(1) } else { int(-1) };
    (0..d)
        .map(|k| {
            let minor: Vec<Vec<Rational>> =
                rows.iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != k).map(|(_, v)| v.clone()).collect()).collect();
            let sign = if (d + k) % 2 == 0 { int(1) } else { int(-1) };
            let det = if minor.is_empty() { Rational::one() } else { determinant(minor) };
            &orient * sign * det
        })
        .collect()
}

/// Centroid of a point set.
pub fn centroid(x: &[Vec<Rational>]) -> Vec<Rational> {
    let d = x[0].len();
    let k = int(x.len() as i64);
    (0..d).map(|c| x.iter().map(|p| p[c].clone()).sum::<Rational>() / &k).collect()
}

/// Sign of `⟨p − c, axis⟩`.
pub fn axial_sign(p: &[Rational], c: &[Rational], axis: &[Rational]) -> std::cmp::Ordering {
    let dot = p.iter().zip(c).zip(axis).fold(Rational::zero(), |acc, ((a, b), u)| acc + (a - b) * u);
    if dot.is_positive() {
        std::cmp::Ordering::Greater
    } else if dot.is_negative() {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Equal
    }
}

/// Regular-simplex gadget in ℝᵈ with `X_i = e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetFrame {
    pub d: usize,
    /// `X_1..X_d`.
    pub simplex: Vec<Vec<Rational>>,
    /// `C`, the centroid `(1/d, …, 1/d)`.
    pub centroid: Vec<Rational>,
    /// Unnormalized axis direction `(1, …, 1)`; the unit axis is this over `√d`.
    pub axis: Vec<Rational>,
}

impl GadgetFrame {
    pub fn new(d: usize) -> Self {
        assert!(d >= 2, "gadget frame needs d >= 2");
        let simplex: Vec<Vec<Rational>> =
            (0..d).map(|i| (0..d).map(|j| if i == j { int(1) } else { int(0) }).collect()).collect();
        let centroid = centroid(&simplex);
        GadgetFrame { d, simplex, centroid, axis: vec![int(1); d] }
    }

    /// `ℓ²`, the squared side length of the simplex.
    pub fn side_len2(&self) -> Rational {
        int(2)
    }

    /// `‖X_i − C‖² = ℓ²·(d−1)/(2d)`.
    pub fn radius2(&self) -> Rational {
        self.side_len2() * int(self.d as i64 - 1) / int(2 * self.d as i64)
    }

    /// `t₀² = ℓ²·(d+1)/(2d)`: axial distance at which a ray point is exactly ℓ
    /// from every `X_i`.
    pub fn threshold2(&self) -> Rational {
        self.side_len2() * int(self.d as i64 + 1) / int(2 * self.d as i64)
    }

    /// `t₀` as a float, for reporting.
    pub fn threshold(&self) -> f64 {
        crate::rational::to_f64(&self.threshold2()).sqrt()
    }

    /// Point `C + τ·(1,…,1)`; its signed axial coordinate is `τ·√d`.
    pub fn on_axis(&self, tau: &Rational) -> Vec<Rational> {
        self.centroid.iter().map(|c| c + tau).collect()
    }

    /// Squared axial distance of [`GadgetFrame::on_axis`]`(τ)`.
    pub fn axial2(&self, tau: &Rational) -> Rational {
        tau * tau * int(self.d as i64)
    }
}
