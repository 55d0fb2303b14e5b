//! Closed-form envelopes and the scalar inequalities built on them.
//!
//! For `(x, y, z)` in the cone, with `w = 2z/(x+y)` and
//! `v = min{x/z, y/z, 1}`:
//!
//! ```text
//! F_p = (x+y)/2 · [(1+√(1-w²))^(1/p) + (1-√(1-w²))^(1/p)]^p
//! G_p = x + y + ((v^(1/p) + v^(-1/p))^p - v - 1/v)·z      (p > 0)
//! G_p = (v^(1/p) + v^(-1/p))^p · z                        (p < 0)
//! ```
//!
//! `F_p` is the concave envelope of the boundary data when
//! `p ∈ (0,1] ∪ [2,∞)` and the convex one otherwise; `G_p` takes the
//! opposite role.

use serde::Serialize;

use crate::cone::ConeTriple;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, Regime};
use crate::pow::pow_ext;

/// Which side of the target quantity a bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upper,
    Lower,
}

/// The two sides of a scalar inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    /// `lhs ≤ rhs + tol·max(1, |lhs|, |rhs|)`.
    pub fn le(&self, tol: f64) -> bool {
        if self.lhs == self.rhs {
            return true;
        }
        self.lhs <= self.rhs + tol * scale(self.lhs, self.rhs)
    }

    /// `lhs ≥ rhs - tol·max(1, |lhs|, |rhs|)`.
    pub fn ge(&self, tol: f64) -> bool {
        if self.lhs == self.rhs {
            return true;
        }
        self.lhs >= self.rhs - tol * scale(self.lhs, self.rhs)
    }

    pub fn holds(&self, direction: Ordering, tol: f64) -> bool {
        match direction {
            Ordering::LessEq => self.le(tol),
            Ordering::GreaterEq => self.ge(tol),
        }
    }
}

fn scale(a: f64, b: f64) -> f64 {
    let s = 1f64.max(a.abs()).max(b.abs());
    if s.is_finite() {
        s
    } else {
        0.0
    }
}

/// Expected relation `lhs ≤ rhs` or `lhs ≥ rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    LessEq,
    GreaterEq,
}

/// Boundary data on the curved face `z = √(xy)`: `(x^(1/p) + y^(1/p))^p`.
pub fn phi_curved(p: Exponent, x: f64, y: f64) -> f64 {
    let q = p.recip();
    pow_ext(pow_ext(x, q) + pow_ext(y, q), p.value())
}

/// Boundary data on the flat face `z = 0`.
pub fn phi_flat(p: Exponent, x: f64, y: f64) -> f64 {
    if p.is_positive() {
        x + y
    } else {
        0.0
    }
}

/// At `p = 1` and `p = 2` both candidates are the linear data
/// `x + y` and `x + y + 2z`.
fn linear_case(p: Exponent, t: &ConeTriple) -> Option<f64> {
    if p.is_one() {
        Some(t.sum())
    } else if p.is_two() {
        Some(t.sum() + 2.0 * t.z())
    } else {
        None
    }
}

pub fn eval_f(p: Exponent, t: &ConeTriple) -> f64 {
    let sum = t.sum();
    if sum == 0.0 {
        return 0.0;
    }
    if let Some(v) = linear_case(p, t) {
        return v;
    }
    let w = t.ratios().w;
    // √(1-w²) as √((1-w)(1+w)); 1 - √(1-w²) as w²/(1+√(1-w²)).
    let root = ((1.0 - w) * (1.0 + w)).sqrt();
    let upper = 1.0 + root;
    let lower = w * w / upper;
    let q = p.recip();
    let bracket = pow_ext(upper, q) + pow_ext(lower, q);
    0.5 * sum * pow_ext(bracket, p.value())
}

pub fn eval_g(p: Exponent, t: &ConeTriple) -> f64 {
    if let Some(v) = linear_case(p, t) {
        return v;
    }
    let (x, y, z) = (t.x(), t.y(), t.z());
    if z == 0.0 {
        return phi_flat(p, x, y);
    }
    let small = t.min_xy();
    let v = t.ratios().v;
    if v == 1.0 {
        // Triangular cone z ≤ min(x, y), where G is linear.
        return if p.is_positive() {
            x + y + (pow_ext(2.0, p.value()) - 2.0) * z
        } else {
            pow_ext(2.0, p.value()) * z
        };
    }
    let q = p.recip();
    let spread = pow_ext(pow_ext(v, q) + pow_ext(v, -q), p.value()) * z;
    if p.is_positive() {
        // x + y - (v + 1/v)·z with v·z = min(x, y) cancelled exactly.
        (t.max_xy() - z * z / small) + spread
    } else {
        spread
    }
}

/// The concave envelope of the boundary data.
pub fn upper_envelope(p: Exponent, t: &ConeTriple) -> f64 {
    match p.regime() {
        Regime::ConcaveF => eval_f(p, t),
        Regime::ConcaveG => eval_g(p, t),
    }
}

/// The convex envelope of the boundary data.
pub fn lower_envelope(p: Exponent, t: &ConeTriple) -> f64 {
    match p.regime() {
        Regime::ConcaveF => eval_g(p, t),
        Regime::ConcaveG => eval_f(p, t),
    }
}

/// The earlier two-function bound `(1 + Γ^(2/p))^(p-1)·(x + y)`.
pub fn carlen_bound(p: Exponent, t: &ConeTriple) -> f64 {
    let sum = t.sum();
    if sum == 0.0 {
        return 0.0;
    }
    let gamma = t.ratios().gamma;
    let pv = p.value();
    pow_ext(1.0 + pow_ext(gamma, 2.0 / pv), pv - 1.0) * sum
}

/// Side of `‖f+g‖_p^p` on which [`carlen_bound`] lies. It is dominated by
/// `F_p`, so it follows the regime.
pub fn carlen_direction(p: Exponent) -> Direction {
    match p.regime() {
        Regime::ConcaveF => Direction::Upper,
        Regime::ConcaveG => Direction::Lower,
    }
}

/// The trivial convexity bound `2^(p-1)(x + y)`, valid for `p ≥ 1`.
pub fn convexity_bound(p: Exponent, t: &ConeTriple) -> Result<f64> {
    if p.value() < 1.0 {
        return Err(Error::ExponentOutOfRange {
            p: p.value(),
            requirement: "p >= 1",
        });
    }
    Ok(pow_ext(2.0, p.value() - 1.0) * t.sum())
}

/// `F_p / (x + y)` against the Carlen factor at overlap ratio `Γ`.
///
/// Holds as `lhs ≤ rhs` for `p ∈ (0,1] ∪ [2,∞)` and reversed for
/// `p ∈ (-∞,0) ∪ [1,2]`.
pub fn refinement_sides(p: Exponent, gamma: f64) -> Sides {
    let root = ((1.0 - gamma) * (1.0 + gamma)).sqrt();
    let upper = 0.5 * (1.0 + root);
    let lower = 0.5 * gamma * gamma / (1.0 + root);
    let q = p.recip();
    let pv = p.value();
    Sides {
        lhs: pow_ext(pow_ext(upper, q) + pow_ext(lower, q), pv),
        rhs: pow_ext(1.0 + pow_ext(gamma, 2.0 / pv), pv - 1.0),
    }
}

pub fn refinement_ordering(p: Exponent) -> Ordering {
    match p.regime() {
        Regime::ConcaveF => Ordering::LessEq,
        Regime::ConcaveG => Ordering::GreaterEq,
    }
}

/// `((1+x)^q + (1-x)^q)/2` against `((1 + (1-x²)^q)/2)^(1-q)`.
pub fn two_point(q: f64, x: f64) -> Sides {
    let lhs = 0.5 * (pow_ext(1.0 + x, q) + pow_ext(1.0 - x, q));
    let rhs = pow_ext(0.5 * (1.0 + pow_ext((1.0 - x) * (1.0 + x), q)), 1.0 - q);
    Sides { lhs, rhs }
}

/// `lhs ≤ rhs` for `q ∈ (-∞, 1/2] ∪ [1, ∞)`, reversed for `q ∈ [1/2, 1)`.
pub fn two_point_ordering(q: f64) -> Ordering {
    if q > 0.5 && q < 1.0 {
        Ordering::GreaterEq
    } else {
        Ordering::LessEq
    }
}

/// `(a + b)^p` against `a^p + b^p + (2^p - 2)(ab)^(p/2)` for `a, b ≥ 0`.
pub fn scalar_three_term(a: f64, b: f64, p: Exponent) -> Sides {
    let pv = p.value();
    Sides {
        lhs: pow_ext(a + b, pv),
        rhs: pow_ext(a, pv)
            + pow_ext(b, pv)
            + (pow_ext(2.0, pv) - 2.0) * crate::pow::product_pow(a, b, 0.5 * pv),
    }
}

/// `a^p + b^p + ...` dominates for `p ∈ [1, 2]`, is dominated for
/// `p ∈ (0,1] ∪ [2,∞)`. Undefined for `p < 0`.
pub fn three_term_ordering(p: Exponent) -> Result<Ordering> {
    match sum_bound_direction(p)? {
        Direction::Upper => Ok(Ordering::LessEq),
        Direction::Lower => Ok(Ordering::GreaterEq),
    }
}

/// `Σ‖f_j‖_p^p + (2^p - 2)·Σ_{i<j}‖f_i f_j‖_{p/2}^{p/2}`.
///
/// This bounds `‖Σ f_j‖_p^p` from above for `p ∈ [1, 2]` and from below for
/// `p ∈ (0,1] ∪ [2,∞)`. For `p < 0` the pointwise inequality already fails
/// for three equal values, so negative exponents are rejected.
pub fn sum_bound(moments: f64, overlaps: f64, p: Exponent) -> Result<f64> {
    sum_bound_direction(p)?;
    Ok(moments + (pow_ext(2.0, p.value()) - 2.0) * overlaps)
}

pub fn sum_bound_direction(p: Exponent) -> Result<Direction> {
    if !p.is_positive() {
        return Err(Error::ExponentOutOfRange {
            p: p.value(),
            requirement: "p > 0",
        });
    }
    Ok(if p.in_unit_to_two() {
        Direction::Upper
    } else {
        Direction::Lower
    })
}

/// Pointwise form of the many-term inequality for nonnegative numbers:
/// `(Σ a_j)^p` against `Σ a_j^p + (2^p - 2)·Σ_{i<j} (a_i a_j)^(p/2)`.
///
/// Defined for every nonzero `p`, so it can exhibit the failure at `p < 0`.
pub fn pointwise_sum(values: &[f64], p: Exponent) -> Sides {
    let pv = p.value();
    let total: f64 = values.iter().sum();
    let moments: f64 = values.iter().map(|&a| pow_ext(a, pv)).sum();
    let mut overlaps = 0.0;
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            overlaps += crate::pow::product_pow(a, b, 0.5 * pv);
        }
    }
    Sides {
        lhs: pow_ext(total, pv),
        rhs: moments + (pow_ext(2.0, pv) - 2.0) * overlaps,
    }
}

/// The linear majorant (minorant) `x + y + (2^p - 2)z` of `G_p` for
/// `p ∈ [1, 2]` (`p ∈ (0,1] ∪ [2,∞)`).
pub fn linear_triangle_bound(p: Exponent, t: &ConeTriple) -> Result<f64> {
    sum_bound(t.sum(), t.z(), p)
}
