//! Scalar functions whose signs certify the concavity and convexity of the
//! envelopes, and the torsion of the boundary space curve.
//!
//! * [`u_fn`] is `F_p` on the cross-section as a function of height; its
//!   second derivative has the sign of [`v_fn`] at `x = tan²`.
//! * [`H`] is `G_p` along the segments through the corners (`p > 0`); the
//!   sign of `h''(t)` is the sign of [`g_fn`] at `x = t^(2/p)`.
//! * [`HTilde`] plays the same role for `p < 0` and is concave.
//! * [`torsion`] is the Frenet torsion of
//!   `γ(s) = (s, √(1-s²), ((1-s)^(1/p) + (1+s)^(1/p))^p)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponent::{Exponent, Regime};
use crate::pow::pow_ext;

/// Magnitudes at or below this are classified as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: f64) -> Sign {
        Self::with_threshold(value, ZERO_THRESHOLD)
    }

    pub fn with_threshold(value: f64, threshold: f64) -> Sign {
        if value.abs() <= threshold {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A one-sided sign claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClaim {
    NonPositive,
    NonNegative,
}

impl SignClaim {
    pub fn admits(self, sign: Sign) -> bool {
        !matches!(
            (self, sign),
            (SignClaim::NonPositive, Sign::Positive) | (SignClaim::NonNegative, Sign::Negative)
        )
    }
}

/// `u(t) = [(1 + √(1-t²))^(1/p) + (1 - √(1-t²))^(1/p)]^p`, `t ∈ [0, 1]`.
pub fn u_fn(t: f64, p: Exponent) -> f64 {
    let root = ((1.0 - t) * (1.0 + t)).sqrt();
    let q = p.recip();
    pow_ext(
        pow_ext(1.0 + root, q) + pow_ext(t * t / (1.0 + root), q),
        p.value(),
    )
}

/// `v(x) = x^(2/p - 1) + (2/p - 1) x^(1/p - 1) (1 - x) - 1`.
///
/// At `x = 0` the limit is returned, which may be infinite.
pub fn v_fn(x: f64, p: Exponent) -> f64 {
    let k = 2.0 / p.value() - 1.0;
    let e1 = k;
    let e2 = p.recip() - 1.0;
    if x == 0.0 {
        let term = |e: f64| {
            if e > 0.0 {
                0.0
            } else if e == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        };
        let (a, b) = (term(e1), term(e2));
        return match (a.is_infinite(), b.is_infinite()) {
            // Both blow up; the smaller exponent dominates.
            (true, true) if e2 < e1 => k.signum() * f64::INFINITY,
            (true, true) => f64::INFINITY,
            (true, false) => f64::INFINITY,
            (false, true) => k.signum() * f64::INFINITY,
            (false, false) => a + k * b - 1.0,
        };
    }
    x.powf(e1) + k * x.powf(e2) * (1.0 - x) - 1.0
}

/// `g_p(x) = (1 + (2/p - 1) x) - (1 + x)^(2 - p)`.
pub fn g_fn(x: f64, p: Exponent) -> f64 {
    let pv = p.value();
    (1.0 + (2.0 / pv - 1.0) * x) - (1.0 + x).powf(2.0 - pv)
}

/// Expected sign of [`v_fn`] on `(0, 1]`; `None` at `p ∈ {1, 2}`.
pub fn v_claim(p: Exponent) -> Option<SignClaim> {
    if p.is_boundary() {
        return None;
    }
    Some(match p.regime() {
        Regime::ConcaveF => SignClaim::NonPositive,
        Regime::ConcaveG => SignClaim::NonNegative,
    })
}

/// Expected sign of [`g_fn`] (and of `h''`) on `[0, 1]`, for `p > 0`.
pub fn g_claim(p: Exponent) -> Option<SignClaim> {
    if !p.is_positive() {
        return None;
    }
    Some(match p.regime() {
        Regime::ConcaveF => SignClaim::NonNegative,
        Regime::ConcaveG => SignClaim::NonPositive,
    })
}

/// `h(t) = (t^(1/p) + t^(-1/p))^p - (t + 1/t)` for `p > 0`.
#[derive(Debug, Clone, Copy)]
pub struct H {
    p: Exponent,
}

impl H {
    pub fn new(p: Exponent) -> Result<Self> {
        if !p.is_positive() {
            return Err(Error::ExponentOutOfRange {
                p: p.value(),
                requirement: "p > 0",
            });
        }
        Ok(H { p })
    }

    fn parts(&self, t: f64) -> (f64, f64, f64) {
        let q = self.p.recip();
        let sum = t.powf(q) + t.powf(-q);
        let diff = t.powf(q - 1.0) - t.powf(-q - 1.0);
        (q, sum, diff)
    }

    pub fn value(&self, t: f64) -> f64 {
        let (_, sum, _) = self.parts(t);
        sum.powf(self.p.value()) - (t + 1.0 / t)
    }

    pub fn first(&self, t: f64) -> f64 {
        let (_, sum, diff) = self.parts(t);
        sum.powf(self.p.value() - 1.0) * diff - (1.0 - t.powi(-2))
    }

    /// Second derivative from the product rule, before simplification.
    pub fn second_expanded(&self, t: f64) -> f64 {
        let pv = self.p.value();
        let (q, sum, diff) = self.parts(t);
        let curvature = (1.0 - pv) * t.powf(q - 2.0) + (1.0 + pv) * t.powf(-q - 2.0);
        (pv - 1.0) / pv * sum.powf(pv - 2.0) * diff * diff + q * sum.powf(pv - 1.0) * curvature
            - 2.0 * t.powi(-3)
    }

    /// `h''(t) = 2t⁻³ [(1 + t^(2/p))^(p-2) (1 + (2/p - 1) t^(2/p)) - 1]`.
    pub fn second(&self, t: f64) -> f64 {
        let pv = self.p.value();
        let x = t.powf(2.0 / pv);
        2.0 * t.powi(-3) * ((1.0 + x).powf(pv - 2.0) * (1.0 + (2.0 / pv - 1.0) * x) - 1.0)
    }
}

/// `h̃(t) = (t^(1/p) + t^(-1/p))^p` for `p < 0`.
#[derive(Debug, Clone, Copy)]
pub struct HTilde {
    p: Exponent,
}

impl HTilde {
    pub fn new(p: Exponent) -> Result<Self> {
        if p.is_positive() {
            return Err(Error::ExponentOutOfRange {
                p: p.value(),
                requirement: "p < 0",
            });
        }
        Ok(HTilde { p })
    }

    fn sum(&self, t: f64) -> f64 {
        let q = self.p.recip();
        t.powf(q) + t.powf(-q)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.sum(t).powf(self.p.value())
    }

    pub fn first(&self, t: f64) -> f64 {
        let q = self.p.recip();
        self.sum(t).powf(self.p.value() - 1.0) * (t.powf(q - 1.0) - t.powf(-q - 1.0))
    }

    /// `h̃''(t) = 2t⁻² (t^(1/p) + t^(-1/p))^(p-2) [t^(-2/p) + 2/p - 1]`.
    pub fn second(&self, t: f64) -> f64 {
        let pv = self.p.value();
        2.0 * t.powi(-2) * self.sum(t).powf(pv - 2.0) * (t.powf(-2.0 / pv) + 2.0 / pv - 1.0)
    }
}

/// Outcome of a sign check over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignCheck {
    pub function: &'static str,
    pub p: f64,
    pub claim: SignClaim,
    pub samples: usize,
    pub violations: usize,
    pub min: f64,
    pub max: f64,
}

fn check_sign(
    function: &'static str,
    p: Exponent,
    claim: SignClaim,
    points: impl Iterator<Item = f64>,
    f: impl Fn(f64) -> f64,
) -> SignCheck {
    let mut check = SignCheck {
        function,
        p: p.value(),
        claim,
        samples: 0,
        violations: 0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for x in points {
        let value = f(x);
        check.samples += 1;
        check.min = check.min.min(value);
        check.max = check.max.max(value);
        if value.is_nan() || !claim.admits(Sign::of(value)) {
            check.violations += 1;
        }
    }
    check
}

/// `points` samples of `(0, 1]`: `i / points` for `i = 1..=points`.
fn half_open_grid(points: usize) -> impl Iterator<Item = f64> {
    (1..=points).map(move |i| i as f64 / points as f64)
}

/// `points` samples of `[0, 1]`.
fn closed_grid(points: usize) -> impl Iterator<Item = f64> {
    let d = (points.max(2) - 1) as f64;
    (0..points).map(move |i| i as f64 / d)
}

/// Every sign claim that applies at `p`, checked on grids of `points` samples.
pub fn sign_table(p: Exponent, points: usize) -> Vec<SignCheck> {
    let mut checks = Vec::new();
    if let Some(claim) = v_claim(p) {
        checks.push(check_sign("v", p, claim, half_open_grid(points), |x| {
            v_fn(x, p)
        }));
    }
    if let (Some(claim), Ok(h)) = (g_claim(p), H::new(p)) {
        checks.push(check_sign("g", p, claim, closed_grid(points), |x| {
            g_fn(x, p)
        }));
        if !p.is_boundary() {
            checks.push(check_sign("h''", p, claim, half_open_grid(points), |t| {
                h.second(t)
            }));
        }
    }
    if let Ok(ht) = HTilde::new(p) {
        checks.push(check_sign(
            "h~''",
            p,
            SignClaim::NonPositive,
            half_open_grid(points),
            |t| ht.second(t),
        ));
    }
    checks
}

/// Central difference `(f(t+h) - f(t-h)) / 2h`.
pub fn central_first(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - f(t - h)) / (2.0 * h)
}

/// Central difference `(f(t+h) - 2f(t) + f(t-h)) / h²`.
pub fn central_second(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
}

/// Step for first and second derivative checks.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Nominal step for the third derivative inside [`torsion`].
pub const THIRD_DERIVATIVE_STEP: f64 = 1e-3;

/// Largest relative discrepancy between closed-form derivatives and
/// finite differences at the given points.
pub fn derivative_discrepancy(p: Exponent, points: &[f64]) -> f64 {
    let h = DERIVATIVE_STEP;
    let rel = |closed: f64, numeric: f64| (closed - numeric).abs() / closed.abs().max(1.0);
    let mut worst: f64 = 0.0;
    for &t in points {
        if let Ok(hf) = H::new(p) {
            let value = |t| hf.value(t);
            let first = |t| hf.first(t);
            worst = worst
                .max(rel(hf.first(t), central_first(value, t, h)))
                .max(rel(hf.second(t), central_first(first, t, h)))
                .max(rel(hf.second(t), hf.second_expanded(t)));
        }
        if let Ok(ht) = HTilde::new(p) {
            let value = |t| ht.value(t);
            let first = |t| ht.first(t);
            worst = worst
                .max(rel(ht.first(t), central_first(value, t, h)))
                .max(rel(ht.second(t), central_first(first, t, h)));
        }
    }
    worst
}

fn curve_height(p: Exponent, s: f64) -> f64 {
    let q = p.recip();
    pow_ext(pow_ext(1.0 - s, q) + pow_ext(1.0 + s, q), p.value())
}

fn curve_point(p: Exponent, s: f64) -> [f64; 3] {
    [s, ((1.0 - s) * (1.0 + s)).sqrt(), curve_height(p, s)]
}

/// Fourth-order central stencils for the first three derivatives of the
/// curve, at the given steps.
fn curve_derivatives(p: Exponent, s: f64, h: f64, h3: f64) -> [[f64; 3]; 3] {
    let at = |u: f64| curve_point(p, u);
    let mut out = [[0.0; 3]; 3];
    let (m2, m1, p1, p2) = (at(s - 2.0 * h), at(s - h), at(s + h), at(s + 2.0 * h));
    let c = at(s);
    for i in 0..3 {
        out[0][i] = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
        out[1][i] = (-p2[i] + 16.0 * p1[i] - 30.0 * c[i] + 16.0 * m1[i] - m2[i]) / (12.0 * h * h);
    }
    let k: [f64; 6] = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
    let w: [f64; 6] = [1.0, -8.0, 13.0, -13.0, 8.0, -1.0];
    let samples: Vec<[f64; 3]> = k.iter().map(|&j| at(s + j * h3)).collect();
    for i in 0..3 {
        out[2][i] =
            samples.iter().zip(&w).map(|(v, wt)| wt * v[i]).sum::<f64>() / (8.0 * h3.powi(3));
    }
    out
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A torsion sample with the size of its numerical noise floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionSample {
    pub s: f64,
    pub torsion: f64,
    pub noise: f64,
}

/// Frenet torsion `(γ' × γ'') · γ''' / |γ' × γ''|²` by finite differences.
///
/// Steps are [`DERIVATIVE_STEP`] and [`THIRD_DERIVATIVE_STEP`], shrunk so
/// that every stencil stays inside `(-1, 1)`.
pub fn torsion_sample(p: Exponent, s: f64) -> Result<TorsionSample> {
    let margin = 1.0 - s.abs();
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::DerivativeBlowUp { s });
    }
    let h = DERIVATIVE_STEP.min(margin / 4.0);
    let h3 = THIRD_DERIVATIVE_STEP.min(margin / 6.0);
    let [d1, d2, d3] = curve_derivatives(p, s, h, h3);
    let normal = cross(d1, d2);
    let denom = dot(normal, normal);
    let torsion = dot(normal, d3) / denom;
    if !torsion.is_finite() || denom == 0.0 {
        return Err(Error::DerivativeBlowUp { s });
    }
    // Rounding in the third-difference stencil (weights sum to 32).
    let height = curve_point(p, s)[2].abs().max(1.0);
    let noise = 32.0 * f64::EPSILON * height / (8.0 * h3.powi(3))
        * normal.iter().map(|c| c.abs()).sum::<f64>()
        / denom;
    Ok(TorsionSample { s, torsion, noise })
}

pub fn torsion(p: Exponent, s: f64) -> Result<f64> {
    torsion_sample(p, s).map(|t| t.torsion)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    MinusToPlus,
    PlusToMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorsionCrossings {
    pub count: usize,
    /// Interpolated location of the first sign change.
    pub location: f64,
    pub direction: Option<Crossing>,
}

/// Samples of `s` in `(-1, 1)`: `grid` uniform points with the endpoints
/// pulled in by this margin.
pub const TORSION_MARGIN: f64 = 1e-3;

/// Counts sign changes of the torsion over `grid` points of
/// `[-1 + 1e-3, 1 - 1e-3]`. Samples within 100 times their noise floor
/// are treated as zero.
pub fn torsion_sign_changes(p: Exponent, grid: usize) -> Result<TorsionCrossings> {
    if p.is_boundary() {
        return Err(Error::ExponentOutOfRange {
            p: p.value(),
            requirement: "p not in {1, 2} (the curve is planar there)",
        });
    }
    if grid < 64 {
        return Err(Error::GridTooSmall(grid));
    }
    let end = 1.0 - TORSION_MARGIN;
    let mut last: Option<(f64, f64, Sign)> = None;
    let mut crossings = TorsionCrossings {
        count: 0,
        location: f64::NAN,
        direction: None,
    };
    for i in 0..grid {
        let s = -end + 2.0 * end * i as f64 / (grid - 1) as f64;
        let sample = torsion_sample(p, s)?;
        let sign = Sign::with_threshold(sample.torsion, 100.0 * sample.noise);
        if sign == Sign::Zero {
            continue;
        }
        if let Some((prev_s, prev_tau, prev_sign)) = last {
            if prev_sign != sign {
                crossings.count += 1;
                if crossings.direction.is_none() {
                    crossings.direction = Some(if sign == Sign::Positive {
                        Crossing::MinusToPlus
                    } else {
                        Crossing::PlusToMinus
                    });
                    let w = prev_tau / (prev_tau - sample.torsion);
                    crossings.location = prev_s + w * (s - prev_s);
                }
            }
        }
        last = Some((s, sample.torsion, sign));
    }
    Ok(crossings)
}

/// The crossing direction expected for `p ∉ {1, 2}`.
pub fn expected_crossing(p: Exponent) -> Crossing {
    match p.regime() {
        Regime::ConcaveF => Crossing::MinusToPlus,
        Regime::ConcaveG => Crossing::PlusToMinus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn v_examples() {
        for p in [-2.0, 0.5, 1.5, 3.0] {
            assert_eq!(v_fn(1.0, ex(p)), 0.0);
        }
        assert!(v_fn(0.5, ex(3.0)) <= 0.0);
        assert!(v_fn(0.5, ex(1.5)) >= 0.0);
        // Limits at the origin.
        assert_eq!(v_fn(0.0, ex(0.5)), -1.0);
        assert_eq!(v_fn(0.0, ex(3.0)), f64::NEG_INFINITY);
        assert_eq!(v_fn(0.0, ex(1.5)), f64::INFINITY);
        assert_eq!(v_fn(0.0, ex(-1.0)), f64::INFINITY);
    }

    #[test]
    fn g_examples() {
        for p in [0.5, 1.5, 3.0] {
            assert_eq!(g_fn(0.0, ex(p)), 0.0);
        }
        assert!((0..=100).all(|i| g_fn(i as f64 / 100.0, ex(1.5)) <= 0.0));
        assert!((0..=100).all(|i| g_fn(i as f64 / 100.0, ex(3.0)) >= 0.0));
    }

    #[test]
    fn h_derivatives() {
        let h = H::new(ex(1.5)).unwrap();
        assert!(h.first(1.0).abs() < 1e-15);
        let ht = HTilde::new(ex(-1.0)).unwrap();
        assert!(ht.first(1.0).abs() < 1e-15);
        for p in [0.5, 1.5, 3.0, -1.0, -2.0] {
            assert!(
                derivative_discrepancy(ex(p), &[0.2, 0.5, 0.9]) < 1e-6,
                "p = {p}"
            );
        }
        assert!(H::new(ex(-1.0)).is_err());
        assert!(HTilde::new(ex(1.0)).is_err());
    }

    #[test]
    fn h_second_tracks_g() {
        for p in [0.5, 0.9, 1.3, 1.7, 2.5, 4.0] {
            let p = ex(p);
            let h = H::new(p).unwrap();
            for i in 1..=200 {
                let t = i as f64 / 200.0;
                let a = Sign::of(h.second(t));
                let b = Sign::of(g_fn(t.powf(2.0 / p.value()), p));
                assert!(
                    a == b || a == Sign::Zero || b == Sign::Zero,
                    "p = {p} t = {t}"
                );
            }
        }
    }

    #[test]
    fn u_matches_f_profile() {
        use crate::cone::ConeTriple;
        use crate::envelope::eval_f;
        for p in [-1.0, 0.5, 1.5, 3.0] {
            for t in [0.0, 0.3, 0.8, 1.0] {
                let f = eval_f(
                    ex(p),
                    &ConeTriple::from_cross_section(0.2, t * 0.5).unwrap(),
                );
                let u = u_fn(t * 0.5, ex(p));
                assert!((f - u).abs() < 1e-14 * f.abs().max(1.0));
            }
        }
    }

    #[test]
    fn torsion_examples() {
        let c = torsion_sign_changes(ex(3.0), 256).unwrap();
        assert_eq!(c.count, 1);
        assert_eq!(c.direction, Some(Crossing::MinusToPlus));
        assert!(c.location.abs() < 1e-2);
        for p in [1.5, -1.0] {
            let c = torsion_sign_changes(ex(p), 257).unwrap();
            assert_eq!(c.count, 1);
            assert_eq!(c.direction, Some(Crossing::PlusToMinus));
            assert!(c.location.abs() < 1e-2);
        }
        assert!(torsion_sign_changes(ex(2.0), 256).is_err());
        assert!(torsion_sign_changes(ex(3.0), 32).is_err());
        assert!(torsion(ex(3.0), 1.0).is_err());
    }
}
