//! Step-function pairs that attain the envelopes at a prescribed triple.
//!
//! Three families cover every cone point:
//!
//! * swap pairs `(a, b)χ[0,c] + (b, a)χ[c,1]`, which attain `F_p`;
//! * triangle-cone triples `(a, a)χ[0,½] + (b, ∅)χ[½,¾] + (∅, c)χ[¾,1]`
//!   for `z ≤ min(x, y)`, which attain `G_p`;
//! * two-block pairs `(a, b)χ[0,½] + (c, ∅)χ[½,1]` for `z > min(x, y)`,
//!   which attain `G_p` off the triangular cone.
//!
//! Here `∅` is `0` for `p > 0` and `+inf` for `p < 0`; both contribute
//! nothing to the p-th power moments. All parameters are computed in
//! p-th power coordinates (`A = a^p` and so on) and mapped back with
//! [`pow_ext`], so `A = 0` becomes `+inf` when `p < 0`.

use serde::Serialize;

use crate::cone::ConeTriple;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::measure::StepFunction;
use crate::pow::pow_ext;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionPair {
    pub f: StepFunction,
    pub g: StepFunction,
}

impl FunctionPair {
    fn from_blocks(p: Exponent, blocks: &[(f64, f64, f64)]) -> Result<Self> {
        let q = p.recip();
        let f: Vec<(f64, f64)> = blocks.iter().map(|&(e, a, _)| (e, pow_ext(a, q))).collect();
        let g: Vec<(f64, f64)> = blocks.iter().map(|&(e, _, b)| (e, pow_ext(b, q))).collect();
        Ok(FunctionPair {
            f: StepFunction::from_blocks(&f)?,
            g: StepFunction::from_blocks(&g)?,
        })
    }

    /// Places `self` on `[0, λ]` and `other` on `[λ, 1]`, each compressed.
    /// Moments of the result are the `λ`-weighted averages.
    pub fn concatenate(&self, other: &FunctionPair, lambda: f64) -> Result<Self> {
        let join = |a: &StepFunction, b: &StepFunction| {
            let mut blocks = a.compressed_blocks(0.0, lambda);
            blocks.extend(b.compressed_blocks(lambda, 1.0));
            StepFunction::from_blocks(&blocks)
        };
        Ok(FunctionPair {
            f: join(&self.f, &other.f)?,
            g: join(&self.g, &other.g)?,
        })
    }

    pub fn swapped(&self) -> Self {
        FunctionPair {
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }
}

/// The swap pair attaining `F_p` at `t`.
///
/// `a^p, b^p = ((x+y) ± √((x+y)² - 4z²))/2` and
/// `c = ½ + (x - y)/(2(a^p - b^p))`.
pub fn extremal_f(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    let sum = t.sum();
    if sum == 0.0 {
        if t.z() > 0.0 {
            return Err(Error::DegenerateTriple("x + y = 0 with z > 0".into()));
        }
        return FunctionPair::from_blocks(p, &[(1.0, 0.0, 0.0)]);
    }
    let w = t.ratios().w;
    let root = ((1.0 - w) * (1.0 + w)).sqrt();
    let big = 0.5 * sum * (1.0 + root);
    // big·small = z², which avoids cancellation when z is small.
    let small = t.z() * t.z() / big;
    let gap = big - small;
    let c = if gap > 0.0 {
        (0.5 + (t.x() - t.y()) / (2.0 * gap)).clamp(0.0, 1.0)
    } else {
        0.5
    };
    FunctionPair::from_blocks(p, &[(c, big, small), (1.0, small, big)])
}

/// The pair attaining `G_p` at `t`, for either sign of `p`.
pub fn extremal_g(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    if p.is_positive() {
        extremal_g_pos(p, t)
    } else {
        extremal_g_neg(p, t)
    }
}

pub fn extremal_g_pos(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    if !p.is_positive() {
        return Err(Error::ExponentOutOfRange {
            p: p.value(),
            requirement: "p > 0",
        });
    }
    g_construction(p, t)
}

/// Same moment matching as [`extremal_g_pos`], with the empty value `+inf`.
/// At `z = 0` the value `G_p = 0` is a limit and is not attained.
pub fn extremal_g_neg(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    if p.is_positive() {
        return Err(Error::ExponentOutOfRange {
            p: p.value(),
            requirement: "p < 0",
        });
    }
    if t.z() == 0.0 {
        return Err(Error::DegenerateTriple(
            "z = 0 is not attained for p < 0".into(),
        ));
    }
    g_construction(p, t)
}

fn g_construction(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    let (x, y, z) = (t.x(), t.y(), t.z());
    // Moments: A = f^p, B = g^p; zero moments map to the empty value.
    if z <= t.min_xy() {
        return FunctionPair::from_blocks(
            p,
            &[
                (0.5, 2.0 * z, 2.0 * z),
                (0.75, 4.0 * (x - z), 0.0),
                (1.0, 0.0, 4.0 * (y - z)),
            ],
        );
    }
    if y <= x {
        let a = 2.0 * z * z / y;
        let c = (2.0 * x - a).max(0.0);
        FunctionPair::from_blocks(p, &[(0.5, a, 2.0 * y), (1.0, c, 0.0)])
    } else {
        extremal_g_mirror(p, t)
    }
}

fn extremal_g_mirror(p: Exponent, t: &ConeTriple) -> Result<FunctionPair> {
    Ok(g_construction(p, &t.swapped())?.swapped())
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::envelope::{eval_f, eval_g};
    use crate::measure::{sum_norm, triple_of_pair};

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    fn tri(x: f64, y: f64, z: f64) -> ConeTriple {
        ConeTriple::new(x, y, z).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn swap_pair_p2() {
        let pair = extremal_f(ex(2.0), &tri(1.0, 1.0, 0.5)).unwrap();
        assert_eq!(pair.f.breakpoints(), &[0.0, 0.5, 1.0]);
        let a2 = pair.f.values()[0].powi(2);
        let b2 = pair.f.values()[1].powi(2);
        let s3 = 3f64.sqrt();
        assert!(rel(a2, (2.0 + s3) / 2.0) < 1e-15);
        assert!(rel(b2, (2.0 - s3) / 2.0) < 1e-14);
        assert!(rel(sum_norm(&pair.f, &pair.g, 2.0), 3.0) < 1e-15);
    }

    #[test]
    fn swap_pair_boundary_and_flat() {
        let p = ex(3.0);
        let t = tri(4.0, 1.0, 2.0);
        let pair = extremal_f(p, &t).unwrap();
        assert_eq!(pair.f.values().len(), 1);
        let phi = (4f64.cbrt() + 1.0).powi(3);
        assert!(rel(sum_norm(&pair.f, &pair.g, 3.0), phi) < 1e-14);

        let t = tri(2.0, 0.5, 0.0);
        let pair = extremal_f(p, &t).unwrap();
        assert_eq!(pair.f.values()[1], 0.0);
        assert!(rel(sum_norm(&pair.f, &pair.g, 3.0), 2.5) < 1e-15);

        let q = ex(-1.0);
        let pair = extremal_f(q, &t).unwrap();
        assert_eq!(pair.f.values()[1], f64::INFINITY);
        assert_eq!(sum_norm(&pair.f, &pair.g, -1.0), 0.0);
        assert!(
            triple_of_pair(&pair.f, &pair.g, -1.0)
                .unwrap()
                .relative_distance(&t)
                < 1e-15
        );
    }

    #[test]
    fn triangle_family_p15() {
        let p = ex(1.5);
        let t = tri(1.0, 1.0, 0.5);
        let pair = extremal_g_pos(p, &t).unwrap();
        let a = pair.f.values()[0];
        assert!(rel(a.powf(1.5), 1.0) < 1e-15);
        assert!(rel(pair.f.values()[1].powf(1.5), 2.0) < 1e-15);
        assert!(rel(pair.g.values()[2].powf(1.5), 2.0) < 1e-15);
        let expected = 2f64.powf(1.5) * 0.5 + 2.0 * 0.25 * 2.0;
        let actual = sum_norm(&pair.f, &pair.g, 1.5);
        assert!(rel(actual, expected) < 1e-15);
        assert!(rel(actual, eval_g(p, &t)) < 1e-15);
    }

    #[test]
    fn two_block_family_p15() {
        let p = ex(1.5);
        let t = tri(1.0, 0.25, 0.4);
        let pair = extremal_g_pos(p, &t).unwrap();
        let moments: Vec<f64> = pair.f.values().iter().map(|v| v.powf(1.5)).collect();
        assert!(rel(moments[0], 1.28) < 1e-14);
        assert!(rel(moments[1], 0.72) < 1e-14);
        assert!(rel(pair.g.values()[0].powf(1.5), 0.5) < 1e-15);
        assert!(rel(sum_norm(&pair.f, &pair.g, 1.5), 1.576_393_395_291_751_644) < 1e-14);
        assert!(
            triple_of_pair(&pair.f, &pair.g, 1.5)
                .unwrap()
                .relative_distance(&t)
                < 1e-14
        );
    }

    #[test]
    fn flat_triple_gives_disjoint_supports() {
        let p = ex(1.5);
        let t = tri(1.0, 2.0, 0.0);
        let pair = extremal_g_pos(p, &t).unwrap();
        assert_eq!(pair.f.values()[0], 0.0);
        assert!(rel(sum_norm(&pair.f, &pair.g, 1.5), 3.0) < 1e-15);
    }

    #[test]
    fn negative_family() {
        let p = ex(-1.0);
        let t = tri(1.0, 1.0, 0.5);
        let pair = extremal_g_neg(p, &t).unwrap();
        assert_eq!(pair.f.values()[2], f64::INFINITY);
        assert_eq!(pair.g.values()[1], f64::INFINITY);
        assert!(rel(sum_norm(&pair.f, &pair.g, -1.0), 0.25) < 1e-15);
        assert!(extremal_g_neg(p, &tri(1.0, 1.0, 0.0)).is_err());
        assert!(extremal_g_neg(ex(2.0), &t).is_err());
        assert!(extremal_g_pos(p, &t).is_err());

        // z = min(x, y): the b-block carries no moment.
        let t = tri(1.0, 3.0, 1.0);
        let pair = extremal_g_neg(p, &t).unwrap();
        assert_eq!(pair.f.values()[1], f64::INFINITY);
        assert!(rel(sum_norm(&pair.f, &pair.g, -1.0), eval_g(p, &t)) < 1e-15);

        // Mirrored two-block case with x < z.
        let t = tri(0.25, 1.0, 0.4);
        let pair = extremal_g_neg(p, &t).unwrap();
        assert!(
            triple_of_pair(&pair.f, &pair.g, -1.0)
                .unwrap()
                .relative_distance(&t)
                < 1e-14
        );
        assert!(rel(sum_norm(&pair.f, &pair.g, -1.0), eval_g(p, &t)) < 1e-14);
    }

    #[test]
    fn swap_pair_equality_condition() {
        // (fg)^(p/2) = k (f^p + g^p) pointwise with k = z/(x+y).
        let p = 3.0;
        let t = tri(2.0, 1.0, 0.9);
        let pair = extremal_f(ex(p), &t).unwrap();
        let k = t.z() / t.sum();
        for (&a, &b) in pair.f.values().iter().zip(pair.g.values()) {
            let lhs = (a * b).powf(p / 2.0);
            let rhs = k * (a.powf(p) + b.powf(p));
            assert!(rel(lhs, rhs) < 1e-14);
        }
        assert!(rel(sum_norm(&pair.f, &pair.g, p), eval_f(ex(p), &t)) < 1e-14);
    }

    #[test]
    fn concatenation_averages_moments() {
        let p = ex(2.5);
        let t1 = tri(1.0, 2.0, 0.3);
        let t2 = tri(3.0, 0.5, 1.1);
        let a = extremal_f(p, &t1).unwrap();
        let b = extremal_g(p, &t2).unwrap();
        let joined = a.concatenate(&b, 0.3).unwrap();
        let t = triple_of_pair(&joined.f, &joined.g, 2.5).unwrap();
        let expect = tri(
            0.3 * 1.0 + 0.7 * 3.0,
            0.3 * 2.0 + 0.7 * 0.5,
            0.3 * 0.3 + 0.7 * 1.1,
        );
        assert!(t.relative_distance(&expect) < 1e-14);
        let value = sum_norm(&joined.f, &joined.g, 2.5);
        let expect = 0.3 * sum_norm(&a.f, &a.g, 2.5) + 0.7 * sum_norm(&b.f, &b.g, 2.5);
        assert!(rel(value, expect) < 1e-14);
    }
}
