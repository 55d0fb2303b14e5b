//! Independent numerical envelopes on the cross-section half-disc.
//!
//! The concave (convex) envelope of boundary data on a convex planar domain
//! is, at each point `q`, the largest (smallest) value of `Σ λ_i φ(P_i)` over
//! convex combinations of boundary points with `Σ λ_i P_i = q`. The
//! [`BoundaryCurve`] discretizes `∂D` into nodes carrying the exact boundary
//! data `φ_p`; a query searches convex combinations of those nodes. Only the
//! boundary data enter, never the closed-form envelopes, so the result is a
//! genuine cross-check. Every candidate is a true convex combination of true
//! boundary values, hence the concave estimate never exceeds the exact
//! envelope and the convex estimate never undercuts it.
//!
//! [`empirical_b`] approaches the same envelopes from the function side: it
//! searches step-function pairs with a prescribed triple and reports the
//! best `‖f+g‖_p^p` found.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::ConeTriple;
use crate::envelope::{lower_envelope, phi_curved, phi_flat, upper_envelope};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::extremal::{extremal_f, extremal_g, FunctionPair};
use crate::measure::{sum_norm, triple_of_pair};
use crate::sampling::substream;

/// Concave (upper) or convex (lower) envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    Concave,
    Convex,
}

impl EnvelopeKind {
    fn better(self, a: f64, b: f64) -> f64 {
        match self {
            EnvelopeKind::Concave => a.max(b),
            EnvelopeKind::Convex => a.min(b),
        }
    }

    /// The closed-form envelope of this kind at `t`.
    pub fn closed_form(self, p: Exponent, t: &ConeTriple) -> f64 {
        match self {
            EnvelopeKind::Concave => upper_envelope(p, t),
            EnvelopeKind::Convex => lower_envelope(p, t),
        }
    }
}

/// How node combinations are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Search {
    /// For every node `P`, the ray from `P` through `q` leaves the boundary
    /// polygon through one edge `[B_k, B_{k+1}]`; the triple `(P, B_k,
    /// B_{k+1})` is solved in closed form. `O(N)` per query.
    #[default]
    Rays,
    /// Every node pair and node triple. `O(N³)` per query.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Node {
    pub s: f64,
    pub z: f64,
    pub value: f64,
}

/// Nodes on `∂D` carrying the boundary data.
///
/// The semicircle carries `n` nodes uniform in angle, from `(1, 0)` to
/// `(-1, 0)`; the diameter carries its two endpoints (shared with the arc)
/// and `n/4` interior nodes.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    p: Exponent,
    arc: Vec<Node>,
    diameter: Vec<Node>,
    step: f64,
}

const FEASIBILITY_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-12;

impl BoundaryCurve {
    pub fn new(p: Exponent, n: usize) -> Result<Self> {
        if n < 16 {
            return Err(Error::ResolutionTooSmall(n));
        }
        let step = PI / (n - 1) as f64;
        let curved = |s: f64| phi_curved(p, 1.0 + s, 1.0 - s);
        let arc = (0..n)
            .map(|k| {
                let (s, z) = if k == 0 {
                    (1.0, 0.0)
                } else if k == n - 1 {
                    (-1.0, 0.0)
                } else {
                    let theta = step * k as f64;
                    (theta.cos(), theta.sin())
                };
                Node {
                    s,
                    z,
                    value: curved(s),
                }
            })
            .collect();
        let m = n / 4 + 2;
        let flat = phi_flat(p, 1.0, 1.0);
        let diameter = (0..m)
            .map(|j| {
                let s = if j == m - 1 {
                    1.0
                } else {
                    -1.0 + 2.0 * j as f64 / (m - 1) as f64
                };
                Node {
                    s,
                    z: 0.0,
                    value: flat,
                }
            })
            .collect();
        Ok(BoundaryCurve {
            p,
            arc,
            diameter,
            step,
        })
    }

    pub fn exponent(&self) -> Exponent {
        self.p
    }

    /// Semicircle nodes plus diameter nodes, endpoints counted once.
    pub fn resolution(&self) -> usize {
        self.arc.len() + self.diameter.len() - 2
    }

    /// All distinct nodes: the arc, then the interior diameter nodes.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> + '_ {
        self.arc
            .iter()
            .chain(&self.diameter[1..self.diameter.len() - 1])
    }

    /// Envelope estimate at `(s, z)` using [`Search::Rays`].
    pub fn envelope(&self, s: f64, z: f64, kind: EnvelopeKind) -> Result<f64> {
        self.envelope_with(s, z, kind, Search::Rays)
    }

    pub fn envelope_with(&self, s: f64, z: f64, kind: EnvelopeKind, search: Search) -> Result<f64> {
        if !(s.is_finite() && z.is_finite()) || z < -1e-12 || s * s + z * z > 1.0 + 1e-12 {
            return Err(Error::OutsideDomain { s, z });
        }
        let q = self.snap_into_polygon(s, z.max(0.0));
        let best = match search {
            Search::Rays => self
                .nodes()
                .filter_map(|node| self.ray_candidate(node, q))
                .reduce(|a, b| kind.better(a, b)),
            Search::Exhaustive => self.exhaustive(q, kind),
        };
        best.ok_or(Error::OutsideDomain { s, z })
    }

    /// Points between the arc and its inscribed polygon are moved radially
    /// onto the polygon; no node combination reaches them otherwise.
    fn snap_into_polygon(&self, s: f64, z: f64) -> (f64, f64) {
        if z == 0.0 {
            return (s.clamp(-1.0, 1.0), 0.0);
        }
        let theta = z.atan2(s).clamp(0.0, PI);
        let k = ((theta / self.step) as usize).min(self.arc.len() - 2);
        let mid = self.step * (k as f64 + 0.5);
        let (ns, nz) = (mid.cos(), mid.sin());
        let reach = (0.5 * self.step).cos();
        let along = ns * s + nz * z;
        if along > reach {
            let scale = reach / along;
            (s * scale, z * scale)
        } else {
            (s, z)
        }
    }

    fn ray_candidate(&self, node: &Node, q: (f64, f64)) -> Option<f64> {
        let (ds, dz) = (q.0 - node.s, q.1 - node.z);
        let len = ds.hypot(dz);
        if len < 1e-14 {
            return Some(node.value);
        }
        let (t, value) = self.exit(node, ds, dz)?;
        if t < 1.0 - FEASIBILITY_TOL {
            return None;
        }
        let lambda = (1.0 / t).min(1.0);
        Some((1.0 - lambda) * node.value + lambda * value)
    }

    /// Where the ray `P + t·d` leaves the polygon, with the interpolated
    /// boundary value there.
    fn exit(&self, node: &Node, ds: f64, dz: f64) -> Option<(f64, f64)> {
        if dz < 0.0 {
            let t = -node.z / dz;
            let s_hit = node.s + t * ds;
            if (-1.0..=1.0).contains(&s_hit) {
                return Some((t, self.diameter_value(s_hit)));
            }
        }
        // Guess the arc edge from the circle intersection, then confirm
        // against the chords around it.
        let a = ds * ds + dz * dz;
        let b = node.s * ds + node.z * dz;
        let c = node.s * node.s + node.z * node.z - 1.0;
        let disc = (b * b - a * c).max(0.0);
        let t_circle = (-b + disc.sqrt()) / a;
        let (es, ez) = (node.s + t_circle * ds, node.z + t_circle * dz);
        let theta = ez.max(0.0).atan2(es).clamp(0.0, PI);
        let guess = ((theta / self.step) as usize).min(self.arc.len() - 2);
        let mut best: Option<(f64, f64)> = None;
        for k in guess.saturating_sub(1)..=(guess + 1).min(self.arc.len() - 2) {
            let (a0, a1) = (&self.arc[k], &self.arc[k + 1]);
            let (es, ez) = (a1.s - a0.s, a1.z - a0.z);
            let det = dz * es - ds * ez;
            if det.abs() < SINGULAR_TOL * a.sqrt() * es.hypot(ez) {
                continue;
            }
            let (rs, rz) = (a0.s - node.s, a0.z - node.z);
            let t = (rz * es - rs * ez) / det;
            let mu = (ds * rz - dz * rs) / det;
            if (-FEASIBILITY_TOL..=1.0 + FEASIBILITY_TOL).contains(&mu)
                && best.is_none_or(|(bt, _)| t > bt)
            {
                let mu = mu.clamp(0.0, 1.0);
                best = Some((t, (1.0 - mu) * a0.value + mu * a1.value));
            }
        }
        best
    }

    fn diameter_value(&self, s: f64) -> f64 {
        let m = self.diameter.len();
        let pos = (s + 1.0) / 2.0 * (m - 1) as f64;
        let j = (pos as usize).min(m - 2);
        let mu = (pos - j as f64).clamp(0.0, 1.0);
        (1.0 - mu) * self.diameter[j].value + mu * self.diameter[j + 1].value
    }

    fn exhaustive(&self, q: (f64, f64), kind: EnvelopeKind) -> Option<f64> {
        let nodes: Vec<&Node> = self.nodes().collect();
        let mut best: Option<f64> = None;
        let mut offer = |v: f64| best = Some(best.map_or(v, |b| kind.better(b, v)));
        for (i, a) in nodes.iter().enumerate() {
            if (a.s - q.0).hypot(a.z - q.1) < 1e-14 {
                offer(a.value);
            }
            for (j, b) in nodes.iter().enumerate().skip(i + 1) {
                if let Some(v) = pair_combination(a, b, q) {
                    offer(v);
                }
                for c in &nodes[j + 1..] {
                    if let Some(v) = triple_combination(a, b, c, q) {
                        offer(v);
                    }
                }
            }
        }
        best
    }
}

fn pair_combination(a: &Node, b: &Node, q: (f64, f64)) -> Option<f64> {
    let (es, ez) = (b.s - a.s, b.z - a.z);
    let (rs, rz) = (q.0 - a.s, q.1 - a.z);
    let len2 = es * es + ez * ez;
    let cross = es * rz - ez * rs;
    if cross.abs() > SINGULAR_TOL * len2.sqrt() {
        return None;
    }
    let mu = (es * rs + ez * rz) / len2;
    (-FEASIBILITY_TOL..=1.0 + FEASIBILITY_TOL)
        .contains(&mu)
        .then(|| {
            let mu = mu.clamp(0.0, 1.0);
            (1.0 - mu) * a.value + mu * b.value
        })
}

fn triple_combination(a: &Node, b: &Node, c: &Node, q: (f64, f64)) -> Option<f64> {
    let (bs, bz) = (b.s - a.s, b.z - a.z);
    let (cs, cz) = (c.s - a.s, c.z - a.z);
    let det = bs * cz - bz * cs;
    if det.abs() < SINGULAR_TOL {
        return None;
    }
    let (rs, rz) = (q.0 - a.s, q.1 - a.z);
    let beta = (rs * cz - rz * cs) / det;
    let gamma = (bs * rz - bz * rs) / det;
    let alpha = 1.0 - beta - gamma;
    let ok = |w: f64| w >= -FEASIBILITY_TOL;
    (ok(alpha) && ok(beta) && ok(gamma))
        .then_some(alpha * a.value + beta * b.value + gamma * c.value)
}

/// Oracle envelope at `(s, z)` for a fresh boundary curve of resolution `n`.
pub fn oracle_envelope(p: Exponent, s: f64, z: f64, kind: EnvelopeKind, n: usize) -> Result<f64> {
    BoundaryCurve::new(p, n)?.envelope(s, z, kind)
}

/// A `k × k` grid of interior points of the half-disc: `s` at cell
/// midpoints of `[-1, 1]`, `z` at cell midpoints of `[0, √(1 - s²)]`.
pub fn interior_grid(k: usize) -> Vec<(f64, f64)> {
    let mut points = Vec::with_capacity(k * k);
    for i in 0..k {
        let s = -1.0 + (2 * i + 1) as f64 / k as f64;
        let height = (1.0 - s * s).sqrt();
        for j in 0..k {
            points.push((s, (j as f64 + 0.5) / k as f64 * height));
        }
    }
    points
}

/// One row of an oracle-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleRow {
    pub p: f64,
    pub s: f64,
    pub z: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub n: usize,
}

impl OracleRow {
    /// `abs_err / max(1, closed_form)`.
    pub fn scaled_err(&self) -> f64 {
        self.abs_err / self.closed_form.abs().max(1.0)
    }
}

/// Compares the oracle with the closed form at every point, in input order.
pub fn compare(
    p: Exponent,
    n: usize,
    points: &[(f64, f64)],
    kind: EnvelopeKind,
) -> Result<Vec<OracleRow>> {
    let curve = BoundaryCurve::new(p, n)?;
    points
        .par_iter()
        .map(|&(s, z)| {
            let oracle = curve.envelope(s, z, kind)?;
            let closed_form = kind.closed_form(p, &ConeTriple::from_cross_section(s, z)?);
            Ok(OracleRow {
                p: p.value(),
                s,
                z,
                closed_form,
                oracle,
                abs_err: (oracle - closed_form).abs(),
                n,
            })
        })
        .collect()
}

/// Supremum or infimum of `‖f+g‖_p^p` at a fixed triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Sup,
    Inf,
}

/// Best `‖f+g‖_p^p` found over step-function pairs whose triple is `t`.
///
/// Candidates are the three extremal families realized at `t` itself, plus
/// `budget` random mixtures: `t = λ t₁ + (1-λ) t₂` with `t₁` a random
/// perturbation of `t`, each `tᵢ` realized by a randomly chosen family and
/// the two realizations placed side by side on `[0, λ]` and `[λ, 1]`.
/// Every candidate is evaluated by direct quadrature of its step functions
/// and discarded unless its triple matches `t` to `1e-9` relative.
pub fn empirical_b(
    p: Exponent,
    t: &ConeTriple,
    direction: Extremum,
    budget: usize,
    seed: u64,
) -> Result<f64> {
    let kind = match direction {
        Extremum::Sup => EnvelopeKind::Concave,
        Extremum::Inf => EnvelopeKind::Convex,
    };
    let pv = p.value();
    let evaluate = |pair: &FunctionPair| -> Option<f64> {
        let realized = triple_of_pair(&pair.f, &pair.g, pv).ok()?;
        if realized.relative_distance(t) > 1e-9 {
            return None;
        }
        let v = sum_norm(&pair.f, &pair.g, pv);
        v.is_finite().then_some(v)
    };
    let mut best: Option<f64> = None;
    let mut offer = |v: Option<f64>| {
        if let Some(v) = v {
            best = Some(best.map_or(v, |b| kind.better(b, v)));
        }
    };
    for pair in families(p, t) {
        offer(evaluate(&pair));
    }
    let mut rng = substream(seed, 0x6d69_7874);
    for _ in 0..budget {
        if let Some(pair) = random_mixture(p, t, &mut rng) {
            offer(evaluate(&pair));
        }
    }
    best.ok_or_else(|| Error::DegenerateTriple("no pair realizes the triple".into()))
}

fn families(p: Exponent, t: &ConeTriple) -> Vec<FunctionPair> {
    [extremal_f(p, t), extremal_g(p, t)]
        .into_iter()
        .filter_map(Result::ok)
        .collect()
}

fn random_mixture<R: Rng + ?Sized>(
    p: Exponent,
    t: &ConeTriple,
    rng: &mut R,
) -> Option<FunctionPair> {
    let lambda = rng.random_range(0.1..0.9);
    let size = t.max_xy().max(f64::MIN_POSITIVE);
    let mut delta = [
        rng.random_range(-1.0..1.0) * size,
        rng.random_range(-1.0..1.0) * size,
        rng.random_range(-1.0..1.0) * size,
    ];
    let ratio = lambda / (1.0 - lambda);
    for _ in 0..40 {
        let first = ConeTriple::new(t.x() + delta[0], t.y() + delta[1], t.z() + delta[2]);
        let second = ConeTriple::new(
            t.x() - ratio * delta[0],
            t.y() - ratio * delta[1],
            t.z() - ratio * delta[2],
        );
        if let (Ok(a), Ok(b)) = (first, second) {
            let pick = |u: &ConeTriple, rng: &mut R| {
                let mut options = families(p, u);
                if options.is_empty() {
                    return None;
                }
                let i = rng.random_range(0..options.len());
                Some(options.swap_remove(i))
            };
            let left = pick(&a, rng)?;
            let right = pick(&b, rng)?;
            return left.concatenate(&right, lambda).ok();
        }
        for d in &mut delta {
            *d *= 0.5;
        }
    }
    None
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    fn ex(p: f64) -> Exponent {
        Exponent::new(p).unwrap()
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            BoundaryCurve::new(ex(2.0), 8),
            Err(Error::ResolutionTooSmall(8))
        ));
        let curve = BoundaryCurve::new(ex(2.0), 32).unwrap();
        assert!(curve.envelope(0.9, 0.9, EnvelopeKind::Concave).is_err());
        assert!(curve.envelope(0.0, -0.1, EnvelopeKind::Concave).is_err());
        assert_eq!(curve.resolution(), 32 + 8);
        assert_eq!(curve.nodes().count(), curve.resolution());
    }

    #[test]
    fn boundary_nodes_are_reproduced() {
        let p = ex(3.0);
        let curve = BoundaryCurve::new(p, 64).unwrap();
        for node in curve.nodes() {
            for kind in [EnvelopeKind::Concave, EnvelopeKind::Convex] {
                let v = curve.envelope(node.s, node.z, kind).unwrap();
                assert!((v - node.value).abs() < 1e-12, "{node:?} {v}");
            }
        }
        // Between nodes on the arc the error is second order.
        let theta: f64 = 1.0;
        let (s, z) = (theta.cos(), theta.sin());
        let exact = phi_curved(p, 1.0 + s, 1.0 - s);
        let v = curve.envelope(s, z, EnvelopeKind::Concave).unwrap();
        assert!((v - exact).abs() < 10.0 * (PI / 63.0).powi(2));
    }

    #[test]
    fn p2_is_linear() {
        let v = oracle_envelope(ex(2.0), 0.0, 0.5, EnvelopeKind::Concave, 512).unwrap();
        assert!((v - 3.0).abs() < 0.02);
    }

    #[test]
    fn convex_p15_approaches_f() {
        let p = ex(1.5);
        let v = oracle_envelope(p, 0.0, 0.3, EnvelopeKind::Convex, 512).unwrap();
        let f = crate::envelope::eval_f(p, &ConeTriple::new(1.0, 1.0, 0.3).unwrap());
        assert!((v - f).abs() < 1e-4, "{v} {f}");
        assert!(v >= f - 1e-12);
    }

    #[test]
    fn exhaustive_search_dominates_rays() {
        for p in [-1.0, 0.5, 1.5, 3.0] {
            let p = ex(p);
            let curve = BoundaryCurve::new(p, 20).unwrap();
            for &(s, z) in &interior_grid(4) {
                let t = ConeTriple::from_cross_section(s, z).unwrap();
                let rays = curve.envelope(s, z, EnvelopeKind::Concave).unwrap();
                let all = curve
                    .envelope_with(s, z, EnvelopeKind::Concave, Search::Exhaustive)
                    .unwrap();
                assert!(all >= rays - 1e-12);
                assert!(all <= upper_envelope(p, &t) + 1e-12);
                let rays = curve.envelope(s, z, EnvelopeKind::Convex).unwrap();
                let all = curve
                    .envelope_with(s, z, EnvelopeKind::Convex, Search::Exhaustive)
                    .unwrap();
                assert!(all <= rays + 1e-12);
                assert!(all >= lower_envelope(p, &t) - 1e-12);
            }
        }
    }

    #[test]
    fn empirical_b_examples() {
        let t = ConeTriple::new(1.0, 1.0, 0.5).unwrap();
        for dir in [Extremum::Sup, Extremum::Inf] {
            let v = empirical_b(ex(2.0), &t, dir, 20, 1).unwrap();
            assert!((v - 3.0).abs() < 1e-12);
        }
        let v = empirical_b(ex(3.0), &t, Extremum::Sup, 50, 1).unwrap();
        assert!((v - 5.293_735_018_168_470_729).abs() < 1e-6);
        let v = empirical_b(ex(1.5), &t, Extremum::Sup, 50, 1).unwrap();
        assert!((v - (1.0 + std::f64::consts::SQRT_2)).abs() < 1e-6);
    }
}
