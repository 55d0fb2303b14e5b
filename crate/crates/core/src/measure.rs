//! Weighted step functions on `[0, 1]` and their `L^p` quantities.
//!
//! Values live in `[0, +inf]`. Infinite values only make sense for negative
//! exponents, where `(+inf)^p = 0`; this is checked when a norm is taken,
//! not at construction.

use serde::{Deserialize, Serialize};

use crate::cone::ConeTriple;
use crate::envelope::{carlen_bound, carlen_direction, lower_envelope, upper_envelope, Direction};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::pow::{pow_ext, product_pow};

/// A nonnegative piecewise-constant function on `[0, 1]`.
///
/// `values[i]` is taken on `[breakpoints[i], breakpoints[i + 1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "wire::StepFunctionWire", into = "wire::StepFunctionWire")]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidStepFunction(msg));
        if values.is_empty() {
            return invalid("at least one interval is required".into());
        }
        if breakpoints.len() != values.len() + 1 {
            return invalid(format!(
                "{} breakpoints for {} values",
                breakpoints.len(),
                values.len()
            ));
        }
        if breakpoints[0] != 0.0 || breakpoints[breakpoints.len() - 1] != 1.0 {
            return invalid("breakpoints must start at 0 and end at 1".into());
        }
        if let Some(w) = breakpoints
            .windows(2)
            .find(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
        {
            return invalid(format!("breakpoints not strictly increasing at {}", w[1]));
        }
        if let Some(v) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
            return invalid(format!("value {v} is not in [0, +inf]"));
        }
        Ok(StepFunction {
            breakpoints,
            values,
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![value])
    }

    /// `value` on `[start, end)`, zero elsewhere.
    pub fn indicator(start: f64, end: f64, value: f64) -> Result<Self> {
        if !(0.0 <= start && start < end && end <= 1.0) {
            return Err(Error::InvalidStepFunction(format!(
                "indicator interval [{start}, {end}) not inside [0, 1]"
            )));
        }
        Self::from_blocks(&[(start, 0.0), (end, value), (1.0, 0.0)])
    }

    /// Builds a function from `(right endpoint, value)` blocks in increasing
    /// order. Blocks of zero length are dropped; the last endpoint must be 1.
    pub fn from_blocks(blocks: &[(f64, f64)]) -> Result<Self> {
        let mut breakpoints = vec![0.0];
        let mut values = Vec::with_capacity(blocks.len());
        for &(end, value) in blocks {
            let last = breakpoints[breakpoints.len() - 1];
            if end > last {
                breakpoints.push(end);
                values.push(value);
            } else if end < last {
                return Err(Error::InvalidStepFunction(format!(
                    "block endpoint {end} precedes {last}"
                )));
            }
        }
        Self::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(length, value)` for each interval.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[1] - w[0], v))
    }

    /// Value at `t ∈ [0, 1]`; the last interval is closed on the right.
    pub fn value_at(&self, t: f64) -> f64 {
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }

    /// Splits interval `index` at `at`, keeping the value on both halves.
    pub fn split(&self, index: usize, at: f64) -> Result<Self> {
        if index >= self.values.len() {
            return Err(Error::InvalidStepFunction(format!(
                "no interval with index {index}"
            )));
        }
        let mut breakpoints = self.breakpoints.clone();
        let mut values = self.values.clone();
        breakpoints.insert(index + 1, at);
        values.insert(index + 1, values[index]);
        Self::new(breakpoints, values)
    }

    /// The function `s ↦ self((s - start)/(end - start))` compressed onto
    /// `[start, end]`, returned as `(right endpoint, value)` blocks.
    pub(crate) fn compressed_blocks(&self, start: f64, end: f64) -> Vec<(f64, f64)> {
        let width = end - start;
        self.breakpoints[1..]
            .iter()
            .zip(&self.values)
            .map(|(&b, &v)| {
                let e = if b == 1.0 { end } else { start + width * b };
                (e, v)
            })
            .collect()
    }

    /// `∫ f^p`, the p-th power of the `L^p` norm.
    pub fn pth_power_norm(&self, p: f64) -> f64 {
        self.pieces().map(|(len, v)| len * pow_ext(v, p)).sum()
    }
}

/// Common refinement of several step functions: `(length, values)` per
/// interval, values in input order. Breakpoints are merged exactly.
pub fn common_pieces(functions: &[&StepFunction]) -> Vec<(f64, Vec<f64>)> {
    let mut cuts: Vec<f64> = functions
        .iter()
        .flat_map(|f| f.breakpoints.iter().copied())
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut cursors = vec![0usize; functions.len()];
    let mut out = Vec::with_capacity(cuts.len().saturating_sub(1));
    for w in cuts.windows(2) {
        let values = functions
            .iter()
            .zip(cursors.iter_mut())
            .map(|(f, c)| {
                while f.breakpoints[*c + 1] <= w[0] {
                    *c += 1;
                }
                f.values[*c]
            })
            .collect();
        out.push((w[1] - w[0], values));
    }
    out
}

fn pair_pieces(f: &StepFunction, g: &StepFunction) -> Vec<(f64, f64, f64)> {
    common_pieces(&[f, g])
        .into_iter()
        .map(|(len, v)| (len, v[0], v[1]))
        .collect()
}

pub fn pth_power_norm(f: &StepFunction, p: f64) -> f64 {
    f.pth_power_norm(p)
}

/// `∫ (fg)^(p/2)`, with `(fg)^(p/2) = 0` where a factor vanishes (`p > 0`)
/// or is infinite (`p < 0`).
pub fn overlap_norm(f: &StepFunction, g: &StepFunction, p: f64) -> f64 {
    pair_pieces(f, g)
        .into_iter()
        .map(|(len, a, b)| len * product_pow(a, b, 0.5 * p))
        .sum()
}

/// `∫ (f + g)^p`.
pub fn sum_norm(f: &StepFunction, g: &StepFunction, p: f64) -> f64 {
    pair_pieces(f, g)
        .into_iter()
        .map(|(len, a, b)| len * pow_ext(a + b, p))
        .sum()
}

/// `(‖f‖_p^p, ‖g‖_p^p, ‖fg‖_{p/2}^{p/2})`.
pub fn triple_of_pair(f: &StepFunction, g: &StepFunction, p: f64) -> Result<ConeTriple> {
    let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
    for (len, a, b) in pair_pieces(f, g) {
        x += len * pow_ext(a, p);
        y += len * pow_ext(b, p);
        z += len * product_pow(a, b, 0.5 * p);
    }
    for (quantity, value) in [
        ("||f||_p^p", x),
        ("||g||_p^p", y),
        ("||fg||_{p/2}^{p/2}", z),
    ] {
        if !value.is_finite() {
            return Err(Error::NonFiniteNorm { quantity, p });
        }
    }
    ConeTriple::new(x, y, z)
}

/// Signed slacks of each bound against the actual value, relative to
/// `max(1, |actual|)`. Nonnegative means the bound holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Margins {
    pub upper: f64,
    pub lower: f64,
    pub carlen: f64,
}

impl Margins {
    pub fn worst(&self) -> f64 {
        self.upper.min(self.lower).min(self.carlen)
    }
}

/// Every applicable bound at a triple, optionally compared with a realized
/// `‖f+g‖_p^p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub p: f64,
    pub triple: ConeTriple,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<f64>,
    pub upper: f64,
    pub lower: f64,
    pub carlen: f64,
    pub carlen_direction: Direction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margins: Option<Margins>,
}

impl BoundReport {
    /// Bounds at `triple` without a realized value.
    pub fn at_triple(p: Exponent, triple: ConeTriple) -> Self {
        BoundReport {
            p: p.value(),
            triple,
            actual: None,
            upper: upper_envelope(p, &triple),
            lower: lower_envelope(p, &triple),
            carlen: carlen_bound(p, &triple),
            carlen_direction: carlen_direction(p),
            margins: None,
        }
    }

    pub fn with_actual(p: Exponent, triple: ConeTriple, actual: f64) -> Self {
        let mut report = Self::at_triple(p, triple);
        let scale = actual.abs().max(1.0);
        let carlen = match report.carlen_direction {
            Direction::Upper => report.carlen - actual,
            Direction::Lower => actual - report.carlen,
        };
        report.actual = Some(actual);
        report.margins = Some(Margins {
            upper: (report.upper - actual) / scale,
            lower: (actual - report.lower) / scale,
            carlen: carlen / scale,
        });
        report
    }

    /// Whether all margins are at least `-tol`. Reports without an actual
    /// value always pass.
    pub fn holds(&self, tol: f64) -> bool {
        self.margins.is_none_or(|m| m.worst() >= -tol)
    }
}

/// Computes `‖f+g‖_p^p` and compares it with every bound at the pair's triple.
pub fn sum_and_report(f: &StepFunction, g: &StepFunction, p: Exponent) -> Result<BoundReport> {
    let triple = triple_of_pair(f, g, p.value())?;
    let actual = sum_norm(f, g, p.value());
    if !actual.is_finite() {
        return Err(Error::NonFiniteNorm {
            quantity: "||f+g||_p^p",
            p: p.value(),
        });
    }
    Ok(BoundReport::with_actual(p, triple, actual))
}

/// `‖Σ f_j‖_p^p` together with `Σ‖f_j‖_p^p` and `Σ_{i<j}‖f_i f_j‖_{p/2}^{p/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyNorms {
    pub actual: f64,
    pub moments: f64,
    pub overlaps: f64,
}

pub fn family_norms(functions: &[StepFunction], p: f64) -> FamilyNorms {
    let refs: Vec<&StepFunction> = functions.iter().collect();
    let mut norms = FamilyNorms {
        actual: 0.0,
        moments: 0.0,
        overlaps: 0.0,
    };
    for (len, values) in common_pieces(&refs) {
        let total: f64 = values.iter().sum();
        norms.actual += len * pow_ext(total, p);
        for (i, &a) in values.iter().enumerate() {
            norms.moments += len * pow_ext(a, p);
            for &b in &values[i + 1..] {
                norms.overlaps += len * product_pow(a, b, 0.5 * p);
            }
        }
    }
    norms
}

mod wire {
    use serde::de::{self, Deserializer};
    use serde::ser::Serializer;
    use serde::{Deserialize, Serialize};

    use super::StepFunction;

    /// A value that is either a number or the string `"inf"`.
    #[derive(Debug, Clone, Copy)]
    pub struct ExtValue(pub f64);

    impl Serialize for ExtValue {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            if self.0 == f64::INFINITY {
                s.serialize_str("inf")
            } else {
                s.serialize_f64(self.0)
            }
        }
    }

    impl<'de> Deserialize<'de> for ExtValue {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            #[derive(Deserialize)]
            #[serde(untagged)]
            enum Raw {
                Num(f64),
                Str(String),
            }
            match Raw::deserialize(d)? {
                Raw::Num(v) => Ok(ExtValue(v)),
                Raw::Str(s) if s == "inf" => Ok(ExtValue(f64::INFINITY)),
                Raw::Str(s) => Err(de::Error::custom(format!(
                    "expected a number or \"inf\", got {s:?}"
                ))),
            }
        }
    }

    #[derive(Serialize, Deserialize)]
    #[serde(deny_unknown_fields)]
    pub struct StepFunctionWire {
        breakpoints: Vec<f64>,
        values: Vec<ExtValue>,
    }

    impl TryFrom<StepFunctionWire> for StepFunction {
        type Error = crate::error::Error;

        fn try_from(w: StepFunctionWire) -> Result<Self, Self::Error> {
            StepFunction::new(w.breakpoints, w.values.into_iter().map(|v| v.0).collect())
        }
    }

    impl From<StepFunction> for StepFunctionWire {
        fn from(f: StepFunction) -> Self {
            StepFunctionWire {
                breakpoints: f.breakpoints,
                values: f.values.into_iter().map(ExtValue).collect(),
            }
        }
    }
}
