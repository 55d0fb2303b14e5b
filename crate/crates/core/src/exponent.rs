//! Validated exponents and their envelope regimes.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Smallest admissible `|p|`. Closer to zero, `v^(1/p)` overflows.
pub const P_MIN: f64 = 1e-3;

/// Which of the two candidate envelopes is the concave one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// `p` in `(0, 1] ∪ [2, ∞)`: `F_p` is the concave envelope, `G_p` the convex one.
    ConcaveF,
    /// `p` in `(-∞, 0) ∪ (1, 2)`: `G_p` is the concave envelope, `F_p` the convex one.
    ConcaveG,
}

/// A nonzero real exponent together with its regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponent {
    p: f64,
    regime: Regime,
}

impl Exponent {
    /// Classifies `p` with the default cutoff [`P_MIN`].
    pub fn new(p: f64) -> Result<Self> {
        Self::with_min(p, P_MIN)
    }

    pub fn with_min(p: f64, p_min: f64) -> Result<Self> {
        if !p.is_finite() {
            return Err(Error::NonFiniteExponent(p));
        }
        if p == 0.0 {
            return Err(Error::ZeroExponent);
        }
        if p.abs() < p_min {
            return Err(Error::ExponentTooSmall { p, p_min });
        }
        let regime = if (p > 0.0 && p <= 1.0) || p >= 2.0 {
            Regime::ConcaveF
        } else {
            Regime::ConcaveG
        };
        Ok(Exponent { p, regime })
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.p
    }

    #[inline]
    pub fn regime(self) -> Regime {
        self.regime
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.p > 0.0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.p == 1.0
    }

    #[inline]
    pub fn is_two(self) -> bool {
        self.p == 2.0
    }

    /// `p ∈ {1, 2}`, where both envelopes coincide.
    #[inline]
    pub fn is_boundary(self) -> bool {
        self.is_one() || self.is_two()
    }

    /// `p ∈ [1, 2]`, the range where the many-function upper bound holds.
    #[inline]
    pub fn in_unit_to_two(self) -> bool {
        (1.0..=2.0).contains(&self.p)
    }

    #[inline]
    pub fn recip(self) -> f64 {
        1.0 / self.p
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Exponent::new(p)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p = {}", self.p)
    }
}

/// Shorthand for [`Exponent::new`].
pub fn classify(p: f64) -> Result<Exponent> {
    Exponent::new(p)
}
