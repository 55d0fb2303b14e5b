//! Points of the cone `Ω = {x, y ≥ 0, 0 ≤ z ≤ √(xy)}`.
//!
//! A [`ConeTriple`] stores `(‖f‖_p^p, ‖g‖_p^p, ‖fg‖_{p/2}^{p/2})`. All
//! envelope questions are one-homogeneous, so the half-disc cross-section
//! `D = Ω ∩ {x + y = 2}`, parametrized as `(1 + s, 1 - s, z)` with
//! `s² + z² ≤ 1`, carries all of the geometry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed above `√(xy)` before a triple is rejected.
pub const EPS_CS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeTriple {
    x: f64,
    y: f64,
    z: f64,
}

impl ConeTriple {
    /// Validates `(x, y, z)`, clamping `z` down to `√(xy)` when it exceeds
    /// the bound by at most [`EPS_CS`] relative.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        for (name, value) in [("x", x), ("y", y), ("z", z)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidCoordinate { name, value });
            }
        }
        let bound = (x * y).sqrt();
        let z = if z <= bound {
            z
        } else if z <= bound * (1.0 + EPS_CS) {
            bound
        } else {
            return Err(Error::OutsideCone { z, bound });
        };
        // -0.0 is normalized so that symmetry checks compare bitwise.
        Ok(ConeTriple {
            x: x + 0.0,
            y: y + 0.0,
            z: z + 0.0,
        })
    }

    /// The point `(1 + s, 1 - s, z)` of the cross-section `D`.
    pub fn from_cross_section(s: f64, z: f64) -> Result<Self> {
        if !(s.is_finite() && z.is_finite()) || s.abs() > 1.0 || z < 0.0 {
            return Err(Error::OutsideDomain { s, z });
        }
        Self::new(1.0 + s, 1.0 - s, z)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }

    #[inline]
    pub fn sum(&self) -> f64 {
        self.x + self.y
    }

    #[inline]
    pub fn min_xy(&self) -> f64 {
        self.x.min(self.y)
    }

    #[inline]
    pub fn max_xy(&self) -> f64 {
        self.x.max(self.y)
    }

    /// The triple with `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        ConeTriple {
            x: self.y,
            y: self.x,
            z: self.z,
        }
    }

    /// `λ·(x, y, z)` for `λ ≥ 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(lambda * self.x, lambda * self.y, lambda * self.z)
    }

    /// Whether `z = √(xy)` (the curved part of `∂Ω`) up to `rel_tol`.
    pub fn on_curved_boundary(&self, rel_tol: f64) -> bool {
        let bound = (self.x * self.y).sqrt();
        bound - self.z <= rel_tol * bound.max(f64::MIN_POSITIVE)
    }

    /// Projection onto the cross-section `D`: `(s, z)` with `x + y = 2`.
    /// Returns `None` at the origin.
    pub fn cross_section(&self) -> Option<(f64, f64)> {
        let sum = self.sum();
        if sum == 0.0 {
            return None;
        }
        Some(((self.x - self.y) / sum, 2.0 * self.z / sum))
    }

    pub fn ratios(&self) -> DerivedRatios {
        DerivedRatios::of(self)
    }

    /// Largest componentwise deviation from `other`, relative to the size of
    /// the triple (`max(x, y)`, or 1 at the origin).
    pub fn relative_distance(&self, other: &ConeTriple) -> f64 {
        let scale = self.max_xy().max(other.max_xy());
        let scale = if scale > 0.0 { scale } else { 1.0 };
        let dx = (self.x - other.x).abs();
        let dy = (self.y - other.y).abs();
        let dz = (self.z - other.z).abs();
        dx.max(dy).max(dz) / scale
    }
}

/// Scale-free ratios of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedRatios {
    /// `Γ = 2z / (x + y)`; zero at the origin.
    pub gamma: f64,
    /// `min{x/z, y/z, 1}`; one when `z = 0`.
    pub v: f64,
    /// Same quantity as `gamma`, under the name used by the envelope formulas.
    pub w: f64,
    /// `min{x, y, z} / z`; one when `z = 0`.
    pub c_p: f64,
}

impl DerivedRatios {
    pub fn of(t: &ConeTriple) -> Self {
        let sum = t.sum();
        let w = if sum == 0.0 {
            0.0
        } else {
            (2.0 * t.z / sum).min(1.0)
        };
        let v = if t.z == 0.0 {
            1.0
        } else {
            (t.min_xy() / t.z).min(1.0)
        };
        DerivedRatios {
            gamma: w,
            v,
            w,
            c_p: v,
        }
    }
}
