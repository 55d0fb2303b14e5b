//! Sharp envelopes for `‖f + g‖_p^p` in terms of `‖f‖_p^p`, `‖g‖_p^p` and
//! the overlap `‖fg‖_{p/2}^{p/2}`.
//!
//! The crate computes the closed-form envelopes `F_p` and `G_p` on the cone
//! `Ω = {x, y ≥ 0, 0 ≤ z ≤ √(xy)}`, evaluates the norms of step functions,
//! builds the pairs of step functions that attain the envelopes, and
//! certifies the envelopes numerically.
//!
//! ```
//! use lp_envelopes::{upper_envelope, lower_envelope, ConeTriple, Exponent};
//!
//! let p = Exponent::new(2.0)?;
//! let t = ConeTriple::new(1.0, 1.0, 0.5)?;
//! assert_eq!(upper_envelope(p, &t), 3.0);
//! assert_eq!(lower_envelope(p, &t), 3.0);
//! # Ok::<(), lp_envelopes::Error>(())
//! ```

pub mod analysis;
pub mod cone;
pub mod envelope;
pub mod error;
pub mod exponent;
pub mod extremal;
pub mod measure;
pub mod oracle;
pub mod pow;
pub mod sampling;
pub mod suites;

pub use cone::{ConeTriple, DerivedRatios};
pub use envelope::{
    carlen_bound, eval_f, eval_g, lower_envelope, upper_envelope, Direction, Ordering, Sides,
};
pub use error::{Error, Result};
pub use exponent::{Exponent, Regime};
pub use extremal::{extremal_f, extremal_g, FunctionPair};
pub use measure::{sum_and_report, triple_of_pair, BoundReport, StepFunction};
pub use oracle::{oracle_envelope, BoundaryCurve, EnvelopeKind};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/cone.md")]
    pub mod cone {}
    #[doc = include_str!("../../../book/src/envelopes.md")]
    pub mod envelopes {}
    #[doc = include_str!("../../../book/src/step-functions.md")]
    pub mod step_functions {}
    #[doc = include_str!("../../../book/src/extremal.md")]
    pub mod extremal {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    pub mod analysis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
