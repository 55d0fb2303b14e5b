//! Seeded random generators for step functions and cone points.
//!
//! All randomness flows from a single `u64` seed. Independent sub-streams
//! are derived by fixed splitting with [`substream`], so a batch produces the
//! same samples regardless of which thread runs it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::ConeTriple;
use crate::measure::StepFunction;

pub type SampleRng = ChaCha8Rng;

/// The generator for stream `stream` of `seed`.
pub fn substream(seed: u64, stream: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Probability that an atom is replaced by a degenerate value.
pub const PLANT_PROBABILITY: f64 = 0.1;

/// A random step function with 1 to 8 atoms and values `exp(U[-3, 3])`.
///
/// Each atom is independently replaced, with probability
/// [`PLANT_PROBABILITY`], by `0` when `p > 0` or `+inf` when `p < 0`.
pub fn random_step_function<R: Rng + ?Sized>(rng: &mut R, p: f64) -> StepFunction {
    let atoms = rng.random_range(1..=8usize);
    let mut cuts: Vec<f64> = (0..atoms - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut breakpoints = Vec::with_capacity(atoms + 1);
    breakpoints.push(0.0);
    for c in cuts {
        if c > breakpoints[breakpoints.len() - 1] && c < 1.0 {
            breakpoints.push(c);
        }
    }
    breakpoints.push(1.0);
    let planted = if p > 0.0 { 0.0 } else { f64::INFINITY };
    let values = (0..breakpoints.len() - 1)
        .map(|_| {
            if rng.random::<f64>() < PLANT_PROBABILITY {
                planted
            } else {
                rng.random_range(-3.0..=3.0f64).exp()
            }
        })
        .collect();
    StepFunction::new(breakpoints, values).expect("generated breakpoints are valid")
}

/// A uniformly random point of the cross-section half-disc, as `(s, z)`.
pub fn random_disc_point<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    loop {
        let s = rng.random_range(-1.0..=1.0f64);
        let z = rng.random::<f64>();
        if s * s + z * z <= 1.0 {
            return (s, z);
        }
    }
}

/// A random cone point: uniform direction in the half-disc, log-uniform
/// scale in `[e^-3, e^3]`, with occasional boundary and degenerate strata.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R) -> ConeTriple {
    let (s, z) = random_disc_point(rng);
    let scale = rng.random_range(-3.0..=3.0f64).exp();
    let roll = rng.random::<f64>();
    let z = if roll < 0.05 {
        0.0
    } else if roll < 0.10 {
        (1.0 - s * s).sqrt()
    } else if roll < 0.15 {
        z.min(1.0 - s.abs())
    } else {
        z
    };
    let x = scale * (1.0 + s);
    let y = scale * (1.0 - s);
    ConeTriple::new(x, y, (scale * z).min((x * y).sqrt())).expect("sampled point lies in the cone")
}
