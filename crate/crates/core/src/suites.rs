//! Seeded invariant suites shared by the command-line tool and the tests.
//!
//! Each suite returns a [`SuiteReport`] with a check count, the number of
//! violations and the worst signed margin (negative means violated).

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    derivative_discrepancy, expected_crossing, sign_table, torsion_sign_changes, SignCheck,
    SignClaim, TorsionCrossings,
};
use crate::envelope::{pointwise_sum, sum_bound, Direction, Sides};
use crate::error::Result;
use crate::exponent::Exponent;
use crate::measure::{family_norms, sum_and_report};
use crate::oracle::{compare, interior_grid, EnvelopeKind};
use crate::sampling::{random_step_function, substream};

/// Exponents exercised by the pair and oracle suites.
pub const P_GRID: [f64; 11] = [-2.0, -1.0, -0.5, 0.5, 1.0, 1.3, 1.5, 1.7, 2.0, 3.0, 5.0];
/// Exponents of the sign tables.
pub const SIGN_TABLE_P: [f64; 8] = [-2.0, -0.5, 0.5, 0.9, 1.3, 1.7, 2.5, 4.0];
/// Exponents of the torsion check.
pub const TORSION_P: [f64; 4] = [-1.0, 0.5, 1.5, 3.0];
/// Upper-bound exponents of the many-term suite.
pub const SUM_UPPER_P: [f64; 3] = [1.0, 1.5, 2.0];
/// Lower-bound exponents of the many-term suite.
pub const SUM_LOWER_P: [f64; 4] = [0.5, 1.0, 2.0, 3.0];

/// Relative slack for norm inequalities.
pub const SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: usize,
    pub violations: usize,
    pub skipped: usize,
    pub worst_margin: f64,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport {
            suite,
            worst_margin: f64::INFINITY,
            ..Default::default()
        }
    }

    fn record(&mut self, margin: f64, threshold: f64) {
        self.checks += 1;
        self.worst_margin = self.worst_margin.min(margin);
        if margin.is_nan() || margin < threshold {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Random pairs of step functions, cycling through [`P_GRID`]. Sample `i`
/// draws from stream `i` of `seed`. Pairs whose norms are infinite are
/// counted as skipped.
pub fn pair_suite(seed: u64, samples: usize) -> SuiteReport {
    let margins: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let p = Exponent::new(P_GRID[i % P_GRID.len()]).expect("grid exponents are valid");
            let mut rng = substream(seed, i as u64);
            let f = random_step_function(&mut rng, p.value());
            let g = random_step_function(&mut rng, p.value());
            let report = sum_and_report(&f, &g, p).ok()?;
            report.margins.map(|m| m.worst())
        })
        .collect();
    let mut report = SuiteReport::new("pair");
    for m in margins {
        match m {
            Some(m) => report.record(m, -SLACK),
            None => report.skipped += 1,
        }
    }
    report
}

fn sum_margin(actual: f64, bound: f64, direction: Direction) -> f64 {
    let gap = match direction {
        Direction::Upper => bound - actual,
        Direction::Lower => actual - bound,
    };
    gap / actual.abs().max(1.0)
}

/// Families of 3 to 8 random functions against the many-term bound in its
/// valid direction, plus the three-constant failure at negative `p`.
pub fn sum_suite(seed: u64, samples: usize, negative: bool) -> SuiteReport {
    let mut cases: Vec<(f64, Direction)> = SUM_UPPER_P
        .iter()
        .map(|&p| (p, Direction::Upper))
        .chain(SUM_LOWER_P.iter().map(|&p| (p, Direction::Lower)))
        .collect();
    cases.sort_by(|a, b| a.0.total_cmp(&b.0));
    let jobs: Vec<(usize, f64, Direction)> = (0..samples)
        .map(|i| {
            let (p, d) = cases[i % cases.len()];
            (i, p, d)
        })
        .collect();
    let margins: Vec<f64> = jobs
        .par_iter()
        .map(|&(i, p, direction)| {
            let mut rng = substream(seed, i as u64);
            let n = 3 + i / cases.len() % 6;
            let family: Vec<_> = (0..n).map(|_| random_step_function(&mut rng, p)).collect();
            let norms = family_norms(&family, p);
            let bound = sum_bound(norms.moments, norms.overlaps, Exponent::new(p).unwrap())
                .expect("positive exponents");
            sum_margin(norms.actual, bound, direction)
        })
        .collect();
    let mut report = SuiteReport::new("sum");
    for m in margins {
        report.record(m, -SLACK);
    }
    if negative {
        let sides = counterexample();
        report.notes.push(format!(
            "p = -1, three unit constants: lhs {:.16e} rhs {:.16e} (bound fails)",
            sides.lhs, sides.rhs
        ));
    }
    report
}

/// `(1+1+1)^-1` against `3 + (2^-1 - 2)·3`.
pub fn counterexample() -> Sides {
    pointwise_sum(&[1.0, 1.0, 1.0], Exponent::new(-1.0).expect("valid"))
}

fn sign_margin(check: &SignCheck) -> f64 {
    match check.claim {
        SignClaim::NonPositive => -check.max,
        SignClaim::NonNegative => check.min,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionRow {
    pub p: f64,
    pub crossings: TorsionCrossings,
    pub ok: bool,
}

/// Sign tables on `points`-sample grids, derivative checks and torsion.
pub fn analysis_suite(points: usize) -> Result<(SuiteReport, Vec<SignCheck>, Vec<TorsionRow>)> {
    let mut report = SuiteReport::new("analysis");
    let mut table = Vec::new();
    for &p in &SIGN_TABLE_P {
        let p = Exponent::new(p)?;
        for check in sign_table(p, points) {
            report.checks += check.samples;
            report.violations += check.violations;
            report.worst_margin = report.worst_margin.min(sign_margin(&check));
            table.push(check);
        }
        let discrepancy = derivative_discrepancy(p, &[0.2, 0.5, 0.9]);
        report.record(1e-6 - discrepancy, 0.0);
    }
    let mut torsion = Vec::new();
    for &p in &TORSION_P {
        let p = Exponent::new(p)?;
        let crossings = torsion_sign_changes(p, 256)?;
        let ok = crossings.count == 1
            && crossings.direction == Some(expected_crossing(p))
            && crossings.location.abs() <= 1e-2;
        report.record(
            if ok {
                1e-2 - crossings.location.abs()
            } else {
                -1.0
            },
            0.0,
        );
        torsion.push(TorsionRow {
            p: p.value(),
            crossings,
            ok,
        });
    }
    Ok((report, table, torsion))
}

/// Oracle against closed form on the `20 × 20` interior grid, both kinds,
/// every exponent of [`P_GRID`]. The margin is `2e-2` minus the scaled
/// error; a concave estimate above (convex below) the closed form by more
/// than `1e-12` relative also counts as a violation.
pub fn oracle_suite(n: usize) -> Result<SuiteReport> {
    let points = interior_grid(20);
    let mut report = SuiteReport::new("oracle");
    for &p in &P_GRID {
        let p = Exponent::new(p)?;
        for kind in [EnvelopeKind::Concave, EnvelopeKind::Convex] {
            let rows = compare(p, n, &points, kind)?;
            let mut worst: f64 = 0.0;
            for row in &rows {
                let scale = row.closed_form.abs().max(1.0);
                let overshoot = match kind {
                    EnvelopeKind::Concave => row.oracle - row.closed_form,
                    EnvelopeKind::Convex => row.closed_form - row.oracle,
                };
                report.record(2e-2 - row.scaled_err(), 0.0);
                if overshoot > 1e-12 * scale {
                    report.violations += 1;
                }
                worst = worst.max(row.scaled_err());
            }
            report.notes.push(format!(
                "p = {} {:?}: max scaled error {:.16e}",
                p.value(),
                kind,
                worst
            ));
        }
    }
    Ok(report)
}
