//! Segment integrators and the piecewise driver.
//!
//! Four deterministic rules share one grid: the explicit three-point
//! classical stepper on [0, a1], the Newton-interpolation fractional schemes
//! (power-law, Mittag-Leffler, exponential kernels) on [a1, a2], and the
//! classical rule plus multiplicative Ito noise on [a2, a].
//! [`solve_piecewise`] chains them, handing each segment's final state to
//! the next as its initial condition.

mod classical;
mod driver;
mod fractional;
mod stochastic;

pub use classical::{classical_step_sequence, euler_step_sequence};
pub use driver::{solve_piecewise, solve_piecewise_with, SolveError, SolveOptions};
pub use fractional::{
    abc_step_sequence, caputo_step_sequence, cf_step_sequence, cf_step_sequence_with,
};
pub use stochastic::stochastic_step_sequence;

use thiserror::Error;

use crate::field::VectorField;

/// States above this infinity-norm abort a segment with [`StepError::BlowUp`]
/// instead of propagating NaN/Inf through the memory sums.
pub const DEFAULT_BLOW_UP_BOUND: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("state norm {norm:.6e} exceeded the blow-up bound {bound:.1e} at segment step {step}")]
    BlowUp { step: usize, norm: f64, bound: f64 },
    #[error("segment needs at least 3 steps, got {0}")]
    TooFewSteps(usize),
    #[error("invalid stepper input: {0}")]
    Invalid(String),
}

/// Consecutive nodes retained for interpolation: (t_j, U_j, e_j) triples
/// plus the grid index where the segment's memory starts. Fractional
/// segments anchor their memory at the first crossover point, so the
/// driver passes `origin_index = k1` there.
#[derive(Debug, Clone)]
pub struct SegmentHistory {
    pub origin_index: usize,
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub rhs_values: Vec<Vec<f64>>,
}

impl SegmentHistory {
    pub fn new(origin_index: usize, field: &VectorField, t0: f64, u0: Vec<f64>) -> Self {
        let e0 = field.eval(t0, &u0);
        SegmentHistory {
            origin_index,
            times: vec![t0],
            states: vec![u0],
            rhs_values: vec![e0],
        }
    }

    pub fn push(&mut self, t: f64, state: Vec<f64>, rhs: Vec<f64>) {
        self.times.push(t);
        self.states.push(state);
        self.rhs_values.push(rhs);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Divided-difference coefficients of the quadratic Newton polynomial
/// through (t_{j-2}, t_{j-1}, t_j), per component:
///
/// c0 = e_{j-1},
/// c1 = (e_{j-1} - e_{j-2}) / dt,
/// c2 = (e_j - 2 e_{j-1} + e_{j-2}) / (2 dt^2).
pub fn newton_interpolant_coeffs(
    e_jm2: &[f64],
    e_jm1: &[f64],
    e_j: &[f64],
    dt: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    debug_assert!(dt > 0.0);
    let c0 = e_jm1.to_vec();
    let c1 = e_jm1
        .iter()
        .zip(e_jm2)
        .map(|(a, b)| (a - b) / dt)
        .collect();
    let c2 = e_j
        .iter()
        .zip(e_jm1.iter().zip(e_jm2))
        .map(|(j, (jm1, jm2))| (j - 2.0 * jm1 + jm2) / (2.0 * dt * dt))
        .collect();
    (c0, c1, c2)
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

pub(crate) fn check_norm(state: &[f64], step: usize, bound: f64) -> Result<(), StepError> {
    // f64::max ignores NaN operands, so test finiteness component-wise.
    if !state.iter().all(|x| x.is_finite()) {
        return Err(StepError::BlowUp {
            step,
            norm: f64::NAN,
            bound,
        });
    }
    let norm = inf_norm(state);
    if norm > bound {
        return Err(StepError::BlowUp { step, norm, bound });
    }
    Ok(())
}
