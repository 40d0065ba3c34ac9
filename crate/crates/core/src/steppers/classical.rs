//! Explicit three-point classical rule with its startup ladder.
//!
//! The main rule is the explicit Adams three-step
//! U^{n+1} = U^n + (dt/12)(23 e_n - 16 e_{n-1} + 5 e_{n-2}).
//! The first two steps have no three-point stencil; step 1 uses a Heun
//! (trapezoidal predictor-corrector) step and step 2 the two-point rule
//! U^2 = U^1 + (dt/2)(3 e^1 - e^0), which keeps the startup's one-time
//! local errors at the order of the main rule.
//!
//! States accumulate as U^n = U^0 + S_n with S_n the running increment sum,
//! mirroring the summed form the other segments reuse; the exponential-decay
//! scheme at alpha = 1 and the stochastic stepper at sigma = 0 then agree
//! with this stepper bit for bit.

use crate::field::VectorField;
use crate::steppers::{check_norm, SegmentHistory, StepError, DEFAULT_BLOW_UP_BOUND};

/// Drift machinery shared by the classical, exponential-kernel, and
/// stochastic steppers: startup-aware increments over a [`SegmentHistory`].
pub(crate) struct DriftEngine<'f> {
    field: &'f VectorField,
    t0: f64,
    dt: f64,
    pub history: SegmentHistory,
}

impl<'f> DriftEngine<'f> {
    pub fn new(
        field: &'f VectorField,
        origin_index: usize,
        t0: f64,
        dt: f64,
        u0: Vec<f64>,
    ) -> Self {
        let history = SegmentHistory::new(origin_index, field, t0, u0);
        DriftEngine {
            field,
            t0,
            dt,
            history,
        }
    }

    pub fn time_at(&self, m: usize) -> f64 {
        self.t0 + m as f64 * self.dt
    }

    /// Increment advancing U^{m-1} to U^m from known history.
    pub fn stage_increment(&self, m: usize) -> Vec<f64> {
        let dt = self.dt;
        let es = &self.history.rhs_values;
        let k = self.field.dimension();
        let mut inc = vec![0.0; k];
        match m {
            1 => {
                // Heun: average of the slope at t0 and at the Euler point.
                let u0 = &self.history.states[0];
                let e0 = &es[0];
                let euler: Vec<f64> = u0.iter().zip(e0).map(|(u, e)| u + dt * e).collect();
                let e_star = self.field.eval(self.t0 + dt, &euler);
                for i in 0..k {
                    inc[i] = dt / 2.0 * (e0[i] + e_star[i]);
                }
            }
            2 => {
                for i in 0..k {
                    inc[i] = dt / 2.0 * (3.0 * es[1][i] - es[0][i]);
                }
            }
            _ => {
                for i in 0..k {
                    inc[i] = dt / 12.0
                        * (23.0 * es[m - 1][i] - 16.0 * es[m - 2][i] + 5.0 * es[m - 3][i]);
                }
            }
        }
        inc
    }

    /// Explicit predictor for the state at node m (used by the fractional
    /// schemes wherever the node being computed appears on the right).
    pub fn predictor_state(&self, m: usize) -> Vec<f64> {
        let inc = self.stage_increment(m);
        self.history.states[m - 1]
            .iter()
            .zip(&inc)
            .map(|(u, d)| u + d)
            .collect()
    }

    pub fn record(&mut self, m: usize, state: Vec<f64>) {
        let t = self.time_at(m);
        let rhs = self.field.eval(t, &state);
        self.history.push(t, state, rhs);
    }
}

/// Advance `n_steps` of the classical rule from `u_start` at `t_start`.
/// Returns all n_steps + 1 states including the start node.
pub fn classical_step_sequence(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    classical_with_bound(field, u_start, t_start, n_steps, dt, DEFAULT_BLOW_UP_BOUND)
}

pub(crate) fn classical_with_bound(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    bound: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    validate_inputs(field, u_start, n_steps, dt)?;
    let k = field.dimension();
    let mut engine = DriftEngine::new(field, 0, t_start, dt, u_start.to_vec());
    let mut sum = vec![0.0f64; k];
    for m in 1..=n_steps {
        let inc = engine.stage_increment(m);
        for i in 0..k {
            sum[i] += inc[i];
        }
        let state: Vec<f64> = u_start.iter().zip(&sum).map(|(u, s)| u + s).collect();
        check_norm(&state, m, bound)?;
        engine.record(m, state);
    }
    Ok(engine.history.states)
}

/// Plain forward Euler over the same interface; the first-order baseline
/// the convergence-order harness measures against.
pub fn euler_step_sequence(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    validate_inputs(field, u_start, n_steps, dt)?;
    let k = field.dimension();
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(u_start.to_vec());
    let mut u = u_start.to_vec();
    for m in 1..=n_steps {
        let t = t_start + (m - 1) as f64 * dt;
        let e = field.eval(t, &u);
        for i in 0..k {
            u[i] += dt * e[i];
        }
        check_norm(&u, m, DEFAULT_BLOW_UP_BOUND)?;
        states.push(u.clone());
    }
    Ok(states)
}

pub(crate) fn validate_inputs(
    field: &VectorField,
    u_start: &[f64],
    n_steps: usize,
    dt: f64,
) -> Result<(), StepError> {
    if n_steps < 3 {
        return Err(StepError::TooFewSteps(n_steps));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(StepError::Invalid(format!("dt must be positive, got {dt}")));
    }
    if u_start.len() != field.dimension() {
        return Err(StepError::Invalid(format!(
            "state has {} components, field expects {}",
            u_start.len(),
            field.dimension()
        )));
    }
    Ok(())
}
