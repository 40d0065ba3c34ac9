//! Classical drift plus multiplicative Ito noise.
//!
//! Drift advances by the same three-point rule (and startup) as the
//! classical stepper; each step then adds sigma_i * U_i(t_{n-1}) * dB_i with
//! the increment drawn from the component's own counter-based stream. The
//! left-endpoint state in the diffusion term is the Ito convention.

use crate::field::VectorField;
use crate::problem::NoiseSpec;
use crate::rng::{gaussian_increment, GaussianStream};
use crate::steppers::classical::{validate_inputs, DriftEngine};
use crate::steppers::{check_norm, StepError, DEFAULT_BLOW_UP_BOUND};

/// Advance `n_steps` of the stochastic rule from `u_start` at `t_start`.
///
/// `stream_base_index` offsets the draw counter, so a segment that starts at
/// grid step k2 can consume draws k2, k2+1, ... and stay reproducible
/// independently of where the breakpoints fall. With every sigma zero the
/// output is bitwise identical to [`classical_step_sequence`]
/// (the diffusion sum stays exactly zero).
///
/// [`classical_step_sequence`]: crate::steppers::classical_step_sequence
pub fn stochastic_step_sequence(
    field: &VectorField,
    noise: &NoiseSpec,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    stream_base_index: u64,
) -> Result<Vec<Vec<f64>>, StepError> {
    stochastic_with_bound(
        field,
        noise,
        u_start,
        t_start,
        n_steps,
        dt,
        stream_base_index,
        DEFAULT_BLOW_UP_BOUND,
    )
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn stochastic_with_bound(
    field: &VectorField,
    noise: &NoiseSpec,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    stream_base_index: u64,
    bound: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    validate_inputs(field, u_start, n_steps, dt)?;
    let k = field.dimension();
    if noise.sigmas.len() != k {
        return Err(StepError::Invalid(format!(
            "noise carries {} intensities, field expects {}",
            noise.sigmas.len(),
            k
        )));
    }
    if noise.sigmas.iter().any(|s| *s < 0.0 || !s.is_finite()) {
        return Err(StepError::Invalid(
            "noise intensities must be finite and nonnegative".into(),
        ));
    }
    let streams: Vec<GaussianStream> = (0..k)
        .map(|i| GaussianStream::new(noise.seed, i as u64))
        .collect();
    let mut engine = DriftEngine::new(field, 0, t_start, dt, u_start.to_vec());
    let mut drift_sum = vec![0.0f64; k];
    let mut diffusion_sum = vec![0.0f64; k];
    for m in 1..=n_steps {
        let inc = engine.stage_increment(m);
        let prev = engine.history.states[m - 1].clone();
        let draw_index = stream_base_index + (m as u64 - 1);
        for i in 0..k {
            drift_sum[i] += inc[i];
            let db = gaussian_increment(streams[i], draw_index, dt);
            diffusion_sum[i] += noise.sigmas[i] * prev[i] * db;
        }
        let state: Vec<f64> = (0..k)
            .map(|i| (u_start[i] + drift_sum[i]) + diffusion_sum[i])
            .collect();
        check_norm(&state, m, bound)?;
        engine.record(m, state);
    }
    Ok(engine.history.states)
}
