//! Chains the three segment integrators into one trajectory.

use thiserror::Error;

use crate::problem::{make_uniform_grid, FractionalKernel, GridError, PiecewiseProblem};
use crate::steppers::classical::classical_with_bound;
use crate::steppers::fractional::{abc_step_sequence, caputo_step_sequence, cf_step_sequence_with};
use crate::steppers::stochastic::stochastic_with_bound;
use crate::steppers::{StepError, DEFAULT_BLOW_UP_BOUND};
use crate::trajectory::{Segment, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{segment:?} segment failed at grid step {global_step}: {source}")]
    Segment {
        segment: Segment,
        global_step: usize,
        source: StepError,
    },
}

/// Knobs the driver exposes beyond the problem itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Infinity-norm bound above which a segment aborts with a blow-up error.
    pub blow_up_bound: f64,
    /// Normalization M(alpha) for the exponential kernel; None selects the
    /// constant-one convention.
    pub cf_normalization: Option<f64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            blow_up_bound: DEFAULT_BLOW_UP_BOUND,
            cf_normalization: None,
        }
    }
}

/// Solve the three-regime problem on a uniform grid of step `dt`.
///
/// Classical dynamics run on [0, a1]; the selected fractional kernel takes
/// over on [a1, a2] with the classical endpoint as its initial state and its
/// memory anchored at a1; the stochastic rule finishes [a2, a]. Breakpoint
/// nodes are shared, so continuity there is exact by construction, and the
/// whole result is a pure function of (problem, dt) including the seed.
pub fn solve_piecewise(problem: &PiecewiseProblem, dt: f64) -> Result<Trajectory, SolveError> {
    solve_piecewise_with(problem, dt, &SolveOptions::default())
}

/// [`solve_piecewise`] with explicit options.
pub fn solve_piecewise_with(
    problem: &PiecewiseProblem,
    dt: f64,
    options: &SolveOptions,
) -> Result<Trajectory, SolveError> {
    problem.validate()?;
    let grid = make_uniform_grid(&problem.schedule, dt)?;
    let (n, k1, k2) = (grid.n, grid.k1, grid.k2);
    let field = &problem.field;
    let alpha = problem.schedule.alpha;
    let bound = options.blow_up_bound;

    let classical = classical_with_bound(field, &problem.initial_state, 0.0, k1, dt, bound)
        .map_err(|e| step_error(Segment::Classical, 0, e))?;

    let t1 = k1 as f64 * dt;
    let u1 = classical[k1].clone();
    let fractional = match problem.schedule.fractional_kernel {
        FractionalKernel::Caputo => caputo_step_sequence(field, &u1, t1, k2 - k1, dt, alpha),
        FractionalKernel::AtanganaBaleanu => {
            abc_step_sequence(field, &u1, t1, k2 - k1, dt, alpha)
        }
        FractionalKernel::CaputoFabrizio => {
            let norm = options.cf_normalization.unwrap_or(1.0);
            cf_step_sequence_with(field, &u1, t1, k2 - k1, dt, alpha, norm)
        }
    }
    .map_err(|e| step_error(Segment::Fractional, k1, e))?;

    let t2 = k2 as f64 * dt;
    let u2 = fractional[k2 - k1].clone();
    let stochastic = stochastic_with_bound(
        field,
        &problem.noise,
        &u2,
        t2,
        n - k2,
        dt,
        k2 as u64,
        bound,
    )
    .map_err(|e| step_error(Segment::Stochastic, k2, e))?;

    let mut states = classical;
    states.extend(fractional.into_iter().skip(1));
    states.extend(stochastic.into_iter().skip(1));
    debug_assert_eq!(states.len(), n + 1);

    let times: Vec<f64> = (0..=n).map(|j| j as f64 * dt).collect();
    let segment_of: Vec<Segment> = (0..=n)
        .map(|j| {
            if j < k1 {
                Segment::Classical
            } else if j < k2 {
                Segment::Fractional
            } else {
                Segment::Stochastic
            }
        })
        .collect();

    Ok(Trajectory {
        dt,
        times,
        states,
        segment_of,
        k1,
        k2,
        seed_used: problem.noise.seed,
    })
}

fn step_error(segment: Segment, offset: usize, source: StepError) -> SolveError {
    let global_step = match &source {
        StepError::BlowUp { step, .. } => offset + step,
        _ => offset,
    };
    SolveError::Segment {
        segment,
        global_step,
        source,
    }
}
