//! Problem specification: regime schedule, noise, and the uniform grid.

use thiserror::Error;

use crate::field::VectorField;

/// Which fractional kernel governs the middle segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionalKernel {
    /// Power-law kernel.
    Caputo,
    /// Mittag-Leffler kernel.
    AtanganaBaleanu,
    /// Exponential-decay kernel.
    CaputoFabrizio,
}

impl FractionalKernel {
    pub fn label(&self) -> &'static str {
        match self {
            FractionalKernel::Caputo => "caputo",
            FractionalKernel::AtanganaBaleanu => "abc",
            FractionalKernel::CaputoFabrizio => "cf",
        }
    }
}

/// Time-domain partition 0 < a1 < a2 < a with the fractional kernel and
/// order active on [a1, a2]. Classical dynamics run on [0, a1], the
/// stochastic regime on [a2, a].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeSchedule {
    pub a1: f64,
    pub a2: f64,
    pub a: f64,
    pub fractional_kernel: FractionalKernel,
    pub alpha: f64,
}

impl RegimeSchedule {
    pub fn new(
        a1: f64,
        a2: f64,
        a: f64,
        fractional_kernel: FractionalKernel,
        alpha: f64,
    ) -> Result<Self, GridError> {
        let s = RegimeSchedule {
            a1,
            a2,
            a,
            fractional_kernel,
            alpha,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), GridError> {
        if !(self.a1 > 0.0 && self.a1 < self.a2 && self.a2 < self.a) {
            return Err(GridError::BadBreakpoints {
                a1: self.a1,
                a2: self.a2,
                a: self.a,
            });
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(GridError::BadAlpha { alpha: self.alpha });
        }
        Ok(())
    }
}

/// Per-component noise intensities and the generator seed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub sigmas: Vec<f64>,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigmas: Vec<f64>, seed: u64) -> Self {
        NoiseSpec { sigmas, seed }
    }

    /// Zero noise for every component; the stochastic segment then matches
    /// the classical stepper exactly.
    pub fn silent(dimension: usize, seed: u64) -> Self {
        NoiseSpec {
            sigmas: vec![0.0; dimension],
            seed,
        }
    }
}

/// A full three-regime problem: schedule, field, noise, initial state.
#[derive(Debug, Clone)]
pub struct PiecewiseProblem {
    pub schedule: RegimeSchedule,
    pub field: VectorField,
    pub noise: NoiseSpec,
    pub initial_state: Vec<f64>,
}

impl PiecewiseProblem {
    pub fn validate(&self) -> Result<(), GridError> {
        self.schedule.validate()?;
        if self.initial_state.len() != self.field.dimension() {
            return Err(GridError::DimensionMismatch {
                expected: self.field.dimension(),
                got: self.initial_state.len(),
            });
        }
        if self.noise.sigmas.len() != self.field.dimension() {
            return Err(GridError::DimensionMismatch {
                expected: self.field.dimension(),
                got: self.noise.sigmas.len(),
            });
        }
        if self.noise.sigmas.iter().any(|s| *s < 0.0 || !s.is_finite()) {
            return Err(GridError::BadSigma);
        }
        Ok(())
    }
}

/// Node counts for the uniform grid: N total steps, breakpoints at k1, k2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("breakpoints must satisfy 0 < a1 < a2 < a, got a1={a1}, a2={a2}, a={a}")]
    BadBreakpoints { a1: f64, a2: f64, a: f64 },
    #[error("alpha must lie in (0, 1], got {alpha}")]
    BadAlpha { alpha: f64 },
    #[error("dt must be positive, got {dt}")]
    BadStep { dt: f64 },
    #[error("breakpoint {value} is not an integer multiple of dt = {dt}")]
    Misaligned { value: f64, dt: f64 },
    #[error("segment [{from}, {to}] spans only {steps} steps; three-point schemes need at least 3")]
    SegmentTooShort { from: f64, to: f64, steps: usize },
    #[error("dimension mismatch: field expects {expected} components, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("noise intensities must be finite and nonnegative")]
    BadSigma,
}

const ALIGN_REL_TOL: f64 = 1e-9;

fn aligned_steps(value: f64, dt: f64) -> Result<usize, GridError> {
    let ratio = value / dt;
    let rounded = ratio.round();
    if rounded < 1.0 || (ratio - rounded).abs() > ALIGN_REL_TOL * ratio.abs().max(1.0) {
        return Err(GridError::Misaligned { value, dt });
    }
    Ok(rounded as usize)
}

/// Build the uniform grid for a schedule: N = a/dt, k1 = a1/dt, k2 = a2/dt.
///
/// Breakpoints must land on grid nodes (1e-9 relative alignment tolerance)
/// and every segment must span at least 3 steps.
pub fn make_uniform_grid(schedule: &RegimeSchedule, dt: f64) -> Result<GridSpec, GridError> {
    schedule.validate()?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(GridError::BadStep { dt });
    }
    let k1 = aligned_steps(schedule.a1, dt)?;
    let k2 = aligned_steps(schedule.a2, dt)?;
    let n = aligned_steps(schedule.a, dt)?;
    let checks = [
        (0.0, schedule.a1, k1),
        (schedule.a1, schedule.a2, k2 - k1.min(k2)),
        (schedule.a2, schedule.a, n - k2.min(n)),
    ];
    for (from, to, steps) in checks {
        if steps < 3 {
            return Err(GridError::SegmentTooShort { from, to, steps });
        }
    }
    Ok(GridSpec { n, k1, k2 })
}
