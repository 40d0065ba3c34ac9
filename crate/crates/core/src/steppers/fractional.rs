//! Newton-interpolation schemes for the three fractional kernels.
//!
//! All three share the same quadratic-interpolant memory machinery over the
//! segment history. For a target node m (segment-local, node 0 = a1) the
//! memory sum runs over every grid interval [t_{j-1}, t_j], j = 1..m, with
//! the interval's right-hand side replaced by the Newton polynomial through
//! (t_{j-2}, t_{j-1}, t_j) and integrated exactly against the power-law
//! kernel. The first interval carries only the constant term and the second
//! the constant plus linear term (startup; no earlier nodes exist), so a
//! constant field integrates exactly at every node.
//!
//! Weight arrays, with d = m - j the interval's distance from the target:
//!   A0(d) = ((d+1)^a - d^a) / a
//!   A1(d) = (d+2) A0(d) - ((d+1)^{a+1} - d^{a+1}) / (a+1)
//!   A2(d) = (d+2)(d+1) A0(d) - (2d+3) ((d+1)^{a+1} - d^{a+1}) / (a+1)
//!           + ((d+1)^{a+2} - d^{a+2}) / (a+2)
//!
//! The node being computed enters the final interval's second difference
//! (and the local terms of the Mittag-Leffler and exponential kernels);
//! those evaluations use a predictor state from the explicit classical step,
//! one correction pass.

use crate::field::VectorField;
use crate::mlf::{ab_normalization, cf_normalization, gamma_fn};
use crate::steppers::classical::{validate_inputs, DriftEngine};
use crate::steppers::{check_norm, StepError, DEFAULT_BLOW_UP_BOUND};

/// Per-distance kernel weights, precomputed once per segment.
struct PowerWeights {
    a0: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl PowerWeights {
    fn new(alpha: f64, n_steps: usize) -> Self {
        let len = n_steps + 1;
        let mut pa = Vec::with_capacity(len + 1);
        let mut pa1 = Vec::with_capacity(len + 1);
        let mut pa2 = Vec::with_capacity(len + 1);
        for i in 0..=len {
            let x = i as f64;
            pa.push(x.powf(alpha));
            pa1.push(x.powf(alpha + 1.0));
            pa2.push(x.powf(alpha + 2.0));
        }
        let a0 = (0..len).map(|d| (pa[d + 1] - pa[d]) / alpha).collect();
        let d1 = (0..len)
            .map(|d| (pa1[d + 1] - pa1[d]) / (alpha + 1.0))
            .collect();
        let d2 = (0..len)
            .map(|d| (pa2[d + 1] - pa2[d]) / (alpha + 2.0))
            .collect();
        PowerWeights { a0, d1, d2 }
    }

    #[inline]
    fn a0(&self, d: usize) -> f64 {
        self.a0[d]
    }

    #[inline]
    fn a1(&self, d: usize) -> f64 {
        (d as f64 + 2.0) * self.a0[d] - self.d1[d]
    }

    #[inline]
    fn a2(&self, d: usize) -> f64 {
        let df = d as f64;
        (df + 2.0) * (df + 1.0) * self.a0[d] - (2.0 * df + 3.0) * self.d1[d] + self.d2[d]
    }
}

/// Full memory sum for target node m into `out` (length k).
/// `e_pred` stands in for the unknown e at node m.
fn memory_sum(
    engine: &DriftEngine<'_>,
    weights: &PowerWeights,
    m: usize,
    e_pred: &[f64],
    out: &mut [f64],
) {
    let es = &engine.history.rhs_values;
    let k = out.len();
    out.fill(0.0);

    // First interval: constant term anchored at the segment start.
    let a0 = weights.a0(m - 1);
    for i in 0..k {
        out[i] += es[0][i] * a0;
    }
    if m >= 2 {
        // Second interval: constant plus linear term.
        let d = m - 2;
        let (a0, a1) = (weights.a0(d), weights.a1(d));
        for i in 0..k {
            let c0 = es[1][i];
            let c1 = es[1][i] - es[0][i];
            out[i] += c0 * a0 + c1 * a1;
        }
    }
    for j in 3..=m {
        let d = m - j;
        let (a0, a1, a2) = (weights.a0(d), weights.a1(d), weights.a2(d));
        let e_j = if j < m { &es[j] } else { e_pred };
        for i in 0..k {
            let c0 = es[j - 1][i];
            let c1 = es[j - 1][i] - es[j - 2][i];
            let c2 = (e_j[i] - 2.0 * es[j - 1][i] + es[j - 2][i]) / 2.0;
            out[i] += c0 * a0 + c1 * a1 + c2 * a2;
        }
    }
}

fn check_alpha(alpha: f64) -> Result<(), StepError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(StepError::Invalid(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(())
}

/// Power-law kernel scheme with memory anchored at `t_start`:
/// U^m = U(a1) + (h^a / Gamma(a)) * memory sum.
pub fn caputo_step_sequence(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    alpha: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    fractional_run(
        field,
        u_start,
        t_start,
        n_steps,
        dt,
        alpha,
        Kernel::PowerLaw,
        DEFAULT_BLOW_UP_BOUND,
    )
}

/// Mittag-Leffler kernel scheme: local term (1-a)/AB(a) * e at the predicted
/// node plus (a/AB(a)) times the power-law memory sum.
pub fn abc_step_sequence(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    alpha: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    fractional_run(
        field,
        u_start,
        t_start,
        n_steps,
        dt,
        alpha,
        Kernel::MittagLeffler,
        DEFAULT_BLOW_UP_BOUND,
    )
}

/// Exponential-decay kernel scheme under the constant-one normalization.
pub fn cf_step_sequence(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    alpha: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    let norm = cf_normalization(alpha)
        .map_err(|e| StepError::Invalid(e.to_string()))?;
    cf_step_sequence_with(field, u_start, t_start, n_steps, dt, alpha, norm)
}

/// Exponential-decay kernel scheme with an explicit normalization M(alpha).
///
/// U^m = U(a1) + ((1-a)/M) [e(t_m, U_pred) - e(a1, U(a1))] + (a/M) S_m,
/// where S_m is the classical rule's cumulative increment sum over the
/// segment. At alpha = 1 the jump coefficient is exactly zero and a/M = 1,
/// so the scheme reproduces the classical stepper bit for bit.
pub fn cf_step_sequence_with(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    alpha: f64,
    norm: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    validate_inputs(field, u_start, n_steps, dt)?;
    check_alpha(alpha)?;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(StepError::Invalid(format!(
            "normalization must be positive, got {norm}"
        )));
    }
    let k = field.dimension();
    let jump_coeff = (1.0 - alpha) / norm;
    let int_coeff = alpha / norm;
    let mut engine = DriftEngine::new(field, 0, t_start, dt, u_start.to_vec());
    let e0 = engine.history.rhs_values[0].clone();
    let mut sum = vec![0.0f64; k];
    for m in 1..=n_steps {
        let inc = engine.stage_increment(m);
        for i in 0..k {
            sum[i] += inc[i];
        }
        let pred = engine.predictor_state(m);
        let e_pred = field.eval(engine.time_at(m), &pred);
        let state: Vec<f64> = (0..k)
            .map(|i| u_start[i] + jump_coeff * (e_pred[i] - e0[i]) + int_coeff * sum[i])
            .collect();
        check_norm(&state, m, DEFAULT_BLOW_UP_BOUND)?;
        engine.record(m, state);
    }
    Ok(engine.history.states)
}

enum Kernel {
    PowerLaw,
    MittagLeffler,
}

#[allow(clippy::too_many_arguments)]
fn fractional_run(
    field: &VectorField,
    u_start: &[f64],
    t_start: f64,
    n_steps: usize,
    dt: f64,
    alpha: f64,
    kernel: Kernel,
    bound: f64,
) -> Result<Vec<Vec<f64>>, StepError> {
    validate_inputs(field, u_start, n_steps, dt)?;
    check_alpha(alpha)?;
    let gamma_alpha = gamma_fn(alpha).map_err(|e| StepError::Invalid(e.to_string()))?;
    let mem_coeff = dt.powf(alpha) / gamma_alpha;
    let (local_coeff, mem_scale) = match kernel {
        Kernel::PowerLaw => (0.0, 1.0),
        Kernel::MittagLeffler => {
            let ab = ab_normalization(alpha).map_err(|e| StepError::Invalid(e.to_string()))?;
            ((1.0 - alpha) / ab, alpha / ab)
        }
    };

    let k = field.dimension();
    let weights = PowerWeights::new(alpha, n_steps);
    let mut engine = DriftEngine::new(field, 0, t_start, dt, u_start.to_vec());
    let mut mem = vec![0.0f64; k];
    for m in 1..=n_steps {
        let t_m = engine.time_at(m);
        // The predictor feeds the last interval's second difference (m >= 3)
        // and the Mittag-Leffler local term (every m).
        let needs_pred = m >= 3 || matches!(kernel, Kernel::MittagLeffler);
        let e_pred = if needs_pred {
            let pred = engine.predictor_state(m);
            field.eval(t_m, &pred)
        } else {
            vec![0.0; k]
        };
        memory_sum(&engine, &weights, m, &e_pred, &mut mem);
        let state: Vec<f64> = (0..k)
            .map(|i| u_start[i] + local_coeff * e_pred[i] + mem_scale * mem_coeff * mem[i])
            .collect();
        check_norm(&state, m, bound)?;
        engine.record(m, state);
    }
    Ok(engine.history.states)
}
