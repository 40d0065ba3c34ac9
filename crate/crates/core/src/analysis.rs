//! Post-run diagnostics: growth bounds, Lipschitz constants, phase
//! portraits, and empirical convergence order.

use thiserror::Error;

use crate::field::VectorField;
use crate::models::NonlinearLoveParams;
use crate::trajectory::{Segment, Trajectory};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("trajectory is empty")]
    EmptyTrajectory,
    #[error("growth bounds degenerate: {0}")]
    DegenerateBounds(String),
    #[error("component index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("order estimate degenerate: {0}")]
    Degenerate(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Growth-bound constants of the existence argument, evaluated over the
/// deterministic part of a trajectory (nodes up to a2).
///
/// m1 = omega1^2 ||s^2||_inf + eps^2 omega1^2 ||s^4||_inf + psi1^2 and
/// symmetrically for m2 with r. The linear-growth coefficients are c_i =
/// 4 m_i, the squared Lipschitz constants are rho_i^2, and the sufficient
/// condition for a positive solution is max(rho1^2/m1, rho2^2/m2) < 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthBounds {
    pub m1: f64,
    pub m2: f64,
    pub c1: f64,
    pub c2: f64,
    pub lip1: f64,
    pub lip2: f64,
    pub ratio: f64,
    pub positivity_ok: bool,
}

/// Compute the growth bounds from a finished run. Sup norms are taken over
/// trajectory nodes on [0, a2], a discretized surrogate for the continuous
/// sup that converges as dt -> 0. The check is a post-hoc diagnostic, not a
/// gate: the condition is sufficient, not necessary.
pub fn growth_bounds(
    params: &NonlinearLoveParams,
    traj: &Trajectory,
) -> Result<GrowthBounds, AnalysisError> {
    if traj.is_empty() {
        return Err(AnalysisError::EmptyTrajectory);
    }
    if traj.dimension() != 2 {
        return Err(AnalysisError::Invalid(format!(
            "growth bounds are defined for 2-component states, got dimension {}",
            traj.dimension()
        )));
    }
    let mut sup_r2 = 0.0f64;
    let mut sup_s2 = 0.0f64;
    for state in &traj.states[..=traj.k2] {
        sup_r2 = sup_r2.max(state[0] * state[0]);
        sup_s2 = sup_s2.max(state[1] * state[1]);
    }
    let (w1, w2, eps) = (params.omega1, params.omega2, params.epsilon);
    let m1 = w1 * w1 * sup_s2 + eps * eps * w1 * w1 * sup_s2 * sup_s2 + params.psi1 * params.psi1;
    let m2 = w2 * w2 * sup_r2 + eps * eps * w2 * w2 * sup_r2 * sup_r2 + params.psi2 * params.psi2;
    if m1 <= 0.0 || m2 <= 0.0 {
        return Err(AnalysisError::DegenerateBounds(format!(
            "m1 = {m1}, m2 = {m2}; ratio undefined"
        )));
    }
    let lip1 = params.rho1 * params.rho1;
    let lip2 = params.rho2 * params.rho2;
    let ratio = (lip1 / m1).max(lip2 / m2);
    Ok(GrowthBounds {
        m1,
        m2,
        c1: 4.0 * m1,
        c2: 4.0 * m2,
        lip1,
        lip2,
        ratio,
        positivity_ok: ratio < 1.0,
    })
}

/// Squared Lipschitz constants (rho1^2, rho2^2).
pub fn lipschitz_constants(params: &NonlinearLoveParams) -> (f64, f64) {
    (params.rho1 * params.rho1, params.rho2 * params.rho2)
}

/// One projected trajectory point with its regime label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortraitPoint {
    pub x: f64,
    pub y: f64,
    pub segment: Segment,
}

/// Project a trajectory onto two state components, preserving order and
/// segment labels.
pub fn phase_portrait(
    traj: &Trajectory,
    x_component: usize,
    y_component: usize,
) -> Result<Vec<PortraitPoint>, AnalysisError> {
    let dim = traj.dimension();
    for index in [x_component, y_component] {
        if index >= dim {
            return Err(AnalysisError::IndexOutOfRange {
                index,
                dimension: dim,
            });
        }
    }
    Ok(traj
        .states
        .iter()
        .zip(&traj.segment_of)
        .map(|(state, seg)| PortraitPoint {
            x: state[x_component],
            y: state[y_component],
            segment: *seg,
        })
        .collect())
}

/// Empirical convergence order from final-time errors at three
/// geometrically spaced steps (4h, 2h, h) against a reference value.
///
/// Returns half the log2 ratio of the coarsest to finest error, i.e. the
/// Richardson slope averaged over the two refinements.
pub fn empirical_order(
    final_value: impl Fn(f64) -> Result<f64, AnalysisError>,
    reference: f64,
    dts: [f64; 3],
) -> Result<f64, AnalysisError> {
    let [h4, h2, h1] = dts;
    let geometric = (h4 / h2 - 2.0).abs() <= 1e-9 && (h2 / h1 - 2.0).abs() <= 1e-9;
    if !geometric {
        return Err(AnalysisError::Invalid(format!(
            "dts must be geometrically spaced (4h, 2h, h), got {dts:?}"
        )));
    }
    let mut errs = [0.0f64; 3];
    for (e, h) in errs.iter_mut().zip(dts) {
        *e = (final_value(h)? - reference).abs();
    }
    let floor = 100.0 * f64::EPSILON * reference.abs().max(1.0);
    if errs.iter().any(|e| *e <= floor) {
        return Err(AnalysisError::Degenerate(format!(
            "errors {errs:?} at or below the round-off floor {floor:.2e}"
        )));
    }
    Ok(0.5 * (errs[0] / errs[2]).log2())
}

/// Central finite-difference Jacobian of a field at a state; the oracle the
/// analytic Jacobians are tested against.
pub fn numeric_jacobian(field: &VectorField, t: f64, state: &[f64], h: f64) -> Vec<Vec<f64>> {
    let k = field.dimension();
    let mut jac = vec![vec![0.0; k]; k];
    for col in 0..k {
        let mut up = state.to_vec();
        let mut dn = state.to_vec();
        up[col] += h;
        dn[col] -= h;
        let eu = field.eval(t, &up);
        let ed = field.eval(t, &dn);
        for row in 0..k {
            jac[row][col] = (eu[row] - ed[row]) / (2.0 * h);
        }
    }
    jac
}
