//! Right-hand-side abstraction shared by every stepper.

use std::fmt;
use std::sync::Arc;

/// A deterministic vector field e(t, U) with a fixed state dimension.
///
/// The closure must be total on the states the solver visits and must not
/// hold mutable state; steppers re-evaluate it freely and concurrent solves
/// share fields across threads.
#[derive(Clone)]
pub struct VectorField {
    dimension: usize,
    name: String,
    rhs: Arc<dyn Fn(f64, &[f64], &mut [f64]) + Send + Sync>,
}

impl VectorField {
    pub fn new<F>(dimension: usize, name: impl Into<String>, rhs: F) -> Self
    where
        F: Fn(f64, &[f64], &mut [f64]) + Send + Sync + 'static,
    {
        VectorField {
            dimension,
            name: name.into(),
            rhs: Arc::new(rhs),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Evaluate into a caller-provided buffer of length `dimension`.
    pub fn eval_into(&self, t: f64, state: &[f64], out: &mut [f64]) {
        debug_assert_eq!(state.len(), self.dimension);
        debug_assert_eq!(out.len(), self.dimension);
        (self.rhs)(t, state, out);
    }

    /// Evaluate into a fresh vector.
    pub fn eval(&self, t: f64, state: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        self.eval_into(t, state, &mut out);
        out
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("dimension", &self.dimension)
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_matches_closure() {
        let field = VectorField::new(2, "decay", |_t, u, out| {
            out[0] = -u[0];
            out[1] = -2.0 * u[1];
        });
        assert_eq!(field.eval(0.0, &[1.0, 3.0]), vec![-1.0, -6.0]);
        assert_eq!(field.dimension(), 2);
        assert_eq!(field.name(), "decay");
    }

    #[test]
    fn repeated_evaluations_are_bitwise_stable() {
        let field = VectorField::new(1, "osc", |t, u, out| {
            out[0] = (t * 1.7).sin() * u[0] + 0.325;
        });
        let first = field.eval(0.83, &[1.25])[0];
        for _ in 0..10_000 {
            assert_eq!(field.eval(0.83, &[1.25])[0], first);
        }
    }
}
