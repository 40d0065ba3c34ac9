//! Numerical integration for dynamical systems whose time domain splits
//! into a classical regime, a fractional-derivative regime (power-law,
//! Mittag-Leffler, or exponential-decay kernel), and a stochastic regime.
//!
//! The crate is organized around [`PiecewiseProblem`]: a vector field, a
//! regime schedule with breakpoints a1 < a2 < a, a noise specification,
//! and an initial state. [`solve_piecewise`] integrates it on a uniform
//! grid and returns a [`Trajectory`] with per-node regime provenance.
//! Two love-dynamics models ship in [`models`], diagnostics in
//! [`analysis`], and the special functions backing the fractional kernels
//! in [`mlf`].

pub mod analysis;
pub mod field;
pub mod mlf;
pub mod models;
pub mod problem;
pub mod rng;
pub mod steppers;
pub mod trajectory;

pub use field::VectorField;
pub use problem::{
    make_uniform_grid, FractionalKernel, GridError, GridSpec, NoiseSpec, PiecewiseProblem,
    RegimeSchedule,
};
pub use steppers::{solve_piecewise, solve_piecewise_with, SolveError, SolveOptions};
pub use trajectory::{Segment, StepReport, Trajectory};
