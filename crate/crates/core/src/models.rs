//! The two built-in love-dynamics vector fields and the named parameter
//! sets behind the preset CLI surface.
//!
//! State is (r, s): the feelings of the two partners. rho_i are forgetting
//! constants, omega_i reactances (cross-coupling), psi_i / gamma_i constant
//! appeal terms, and epsilon the cubic saturation of the nonlinear variant.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::VectorField;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PresetError {
    #[error("unknown preset {0:?}; `preset list` shows the registry")]
    UnknownPreset(String),
}

/// Parameters of the affine model:
/// r' = -rho1 r + omega1 s + gamma1 psi2,
/// s' = -rho2 s + omega2 r + gamma2 psi1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearLoveParams {
    pub rho1: f64,
    pub rho2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub psi1: f64,
    pub psi2: f64,
}

/// Parameters of the cubic-saturation model:
/// r' = -rho1 r + omega1 s (1 - eps s^2) + psi1,
/// s' = -rho2 s + omega2 r (1 - eps r^2) + psi2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearLoveParams {
    pub rho1: f64,
    pub rho2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub epsilon: f64,
}

impl NonlinearLoveParams {
    pub fn validate(&self) -> Result<(), String> {
        if self.epsilon < 0.0 {
            return Err(format!("epsilon must be nonnegative, got {}", self.epsilon));
        }
        Ok(())
    }
}

pub fn linear_love_field(p: LinearLoveParams) -> VectorField {
    VectorField::new(2, "linear-love", move |_t, u, out| {
        let (r, s) = (u[0], u[1]);
        out[0] = -p.rho1 * r + p.omega1 * s + p.gamma1 * p.psi2;
        out[1] = -p.rho2 * s + p.omega2 * r + p.gamma2 * p.psi1;
    })
}

pub fn nonlinear_love_field(p: NonlinearLoveParams) -> VectorField {
    VectorField::new(2, "nonlinear-love", move |_t, u, out| {
        let (r, s) = (u[0], u[1]);
        out[0] = -p.rho1 * r + p.omega1 * s * (1.0 - p.epsilon * s * s) + p.psi1;
        out[1] = -p.rho2 * s + p.omega2 * r * (1.0 - p.epsilon * r * r) + p.psi2;
    })
}

/// Analytic Jacobian of the affine field (state independent).
pub fn linear_love_jacobian(p: &LinearLoveParams) -> [[f64; 2]; 2] {
    [[-p.rho1, p.omega1], [p.omega2, -p.rho2]]
}

/// Analytic Jacobian of the cubic field at a state.
pub fn nonlinear_love_jacobian(p: &NonlinearLoveParams, state: &[f64]) -> [[f64; 2]; 2] {
    let (r, s) = (state[0], state[1]);
    [
        [-p.rho1, p.omega1 * (1.0 - 3.0 * p.epsilon * s * s)],
        [p.omega2 * (1.0 - 3.0 * p.epsilon * r * r), -p.rho2],
    ]
}

/// Either model, for registry entries and config files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    Linear(LinearLoveParams),
    Nonlinear(NonlinearLoveParams),
}

impl ModelSpec {
    pub fn vector_field(&self) -> VectorField {
        match self {
            ModelSpec::Linear(p) => linear_love_field(*p),
            ModelSpec::Nonlinear(p) => nonlinear_love_field(*p),
        }
    }

    /// The equivalent cubic-model parameters: the affine model maps onto the
    /// nonlinear form with eps = 0 and the composite appeals as constants.
    /// The growth-bound diagnostic is defined over this form.
    pub fn as_nonlinear(&self) -> NonlinearLoveParams {
        match self {
            ModelSpec::Linear(p) => NonlinearLoveParams {
                rho1: p.rho1,
                rho2: p.rho2,
                omega1: p.omega1,
                omega2: p.omega2,
                psi1: p.gamma1 * p.psi2,
                psi2: p.gamma2 * p.psi1,
                epsilon: 0.0,
            },
            ModelSpec::Nonlinear(p) => *p,
        }
    }
}

/// One solver run a preset prescribes: a labelled model variant. Sweeps
/// hold one entry per panel; plain presets hold a single unlabelled entry.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetVariant {
    /// Filename-safe tag ("" for the base entry).
    pub label: String,
    pub model: ModelSpec,
}

/// A named parameter set mirroring one of the built-in figure famillies.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    /// Fractional orders the source figures display; `run` configs may
    /// override.
    pub alphas: Vec<f64>,
    pub sigmas: [f64; 2],
    pub initial_state: [f64; 2],
    pub variants: Vec<PresetVariant>,
}

/// Default run horizon for presets: equal thirds of T = 60 at dt = 0.01.
pub const DEFAULT_HORIZON: f64 = 60.0;
pub const DEFAULT_A1: f64 = 20.0;
pub const DEFAULT_A2: f64 = 40.0;
pub const DEFAULT_DT: f64 = 0.01;

/// Registry of the built-in parameter sets, keyed by preset name.
#[derive(Debug, Clone)]
pub struct PresetRegistry {
    presets: BTreeMap<&'static str, Preset>,
}

impl PresetRegistry {
    pub fn get(&self, name: &str) -> Result<&Preset, PresetError> {
        self.presets
            .get(name)
            .ok_or_else(|| PresetError::UnknownPreset(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.presets.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Preset> + '_ {
        self.presets.values()
    }
}

fn fig1_params() -> LinearLoveParams {
    LinearLoveParams {
        rho1: 0.12,
        rho2: 0.05,
        omega1: 6.1,
        omega2: -1.0,
        gamma1: 0.5,
        gamma2: 1.2,
        psi1: 0.8,
        psi2: 0.81,
    }
}

fn fig3_params(epsilon: f64) -> NonlinearLoveParams {
    NonlinearLoveParams {
        rho1: 0.12,
        rho2: 0.01,
        omega1: 6.1,
        omega2: -1.0,
        psi1: 1.0,
        psi2: 1.0,
        epsilon,
    }
}

fn number_tag(v: f64) -> String {
    let mut s = if v == v.trunc() && v.abs() < 1e6 {
        format!("{}", v.abs() as i64)
    } else {
        format!("{}", v.abs()).replace('.', "p")
    };
    if v < 0.0 {
        s.insert(0, 'm');
    }
    s
}

/// All built-in figure-caption parameter sets.
pub fn builtin_parameter_sets() -> PresetRegistry {
    let mut presets = BTreeMap::new();

    presets.insert(
        "fig1-linear",
        Preset {
            name: "fig1-linear",
            description: "affine model, oscillatory crossover run",
            alphas: vec![0.79, 0.85, 0.92, 0.97],
            sigmas: [0.02, 0.01],
            initial_state: [1.0, 1.0],
            variants: vec![PresetVariant {
                label: String::new(),
                model: ModelSpec::Linear(fig1_params()),
            }],
        },
    );

    // 7 reactances x 2 forgetting constants, one panel each.
    let omegas = [-1.0, -10.0, -50.0, -100.0, -150.0, -200.0, -225.0];
    let rhos = [0.01, -1.0];
    let mut variants = Vec::new();
    for &rho2 in &rhos {
        for &omega2 in &omegas {
            let mut p = fig1_params();
            p.rho2 = rho2;
            p.omega2 = omega2;
            variants.push(PresetVariant {
                label: format!("r2_{}_w2_{}", number_tag(rho2), number_tag(omega2)),
                model: ModelSpec::Linear(p),
            });
        }
    }
    presets.insert(
        "fig2-sweep",
        Preset {
            name: "fig2-sweep",
            description: "affine model, reactance/forgetting sweep (phase portraits)",
            alphas: vec![0.95],
            sigmas: [0.02, 0.01],
            initial_state: [1.0, 1.0],
            variants,
        },
    );

    presets.insert(
        "fig3-nonlinear",
        Preset {
            name: "fig3-nonlinear",
            description: "cubic-saturation model, crossover run",
            alphas: vec![0.8, 0.86, 0.93, 0.98],
            sigmas: [0.01, 0.02],
            initial_state: [1.0, 1.0],
            variants: vec![PresetVariant {
                label: String::new(),
                model: ModelSpec::Nonlinear(fig3_params(1.0)),
            }],
        },
    );

    presets.insert(
        "fig4-sweep",
        Preset {
            name: "fig4-sweep",
            description: "cubic-saturation model, nonlinearity sweep (phase portraits)",
            alphas: vec![0.78, 0.85, 0.91, 0.94, 0.98],
            sigmas: [0.01, 0.02],
            initial_state: [1.0, 1.0],
            variants: [1.0, 0.0, 0.2]
                .into_iter()
                .map(|eps| PresetVariant {
                    label: format!("eps_{}", number_tag(eps)),
                    model: ModelSpec::Nonlinear(fig3_params(eps)),
                })
                .collect(),
        },
    );

    PresetRegistry { presets }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_field_caption_values() {
        // Base parameters evaluated at (1, 1).
        let f = linear_love_field(fig1_params());
        let e = f.eval(0.0, &[1.0, 1.0]);
        assert!((e[0] - 6.385).abs() < 1e-12);
        assert!((e[1] - (-0.09)).abs() < 1e-12);
    }

    #[test]
    fn linear_field_zero_params() {
        let p = LinearLoveParams {
            rho1: 0.0,
            rho2: 0.0,
            omega1: 0.0,
            omega2: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            psi1: 0.0,
            psi2: 0.0,
        };
        let f = linear_love_field(p);
        assert_eq!(f.eval(3.0, &[2.0, -5.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn linear_equilibrium_annihilates_field() {
        // Solve the 2x2 system by Cramer's rule (independent of the field
        // code) and check e vanishes there.
        let p = fig1_params();
        let det = p.rho1 * p.rho2 - p.omega1 * p.omega2;
        assert!(det.abs() > 1e-12);
        let b1 = p.gamma1 * p.psi2;
        let b2 = p.gamma2 * p.psi1;
        // -rho1 r + omega1 s = -b1 ; omega2 r - rho2 s = -b2
        let r = (b1 * p.rho2 + p.omega1 * b2) / det;
        let s = (p.rho1 * b2 + p.omega2 * b1) / det;
        let e = linear_love_field(p).eval(0.0, &[r, s]);
        assert!(e[0].abs() <= 1e-12 && e[1].abs() <= 1e-12, "e = {e:?}");
    }

    #[test]
    fn nonlinear_caption_values() {
        let f = nonlinear_love_field(fig3_params(1.0));
        let e = f.eval(0.0, &[1.0, 1.0]);
        assert!((e[0] - 0.88).abs() < 1e-12);
        assert!((e[1] - 0.99).abs() < 1e-12);
        assert_eq!(f.eval(0.0, &[0.0, 0.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn epsilon_zero_reduces_to_affine() {
        let nl = fig3_params(0.0);
        let fnl = nonlinear_love_field(nl);
        // Matching affine field: gamma1 psi2 -> psi1, gamma2 psi1 -> psi2.
        let fl = linear_love_field(LinearLoveParams {
            rho1: nl.rho1,
            rho2: nl.rho2,
            omega1: nl.omega1,
            omega2: nl.omega2,
            gamma1: 1.0,
            gamma2: 1.0,
            psi1: nl.psi2,
            psi2: nl.psi1,
        });
        for i in 0..10 {
            for j in 0..10 {
                let state = [-2.0 + 0.45 * i as f64, -2.0 + 0.45 * j as f64];
                assert_eq!(fnl.eval(0.0, &state), fl.eval(0.0, &state));
            }
        }
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let lin = fig1_params();
        let non = fig3_params(1.0);
        let fl = linear_love_field(lin);
        let fnl = nonlinear_love_field(non);
        let h = 1e-6;
        let mut state = [0.37, -1.21];
        for trial in 0..100 {
            state[0] = -2.0 + (trial % 10) as f64 * 0.41;
            state[1] = -2.0 + (trial / 10) as f64 * 0.43;
            for (field, jac) in [
                (&fl, linear_love_jacobian(&lin)),
                (&fnl, nonlinear_love_jacobian(&non, &state)),
            ] {
                for col in 0..2 {
                    let mut up = state.to_vec();
                    let mut dn = state.to_vec();
                    up[col] += h;
                    dn[col] -= h;
                    let eu = field.eval(0.0, &up);
                    let ed = field.eval(0.0, &dn);
                    for row in 0..2 {
                        let fd = (eu[row] - ed[row]) / (2.0 * h);
                        let a = jac[row][col];
                        let denom = a.abs().max(1.0);
                        assert!(
                            ((fd - a) / denom).abs() <= 1e-6,
                            "J[{row}][{col}] fd {fd} vs {a} at {state:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn registry_contents() {
        let reg = builtin_parameter_sets();
        let fig1 = reg.get("fig1-linear").unwrap();
        assert_eq!(fig1.alphas, vec![0.79, 0.85, 0.92, 0.97]);
        match fig1.variants[0].model {
            ModelSpec::Linear(p) => {
                assert_eq!(p.rho1, 0.12);
                assert_eq!(p.psi2, 0.81);
            }
            _ => panic!("fig1 must be linear"),
        }

        let fig2 = reg.get("fig2-sweep").unwrap();
        assert_eq!(fig2.variants.len(), 14);
        assert_eq!(fig2.alphas, vec![0.95]);
        let extreme = fig2
            .variants
            .iter()
            .find(|v| v.label == "r2_m1_w2_m225")
            .expect("omega2 = -225 member present");
        match extreme.model {
            ModelSpec::Linear(p) => {
                assert_eq!(p.omega2, -225.0);
                assert_eq!(p.rho2, -1.0);
            }
            _ => panic!(),
        }

        assert!(reg.get("fig3-nonlinear").is_ok());
        assert!(reg.get("fig4-sweep").is_ok());
        assert!(matches!(
            reg.get("nope"),
            Err(PresetError::UnknownPreset(_))
        ));
    }

    #[test]
    fn linear_to_nonlinear_mapping() {
        let m = ModelSpec::Linear(fig1_params()).as_nonlinear();
        assert_eq!(m.epsilon, 0.0);
        assert!((m.psi1 - 0.5 * 0.81).abs() < 1e-15);
        assert!((m.psi2 - 1.2 * 0.8).abs() < 1e-15);
    }
}
