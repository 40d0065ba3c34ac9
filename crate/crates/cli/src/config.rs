//! JSON run configuration: schema, defaults, validation.
//!
//! The schema is documented in docs/config-schema.md. Parsing is strict:
//! unknown keys are rejected so typos fail loudly instead of silently
//! falling back to defaults.

use serde::{Deserialize, Serialize};

use pfode_core::models::{
    builtin_parameter_sets, LinearLoveParams, ModelSpec, NonlinearLoveParams, PresetVariant,
};
use pfode_core::FractionalKernel;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelChoice {
    Caputo,
    Abc,
    Cf,
}

impl KernelChoice {
    pub fn to_kernel(self) -> FractionalKernel {
        match self {
            KernelChoice::Caputo => FractionalKernel::Caputo,
            KernelChoice::Abc => FractionalKernel::AtanganaBaleanu,
            KernelChoice::Cf => FractionalKernel::CaputoFabrizio,
        }
    }
}

// Unit tags force the "type" discriminator to an exact string while the
// surrounding structs keep deny_unknown_fields (which a tagged enum cannot).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum LinearTag {
    #[serde(rename = "linear")]
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
enum NonlinearTag {
    #[serde(rename = "nonlinear")]
    Nonlinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearModelConfig {
    #[serde(rename = "type")]
    tag: LinearTag,
    pub rho1: f64,
    pub rho2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub psi1: f64,
    pub psi2: f64,
    #[serde(default = "default_initial_state")]
    pub initial_state: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearModelConfig {
    #[serde(rename = "type")]
    tag: NonlinearTag,
    pub rho1: f64,
    pub rho2: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub epsilon: f64,
    #[serde(default = "default_initial_state")]
    pub initial_state: [f64; 2],
}

fn default_initial_state() -> [f64; 2] {
    [1.0, 1.0]
}

/// A preset name or an inline parameter object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelRef {
    Preset(String),
    Linear(LinearModelConfig),
    Nonlinear(NonlinearModelConfig),
}

/// Scalar or list; normalized to a list during validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    One(f64),
    Many(Vec<f64>),
}

impl AlphaSpec {
    pub fn as_vec(&self) -> Vec<f64> {
        match self {
            AlphaSpec::One(a) => vec![*a],
            AlphaSpec::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    pub a1: f64,
    pub a2: f64,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_true")]
    pub csv: bool,
    #[serde(default)]
    pub svg: bool,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

fn default_true() -> bool {
    true
}

fn default_out_dir() -> String {
    "out".to_string()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            csv: true,
            svg: false,
            out_dir: default_out_dir(),
        }
    }
}

fn default_dt() -> f64 {
    0.01
}

/// One run request: model, kernel, orders, schedule, and output knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelRef,
    pub kernel: KernelChoice,
    pub alpha: AlphaSpec,
    pub schedule: ScheduleConfig,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cf_normalization: Option<f64>,
    #[serde(default)]
    pub outputs: OutputConfig,
}

/// A fully resolved unit of work: one model variant at one order.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    /// Filename-safe label; includes the sweep-variant tag when present.
    pub label: String,
    pub model: ModelSpec,
    pub alpha: f64,
    pub sigmas: [f64; 2],
    pub initial_state: [f64; 2],
}

/// The validated plan behind a config: every sweep point crossed with every
/// order, plus the shared schedule and output settings.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub config: RunConfig,
    pub model_token: String,
    pub runs: Vec<ResolvedRun>,
}

/// Parse a JSON config from text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig = serde_json::from_str(text).map_err(|e| {
        if e.is_syntax() || e.is_eof() {
            CliError::Parse(e.to_string())
        } else {
            // serde reports the offending location for data errors too
            CliError::Validation(e.to_string())
        }
    })?;
    Ok(config)
}

/// Parse and validate, expanding presets and sweeps into a run plan.
pub fn load_plan(text: &str) -> Result<RunPlan, CliError> {
    let config = parse_config(text)?;
    validate(&config)
}

pub fn validate(config: &RunConfig) -> Result<RunPlan, CliError> {
    let alphas = config.alpha.as_vec();
    if alphas.is_empty() {
        return Err(CliError::Validation("alpha: list must be non-empty".into()));
    }
    for a in &alphas {
        if !(*a > 0.0 && *a <= 1.0) {
            return Err(CliError::Validation(format!(
                "alpha: every order must lie in (0, 1], got {a}"
            )));
        }
    }
    let s = &config.schedule;
    if !(s.a1 > 0.0 && s.a1 < s.a2 && s.a2 < s.a) {
        return Err(CliError::Validation(format!(
            "schedule: must satisfy 0 < a1 < a2 < a, got a1={}, a2={}, a={}",
            s.a1, s.a2, s.a
        )));
    }
    if !(config.dt > 0.0) {
        return Err(CliError::Validation(format!(
            "dt: must be positive, got {}",
            config.dt
        )));
    }
    if let Some(sigmas) = &config.sigmas {
        if sigmas.len() != 2 {
            return Err(CliError::Validation(format!(
                "sigmas: expected 2 intensities, got {}",
                sigmas.len()
            )));
        }
        if sigmas.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(CliError::Validation(
                "sigmas: intensities must be finite and nonnegative".into(),
            ));
        }
    }
    if let Some(m) = config.cf_normalization {
        if !(m > 0.0) || !m.is_finite() {
            return Err(CliError::Validation(format!(
                "cf_normalization: must be positive, got {m}"
            )));
        }
    }

    let (model_token, variants, preset_sigmas, preset_initial) = resolve_model(&config.model)?;
    let sigmas = config
        .sigmas
        .as_ref()
        .map(|v| [v[0], v[1]])
        .unwrap_or(preset_sigmas);

    let mut runs = Vec::new();
    for variant in &variants {
        for &alpha in &alphas {
            runs.push(ResolvedRun {
                label: variant.label.clone(),
                model: variant.model,
                alpha,
                sigmas,
                initial_state: preset_initial,
            });
        }
    }
    Ok(RunPlan {
        config: config.clone(),
        model_token,
        runs,
    })
}

#[allow(clippy::type_complexity)]
fn resolve_model(
    model: &ModelRef,
) -> Result<(String, Vec<PresetVariant>, [f64; 2], [f64; 2]), CliError> {
    match model {
        ModelRef::Preset(name) => {
            let registry = builtin_parameter_sets();
            let preset = registry
                .get(name)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            Ok((
                preset.name.to_string(),
                preset.variants.clone(),
                preset.sigmas,
                preset.initial_state,
            ))
        }
        ModelRef::Linear(c) => {
            let p = LinearLoveParams {
                rho1: c.rho1,
                rho2: c.rho2,
                omega1: c.omega1,
                omega2: c.omega2,
                gamma1: c.gamma1,
                gamma2: c.gamma2,
                psi1: c.psi1,
                psi2: c.psi2,
            };
            Ok((
                "inline-linear".to_string(),
                vec![PresetVariant {
                    label: String::new(),
                    model: ModelSpec::Linear(p),
                }],
                [0.0, 0.0],
                c.initial_state,
            ))
        }
        ModelRef::Nonlinear(c) => {
            let p = NonlinearLoveParams {
                rho1: c.rho1,
                rho2: c.rho2,
                omega1: c.omega1,
                omega2: c.omega2,
                psi1: c.psi1,
                psi2: c.psi2,
                epsilon: c.epsilon,
            };
            p.validate().map_err(CliError::Validation)?;
            Ok((
                "inline-nonlinear".to_string(),
                vec![PresetVariant {
                    label: String::new(),
                    model: ModelSpec::Nonlinear(p),
                }],
                [0.0, 0.0],
                c.initial_state,
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"{
        "model": "fig1-linear",
        "kernel": "caputo",
        "alpha": [0.79, 0.85, 0.92, 0.97],
        "schedule": {"a1": 20, "a2": 40, "a": 60},
        "dt": 0.01,
        "seed": 1
    }"#;

    #[test]
    fn fig1_config_parses_and_expands() {
        let plan = load_plan(FIG1).unwrap();
        assert_eq!(plan.model_token, "fig1-linear");
        assert_eq!(plan.runs.len(), 4);
        assert_eq!(plan.runs[0].sigmas, [0.02, 0.01]);
        assert_eq!(plan.config.dt, 0.01);
        assert_eq!(plan.config.seed, 1);
        assert!(plan.config.outputs.csv);
        assert!(!plan.config.outputs.svg);
    }

    #[test]
    fn alpha_outside_unit_interval_rejected() {
        let text = r#"{
            "model": "fig1-linear", "kernel": "abc", "alpha": [1.5],
            "schedule": {"a1": 1, "a2": 2, "a": 3}
        }"#;
        match load_plan(text) {
            Err(CliError::Validation(msg)) => assert!(msg.contains("alpha"), "{msg}"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_object_rejected() {
        assert!(matches!(
            load_plan("{}"),
            Err(CliError::Parse(_) | CliError::Validation(_))
        ));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        match load_plan("{\"model\": ") {
            Err(CliError::Parse(msg)) => assert!(msg.contains("line"), "{msg}"),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{
            "model": "fig1-linear", "kernel": "cf", "alpha": 0.9,
            "schedule": {"a1": 1, "a2": 2, "a": 3},
            "surprise": true
        }"#;
        assert!(load_plan(text).is_err());
    }

    #[test]
    fn inline_models_accepted() {
        let text = r#"{
            "model": {"type": "nonlinear", "rho1": 0.12, "rho2": 0.01,
                      "omega1": 6.1, "omega2": -1, "psi1": 1, "psi2": 1,
                      "epsilon": 0.3},
            "kernel": "abc",
            "alpha": 0.9,
            "schedule": {"a1": 1, "a2": 2, "a": 3}
        }"#;
        let plan = load_plan(text).unwrap();
        assert_eq!(plan.model_token, "inline-nonlinear");
        assert_eq!(plan.runs.len(), 1);
        assert_eq!(plan.runs[0].sigmas, [0.0, 0.0]);
    }

    #[test]
    fn negative_epsilon_rejected() {
        let text = r#"{
            "model": {"type": "nonlinear", "rho1": 0.1, "rho2": 0.1,
                      "omega1": 1, "omega2": 1, "psi1": 1, "psi2": 1,
                      "epsilon": -0.5},
            "kernel": "cf", "alpha": 0.9,
            "schedule": {"a1": 1, "a2": 2, "a": 3}
        }"#;
        assert!(matches!(load_plan(text), Err(CliError::Validation(_))));
    }

    #[test]
    fn unknown_preset_rejected() {
        let text = r#"{
            "model": "nope", "kernel": "caputo", "alpha": 0.9,
            "schedule": {"a1": 1, "a2": 2, "a": 3}
        }"#;
        match load_plan(text) {
            Err(CliError::Validation(msg)) => assert!(msg.contains("nope"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_preset_expands_fully() {
        let text = r#"{
            "model": "fig2-sweep", "kernel": "caputo", "alpha": [0.95],
            "schedule": {"a1": 20, "a2": 40, "a": 60}
        }"#;
        let plan = load_plan(text).unwrap();
        assert_eq!(plan.runs.len(), 14);
        let labels: Vec<&str> = plan.runs.iter().map(|r| r.label.as_str()).collect();
        assert!(labels.contains(&"r2_m1_w2_m225"));
        assert!(labels.contains(&"r2_0p01_w2_m1"));
    }

    #[test]
    fn round_trip_preserves_config() {
        let plan = load_plan(FIG1).unwrap();
        let text = serde_json::to_string_pretty(&plan.config).unwrap();
        let reparsed = parse_config(&text).unwrap();
        assert_eq!(reparsed, plan.config);
    }
}
