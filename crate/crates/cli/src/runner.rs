//! Run orchestration: sweep execution, per-run outputs, and the
//! reproducibility manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use pfode_core::analysis::{growth_bounds, phase_portrait};
use pfode_core::{
    make_uniform_grid, solve_piecewise_with, NoiseSpec, PiecewiseProblem, RegimeSchedule,
    SolveOptions, Trajectory,
};

use crate::config::{ResolvedRun, RunPlan};
use crate::csv_out::emit_csv;
use crate::error::CliError;
use crate::svg::{emit_portrait_svg, emit_series_svg};

/// Environment variable capping sweep parallelism.
pub const THREADS_ENV: &str = "PFODE_THREADS";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSummary {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReport {
    pub m1: f64,
    pub m2: f64,
    pub c1: f64,
    pub c2: f64,
    pub lip1: f64,
    pub lip2: f64,
    pub ratio: f64,
    pub positivity_ok: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SegmentSummary {
    pub segment: String,
    pub steps: usize,
    pub max_state_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutcome {
    pub label: String,
    pub alpha: f64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub files: Vec<String>,
    pub wall_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_state: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_bounds: Option<GrowthReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<SegmentSummary>>,
}

/// Everything needed to reproduce and audit a run: the resolved config, the
/// grid, the seed, per-run outputs and diagnostics, and timings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact_version: String,
    pub config: serde_json::Value,
    pub model: String,
    pub grid: GridSummary,
    pub seed_used: u64,
    pub wall_ms_total: u128,
    pub runs: Vec<RunOutcome>,
}

impl RunManifest {
    pub fn any_failed(&self) -> bool {
        self.runs.iter().any(|r| r.status != "ok")
    }
}

/// Execute every run in the plan, write outputs under the plan's out_dir,
/// and finish with manifest.json. Sweep points run concurrently (capped by
/// PFODE_THREADS); a blow-up in one point never disturbs the others.
pub fn run(plan: &RunPlan) -> Result<RunManifest, CliError> {
    let started = Instant::now();
    let out_dir = PathBuf::from(&plan.config.outputs.out_dir);
    fs::create_dir_all(&out_dir)?;

    let schedule = &plan.config.schedule;
    let probe_schedule = RegimeSchedule::new(
        schedule.a1,
        schedule.a2,
        schedule.a,
        plan.config.kernel.to_kernel(),
        plan.runs.first().map(|r| r.alpha).unwrap_or(0.9),
    )
    .map_err(|e| CliError::Validation(e.to_string()))?;
    let grid = make_uniform_grid(&probe_schedule, plan.config.dt)
        .map_err(|e| CliError::Validation(e.to_string()))?;

    let indices = AtomicUsize::new(0);
    let outcomes: Mutex<Vec<(usize, RunOutcome)>> = Mutex::new(Vec::new());
    let workers = thread_cap().min(plan.runs.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = indices.fetch_add(1, Ordering::Relaxed);
                if idx >= plan.runs.len() {
                    break;
                }
                let outcome = execute_one(plan, &plan.runs[idx], &out_dir);
                outcomes.lock().unwrap().push((idx, outcome));
            });
        }
    });

    let mut collected = outcomes.into_inner().unwrap();
    collected.sort_by_key(|(idx, _)| *idx);
    let runs: Vec<RunOutcome> = collected.into_iter().map(|(_, o)| o).collect();

    let manifest = RunManifest {
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        config: serde_json::to_value(&plan.config)
            .map_err(|e| CliError::Io(e.to_string()))?,
        model: plan.model_token.clone(),
        grid: GridSummary {
            n: grid.n,
            k1: grid.k1,
            k2: grid.k2,
        },
        seed_used: plan.config.seed,
        wall_ms_total: started.elapsed().as_millis(),
        runs,
    };
    let manifest_path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&manifest_path, text)?;
    Ok(manifest)
}

fn thread_cap() -> usize {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn alpha_tag(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p").replace('-', "m")
}

/// Deterministic output stem: model (plus sweep label), kernel, order, seed.
pub fn output_stem(plan: &RunPlan, run: &ResolvedRun) -> String {
    let model = if run.label.is_empty() {
        plan.model_token.clone()
    } else {
        format!("{}_{}", plan.model_token, run.label)
    };
    format!(
        "{model}_{}_a{}_seed{}",
        match plan.config.kernel {
            crate::config::KernelChoice::Caputo => "caputo",
            crate::config::KernelChoice::Abc => "abc",
            crate::config::KernelChoice::Cf => "cf",
        },
        alpha_tag(run.alpha),
        plan.config.seed
    )
}

fn execute_one(plan: &RunPlan, unit: &ResolvedRun, out_dir: &Path) -> RunOutcome {
    let started = Instant::now();
    let stem = output_stem(plan, unit);
    let schedule = match RegimeSchedule::new(
        plan.config.schedule.a1,
        plan.config.schedule.a2,
        plan.config.schedule.a,
        plan.config.kernel.to_kernel(),
        unit.alpha,
    ) {
        Ok(s) => s,
        Err(e) => return failed_outcome(unit, started, e.to_string()),
    };
    let problem = PiecewiseProblem {
        schedule,
        field: unit.model.vector_field(),
        noise: NoiseSpec::new(unit.sigmas.to_vec(), plan.config.seed),
        initial_state: unit.initial_state.to_vec(),
    };
    let options = SolveOptions {
        cf_normalization: plan.config.cf_normalization,
        ..SolveOptions::default()
    };
    let traj = match solve_piecewise_with(&problem, plan.config.dt, &options) {
        Ok(t) => t,
        Err(e) => return failed_outcome(unit, started, e.to_string()),
    };

    let mut files = Vec::new();
    let mut error = None;
    if plan.config.outputs.csv {
        let path = out_dir.join(format!("{stem}.csv"));
        match emit_csv(&traj, &["r", "s"], &path) {
            Ok(()) => files.push(format!("{stem}.csv")),
            Err(e) => error = Some(e.to_string()),
        }
    }
    if plan.config.outputs.svg && error.is_none() {
        let kernel = kernel_name(plan);
        let title = format!(
            "{} (kernel={kernel}, alpha={})",
            plan.model_token, unit.alpha
        );
        for (component, name) in ["r", "s"].iter().enumerate() {
            let path = out_dir.join(format!("{stem}_series_{name}.svg"));
            match emit_series_svg(&traj, component, name, &title, &path) {
                Ok(()) => files.push(format!("{stem}_series_{name}.svg")),
                Err(e) => {
                    error = Some(e.to_string());
                    break;
                }
            }
        }
        if error.is_none() {
            match phase_portrait(&traj, 0, 1) {
                Ok(points) => {
                    let path = out_dir.join(format!("{stem}_portrait.svg"));
                    match emit_portrait_svg(&points, &title, "r", "s", &path) {
                        Ok(()) => files.push(format!("{stem}_portrait.svg")),
                        Err(e) => error = Some(e.to_string()),
                    }
                }
                Err(e) => error = Some(e.to_string()),
            }
        }
    }

    let growth = growth_bounds(&unit.model.as_nonlinear(), &traj)
        .ok()
        .map(|g| GrowthReport {
            m1: g.m1,
            m2: g.m2,
            c1: g.c1,
            c2: g.c2,
            lip1: g.lip1,
            lip2: g.lip2,
            ratio: g.ratio,
            positivity_ok: g.positivity_ok,
        });
    let segments = segment_summaries(&traj);

    RunOutcome {
        label: unit.label.clone(),
        alpha: unit.alpha,
        status: if error.is_none() { "ok" } else { "failed" }.to_string(),
        error,
        files,
        wall_ms: started.elapsed().as_millis(),
        max_abs_state: Some(traj.max_abs_state()),
        growth_bounds: growth,
        segments: Some(segments),
    }
}

fn kernel_name(plan: &RunPlan) -> &'static str {
    match plan.config.kernel {
        crate::config::KernelChoice::Caputo => "caputo",
        crate::config::KernelChoice::Abc => "abc",
        crate::config::KernelChoice::Cf => "cf",
    }
}

fn segment_summaries(traj: &Trajectory) -> Vec<SegmentSummary> {
    traj.segment_reports()
        .iter()
        .map(|r| SegmentSummary {
            segment: format!("{:?}", r.segment).to_lowercase(),
            steps: r.steps_taken,
            max_state_norm: r.max_state_norm,
        })
        .collect()
}

fn failed_outcome(unit: &ResolvedRun, started: Instant, message: String) -> RunOutcome {
    RunOutcome {
        label: unit.label.clone(),
        alpha: unit.alpha,
        status: "failed".to_string(),
        error: Some(message),
        files: Vec::new(),
        wall_ms: started.elapsed().as_millis(),
        max_abs_state: None,
        growth_bounds: None,
        segments: None,
    }
}
