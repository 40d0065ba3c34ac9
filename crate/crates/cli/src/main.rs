use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pfode_cli::config::{load_plan, AlphaSpec};
use pfode_cli::error::CliError;
use pfode_cli::runner;
use pfode_core::analysis::empirical_order;
use pfode_core::models::builtin_parameter_sets;
use pfode_core::steppers::{
    caputo_step_sequence, classical_step_sequence, euler_step_sequence,
};
use pfode_core::mlf::mittag_leffler;
use pfode_core::VectorField;

#[derive(Parser)]
#[command(
    name = "pfode",
    about = "Piecewise classical/fractional/stochastic ODE runs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the runs described by a JSON config file.
    Run {
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        out_dir: Option<String>,
        /// Override the seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the step size.
        #[arg(long)]
        dt: Option<f64>,
        /// Skip SVG plots even if the config enables them.
        #[arg(long)]
        no_svg: bool,
    },
    /// Inspect the built-in parameter sets.
    Preset {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Validate a config file without running anything.
    Check { config: PathBuf },
    /// Run the convergence-order suite and print the measured orders.
    OrderTest,
}

#[derive(Subcommand)]
enum PresetAction {
    /// List preset names with descriptions.
    List,
    /// Show one preset's parameters, orders, and sweep variants.
    Show { name: String },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out_dir,
            seed,
            dt,
            no_svg,
        } => cmd_run(config, out_dir, seed, dt, no_svg),
        Command::Preset { action } => {
            match action {
                PresetAction::List => cmd_preset_list(),
                PresetAction::Show { name } => cmd_preset_show(&name),
            }
        }
        Command::Check { config } => cmd_check(config),
        Command::OrderTest => cmd_order_test(),
    }
}

fn cmd_run(
    path: PathBuf,
    out_dir: Option<String>,
    seed: Option<u64>,
    dt: Option<f64>,
    no_svg: bool,
) -> Result<(), CliError> {
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut plan = load_plan(&text)?;
    if let Some(dir) = out_dir {
        plan.config.outputs.out_dir = dir;
    }
    if let Some(s) = seed {
        plan.config.seed = s;
    }
    if let Some(h) = dt {
        if !(h > 0.0) {
            return Err(CliError::Validation(format!("dt: must be positive, got {h}")));
        }
        plan.config.dt = h;
    }
    if no_svg {
        plan.config.outputs.svg = false;
    }
    // Re-validate after overrides so the plan and the echoed config agree.
    let plan = pfode_cli::config::validate(&plan.config)?;

    let manifest = runner::run(&plan)?;
    let ok = manifest.runs.iter().filter(|r| r.status == "ok").count();
    println!(
        "{}/{} runs succeeded; outputs in {}",
        ok,
        manifest.runs.len(),
        plan.config.outputs.out_dir
    );
    for r in &manifest.runs {
        if r.status != "ok" {
            eprintln!(
                "  failed: label={:?} alpha={} ({})",
                r.label,
                r.alpha,
                r.error.as_deref().unwrap_or("unknown")
            );
        }
    }
    if manifest.any_failed() {
        return Err(CliError::Solver(
            "one or more sweep points failed; see manifest.json".into(),
        ));
    }
    Ok(())
}

fn cmd_preset_list() -> Result<(), CliError> {
    let registry = builtin_parameter_sets();
    for preset in registry.iter() {
        println!(
            "{:<16} {} ({} variant(s), alphas {:?})",
            preset.name,
            preset.description,
            preset.variants.len(),
            preset.alphas
        );
    }
    Ok(())
}

fn cmd_preset_show(name: &str) -> Result<(), CliError> {
    let registry = builtin_parameter_sets();
    let preset = registry
        .get(name)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    println!("name:        {}", preset.name);
    println!("description: {}", preset.description);
    println!("alphas:      {:?}", preset.alphas);
    println!("sigmas:      {:?}", preset.sigmas);
    println!("initial:     {:?}", preset.initial_state);
    println!("variants:");
    for v in &preset.variants {
        let label = if v.label.is_empty() { "(base)" } else { &v.label };
        println!("  {:<20} {:?}", label, v.model);
    }
    Ok(())
}

fn cmd_check(path: PathBuf) -> Result<(), CliError> {
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let plan = load_plan(&text)?;
    let alphas = match &plan.config.alpha {
        AlphaSpec::One(a) => vec![*a],
        AlphaSpec::Many(v) => v.clone(),
    };
    println!(
        "ok: model {} with {} run(s) over alphas {:?}",
        plan.model_token,
        plan.runs.len(),
        alphas
    );
    Ok(())
}

fn cmd_order_test() -> Result<(), CliError> {
    let reference = (-1f64).exp();
    let decay = || VectorField::new(1, "decay", |_t, u, out| out[0] = -u[0]);
    let dts = [4e-3, 2e-3, 1e-3];

    let classical = |dt: f64| {
        let n = (1.0 / dt).round() as usize;
        classical_step_sequence(&decay(), &[1.0], 0.0, n, dt)
            .map(|s| s[n][0])
            .map_err(|e| pfode_core::analysis::AnalysisError::Invalid(e.to_string()))
    };
    let p_classical = empirical_order(classical, reference, dts)
        .map_err(|e| CliError::Solver(e.to_string()))?;

    let euler = |dt: f64| {
        let n = (1.0 / dt).round() as usize;
        euler_step_sequence(&decay(), &[1.0], 0.0, n, dt)
            .map(|s| s[n][0])
            .map_err(|e| pfode_core::analysis::AnalysisError::Invalid(e.to_string()))
    };
    let p_euler =
        empirical_order(euler, reference, dts).map_err(|e| CliError::Solver(e.to_string()))?;

    println!("classical three-point rule:  order {p_classical:.3} (expected ~3)");
    println!("forward euler baseline:      order {p_euler:.3} (expected ~1)");

    // Fractional relaxation error against the analytic kernel at two steps.
    for alpha in [0.7, 0.9] {
        let exact = mittag_leffler(alpha, -1.0)
            .map_err(|e| CliError::Solver(e.to_string()))?;
        for dt in [2e-3f64, 1e-3] {
            let n = (1.0 / dt).round() as usize;
            let states = caputo_step_sequence(&decay(), &[1.0], 0.0, n, dt, alpha)
                .map_err(|e| CliError::Solver(e.to_string()))?;
            let rel = (states[n][0] - exact).abs() / exact;
            println!(
                "power-law relaxation alpha={alpha} dt={dt}: relative error {rel:.3e}"
            );
        }
    }
    Ok(())
}
