//! `dasa`: run gain/loss transfer protocols, Landau-Zener sweeps, root
//! maps, and protocol optimization from TOML scenario configs.
//!
//! Exit codes: 0 success, 1 invalid config or usage, 2 infeasible physics.

mod compare;
mod config;
mod emit;
mod run;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use config::{preset, preset_names, MethodChoice, ScenarioConfig};
use run::CliError;

#[derive(Parser)]
#[command(name = "dasa", version, about = "non-Hermitian two/three-level transfer protocols")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Exact,
    Rk4,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario from a config file or a named preset.
    Run {
        /// Scenario config (TOML).
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in preset name (see `presets list`).
        #[arg(long)]
        preset: Option<String>,
        /// Output directory for emitted files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override propagation step size.
        #[arg(long)]
        dt: Option<f64>,
        /// Override propagation method.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        /// Override the optimizer seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run two scenarios and print a side-by-side cost/fidelity table.
    Compare {
        config_a: PathBuf,
        config_b: PathBuf,
        /// Also write the table to <out>/compare.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Inspect the built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    /// List preset names and what they produce.
    List,
    /// Print a preset's full config TOML to stdout.
    Show { name: String },
}

fn load_config(
    config: &Option<PathBuf>,
    preset_name: &Option<String>,
) -> Result<ScenarioConfig, CliError> {
    match (config, preset_name) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Config(format!("cannot read {}: {e}", path.display()))
            })?;
            ScenarioConfig::parse(&text).map_err(CliError::Config)
        }
        (None, Some(name)) => preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset '{name}'; available: {}",
                preset_names().map(|(n, _)| n).join(", ")
            ))
        }),
        (None, None) => Err(CliError::Config("one of --config or --preset is required".into())),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn apply_overrides(
    cfg: &mut ScenarioConfig,
    dt: Option<f64>,
    method: Option<MethodArg>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    if let Some(dt) = dt {
        cfg.propagation.dt = dt;
    }
    if let Some(method) = method {
        cfg.propagation.method = match method {
            MethodArg::Exact => MethodChoice::Exact,
            MethodArg::Rk4 => MethodChoice::Rk4,
        };
    }
    if let Some(seed) = seed {
        if let Some(opt) = cfg.optimize.as_mut() {
            opt.seed = seed;
        }
    }
    // Re-validate after overrides; the resolved config is what gets
    // snapshotted and must be runnable as-is.
    ScenarioConfig::parse(&cfg.to_toml()).map_err(CliError::Config)?;
    Ok(())
}

fn cmd_run(
    config: Option<PathBuf>,
    preset_name: Option<String>,
    out: &Path,
    dt: Option<f64>,
    method: Option<MethodArg>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let mut cfg = load_config(&config, &preset_name)?;
    apply_overrides(&mut cfg, dt, method, seed)?;
    let sim = run::execute(&cfg, out)?;
    for line in &sim.report_lines {
        println!("{line}");
    }
    Ok(())
}

fn cmd_compare(
    config_a: &Path,
    config_b: &Path,
    out: Option<PathBuf>,
    dt: Option<f64>,
    method: Option<MethodArg>,
    seed: Option<u64>,
) -> Result<(), CliError> {
    let run_one = |path: &Path| -> Result<run::RunMetrics, CliError> {
        let mut cfg = load_config(&Some(path.to_path_buf()), &None)?;
        apply_overrides(&mut cfg, dt, method, seed)?;
        Ok(run::simulate(&cfg)?.metrics)
    };
    let a = run_one(config_a)?;
    let b = run_one(config_b)?;
    let table = compare::render(&a, &b);
    print!("{table}");
    if let Some(dir) = out {
        let mut emitter = emit::Emitter::new(&dir)?;
        emitter.write("compare.txt", &table)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders its own help/error text.
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match cli.command {
        Command::Run { config, preset, out, dt, method, seed } => {
            cmd_run(config, preset, &out, dt, method, seed)
        }
        Command::Compare { config_a, config_b, out, dt, method, seed } => {
            cmd_compare(&config_a, &config_b, out, dt, method, seed)
        }
        Command::Presets { action } => {
            match action {
                PresetsAction::List => {
                    for (name, blurb) in preset_names() {
                        println!("{name:10} {blurb}");
                    }
                }
                PresetsAction::Show { name } => match preset(&name) {
                    Some(cfg) => print!("{}", cfg.to_toml()),
                    None => {
                        eprintln!("unknown preset '{name}'");
                        return ExitCode::from(1);
                    }
                },
            }
            Ok(())
        }
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
