//! `cfj` — secrecy-capacity simulation and transmit-power optimization
//! for cooperative friendly jamming.
//!
//! Subcommands: `simulate` compares the three implementations on a
//! scenario, `train` fits a soft actor-critic policy and writes a
//! checkpoint, `evaluate` replays a checkpoint, `gen` emits a random
//! scenario file. Failures print `error[<category>]: <message>` on
//! stderr and exit nonzero.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cfj_core::harness::{ReportFormat, SolverKind};
use cfj_core::optimizer::{sac_train, PowerEnv, SolverConfig};
use cfj_core::{
    builtin_scenario, emit_report, generate_random_scenario, load_scenario, render_report,
    run_comparison, save_scenario, HarnessError, Policy, RadioParams, RandomSpec, Scenario,
    ScenarioError, SolverError,
};

#[derive(Parser)]
#[command(name = "cfj", version, about = "Cooperative friendly jamming simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario file path, or `builtin:1` .. `builtin:6`.
    #[arg(long)]
    scenario: String,
}

impl ScenarioArg {
    fn resolve(&self) -> Result<Scenario, ScenarioError> {
        if let Some(id) = self.scenario.strip_prefix("builtin:") {
            let id: u32 = id.parse().map_err(|_| {
                ScenarioError::BuiltinId(u32::MAX)
            })?;
            builtin_scenario(id)
        } else {
            load_scenario(&self.scenario)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the three implementations on a scenario and report metrics.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Power solver for the optimized implementation.
        #[arg(long, default_value = "cem")]
        solver: SolverKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Lattice spacing for the grid solver, watts.
        #[arg(long, default_value_t = 0.05)]
        grid_step: f64,
        /// Solver config file (JSON). Flags override its seed/grid step.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
    },
    /// Train a soft actor-critic policy and write a checkpoint.
    Train {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Only `sac` trains a policy.
        #[arg(long, default_value = "sac")]
        solver: SolverKind,
        /// Solver config file (JSON).
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Where to write the policy checkpoint.
        #[arg(long)]
        checkpoint: PathBuf,
        /// Optional training-curve CSV (episode, revenue, losses).
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Evaluate a trained policy checkpoint on a scenario.
    Evaluate {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: ReportFormat,
    },
    /// Generate a random scenario file.
    Gen {
        #[arg(long)]
        n_aps: usize,
        #[arg(long)]
        n_users: usize,
        #[arg(long, default_value_t = 0)]
        n_eves: usize,
        /// Map side in meters.
        #[arg(long, default_value_t = 50.0)]
        map: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_solver_config(path: Option<&PathBuf>) -> Result<SolverConfig> {
    match path {
        None => Ok(SolverConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read config {}", p.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("malformed config {}", p.display()))
        }
    }
}

fn write_or_print(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            scenario,
            solver,
            seed,
            grid_step,
            config,
            out,
            format,
        } => {
            let scenario = scenario.resolve()?;
            let mut cfg = load_solver_config(config.as_ref())?;
            cfg.seed = seed;
            cfg.grid_step_watts = grid_step;
            let report = run_comparison(&scenario, solver, &cfg)?;
            match (&out, format) {
                (Some(path), _) => emit_report(&report, format, path)?,
                (None, _) => write_or_print(&render_report(&report, format), None)?,
            }
            eprintln!(
                "solver={} seed={} wall_time={:.3}s",
                report.solver_meta.solver.label(),
                report.solver_meta.seed,
                report.solver_meta.wall_time.as_secs_f64()
            );
            Ok(())
        }
        Command::Train {
            scenario,
            solver,
            config,
            seed,
            checkpoint,
            curve,
        } => {
            if solver != SolverKind::Sac {
                bail!("train supports only --solver sac, got {}", solver.label());
            }
            let scenario = scenario.resolve()?;
            let mut cfg = load_solver_config(config.as_ref())?;
            cfg.seed = seed;
            let env = PowerEnv::new(scenario)?;
            let outcome = sac_train(&env, &cfg.sac, cfg.seed)?;
            outcome.policy.save(&checkpoint)?;
            if let Some(curve_path) = curve {
                let mut text = String::from("episode,revenue,actor_loss,critic_loss\n");
                for r in &outcome.curve {
                    text.push_str(&format!(
                        "{},{},{},{}\n",
                        r.episode, r.revenue, r.actor_loss, r.critic_loss
                    ));
                }
                std::fs::write(&curve_path, text)
                    .with_context(|| format!("cannot write {}", curve_path.display()))?;
            }
            println!(
                "trained {} episodes; deterministic revenue {}; checkpoint {}",
                outcome.curve.len(),
                outcome.eval_revenue,
                checkpoint.display()
            );
            Ok(())
        }
        Command::Evaluate {
            scenario,
            checkpoint,
            out,
            format,
        } => {
            let scenario = scenario.resolve()?;
            let policy = Policy::load(&checkpoint)?;
            let env = PowerEnv::new(scenario.clone())?;
            let powers = policy.act_deterministic(env.observation())?;
            let report = cfj_core::capacity::report(
                &scenario,
                env.gains(),
                &powers,
                env.association(),
            );
            let mut text = format!(
                "scenario {} policy {}\nsum_secrecy_bps={}\nsum_eve_capacity_bps={}\nsecrecy_ratio_pct={}\npowers_watts={}\n",
                scenario.name,
                checkpoint.display(),
                report.sum_secrecy,
                report.sum_eve_capacity,
                report.secrecy_ratio,
                powers
                    .as_slice()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(";")
            );
            if format == ReportFormat::Csv {
                text = format!(
                    "scenario,sum_secrecy_bps,sum_eve_capacity_bps,secrecy_ratio_pct,powers_watts\n{},{},{},{},{}\n",
                    scenario.name,
                    report.sum_secrecy,
                    report.sum_eve_capacity,
                    report.secrecy_ratio,
                    powers
                        .as_slice()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(";")
                );
            }
            write_or_print(&text, out.as_ref())
        }
        Command::Gen {
            n_aps,
            n_users,
            n_eves,
            map,
            seed,
            out,
        } => {
            let spec = RandomSpec {
                n_aps,
                n_users,
                n_eves,
                map_side_meters: map,
                radio: RadioParams::wifi_default(),
            };
            let scenario = generate_random_scenario(&spec, seed)?;
            match out {
                Some(path) => save_scenario(&scenario, &path)?,
                None => {
                    let text = serde_json::to_string_pretty(&scenario).expect("serializable");
                    println!("{text}");
                }
            }
            Ok(())
        }
    }
}

/// Stable error category for scripting; printed as `error[<cat>]: ...`.
fn categorize(err: &anyhow::Error) -> &'static str {
    if let Some(e) = err.downcast_ref::<ScenarioError>() {
        return match e {
            ScenarioError::Io { .. } => "io",
            ScenarioError::Parse { .. } => "parse",
            ScenarioError::Validation { .. } => "validation",
            ScenarioError::BuiltinId(_) => "usage",
        };
    }
    if let Some(e) = err.downcast_ref::<SolverError>() {
        return match e {
            SolverError::BudgetExceeded { .. } => "budget",
            SolverError::InvalidConfig(_) => "config",
            SolverError::NonFiniteLoss { .. } => "solver",
            SolverError::DimensionMismatch { .. } => "usage",
            SolverError::Checkpoint(_) => "checkpoint",
            SolverError::Env(_) => "usage",
        };
    }
    if let Some(e) = err.downcast_ref::<HarnessError>() {
        return match e {
            HarnessError::Solver(_) => "solver",
            HarnessError::Env(_) => "usage",
            HarnessError::Io { .. } => "io",
        };
    }
    if err.downcast_ref::<cfj_core::optimizer::EnvError>().is_some() {
        return "usage";
    }
    "error"
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {:#}", categorize(&err), err);
            ExitCode::FAILURE
        }
    }
}
