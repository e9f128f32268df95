//! Experiment harness: runs the three Wi-Fi implementations on a
//! scenario, collects the secrecy metrics, and emits comparison reports.
//!
//! The three implementations are (a) normal Wi-Fi, strongest-signal
//! association with idle APs silent; (b) smart AP, secrecy-aware
//! association with idle APs silent; and (c) RL-based cooperative
//! friendly jamming, secrecy-aware association with every AP transmit
//! power chosen by a solver over the full box, so idle APs become
//! jammers. Baselines keep idle APs silent while the optimized row
//! drives all APs; that asymmetry is deliberate and stated in the
//! emitted report header.

use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::association::{
    associate_max_secrecy, associate_strongest_signal, idle_ap_powers, IdleMode,
};
use crate::capacity::{report, Association, PowerAllocation, SecrecyReport};
use crate::optimizer::{
    cem_optimize, grid_search_oracle, sac_train, EnvError, PowerEnv, SolverConfig, SolverError,
};
use crate::propagation::{gain_matrix, GainMatrix};
use crate::scenario::Scenario;

/// Which solver backs the optimized implementation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Grid,
    Cem,
    Sac,
}

impl SolverKind {
    pub fn label(&self) -> &'static str {
        match self {
            SolverKind::Grid => "grid",
            SolverKind::Cem => "cem",
            SolverKind::Sac => "sac",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid" => Ok(SolverKind::Grid),
            "cem" => Ok(SolverKind::Cem),
            "sac" => Ok(SolverKind::Sac),
            other => Err(format!("unknown solver '{other}' (expected grid|cem|sac)")),
        }
    }
}

/// The three simulated implementations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implementation {
    NormalWifi,
    SmartAp,
    RlCfj,
}

impl Implementation {
    pub const ALL: [Implementation; 3] = [
        Implementation::NormalWifi,
        Implementation::SmartAp,
        Implementation::RlCfj,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Implementation::NormalWifi => "normal_wifi",
            Implementation::SmartAp => "smart_ap",
            Implementation::RlCfj => "rl_cfj",
        }
    }
}

/// Association, powers, and metrics for one implementation.
#[derive(Debug, Clone)]
pub struct ImplementationResult {
    pub association: Association,
    pub powers: PowerAllocation,
    pub report: SecrecyReport,
}

/// Provenance of the optimized row.
#[derive(Debug, Clone)]
pub struct SolverMeta {
    pub solver: SolverKind,
    pub seed: u64,
    pub wall_time: Duration,
}

/// Results of one scenario across all three implementations, computed on
/// a single shared gain matrix.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub scenario_name: String,
    pub normal_wifi: ImplementationResult,
    pub smart_ap: ImplementationResult,
    pub rl_cfj: ImplementationResult,
    pub solver_meta: SolverMeta,
}

impl ComparisonReport {
    pub fn by_implementation(&self, imp: Implementation) -> &ImplementationResult {
        match imp {
            Implementation::NormalWifi => &self.normal_wifi,
            Implementation::SmartAp => &self.smart_ap,
            Implementation::RlCfj => &self.rl_cfj,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error("cannot write report to {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn baseline_result(
    scenario: &Scenario,
    gains: &GainMatrix,
    association: Association,
) -> ImplementationResult {
    let powers = idle_ap_powers(
        &association,
        scenario.n_aps(),
        IdleMode::Baseline,
        scenario.radio.p_max_watts,
    );
    let report = report(scenario, gains, &powers, &association);
    ImplementationResult {
        association,
        powers,
        report,
    }
}

/// Normal Wi-Fi: strongest-signal association, serving APs at full
/// power, idle APs silent.
pub fn run_normal_wifi(scenario: &Scenario) -> ImplementationResult {
    let gains = gain_matrix(scenario);
    run_normal_wifi_with(scenario, &gains)
}

fn run_normal_wifi_with(scenario: &Scenario, gains: &GainMatrix) -> ImplementationResult {
    baseline_result(scenario, gains, associate_strongest_signal(gains))
}

/// Smart AP: secrecy-aware association, serving APs at full power, idle
/// APs silent, no power optimization.
pub fn run_smart_ap(scenario: &Scenario) -> ImplementationResult {
    let gains = gain_matrix(scenario);
    run_smart_ap_with(scenario, &gains)
}

fn run_smart_ap_with(scenario: &Scenario, gains: &GainMatrix) -> ImplementationResult {
    baseline_result(scenario, gains, associate_max_secrecy(scenario, gains))
}

/// RL-based cooperative friendly jamming: secrecy-aware association,
/// then transmit powers from the chosen solver over the full box.
pub fn run_rl_cfj(
    scenario: &Scenario,
    solver: SolverKind,
    config: &SolverConfig,
) -> Result<(ImplementationResult, SolverMeta), HarnessError> {
    let gains = gain_matrix(scenario);
    run_rl_cfj_with(scenario, &gains, solver, config)
}

fn run_rl_cfj_with(
    scenario: &Scenario,
    gains: &GainMatrix,
    solver: SolverKind,
    config: &SolverConfig,
) -> Result<(ImplementationResult, SolverMeta), HarnessError> {
    let association = associate_max_secrecy(scenario, gains);
    let env = PowerEnv::from_parts(
        scenario.clone(),
        gains.clone(),
        association.clone(),
        crate::optimizer::DEFAULT_MAP_SIDE_M,
    )?;
    let start = Instant::now();
    let powers = match solver {
        SolverKind::Grid => grid_search_oracle(&env, config.grid_step_watts)?.0,
        SolverKind::Cem => cem_optimize(&env, &config.cem, config.seed)?.powers,
        SolverKind::Sac => {
            let outcome = sac_train(&env, &config.sac, config.seed)?;
            outcome.policy.act_deterministic(env.observation())?
        }
    };
    let wall_time = start.elapsed();
    let report = report(scenario, gains, &powers, &association);
    Ok((
        ImplementationResult {
            association,
            powers,
            report,
        },
        SolverMeta {
            solver,
            seed: config.seed,
            wall_time,
        },
    ))
}

/// Runs all three implementations on one shared gain matrix.
pub fn run_comparison(
    scenario: &Scenario,
    solver: SolverKind,
    config: &SolverConfig,
) -> Result<ComparisonReport, HarnessError> {
    let gains = gain_matrix(scenario);
    let normal_wifi = run_normal_wifi_with(scenario, &gains);
    let smart_ap = run_smart_ap_with(scenario, &gains);
    let (rl_cfj, solver_meta) = run_rl_cfj_with(scenario, &gains, solver, config)?;
    Ok(ComparisonReport {
        scenario_name: scenario.name.clone(),
        normal_wifi,
        smart_ap,
        rl_cfj,
        solver_meta,
    })
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

/// Output layout for [`emit_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown format '{other}' (expected csv|table)")),
        }
    }
}

const REPORT_NOTE: &str =
    "baselines keep idle APs silent; rl_cfj transmits on all APs (idle ones jam)";

fn join_powers(p: &PowerAllocation) -> String {
    p.as_slice()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// Renders a comparison report. Output is byte-stable for identical
/// inputs; floats use shortest round-trip formatting so every metric can
/// be recomputed exactly from the emitted powers.
pub fn render_report(report: &ComparisonReport, format: ReportFormat) -> String {
    let rows: Vec<[String; 6]> = Implementation::ALL
        .iter()
        .map(|imp| {
            let r = report.by_implementation(*imp);
            [
                report.scenario_name.clone(),
                imp.label().to_string(),
                r.report.sum_secrecy.to_string(),
                r.report.sum_eve_capacity.to_string(),
                r.report.secrecy_ratio.to_string(),
                join_powers(&r.powers),
            ]
        })
        .collect();
    let header = [
        "scenario",
        "implementation",
        "sum_secrecy_bps",
        "sum_eve_capacity_bps",
        "secrecy_ratio_pct",
        "powers_watts",
    ];

    match format {
        ReportFormat::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# {REPORT_NOTE}\n"));
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Table => {
            let mut widths = header.map(str::len);
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row.iter()) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            out.push_str(&format!("{REPORT_NOTE}\n"));
            let fmt_row = |cells: &[String]| -> String {
                cells
                    .iter()
                    .zip(widths.iter())
                    .map(|(c, w)| format!("{c:w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            out.push_str(&fmt_row(&header.map(String::from)));
            out.push('\n');
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1)));
            out.push('\n');
            for row in rows {
                out.push_str(&fmt_row(&row));
                out.push('\n');
            }
            out
        }
    }
}

/// Writes the rendered report to a file.
pub fn emit_report(
    report: &ComparisonReport,
    format: ReportFormat,
    out: impl AsRef<Path>,
) -> Result<(), HarnessError> {
    let path = out.as_ref();
    std::fs::write(path, render_report(report, format)).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}
