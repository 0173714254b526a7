//! Command-line surface: `simulate`, `tune`, `sweep`, `compare`, `calibrate`,
//! and `report` subcommands over the library.
//!
//! Exit codes: 0 on success, 1 on runtime or validation failures (one-line
//! diagnostic on stderr), 2 on usage errors. The `V2XCALIB_SEED` environment
//! variable overrides the scenario-file seed for reproducible CI runs; an
//! explicit `--seed` flag overrides both.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::calib::{calibrate, trend_compare, CalibrationGrid};
use crate::config::{DeviceKind, FadingKind, McsId, ScenarioConfig};
use crate::io::{
    self, collect_condition_samples, condition_report, fmt_sig9, parse_grid, report_rows_to_csv,
    write_json_pretty, write_run_outputs, Metric,
};
use crate::sim::{run, saturate_interval, sweep, SweepAxes};

pub const SEED_ENV_VAR: &str = "V2XCALIB_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "v2xcalib",
    version,
    about = "802.11p link-level simulator and trial-vs-simulation calibration harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct JobsArg {
    /// Cap on worker threads for parallel runs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write its record CSV and JSON summary.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Find the smallest send interval that saturates the channel without
    /// queue drops; prints the interval in seconds.
    Tune {
        scenario: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the Cartesian product of distances, MCSs, devices, and seeds.
    Sweep {
        scenario: PathBuf,
        /// Comma-separated distances in meters.
        #[arg(long, value_delimiter = ',')]
        distances: Vec<f64>,
        /// Comma-separated MCS tokens (e.g. bpsk12,qam64_34).
        #[arg(long, value_delimiter = ',')]
        mcs: Vec<String>,
        /// Comma-separated devices (lp,hp).
        #[arg(long, value_delimiter = ',')]
        devices: Vec<String>,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Trend-compare two result directories of record CSVs.
    Compare {
        sim_dir: PathBuf,
        trial_dir: PathBuf,
        /// throughput or jitter.
        #[arg(long, default_value = "throughput")]
        metric: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grid-search channel parameters against trial throughput.
    Calibrate {
        scenario: PathBuf,
        trial_dir: PathBuf,
        /// Path-loss exponent grid, start:stop:step (e.g. 2.0:2.6:0.1).
        #[arg(long)]
        alpha_grid: String,
        /// Rician K grid in dB, start:stop:step (e.g. 0:10:0.5).
        #[arg(long)]
        k_grid: String,
        /// Also evaluate Rayleigh fading at every alpha.
        #[arg(long)]
        include_rayleigh: bool,
        /// Comma-separated seeds for the simulated side.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Boxplot table per condition from a results directory.
    Report {
        results_dir: PathBuf,
        /// csv or json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// throughput or jitter.
        #[arg(long, default_value = "throughput")]
        metric: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses and executes an argv; returns the process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version on stdout (exit 0) and usage errors
            // on stderr (exit 2).
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn load_scenario_with_seed(path: &Path, seed_flag: Option<u64>) -> Result<(ScenarioConfig, String), String> {
    let (mut sc, name) = io::load_scenario(path).map_err(|e| e.to_string())?;
    if let Ok(value) = std::env::var(SEED_ENV_VAR) {
        sc.seed = value
            .parse()
            .map_err(|_| format!("{SEED_ENV_VAR} must be an unsigned integer, got `{value}`"))?;
    }
    if let Some(seed) = seed_flag {
        sc.seed = seed;
    }
    Ok((sc, name))
}

fn parse_mcs_list(tokens: &[String]) -> Result<Vec<McsId>, String> {
    tokens.iter().map(|t| t.parse::<McsId>().map_err(|e| e.to_string())).collect()
}

fn parse_device_list(tokens: &[String]) -> Result<Vec<DeviceKind>, String> {
    tokens.iter().map(|t| t.parse::<DeviceKind>().map_err(|e| e.to_string())).collect()
}

fn execute(command: Command) -> Result<(), String> {
    match command {
        Command::Simulate { scenario, seed, out } => {
            let (sc, name) = load_scenario_with_seed(&scenario, seed)?;
            let metrics = run(&sc).map_err(|e| e.to_string())?;
            let (csv_path, json_path) =
                write_run_outputs(&out, &name, &sc, &metrics).map_err(|e| e.to_string())?;
            println!(
                "{} datagrams received, throughput {} bit/s",
                metrics.datagrams_received,
                fmt_sig9(metrics.throughput_bps())
            );
            println!("wrote {} and {}", csv_path.display(), json_path.display());
            Ok(())
        }
        Command::Tune { scenario, seed } => {
            let (sc, _) = load_scenario_with_seed(&scenario, seed)?;
            let interval = saturate_interval(&sc).map_err(|e| e.to_string())?;
            println!("{}", fmt_sig9(interval));
            Ok(())
        }
        Command::Sweep { scenario, distances, mcs, devices, seeds, out, jobs } => {
            let (sc, name) = load_scenario_with_seed(&scenario, None)?;
            let axes = SweepAxes {
                distances_m: distances,
                mcs: parse_mcs_list(&mcs)?,
                devices: parse_device_list(&devices)?,
            };
            let seeds = if seeds.is_empty() { vec![sc.seed] } else { seeds };
            let rows = sweep(&sc, &axes, &seeds, jobs.jobs).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            for row in &rows {
                let mut cell = sc.clone();
                cell.distance_m = row.distance_m;
                cell.mcs = row.mcs;
                cell.seed = row.seed;
                cell.tx_device = row.device.profile();
                cell.rx_device = row.device.profile();
                let stem = format!(
                    "{name}_{}_{}_d{}",
                    row.device.token().to_ascii_lowercase(),
                    row.mcs.token(),
                    fmt_sig9(row.distance_m)
                );
                write_run_outputs(&out, &stem, &cell, &row.metrics).map_err(|e| e.to_string())?;
            }
            println!("wrote {} runs to {}", rows.len(), out.display());
            Ok(())
        }
        Command::Compare { sim_dir, trial_dir, metric, out } => {
            let metric: Metric = metric.parse()?;
            let sim = collect_condition_samples(&sim_dir, metric).map_err(|e| e.to_string())?;
            let trial = collect_condition_samples(&trial_dir, metric).map_err(|e| e.to_string())?;
            let report = trend_compare(&sim, &trial).map_err(|e| e.to_string())?;
            emit_json(&report, out.as_deref())
        }
        Command::Calibrate {
            scenario,
            trial_dir,
            alpha_grid,
            k_grid,
            include_rayleigh,
            seeds,
            out,
            jobs,
        } => {
            let (sc, _) = load_scenario_with_seed(&scenario, None)?;
            let alphas = parse_grid(&alpha_grid).map_err(|e| e.to_string())?;
            let mut fadings: Vec<FadingKind> = parse_grid(&k_grid)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|k_db| FadingKind::Rician { k_db })
                .collect();
            if include_rayleigh {
                fadings.push(FadingKind::Rayleigh);
            }
            let trial =
                collect_condition_samples(&trial_dir, Metric::Throughput).map_err(|e| e.to_string())?;
            let grid = CalibrationGrid { alphas, fadings };
            let result = calibrate(&trial, &sc, &grid, &seeds, jobs.jobs).map_err(|e| e.to_string())?;
            eprintln!(
                "best alpha {} fading {} divergence {}",
                fmt_sig9(result.best_alpha),
                result.best_fading,
                fmt_sig9(result.divergence)
            );
            emit_json(&result, out.as_deref())
        }
        Command::Report { results_dir, format, metric, out } => {
            let metric: Metric = metric.parse()?;
            let rows = condition_report(&results_dir, metric).map_err(|e| e.to_string())?;
            match format.to_ascii_lowercase().as_str() {
                "csv" => {
                    let text = report_rows_to_csv(&rows);
                    match out {
                        Some(path) => std::fs::write(&path, text)
                            .map_err(|e| format!("{}: {e}", path.display()))?,
                        None => print!("{text}"),
                    }
                    Ok(())
                }
                "json" => emit_json(&rows, out.as_deref()),
                other => Err(format!("unknown format `{other}` (expected csv or json)")),
            }
        }
    }
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(path) => write_json_pretty(path, value).map_err(|e| e.to_string()),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
            println!("{text}");
            Ok(())
        }
    }
}
