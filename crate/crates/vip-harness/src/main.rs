use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vip_harness::config::{merge_json, ConfigError, RunConfig};
use vip_harness::{compare, preset, preset_names, run};

/// Benchmark CLI for variational-inequality solvers.
#[derive(Parser)]
#[command(name = "vip-bench", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one configured solve and write trace + summary CSVs.
    ///
    /// Exit status: 0 converged, 1 config error, 2 iteration cap,
    /// 3 numerical blow-up.
    Run {
        /// JSON config file; overlays the preset when both are given.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Named preset (see `presets list`).
        #[arg(long)]
        preset: Option<String>,
        /// Output directory (overrides config and $VIP_OUT_DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several algorithms on one problem and seed; write a combined
    /// CSV, a gnuplot script, and a summary table.
    Compare {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        preset: Option<String>,
        /// Comma-separated algorithm names.
        #[arg(long, value_delimiter = ',', required = true)]
        algos: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preset management.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    /// List available presets.
    List,
}

fn load_config(
    preset_name: Option<&str>,
    config_path: Option<&Path>,
) -> Result<RunConfig, ConfigError> {
    let preset_cfg = match preset_name {
        Some(name) => Some(preset(name).ok_or_else(|| {
            let available = preset_names()
                .iter()
                .map(|(n, _)| *n)
                .collect::<Vec<_>>()
                .join(", ");
            ConfigError::UnknownPreset(name.to_string(), available)
        })?),
        None => None,
    };
    let file_cfg = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            // Parse as a full config first: every field has a default, so
            // partial overlays are valid configs and this surfaces unknown
            // keys and type errors with line/column positions.
            let _ = RunConfig::from_json(&text)?;
            Some(serde_json::from_str::<serde_json::Value>(&text)?)
        }
        None => None,
    };
    match (preset_cfg, file_cfg) {
        (None, None) => Err(ConfigError::Empty),
        (Some(p), None) => Ok(p),
        (None, Some(f)) => Ok(serde_json::from_value(f)?),
        (Some(p), Some(f)) => {
            let mut merged = serde_json::to_value(&p).expect("preset serializes");
            merge_json(&mut merged, f);
            Ok(serde_json::from_value(merged)?)
        }
    }
}

fn resolve_out_dir(flag: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    flag.or_else(|| config.output.dir.clone())
        .or_else(|| std::env::var_os("VIP_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            preset,
            out,
        } => {
            let cfg = match load_config(preset.as_deref(), config.as_deref()) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(1);
                }
            };
            let out_dir = resolve_out_dir(out, &cfg);
            match run(&cfg, &out_dir) {
                Ok(report) => {
                    println!(
                        "{} on {}: {} after {} iterations, final residual {:e}, {:.3}s",
                        report.algorithm,
                        report.problem,
                        match report.exit_code() {
                            0 => "converged",
                            2 => "hit the iteration cap",
                            _ => "stopped on non-finite values",
                        },
                        report.outcome.iterations(),
                        report.final_residual,
                        report.wall_time,
                    );
                    println!("trace: {}", report.trace_path.display());
                    println!("summary: {}", report.summary_path.display());
                    ExitCode::from(report.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Compare {
            config,
            preset,
            algos,
            out,
        } => {
            let cfg = match load_config(preset.as_deref(), config.as_deref()) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(1);
                }
            };
            let out_dir = resolve_out_dir(out, &cfg);
            match compare(&cfg, &algos, &out_dir) {
                Ok(report) => {
                    for entry in &report.entries {
                        println!(
                            "{:>8}: {:>9} iterations, final residual {:e}, {:.3}s",
                            entry.algorithm,
                            entry.outcome.iterations(),
                            entry.final_residual,
                            entry.wall_time,
                        );
                    }
                    println!("combined: {}", report.combined_path.display());
                    println!("plot script: {}", report.plot_path.display());
                    println!("summary: {}", report.summary_path.display());
                    ExitCode::from(report.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Presets { action } => match action {
            PresetsAction::List => {
                for (name, description) in preset_names() {
                    println!("{name:<18} {description}");
                }
                ExitCode::SUCCESS
            }
        },
    }
}
