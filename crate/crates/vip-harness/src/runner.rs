use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use thiserror::Error;
use vip_core::{natural_residual, ProblemInstance, SplitMix64};
use vip_solvers::registry::{build_solver, BuildError};
use vip_solvers::{IterationRecord, ParamError, SolveOutcome, StopReason, StopRule};

use crate::config::{ConfigError, RunConfig};
use crate::init::seeded_init;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Setup(#[from] ParamError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Outcome of one configured run, with the files it produced.
#[derive(Debug)]
pub struct RunReport {
    pub algorithm: String,
    pub problem: String,
    pub outcome: SolveOutcome,
    pub final_residual: f64,
    pub wall_time: f64,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
}

impl RunReport {
    pub fn exit_code(&self) -> u8 {
        match self.outcome.reason {
            StopReason::Converged => 0,
            StopReason::MaxIters => 2,
            StopReason::NonFinite => 3,
        }
    }
}

/// Outcome of a multi-algorithm comparison on one shared problem/seed.
#[derive(Debug)]
pub struct CompareReport {
    pub entries: Vec<CompareEntry>,
    pub combined_path: PathBuf,
    pub plot_path: PathBuf,
    pub summary_path: PathBuf,
}

#[derive(Debug)]
pub struct CompareEntry {
    pub algorithm: String,
    pub outcome: SolveOutcome,
    pub final_residual: f64,
    pub wall_time: f64,
}

impl CompareReport {
    pub fn all_converged(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.outcome.reason == StopReason::Converged)
    }

    pub fn exit_code(&self) -> u8 {
        if self.all_converged() {
            0
        } else {
            2
        }
    }
}

fn reason_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::Converged => "converged",
        StopReason::MaxIters => "max-iters",
        StopReason::NonFinite => "non-finite",
    }
}

/// Resolves the parameter block for an algorithm: the explicit `algorithm.
/// params` wins, otherwise the per-name block from the `algorithms` map,
/// otherwise all defaults.
fn params_for(config: &RunConfig, name: &str) -> serde_json::Value {
    let explicit = &config.algorithm.params;
    let is_empty = explicit.as_object().is_some_and(|o| o.is_empty());
    if config.algorithm.name == name && !is_empty {
        return explicit.clone();
    }
    config
        .algorithms
        .get(name)
        .cloned()
        .unwrap_or_else(|| serde_json::json!({}))
}

struct Execution {
    outcome: SolveOutcome,
    final_residual: f64,
    wall_time: f64,
}

fn execute(
    config: &RunConfig,
    problem: &ProblemInstance,
    name: &str,
) -> Result<Execution, HarnessError> {
    let solver = build_solver(name, &params_for(config, name), problem)?;
    let x0 = seeded_init(problem.dim(), config.problem.seed, problem.set());
    let stop: StopRule = config.stopping.into();
    let started = Instant::now();
    let outcome = solver.solve(problem, &x0, &stop)?;
    let wall_time = if config.output.timing {
        started.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let final_residual = natural_residual(&outcome.x, problem);
    Ok(Execution {
        outcome,
        final_residual,
        wall_time,
    })
}

fn open(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| HarnessError::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_trace_header(
    w: &mut impl Write,
    config: &RunConfig,
    problem: &ProblemInstance,
    algorithm_column: bool,
) -> std::io::Result<()> {
    writeln!(w, "# vip-bench trace v1")?;
    writeln!(
        w,
        "# rng: {} seed={}",
        SplitMix64::ALGORITHM,
        config.problem.seed
    )?;
    writeln!(w, "# config: {}", config.canonical_json())?;
    let mut header = String::new();
    if algorithm_column {
        header.push_str("algorithm,");
    }
    header.push_str("iter,residual,gap_xw,lambda,elapsed_s");
    for metric in problem.extra_metrics() {
        header.push(',');
        header.push_str(metric.name());
    }
    writeln!(w, "{header}")
}

fn write_trace_row(
    w: &mut impl Write,
    record: &IterationRecord,
    algorithm: Option<&str>,
    timing: bool,
) -> std::io::Result<()> {
    if let Some(name) = algorithm {
        write!(w, "{name},")?;
    }
    let elapsed = if timing { record.elapsed } else { 0.0 };
    write!(
        w,
        "{},{:e},{:e},{:e},{:.6}",
        record.j, record.residual, record.gap_xw, record.lambda, elapsed
    )?;
    for (_, value) in &record.extra {
        write!(w, ",{value:e}")?;
    }
    writeln!(w)
}

fn thinned(trace: &[IterationRecord], every: u64) -> impl Iterator<Item = &IterationRecord> {
    let every = every.max(1);
    let last = trace.len().saturating_sub(1);
    trace
        .iter()
        .enumerate()
        .filter(move |(i, _)| (*i as u64).is_multiple_of(every) || *i == last)
        .map(|(_, r)| r)
}

const SUMMARY_HEADER: &str = "algorithm,problem,iterations,stop_reason,final_residual,wall_time_s";

fn summary_row(algorithm: &str, problem: &str, exec: &Execution) -> String {
    format!(
        "{algorithm},{problem},{},{},{:e},{:.6}",
        exec.outcome.iterations(),
        reason_name(exec.outcome.reason),
        exec.final_residual,
        exec.wall_time
    )
}

/// Executes one run and writes its trace and summary files.
pub fn run(config: &RunConfig, out_dir: &Path) -> Result<RunReport, HarnessError> {
    let problem = config.problem.build()?;
    let name = config.algorithm.name.clone();
    let exec = execute(config, &problem, &name)?;

    let trace_path = out_dir.join(&config.output.trace);
    {
        let mut w = open(&trace_path)?;
        write_trace_header(&mut w, config, &problem, false).map_err(io_err(&trace_path))?;
        for record in thinned(&exec.outcome.trace, config.output.trace_every) {
            write_trace_row(&mut w, record, None, config.output.timing)
                .map_err(io_err(&trace_path))?;
        }
        w.flush().map_err(io_err(&trace_path))?;
    }

    let summary_path = out_dir.join(&config.output.summary);
    {
        let mut w = open(&summary_path)?;
        writeln!(w, "{SUMMARY_HEADER}").map_err(io_err(&summary_path))?;
        writeln!(
            w,
            "{}",
            summary_row(&name, config.problem.kind_name(), &exec)
        )
        .map_err(io_err(&summary_path))?;
        w.flush().map_err(io_err(&summary_path))?;
    }

    Ok(RunReport {
        algorithm: name,
        problem: config.problem.kind_name().to_string(),
        final_residual: exec.final_residual,
        wall_time: exec.wall_time,
        outcome: exec.outcome,
        trace_path,
        summary_path,
    })
}

const COMPARE_CSV: &str = "compare.csv";
const PLOT_SCRIPT: &str = "plot.gp";

/// Runs every named algorithm on the identical problem and initial point,
/// then writes the combined long-format CSV, a gnuplot script rendering
/// residual-vs-iteration curves, and a per-algorithm summary. Failed runs
/// are recorded per algorithm rather than aborting the comparison.
pub fn compare(
    config: &RunConfig,
    algos: &[String],
    out_dir: &Path,
) -> Result<CompareReport, HarnessError> {
    let problem = config.problem.build()?;
    let mut entries = Vec::with_capacity(algos.len());
    for name in algos {
        let exec = execute(config, &problem, name)?;
        entries.push(CompareEntry {
            algorithm: name.clone(),
            final_residual: exec.final_residual,
            wall_time: exec.wall_time,
            outcome: exec.outcome,
        });
    }

    let combined_path = out_dir.join(COMPARE_CSV);
    {
        let mut w = open(&combined_path)?;
        write_trace_header(&mut w, config, &problem, true).map_err(io_err(&combined_path))?;
        for entry in &entries {
            for record in thinned(&entry.outcome.trace, config.output.trace_every) {
                write_trace_row(&mut w, record, Some(&entry.algorithm), config.output.timing)
                    .map_err(io_err(&combined_path))?;
            }
        }
        w.flush().map_err(io_err(&combined_path))?;
    }

    let plot_path = out_dir.join(PLOT_SCRIPT);
    {
        let mut w = open(&plot_path)?;
        write_plot_script(&mut w, COMPARE_CSV, algos).map_err(io_err(&plot_path))?;
        w.flush().map_err(io_err(&plot_path))?;
    }

    let summary_path = out_dir.join(&config.output.summary);
    {
        let mut w = open(&summary_path)?;
        writeln!(w, "{SUMMARY_HEADER}").map_err(io_err(&summary_path))?;
        for entry in &entries {
            let exec = Execution {
                outcome: entry.outcome.clone(),
                final_residual: entry.final_residual,
                wall_time: entry.wall_time,
            };
            writeln!(
                w,
                "{}",
                summary_row(&entry.algorithm, config.problem.kind_name(), &exec)
            )
            .map_err(io_err(&summary_path))?;
        }
        w.flush().map_err(io_err(&summary_path))?;
    }

    Ok(CompareReport {
        entries,
        combined_path,
        plot_path,
        summary_path,
    })
}

/// Gnuplot script over the combined CSV: one residual curve per algorithm.
/// `every ::1` skips the header row; the `#` metadata lines are comments.
fn write_plot_script(w: &mut impl Write, csv_name: &str, algos: &[String]) -> std::io::Result<()> {
    writeln!(w, "# gnuplot script: residual-vs-iteration curves")?;
    writeln!(
        w,
        "# usage: gnuplot plot.gp  (expects {csv_name} alongside)"
    )?;
    writeln!(w, "set datafile separator \",\"")?;
    writeln!(w, "set logscale y")?;
    writeln!(w, "set xlabel \"iteration\"")?;
    writeln!(w, "set ylabel \"natural residual\"")?;
    writeln!(w, "set key top right")?;
    writeln!(w, "set terminal pngcairo size 960,640")?;
    writeln!(w, "set output \"compare.png\"")?;
    let terms: Vec<String> = algos
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let source = if i == 0 {
                format!("\"{csv_name}\"")
            } else {
                "\"\"".to_string()
            };
            format!(
                "{source} every ::1 using 2:(strcol(1) eq \"{name}\" ? column(3) : NaN) \
                 with lines title \"{name}\""
            )
        })
        .collect();
    writeln!(w, "plot \\\n  {}", terms.join(", \\\n  "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(j: u64) -> IterationRecord {
        IterationRecord {
            j,
            residual: 1.0 / (j + 1) as f64,
            gap_xw: 0.5,
            lambda: 0.1,
            elapsed: 0.25,
            extra: Vec::new(),
        }
    }

    #[test]
    fn exit_codes_partition_stop_reasons() {
        let outcome = |reason| SolveOutcome {
            x: vip_core::Vector::zeros(1),
            trace: Vec::new(),
            reason,
        };
        let report = |reason| RunReport {
            algorithm: "cg-segm".into(),
            problem: "ball".into(),
            outcome: outcome(reason),
            final_residual: 0.0,
            wall_time: 0.0,
            trace_path: PathBuf::new(),
            summary_path: PathBuf::new(),
        };
        assert_eq!(report(StopReason::Converged).exit_code(), 0);
        assert_eq!(report(StopReason::MaxIters).exit_code(), 2);
        assert_eq!(report(StopReason::NonFinite).exit_code(), 3);
    }

    #[test]
    fn thinning_keeps_first_and_last() {
        let trace: Vec<_> = (0..10).map(record).collect();
        let kept: Vec<u64> = thinned(&trace, 4).map(|r| r.j).collect();
        assert_eq!(kept, vec![0, 4, 8, 9]);
        let all: Vec<u64> = thinned(&trace, 1).map(|r| r.j).collect();
        assert_eq!(all.len(), 10);
        // Zero is treated as 1 rather than dividing by zero.
        let z: Vec<u64> = thinned(&trace, 0).map(|r| r.j).collect();
        assert_eq!(z.len(), 10);
    }

    #[test]
    fn row_format_parses_back() {
        let mut buf = Vec::new();
        write_trace_row(&mut buf, &record(3), None, true).unwrap();
        let line = String::from_utf8(buf).unwrap();
        let fields: Vec<&str> = line.trim().split(',').collect();
        assert_eq!(fields.len(), 5);
        assert_eq!(fields[0].parse::<u64>().unwrap(), 3);
        for f in &fields[1..] {
            assert!(f.parse::<f64>().unwrap().is_finite());
        }
    }

    #[test]
    fn timing_off_zeroes_elapsed() {
        let mut buf = Vec::new();
        write_trace_row(&mut buf, &record(0), None, false).unwrap();
        let line = String::from_utf8(buf).unwrap();
        assert!(line.trim().ends_with(",0.000000"), "got {line}");
    }
}
