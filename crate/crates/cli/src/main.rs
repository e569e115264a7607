use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use qcomplexity::trajectory::DEFAULT_SAMPLES;
use qcomplexity::verify::{run_harness, REPORT_HEADER};
use qcomplexity::{AnalysisConfig, AveragingMode};
use qcomplexity_cli::{
    figure_rows, parse_angle, partition_rows, run_sweep, table_rows, write_evolution, write_figure,
    write_sweep_csv, write_table, Figure, SweepConfig, TableKind,
};

#[derive(Parser)]
#[command(
    name = "qcomplexity",
    version,
    about = "Complexity of sub-optimal qubit evolutions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Angle between source and target Bloch vectors
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    theta_ab: f64,
    /// Energy scale omega = E / hbar
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Trajectory samples (at least 2049)
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value = "appendix-piecewise")]
    averaging: AveragingMode,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            samples: self.samples,
            mode: self.averaging,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a grid of alpha values and write one CSV row per angle
    Sweep {
        #[arg(long, default_value = "0", value_parser = parse_angle)]
        alpha_start: f64,
        #[arg(long, default_value = "pi", value_parser = parse_angle)]
        alpha_end: f64,
        /// Number of sub-intervals
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Single angle; overrides the start/end range
        #[arg(long, value_parser = parse_angle)]
        alpha: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Dump the sampled trajectory for one alpha
    Evolve {
        #[arg(long, value_parser = parse_angle)]
        alpha: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Print the efficiency, time and volume tables on the pi/16 grid
    Tables {
        /// I, II or III
        which: TableKind,
        #[command(flatten)]
        common: Common,
    },
    /// Write dense figure series over [0, pi]
    Figdata {
        /// fig2, fig4 or fig5
        which: Figure,
        #[arg(long, default_value_t = 257)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the oracle, symmetry and scaling checks
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

fn output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Sweep {
            alpha_start,
            alpha_end,
            steps,
            alpha,
            common,
        } => {
            let (start, end) = alpha.map_or((alpha_start, alpha_end), |a| (a, a));
            let cfg = SweepConfig {
                alpha_start: start,
                alpha_end: end,
                steps,
                theta_ab: common.theta_ab,
                omega: common.omega,
                samples: common.samples,
                averaging_mode: common.averaging,
            };
            let rows = run_sweep(&cfg)?;
            let (records, failed) = partition_rows(&rows);
            for (a, msg) in &failed {
                eprintln!("alpha = {a}: {msg}");
            }
            let mut out = output(&common.out)?;
            write_sweep_csv(&records, &mut out)?;
            out.flush()?;
            Ok(failed.is_empty())
        }
        Command::Evolve { alpha, common } => {
            let mut out = output(&common.out)?;
            write_evolution(
                common.theta_ab,
                common.omega,
                alpha,
                common.samples,
                &mut out,
            )?;
            out.flush()?;
            Ok(true)
        }
        Command::Tables { which, common } => {
            let rows = table_rows(which, &common.analysis())?;
            let mut out = output(&common.out)?;
            write_table(which, &rows, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Figdata {
            which,
            points,
            common,
        } => {
            let rows = figure_rows(
                which,
                points,
                common.theta_ab,
                common.omega,
                &common.analysis(),
            )?;
            let mut out = output(&common.out)?;
            write_figure(which, &rows, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Verify { common } => {
            let records = run_harness(&common.analysis());
            let mut out = output(&common.out)?;
            writeln!(out, "{REPORT_HEADER}")?;
            for r in &records {
                writeln!(out, "{r}")?;
            }
            out.flush()?;
            Ok(records.iter().all(|r| r.pass))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
