use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gsa_harness::algorithms::Algorithm;
use gsa_harness::config::{ExperimentConfig, BENCHMARK_SUMMARIES};
use gsa_harness::report::generate_report;
use gsa_harness::runner::{read_results, run_matrix_to_csv};
use gsa_harness::HarnessError;

#[derive(Parser)]
#[command(
    name = "gsa-harness",
    about = "Experiment matrix runner and report generator for the gsa optimizer",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every (cell x algorithm x seed) of a config, appending rows to
    /// <out>/results.csv as they complete.
    Run {
        /// TOML experiment config.
        #[arg(long)]
        config: PathBuf,
        /// Output directory for results.csv.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to available parallelism, 1 forces
        /// sequential execution.
        #[arg(long)]
        workers: Option<usize>,
        /// Restrict to one matrix id.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Produce a markdown report from a results CSV.
    Report {
        /// Results CSV produced by `run`.
        #[arg(long)]
        results: PathBuf,
        /// The config the results were produced from.
        #[arg(long)]
        config: PathBuf,
        /// Reference algorithm for the pairwise tables.
        #[arg(long)]
        reference: String,
        /// Output markdown path.
        #[arg(long)]
        out: PathBuf,
        /// Restrict to one matrix id.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Print the registered algorithm names.
    ListAlgorithms,
    /// Print the available benchmarks and their config keys.
    ListBenchmarks,
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run {
            config,
            out,
            workers,
            matrix,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            std::fs::create_dir_all(&out)
                .map_err(|e| HarnessError::Io(format!("creating {}: {e}", out.display())))?;
            let csv_path = out.join("results.csv");
            let workers = workers.unwrap_or_else(default_workers).max(1);
            let summary = run_matrix_to_csv(&cfg, matrix.as_deref(), &csv_path, workers)?;
            println!(
                "{} runs ({} ok, {} encoder errors) -> {}",
                summary.total,
                summary.ok,
                summary.encoder_errors,
                csv_path.display()
            );
            Ok(())
        }
        Command::Report {
            results,
            config,
            reference,
            out,
            matrix,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = read_results(&results)?;
            let text = generate_report(&rows, &cfg, matrix.as_deref(), &reference)?;
            std::fs::write(&out, text)
                .map_err(|e| HarnessError::Io(format!("writing {}: {e}", out.display())))?;
            println!("report -> {}", out.display());
            Ok(())
        }
        Command::ListAlgorithms => {
            for name in Algorithm::all_names() {
                println!("{name}");
            }
            Ok(())
        }
        Command::ListBenchmarks => {
            for (name, summary) in BENCHMARK_SUMMARIES {
                println!("{name}: {summary}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
