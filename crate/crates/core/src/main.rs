use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use orbit_closure::cli::{
    batch_run, parse_scenario, run_scenario, Analysis, Scenario, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION,
};

/// Orbit closedness checks for scenario files.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every analysis listed in a scenario.
    Run {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all scenarios in a directory.
    Batch {
        dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Directory for the per-scenario reports.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Probe the moment-map identities on a scenario's representation.
    Identities {
        file: PathBuf,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the generic-closedness sampler of a scenario.
    Sample {
        file: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(file: &PathBuf) -> Result<Scenario, String> {
    let text = fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_scenario(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn emit(scenario: &Scenario, out: Option<&PathBuf>) -> Result<i32, String> {
    let report = run_scenario(scenario);
    let text = report.to_json() + "\n";
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Run { file, out } => emit(&load(&file)?, out.as_ref()),
        Command::Identities { file, probes, seed, out } => {
            let mut s = load(&file)?;
            s.analyses = vec![Analysis::Identities];
            s.options.probes = probes.or(s.options.probes);
            s.options.seed = seed.or(s.options.seed);
            emit(&s, out.as_ref())
        }
        Command::Sample { file, n, seed, out } => {
            let mut s = load(&file)?;
            s.analyses = vec![Analysis::Stability];
            s.options.samples = n.or(s.options.samples);
            s.options.seed = seed.or(s.options.seed);
            emit(&s, out.as_ref())
        }
        Command::Batch { dir, jobs, out } => {
            let summary = batch_run(&dir, jobs, out.as_deref()).map_err(|e| format!("{}: {e}", dir.display()))?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(if summary.all_passed() { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return ExitCode::from(code as u8);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
