use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use floquet_core::harness::{
    exit_code, format_table, load_config, run_scenario, verify_all, RunOptions, VerifyOptions,
};

/// Multiple-period Floquet states of pulsed qubits and modulated qubit chains.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory for CSV and JSON files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Override every numerical check tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Comma-separated seed list; `verify` uses the first.
    #[arg(long, global = true, value_delimiter = ',')]
    seed: Option<Vec<u64>>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config.
    Run { config: PathBuf },
    /// Run the cross-oracle verification suite.
    Verify,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let status = match &cli.command {
        Command::Run { config } => load_config(config).and_then(|cfg| {
            let report = run_scenario(
                &cfg,
                &RunOptions {
                    out_dir: cli.out.clone(),
                    tol: cli.tol,
                    seeds: cli.seed.clone(),
                },
            )?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", format_table(&report.checks));
            Ok(report.passed)
        }),
        Command::Verify => verify_all(VerifyOptions {
            tol: cli.tol,
            seed: cli
                .seed
                .as_ref()
                .and_then(|s| s.first().copied())
                .unwrap_or(1),
        })
        .map(|checks| {
            print!("{}", format_table(&checks));
            checks.iter().all(|c| c.passed)
        }),
    };
    match status {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
