use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use metakernel::harness::{self, suites, RunOptions, DEFAULT_SAMPLES, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "metakernel", version, about = "Term rewriting with checked meta-extract facts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process an event file, then check every consumed fact by evaluation.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print each rewrite step.
        #[arg(long)]
        trace: bool,
        /// Write the ledger report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run every property suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Run { file, samples, seed, trace, report } => {
            let options = RunOptions { samples, seed, trace };
            let result = match harness::run_events(&file, &options) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("metakernel: {e}");
                    return ExitCode::from(2);
                }
            };
            for line in &result.lines {
                println!("{line}");
            }
            let rendered = result.render();
            match report {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &rendered) {
                        eprintln!("metakernel: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                    if let Some(summary) = rendered.lines().last() {
                        println!("{summary}");
                    }
                }
                None => print!("{rendered}"),
            }
            ExitCode::from(result.exit_code() as u8)
        }
        Command::Selftest { seed } => {
            let results = suites::all(seed);
            for r in &results {
                println!("{r}");
            }
            if results.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
