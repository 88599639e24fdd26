//! `magic-meter`: the pipeline as composable subcommands over files.
//!
//! Exit codes: 0 success, 1 user error (bad flags, malformed inputs,
//! infeasible parameters), 2 internal error (a bug — an invariant panic).
//! Every generating or sampling subcommand takes an explicit `--seed`;
//! nothing ever seeds itself from the clock.

mod commands;

use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "magic-meter",
    version,
    about = "Generate, label, featurize, and regress the stabilizer Rényi entropy of quantum circuits"
)]
struct Cli {
    /// Worker threads (0 = auto). MAGIC_METER_THREADS is the fallback.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: commands::Command,
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

fn init_threads(flag: usize) {
    let threads = if flag > 0 {
        flag
    } else {
        std::env::var("MAGIC_METER_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(0)
    };
    if threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    init_logging(cli.verbose);
    init_threads(cli.threads);

    let outcome = std::panic::catch_unwind(|| commands::run(cli.command));
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            ExitCode::from(2)
        }
    }
}
