use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qfc_cli::{run, Command, Options};

#[derive(Parser)]
#[command(name = "qfc", version, about = "Slow-light single-photon frequency conversion")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check the regime conditions
    Validate,
    /// Propagate a single photon and write histories and a summary
    Simulate,
    /// Run the sweep described by the `sweep.*` keys
    Sweep,
    /// Transfer the configured time-bin qubit
    Qubit,
    /// Run all three tiers and report their differences
    CompareTiers,
}

#[derive(Args)]
struct Common {
    /// Scenario file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Override the configured tier (analytic | reduced | full)
    #[arg(long, global = true)]
    tier: Option<String>,
    /// Worker threads for sweeps
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Exit 0 from `validate` even when a condition fails
    #[arg(long, global = true)]
    lenient: bool,
    /// Write every K-th slice and sample of the field history
    #[arg(long, global = true, default_value_t = 1)]
    decimate: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Some(config) = cli.common.config else {
        eprintln!("error: --config PATH is required");
        return ExitCode::from(1);
    };
    let tier = match cli.common.tier.as_deref().map(str::parse) {
        None => None,
        Some(Ok(t)) => Some(t),
        Some(Err(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.common.decimate == 0 {
        eprintln!("error: --decimate must be >= 1");
        return ExitCode::from(1);
    }
    let options = Options {
        config,
        out: cli.common.out,
        tier,
        jobs: cli.common.jobs,
        lenient: cli.common.lenient,
        decimate: cli.common.decimate,
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Simulate => Command::Simulate,
        Cmd::Sweep => Command::Sweep,
        Cmd::Qubit => Command::Qubit,
        Cmd::CompareTiers => Command::CompareTiers,
    };
    match run(command, &options, &mut std::io::stdout().lock()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
