//! Command-line front end: argument parsing, scenario files and artifact
//! emission for the `qpc` binary.

pub mod commands;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qpc_core::analysis::ReportFormat;

pub use commands::{cmd_attack, cmd_efficiency, cmd_run, ScenarioOptions, UsageError, EXIT_ABORT, EXIT_OK, EXIT_USAGE};
pub use scenario::{Scenario, ScenarioError};

#[derive(Debug, Parser)]
#[command(name = "qpc", version, about = "Multi-party quantum private comparison simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one session and write transcript, outcome and report.
    Run(ScenarioArgs),
    /// Run the scenario's attack campaign and write its report.
    Attack(ScenarioArgs),
    /// Print the qudit efficiency comparison table.
    Efficiency {
        /// Participant count or inclusive range, e.g. 3 or 3..10.
        #[arg(long, default_value = "3")]
        k: String,
        #[arg(long, default_value = "text", value_parser = parse_format)]
        format: ReportFormat,
    },
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario file, or the bundled name `paper-example`.
    #[arg(long)]
    pub scenario: String,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Artifact directory (default: $QPC_OUT_DIR, then ./qpc-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "text", value_parser = parse_format)]
    pub format: ReportFormat,
    /// Overrides the attack trial count.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Worker threads for attack trials (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|_| format!("unknown format `{s}` (expected text, records or csv)"))
}

impl From<ScenarioArgs> for ScenarioOptions {
    fn from(a: ScenarioArgs) -> Self {
        ScenarioOptions { scenario: a.scenario, seed: a.seed, out: a.out, format: a.format, trials: a.trials, workers: a.workers }
    }
}

/// Parses `args` and executes the command. Returns the process exit code:
/// 0 on success, 2 when the protocol aborts, 1 for anything else.
pub fn execute<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(stderr, "{text}") } else { write!(stdout, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args.into(), stdout).map(|a| a.exit_code()),
        Command::Attack(args) => cmd_attack(&args.into(), stdout).map(|_| EXIT_OK),
        Command::Efficiency { k, format } => cmd_efficiency(&k, format).map(|t| {
            let _ = write!(stdout, "{t}");
            EXIT_OK
        }),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}
