//! Command-line front-end for `sds-core`.
//!
//! Every subcommand produces a [`report::Report`] rendered as JSON or CSV.
//! Exit status is 0 on success, 2 on invalid input, 3 when a verification
//! suite has failing checks and 1 on IO failure. Diagnostics are single lines
//! on standard error.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod report;
pub mod verify;

use args::{Cli, Command, OutputArgs};

/// Grid size used when `--grid` is absent and `SDS_DEFAULT_GRID` is unset.
pub const DEFAULT_GRID: usize = 2000;

/// Environment variable overriding [`DEFAULT_GRID`].
pub const GRID_ENV: &str = "SDS_DEFAULT_GRID";

/// Failure of a run.
#[derive(Debug)]
pub enum CliError {
    /// Flags could not be parsed.
    Usage(String),
    /// Environment variable holds an invalid value.
    Env(String),
    /// A model-level validation or numerical error.
    Model(sds_core::Error),
    /// Output could not be written.
    Io(std::io::Error),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage-error: {msg}"),
            CliError::Env(msg) => write!(f, "environment-error: {msg}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io-error: {e}"),
        }
    }
}

impl From<sds_core::Error> for CliError {
    fn from(e: sds_core::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Rendered output of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// Encoded report.
    pub text: String,
    /// Failed verification checks; zero for other commands.
    pub failed_checks: usize,
}

/// `--grid`, else `SDS_DEFAULT_GRID`, else [`DEFAULT_GRID`].
pub fn resolve_grid(flag: Option<usize>, env: Option<&str>) -> Result<usize, CliError> {
    match (flag, env) {
        (Some(n), _) => Ok(n),
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Env(format!("{GRID_ENV}={v:?} is not a positive integer"))),
        (None, None) => Ok(DEFAULT_GRID),
    }
}

fn env_grid() -> Option<String> {
    std::env::var(GRID_ENV).ok()
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let env = env_grid();
    let (report, format, failed_checks) = match &cli.command {
        Command::Spectrum(a) => (commands::spectrum(a)?, a.output.format, 0),
        Command::Classify(a) => (commands::classify(a)?, a.output.format, 0),
        Command::Wavefunction(a) => {
            let grid = resolve_grid(a.grid, env.as_deref())?;
            (commands::wavefunction(a, grid)?, a.output.format, 0)
        }
        Command::Uncertainty(a) => (commands::uncertainty(a)?, a.output.format, 0),
        Command::Verify(a) => {
            let grid = resolve_grid(a.grid, env.as_deref())?;
            let (report, failed) = verify::verify(a, grid)?;
            (report, a.output.format, failed)
        }
    };
    Ok(Outcome {
        text: report.render(format),
        failed_checks,
    })
}

fn output_args(cli: &Cli) -> &OutputArgs {
    match &cli.command {
        Command::Spectrum(a) => &a.output,
        Command::Classify(a) => &a.output,
        Command::Wavefunction(a) => &a.output,
        Command::Uncertainty(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

/// Writes `text` to `path` through a temporary file in the same directory and a rename.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn one_line(s: &str) -> String {
    s.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses `args`, runs, writes output and maps the result to an exit status.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            let msg = first.trim().strip_prefix("error: ").unwrap_or(first.trim());
            eprintln!("sds: {}", CliError::Usage(msg.to_owned()));
            return ExitCode::from(2);
        }
    };
    let outcome = run(&cli).and_then(|out| {
        match &output_args(&cli).output {
            Some(path) => write_atomic(path, &out.text)?,
            None => std::io::stdout().write_all(out.text.as_bytes())?,
        }
        Ok(out)
    });
    match outcome {
        Ok(out) if out.failed_checks > 0 => {
            eprintln!("sds: verification-failed: {} check(s) failed", out.failed_checks);
            ExitCode::from(3)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sds: {}", one_line(&e.to_string()));
            ExitCode::from(e.exit_code())
        }
    }
}
