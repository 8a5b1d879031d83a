//! Command-line front end of the band-width verifier: configuration
//! ingestion, dispatch to the core routines and deterministic report, CSV
//! and SVG emission.
//!
//! Exit codes: 0 success, 2 hypothesis violated, 3 theorem violated,
//! 64 usage error, 65 configuration error, 70 internal error.

mod args;
mod commands;
pub mod config;
pub mod emit;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

pub use args::Cli;
pub use config::{LoadedConfig, ModeKind, RunConfig};
pub use error::{CliError, EXIT_CONFIG, EXIT_HYPOTHESIS_VIOLATED, EXIT_INTERNAL, EXIT_OK, EXIT_THEOREM_VIOLATED, EXIT_USAGE};

pub const TOOL: &str = "bandwidth-verifier";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "BANDWIDTH_VERIFIER_THREADS";

/// Result of one command before emission.
#[derive(Debug)]
pub struct Outcome {
    pub command: &'static str,
    pub config: Value,
    pub result: Value,
    pub exit: i32,
    /// `(file name, contents)` written under `--out`.
    pub artifacts: Vec<(String, String)>,
}

/// Known discrepancies and the resolution adopted, attached to every report.
pub fn discrepancy_notes() -> Value {
    json!({
        "hessian_sign": "T = Hess u + k~ |grad u| is used: its trace is the reduced equation and it vanishes on the rigid band. The printed sign Hess u - k~ |grad u| is available with --paper-sign and does not saturate.",
        "sinh_band_sigma": "The rigid sinh band is stated with sigma = -2n(n-1), but its scalar curvature is -n(n-1) and eta = H holds only for sigma = -n(n-1). The saturating value sigma = -n(n-1) is used.",
        "stability_w_term": "The bare W in the stability operator is read as div W - |W|^2. W vanishes on every leaf treated here, so no reported number depends on this reading.",
    })
}

/// Runs the command line `argv` (including the program name), printing to
/// the process stdout and stderr. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok((report, exit)) => {
            if !cli.quiet {
                let _ = out.write_all(report.as_bytes());
            }
            exit
        }
        Err(e) => {
            let _ = writeln!(err, "{TOOL}: {e}");
            e.exit_code()
        }
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Some(k)),
            _ => Err(CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
    }
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let started = Instant::now();
    let outcome = match thread_cap()? {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Internal(e.to_string()))?
            .install(|| commands::dispatch(cli)),
        None => commands::dispatch(cli),
    }?;
    let mut report = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": outcome.command,
        "config": outcome.config,
        "notes": discrepancy_notes(),
        "result": outcome.result,
        "exit_code": outcome.exit,
    });
    if cli.timings {
        report["timings"] = json!({ "wall_seconds": started.elapsed().as_secs_f64() });
    }
    let text = emit::canonical_json(&report);
    if let Some(dir) = &cli.out {
        write_artifacts(dir, &format!("{}.json", outcome.command), &text, &outcome.artifacts)?;
    }
    Ok((text, outcome.exit))
}

fn write_artifacts(dir: &Path, report_name: &str, report: &str, artifacts: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Internal(format!("cannot create {}: {e}", dir.display())))?;
    let files = std::iter::once((report_name, report)).chain(artifacts.iter().map(|(n, c)| (n.as_str(), c.as_str())));
    for (name, contents) in files {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
