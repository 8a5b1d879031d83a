use bandwidth_core::consistency_sweep;
use serde_json::json;

use crate::args::SweepArgs;
use crate::error::{CliError, EXIT_OK, EXIT_THEOREM_VIOLATED};
use crate::Outcome;

pub const DEFAULT_SEED: u64 = 42;

pub fn run(a: &SweepArgs, seed: Option<u64>) -> Result<Outcome, CliError> {
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let report = consistency_sweep(seed, a.trials)?;
    let exit = if report.theorem_violated > 0 { EXIT_THEOREM_VIOLATED } else { EXIT_OK };
    Ok(Outcome {
        command: "sweep",
        config: json!({ "seed": seed, "trials": a.trials }),
        result: serde_json::to_value(&report).map_err(|e| CliError::Internal(e.to_string()))?,
        exit,
        artifacts: Vec::new(),
    })
}
