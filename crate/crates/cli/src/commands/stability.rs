use bandwidth_core::{level_set_data, null_expansion_profile, principal_eigenvalue, stability_zeroth_coeff};
use serde_json::json;

use crate::args::StabilityArgs;
use crate::config::LoadedConfig;
use crate::emit::csv_table;
use crate::error::{CliError, EXIT_OK};
use crate::Outcome;

pub const DEFAULT_LATTICE: usize = 16;
/// Eigenvalues above `-STABLE_TOL` count as stable.
pub const STABLE_TOL: f64 = 1e-8;

pub fn run(a: &StabilityArgs, loaded: LoadedConfig) -> Result<Outcome, CliError> {
    let (band, k) = loaded.build()?;
    let mut config = loaded.config;
    let (t0, t1) = band.interval();
    let t = a.t.or(config.t).unwrap_or(0.5 * (t0 + t1));
    let lattice = a.lattice.or(config.lattice).unwrap_or(DEFAULT_LATTICE);
    config.t = Some(t);
    config.lattice = Some(lattice);

    let p = null_expansion_profile(&band, &k);
    let data = level_set_data(&band, &k, &p, t)?;
    let c0 = stability_zeroth_coeff(&data, data.n, data.trk)?;
    let eig = principal_eigenvalue(&data, lattice)?;
    let (lo, hi) = eig.eigenfunction.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));

    let mut header: Vec<String> = (1..=eig.dim).map(|a| format!("x{a}")).collect();
    header.push("phi".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = eig.eigenfunction.iter().enumerate().map(|(i, &v)| {
        let mut row = eig.coordinates(i);
        row.push(v);
        row
    });
    let csv = csv_table(&header, rows)?;
    Ok(Outcome {
        command: "stability",
        config: config.to_value(),
        result: json!({
            "leaf": data,
            "potential": "null expansion",
            "zeroth_coefficient": c0,
            "lambda1": eig.lambda1,
            "residual": eig.residual,
            "iterations": eig.iterations,
            "shift": eig.shift,
            "solver": eig.solver,
            "lattice": lattice,
            "dim": eig.dim,
            "eigenfunction_min": lo,
            "eigenfunction_max": hi,
            "stable": eig.lambda1 >= -STABLE_TOL,
        }),
        exit: EXIT_OK,
        artifacts: vec![("eigenfunction.csv".into(), csv)],
    })
}
