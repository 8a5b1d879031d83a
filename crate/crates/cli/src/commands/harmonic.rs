use bandwidth_core::width::rigid_width_function;
use bandwidth_core::{eta_closed, reduce_ode, solve_reduced, verify_integral_inequality, EtaParams, HessianSign};
use serde_json::json;

use super::resolve_band;
use crate::args::HarmonicArgs;
use crate::config::LoadedConfig;
use crate::emit::{fields_csv, svg_plot};
use crate::error::{CliError, EXIT_OK};
use crate::Outcome;

pub const DEFAULT_GRID: usize = 2001;

pub fn run(a: &HarmonicArgs, loaded: LoadedConfig) -> Result<Outcome, CliError> {
    let paper_sign = a.paper_sign || loaded.config.paper_sign.unwrap_or(false);
    let mut r = resolve_band(loaded, &a.band, DEFAULT_GRID)?;
    r.config.paper_sign = Some(paper_sign);
    let sign = if paper_sign { HessianSign::Paper } else { HessianSign::Adopted };
    let params = EtaParams::new(r.sigma, r.mode.lambda(), r.band.n(), 0.0)?;
    let eta = eta_closed(&params);
    let potential = rigid_width_function(&r.band, &eta, r.t_minus, r.t_plus)?;
    let p = potential.to_profile();
    let sol = solve_reduced(&reduce_ode(&r.band, &r.k, &p)?, r.grid)?;
    let (report, integrands) = verify_integral_inequality(&r.band, &r.k, r.sigma, &p, &sol, sign)?;
    let fields = [("u", &sol.u), ("du", &sol.du), ("hessian_norm", &integrands.hessian_norm)];
    let mut artifacts = vec![("harmonic.csv".to_string(), fields_csv(&fields)?)];
    if a.plot {
        artifacts.push(("harmonic.svg".into(), svg_plot("spacetime-harmonic profile", &fields)?));
    }
    Ok(Outcome {
        command: "harmonic",
        config: r.config.to_value(),
        result: json!({
            "report": report,
            "monotone": sol.monotone,
            "max_ode_residual": sol.residual.max_abs(),
            "max_energy_density_abs": integrands.energy.max_abs(),
            "potential": potential,
        }),
        exit: EXIT_OK,
        artifacts,
    })
}
