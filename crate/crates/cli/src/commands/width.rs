use bandwidth_core::{check_theorem_with, eta_closed, EtaParams};
use serde_json::json;

use super::{resolve_band, verdict_exit};
use crate::args::WidthArgs;
use crate::config::LoadedConfig;
use crate::emit::{fields_csv, svg_plot};
use crate::error::CliError;
use crate::Outcome;

pub const DEFAULT_GRID: usize = 2000;

pub fn run(a: &WidthArgs, loaded: LoadedConfig) -> Result<Outcome, CliError> {
    let r = resolve_band(loaded, &a.band, DEFAULT_GRID)?;
    let params = EtaParams::new(r.sigma, r.mode.lambda(), r.band.n(), 0.0)?;
    let eta = eta_closed(&params);
    let (cert, fields) = check_theorem_with(&r.band, &r.k, &eta, r.t_minus, r.t_plus, r.grid, r.mode)?;
    let margins = [("dec", &fields.dec), ("mod_dec", &fields.mod_dec)];
    let mut artifacts = vec![("margins.csv".to_string(), fields_csv(&margins)?)];
    if a.plot {
        artifacts.push(("margins.svg".into(), svg_plot("energy margins", &margins)?));
    }
    Ok(Outcome {
        command: "check-width",
        config: r.config.to_value(),
        result: json!({
            "certificate": cert,
            "eta": { "case": eta.case, "domain": [eta.domain.0, eta.domain.1] },
            "hypotheses_hold": cert.hypotheses_hold(),
        }),
        exit: verdict_exit(cert.verdict),
        artifacts,
    })
}
