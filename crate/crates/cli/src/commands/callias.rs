use bandwidth_core::{build_callias_input, eta_closed, evaluate_certificate, CalliasVerdict, EtaParams, Variant};
use serde_json::json;

use super::resolve_band;
use crate::args::CalliasArgs;
use crate::config::LoadedConfig;
use crate::emit::{fields_csv, svg_plot};
use crate::error::{CliError, EXIT_HYPOTHESIS_VIOLATED, EXIT_OK, EXIT_THEOREM_VIOLATED};
use crate::Outcome;

pub const DEFAULT_GRID: usize = 2000;

pub fn run(a: &CalliasArgs, loaded: LoadedConfig) -> Result<Outcome, CliError> {
    let eps = a.eps.or(loaded.config.eps).unwrap_or(0.0);
    let plateau = match a.plateau.as_deref() {
        Some([w]) => [*w, *w],
        Some([w0, w1]) => [*w0, *w1],
        Some(_) => return Err(CliError::Usage("--plateau takes one or two widths".into())),
        None => loaded.config.plateau.unwrap_or([0.0, 0.0]),
    };
    let re_bound = a.re_bound.or(loaded.config.re_bound).unwrap_or(0.0);
    let mut r = resolve_band(loaded, &a.band, DEFAULT_GRID)?;
    r.config.eps = Some(eps);
    r.config.plateau = Some(plateau);
    r.config.re_bound = Some(re_bound);
    let variant = if eps > 0.0 || plateau.iter().any(|&w| w > 0.0) { Variant::Strict } else { Variant::Rigid };
    let params = EtaParams::new(r.sigma, r.mode.lambda(), r.band.n(), 0.0)?;
    let eta = eta_closed(&params);
    let input = build_callias_input(
        &r.band,
        &eta,
        r.t_minus,
        r.t_plus,
        eps,
        (plateau[0], plateau[1]),
        variant,
        re_bound,
        r.grid,
    )?;
    let (cert, bulk) = evaluate_certificate(&r.band, &r.k, &input, r.grid, r.mode)?;
    let exit = match cert.verdict {
        CalliasVerdict::NotCertified => EXIT_HYPOTHESIS_VIOLATED,
        CalliasVerdict::ContradictionCertified => EXIT_THEOREM_VIOLATED,
        CalliasVerdict::Marginal | CalliasVerdict::Inconclusive => EXIT_OK,
    };
    let psi = [("psi_tilde", &input.psi_tilde), ("psi", &input.psi)];
    Ok(Outcome {
        command: "callias-cert",
        config: r.config.to_value(),
        result: json!({
            "certificate": cert,
            "variant": variant,
            "potential": input.build,
        }),
        exit,
        artifacts: vec![
            ("bulk.csv".into(), fields_csv(&[("bulk", &bulk)])?),
            ("psi.csv".into(), fields_csv(&psi)?),
            ("psi.svg".into(), svg_plot("Callias potential", &psi)?),
        ],
    })
}
