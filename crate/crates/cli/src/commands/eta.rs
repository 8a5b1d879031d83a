use bandwidth_core::config::ExtrinsicConfig;
use bandwidth_core::{
    classify, domain_bounds, eta_closed_on, eta_solve_numeric, ode_residual, ode_residual_grid, Branch, EtaParams,
    GridField1D,
};
use serde_json::json;

use crate::args::{BranchArg, SolveEtaArgs};
use crate::config::LoadedConfig;
use crate::emit::csv_table;
use crate::error::{CliError, EXIT_OK};
use crate::Outcome;

/// Fraction of a bounded domain trimmed at each end for the default range.
const TRIM: f64 = 0.02;

pub fn run(a: &SolveEtaArgs, loaded: Option<&LoadedConfig>) -> Result<Outcome, CliError> {
    let cfg = loaded.map(|l| &l.config);
    let sigma = a
        .sigma
        .or(cfg.and_then(|c| c.sigma))
        .ok_or_else(|| CliError::Usage("solve-eta needs --sigma".into()))?;
    let umbilic = cfg.and_then(|c| match c.k {
        ExtrinsicConfig::Umbilic { lambda } => Some(lambda),
        _ => None,
    });
    let lambda = a.lambda.or(cfg.and_then(|c| c.lambda)).or(umbilic).unwrap_or(0.0);
    let n = a.n.or(cfg.map(|c| c.n)).unwrap_or(3);
    if a.points < 5 {
        return Err(CliError::Usage(format!("--points must be at least 5, got {}", a.points)));
    }
    if a.substeps < 1 {
        return Err(CliError::Usage("--substeps must be at least 1".into()));
    }
    let branch = match a.branch {
        BranchArg::Above => Branch::Above,
        BranchArg::Below => Branch::Below,
    };
    let params = EtaParams::new(sigma, lambda, n, a.c)?;
    let closed = eta_closed_on(&params, branch);
    let (d0, d1) = closed.domain;
    let (lo_default, hi_default) = if d0.is_finite() && d1.is_finite() {
        let trim = TRIM * (d1 - d0);
        (d0 + trim, d1 - trim)
    } else if branch == Branch::Above {
        (a.c + 0.1, a.c + 3.0)
    } else {
        (a.c - 3.0, a.c - 0.1)
    };
    let lo = a.tmin.unwrap_or(lo_default);
    let hi = a.tmax.unwrap_or(hi_default);
    if !(lo < hi) {
        return Err(CliError::Config(format!("empty range [{lo}, {hi}]")));
    }
    let method = if a.both {
        "both"
    } else if a.numeric {
        "numeric"
    } else {
        "closed"
    };
    let config = json!({
        "sigma": sigma, "lambda": lambda, "n": n, "c": a.c, "branch": branch, "method": method,
        "tmin": lo, "tmax": hi, "points": a.points, "substeps": a.substeps, "eta_init": a.eta_init,
    });
    let bounds = domain_bounds(&params);
    let mut result = json!({
        "case": classify(&params),
        "discriminant": params.discriminant,
        "domain": [d0, d1],
        "domain_bounds": bounds,
        "range": [lo, hi],
    });

    let need_closed = method != "numeric";
    let closed_fields = if need_closed {
        for t in [lo, hi] {
            if !closed.contains(t) {
                return Err(CliError::Config(format!("t = {t} lies outside the domain ({d0}, {d1}) of the closed form")));
            }
        }
        let field = GridField1D::try_sample(lo, hi, a.points, |t| closed.eval(t))?;
        let res = ode_residual(&closed, lo, hi, a.points)?;
        result["closed"] = json!({
            "max_residual": res.max_abs,
            "strictly_decreasing": res.strictly_decreasing,
        });
        Some((field, res.residual))
    } else {
        None
    };

    let numeric_fields = if method != "closed" {
        let eta_init = match a.eta_init {
            Some(v) => v,
            None => closed.eval(lo).map_err(|_| {
                CliError::Usage(format!("--eta-init is needed: tmin = {lo} lies outside the closed-form domain"))
            })?,
        };
        let step = (hi - lo) / ((a.points - 1) * a.substeps) as f64;
        let sol = eta_solve_numeric(&params, lo, eta_init, (lo, hi), step)?;
        let res = ode_residual_grid(&sol.field, &params)?;
        let keep = |f: &GridField1D<f64>| -> Result<GridField1D<f64>, CliError> {
            let values: Vec<f64> = f.values().iter().step_by(a.substeps).copied().collect();
            Ok(GridField1D::new(f.start(), f.step() * a.substeps as f64, values)?)
        };
        result["numeric"] = json!({
            "step": step,
            "eta_init": eta_init,
            "blew_up": sol.blew_up(),
            "escape_above": sol.escape_above,
            "escape_below": sol.escape_below,
            "max_residual": res.max_abs,
            "strictly_decreasing": res.strictly_decreasing,
        });
        Some((keep(&sol.field)?, keep(&res.residual)?))
    } else {
        None
    };

    let csv = match (&closed_fields, &numeric_fields) {
        (Some((e, r)), None) | (None, Some((e, r))) => {
            csv_table(&["t", "eta", "residual"], e.iter().zip(r.values()).map(|((t, v), &res)| vec![t, v, res]))?
        }
        (Some((ec, rc)), Some((en, rn))) => {
            let len = en.len();
            let mut dev = 0.0f64;
            let rows: Vec<Vec<f64>> = (0..len)
                .map(|i| {
                    let d = (ec.values()[i] - en.values()[i]).abs();
                    dev = dev.max(d);
                    vec![ec.t(i), ec.values()[i], en.values()[i], d, rc.values()[i], rn.values()[i]]
                })
                .collect();
            result["max_deviation"] = json!(dev);
            result["compared_points"] = json!(len);
            csv_table(&["t", "eta_closed", "eta_numeric", "deviation", "residual_closed", "residual_numeric"], rows)?
        }
        (None, None) => unreachable!("at least one method runs"),
    };
    Ok(Outcome {
        command: "solve-eta",
        config,
        result,
        exit: EXIT_OK,
        artifacts: vec![("eta.csv".into(), csv)],
    })
}
