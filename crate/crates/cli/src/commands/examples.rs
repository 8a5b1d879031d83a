//! The three rigid bands end to end: curvature identities, `eta = H`, tight
//! width certificates, marginal stability, harmonic saturation and marginal
//! Callias certificates.

use bandwidth_core::geometry::null_expansion_profile;
use bandwidth_core::{
    build_callias_input, build_potential, check_theorem, eta_closed, evaluate_certificate, level_set_data,
    mean_curvature, mean_curvature_dt, principal_eigenvalue, reduce_ode, scalar_curvature, solve_reduced,
    verify_integral_inequality, CalliasVerdict, EtaParams, ExtrinsicSpec, GridField1D, HessianSign, Variant, Warp,
    WarpedBand, WidthMode,
};
use bandwidth_core::width::Verdict;
use serde_json::{json, Value};

use crate::emit::{fields_csv, max_gap, svg_plot};
use crate::error::{CliError, EXIT_INTERNAL, EXIT_OK};
use crate::Outcome;

const IDENTITY_POINTS: usize = 1000;
const IDENTITY_TOL: f64 = 1e-7;
const ETA_H_TOL: f64 = 1e-10;
const MARGIN_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-8;
const HESSIAN_TOL: f64 = 1e-6;
const ROUTE_TOL: f64 = 1e-8;
const ENERGY_TOL: f64 = 1e-8;
const WIDTH_GRID: usize = 2000;
const HARMONIC_GRID: usize = 2001;
const LATTICES: [usize; 2] = [16, 32];

#[derive(Clone, Copy)]
struct Example {
    name: &'static str,
    warp: fn() -> Warp<f64>,
}

impl Example {
    fn interval(&self, n: usize) -> (f64, f64) {
        match self.name {
            "cosine" => (-2.1 / n as f64, 2.1 / n as f64),
            _ => (0.5, 1.5),
        }
    }

    fn sigma(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self.name {
            "cosine" => nf * (nf - 1.0),
            "sinh" => -nf * (nf - 1.0),
            _ => 0.0,
        }
    }

    fn band(&self, n: usize) -> Result<WarpedBand<f64>, CliError> {
        let (t0, t1) = self.interval(n);
        Ok(WarpedBand::new(n, t0, t1, (self.warp)())?)
    }
}

const EXAMPLES: [Example; 3] = [
    Example { name: "cosine", warp: || Warp::Cosine },
    Example { name: "sinh", warp: || Warp::Sinh },
    Example { name: "power", warp: || Warp::Power },
];

#[derive(Default)]
struct Checks(Vec<Value>);

impl Checks {
    fn le(&mut self, name: String, value: f64, tol: f64) {
        self.0.push(json!({ "name": name, "value": value, "tol": tol, "pass": value.abs() <= tol }));
    }

    fn holds(&mut self, name: String, ok: bool) {
        self.0.push(json!({ "name": name, "pass": ok }));
    }

    fn failures(&self) -> usize {
        self.0.iter().filter(|c| c["pass"] != json!(true)).count()
    }
}

fn identities(ex: &Example, n: usize, checks: &mut Checks) -> Result<Value, CliError> {
    let band = ex.band(n)?;
    let (t0, t1) = band.interval();
    let nf = n as f64;
    let r_sat = ex.sigma(n);
    let eta = eta_closed(&EtaParams::new(r_sat, 0.0, n, 0.0)?);
    let (mut riccati, mut curvature, mut eta_gap) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..IDENTITY_POINTS {
        let t = t0 + (t1 - t0) * i as f64 / (IDENTITY_POINTS - 1) as f64;
        let h = mean_curvature(&band, t)?;
        let dh = mean_curvature_dt(&band, t)?;
        let r = scalar_curvature(&band, t)?;
        let scale = 1.0f64.max(h * h).max(dh.abs());
        riccati = riccati.max((r + nf / (nf - 1.0) * h * h + 2.0 * dh).abs() / scale);
        curvature = curvature.max((r - r_sat).abs() / 1.0f64.max(r_sat.abs()));
        eta_gap = eta_gap.max((eta.eval(t)? - h).abs());
    }
    let cert = check_theorem(&band, &ExtrinsicSpec::umbilic(0.0), r_sat, t0, t1, WIDTH_GRID, WidthMode::Cmc { lambda: 0.0 })?;
    let max_margin = [cert.dec_margin, cert.mod_dec_margin, cert.boundary_minus, cert.boundary_plus, cert.conclusion]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    checks.le(format!("{} n={n}: riccati identity of H", ex.name), riccati, IDENTITY_TOL);
    checks.le(format!("{} n={n}: constant scalar curvature", ex.name), curvature, IDENTITY_TOL);
    checks.le(format!("{} n={n}: eta = H", ex.name), eta_gap, ETA_H_TOL);
    checks.holds(format!("{} n={n}: width certificate tight", ex.name), cert.verdict == Verdict::Tight);
    Ok(json!({
        "n": n,
        "interval": [t0, t1],
        "sigma": r_sat,
        "max_riccati_residual": riccati,
        "max_scalar_curvature_error": curvature,
        "max_eta_minus_h": eta_gap,
        "verdict": cert.verdict,
        "max_abs_margin": max_margin,
    }))
}

fn three_dimensional(ex: &Example, checks: &mut Checks) -> Result<Value, CliError> {
    let n = 3;
    let band = ex.band(n)?;
    let (t0, t1) = band.interval();
    let sigma = ex.sigma(n);
    let k = ExtrinsicSpec::umbilic(0.0);
    let mode = WidthMode::Cmc { lambda: 0.0 };
    let eta = eta_closed(&EtaParams::new(sigma, 0.0, n, 0.0)?);

    let cert = check_theorem(&band, &k, sigma, t0, t1, WIDTH_GRID, mode)?;
    for (name, m) in [
        ("dec", cert.dec_margin),
        ("mod_dec", cert.mod_dec_margin),
        ("boundary_minus", cert.boundary_minus),
        ("boundary_plus", cert.boundary_plus),
        ("conclusion", cert.conclusion),
    ] {
        checks.le(format!("{} width margin {name}", ex.name), m, MARGIN_TOL);
    }

    let theta = null_expansion_profile(&band, &k);
    let mut leaves = Vec::new();
    for t in [t0, 0.5 * (t0 + t1), t1] {
        let data = level_set_data(&band, &k, &theta, t)?;
        for lattice in LATTICES {
            let eig = principal_eigenvalue(&data, lattice)?;
            let min = eig.eigenfunction.iter().copied().fold(f64::INFINITY, f64::min);
            checks.le(format!("{} stability lambda1 at t={t} lattice {lattice}", ex.name), eig.lambda1, EIGEN_TOL);
            checks.holds(format!("{} Perron eigenfunction positive at t={t} lattice {lattice}", ex.name), min > 0.0);
            leaves.push(json!({ "t": t, "lattice": lattice, "lambda1": eig.lambda1, "eigenfunction_min": min }));
        }
    }

    let build = build_potential(&band, &eta, t0, t1, 0.0, (0.0, 0.0), Variant::Rigid)?;
    let p = build.to_profile();
    let sol = solve_reduced(&reduce_ode(&band, &k, &p)?, HARMONIC_GRID)?;
    let (report, integrands) = verify_integral_inequality(&band, &k, sigma, &p, &sol, HessianSign::Adopted)?;
    let hessian = integrands.hessian_norm.max_abs();
    let energy = integrands.energy.max_abs();
    let saturation = report.saturation_fields().iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    checks.le(format!("{} harmonic |T|", ex.name), hessian, HESSIAN_TOL);
    checks.le(format!("{} harmonic boundary route gap", ex.name), report.route_gap, ROUTE_TOL);
    checks.le(format!("{} harmonic perturbed energy", ex.name), energy, ENERGY_TOL);
    checks.le(format!("{} harmonic inequality fields", ex.name), saturation, HESSIAN_TOL);

    let input = build_callias_input(&band, &eta, t0, t1, 0.0, (0.0, 0.0), Variant::Rigid, 0.0, WIDTH_GRID)?;
    let (callias, _) = evaluate_certificate(&band, &k, &input, WIDTH_GRID, mode)?;
    checks.holds(format!("{} Callias certificate marginal", ex.name), callias.verdict == CalliasVerdict::Marginal);
    for (name, m) in [
        ("bulk", callias.bulk_margin),
        ("boundary_plus", callias.boundary_margin_plus),
        ("boundary_minus", callias.boundary_margin_minus),
    ] {
        checks.le(format!("{} Callias margin {name}", ex.name), m, MARGIN_TOL);
    }

    Ok(json!({
        "certificate": cert,
        "stability": leaves,
        "harmonic": {
            "max_hessian_norm": hessian,
            "route_gap": report.route_gap,
            "max_energy_abs": energy,
            "max_inequality_field": saturation,
            "slack": report.slack,
        },
        "callias": callias,
    }))
}

pub fn run() -> Result<Outcome, CliError> {
    let mut checks = Checks::default();
    let mut bands = Vec::new();
    for ex in &EXAMPLES {
        let per_n = (3..=7).map(|n| identities(ex, n, &mut checks)).collect::<Result<Vec<_>, _>>()?;
        let three = three_dimensional(ex, &mut checks)?;
        bands.push(json!({
            "name": ex.name,
            "sigma": "n(n-1), -n(n-1), 0 for cosine, sinh, power",
            "dimensions": per_n,
            "n3": three,
            "verdict": three["certificate"]["verdict"].clone(),
        }));
    }

    let sinh = EXAMPLES[1].band(3)?;
    let stated = -12.0;
    let stated_cert = check_theorem(&sinh, &ExtrinsicSpec::umbilic(0.0), stated, 0.5, 1.5, WIDTH_GRID, WidthMode::Cmc { lambda: 0.0 })?;
    checks.holds("sinh band: stated sigma = -2n(n-1) does not saturate".into(), stated_cert.verdict != Verdict::Tight);

    let plot_band = WarpedBand::cosine(3, -1.0, 1.0)?;
    let eta1 = eta_closed(&EtaParams::new(6.0, 0.0, 3, 0.0)?);
    let eta_field = GridField1D::try_sample(-1.0, 1.0, 401, |t| eta1.eval(t))?;
    let h_field = GridField1D::try_sample(-1.0, 1.0, 401, |t| mean_curvature(&plot_band, t))?;
    let plot = [("eta", &eta_field), ("H", &h_field)];
    let gap = max_gap(&plot).unwrap_or(f64::NAN);
    checks.le("cosine n=3: eta = H on [-1, 1]".into(), gap, ETA_H_TOL);

    let failures = checks.failures();
    Ok(Outcome {
        command: "examples",
        config: json!({
            "bands": EXAMPLES.iter().map(|e| e.name).collect::<Vec<_>>(),
            "dimensions": [3, 4, 5, 6, 7],
            "identity_points": IDENTITY_POINTS,
            "width_grid": WIDTH_GRID,
            "harmonic_grid": HARMONIC_GRID,
            "lattices": LATTICES,
        }),
        result: json!({
            "bands": bands,
            "sinh_stated_sigma": {
                "sigma": stated,
                "verdict": stated_cert.verdict,
                "dec_margin": stated_cert.dec_margin,
                "boundary_minus": stated_cert.boundary_minus,
                "boundary_plus": stated_cert.boundary_plus,
            },
            "eta_vs_h_max_gap": gap,
            "checks": checks.0,
            "failures": failures,
        }),
        exit: if failures == 0 { EXIT_OK } else { EXIT_INTERNAL },
        artifacts: vec![
            ("eta_vs_h.csv".into(), fields_csv(&plot)?),
            ("eta_vs_h.svg".into(), svg_plot("eta and H on the rigid cosine band", &plot)?),
        ],
    })
}
