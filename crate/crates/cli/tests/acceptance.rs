//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bandwidth_core::geometry::null_expansion_profile;
use bandwidth_core::*;
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bandwidth-verifier");

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn core<T>(r: bandwidth_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn binary(args: &[&str]) -> Result<(i32, String), String> {
    let dir = std::env::temp_dir();
    let out = Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("BANDWIDTH_VERIFIER_THREADS")
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code().ok_or("terminated by signal")?;
    Ok((code, String::from_utf8(out.stdout).map_err(|e| e.to_string())?))
}

fn eta(sigma: f64, lambda: f64, n: usize) -> Result<EtaSolution<f64>, String> {
    Ok(eta_closed(&core(EtaParams::<f64>::new(sigma, lambda, n, 0.0))?))
}

fn closed_forms_match_rk4() -> Outcome {
    let (mut worst_dev, mut worst_res) = (0.0f64, 0.0f64);
    for n in 3..=7 {
        let nf = n as f64;
        for (case, sigma, lambda) in [
            (EtaCase::Tan, nf * (nf - 1.0), 0.0),
            (EtaCase::Coth, -nf * (nf - 1.0), 0.0),
            (EtaCase::Rational, (nf - 1.0) / nf, 1.0),
        ] {
            let params = core(EtaParams::<f64>::new(sigma, lambda, n, 0.0))?;
            ensure(classify(&params) == case, || format!("n = {n}: expected {case:?}"))?;
            let sol = eta_closed(&params);
            let (lo, hi) = sol.domain;
            let (lo, hi) = if hi.is_finite() {
                let half = 0.5 * (hi - lo);
                (lo + 0.1 * half, hi - 0.1 * half)
            } else {
                (lo + 0.2, lo + 3.0)
            };
            let t_init = 0.5 * (lo + hi);
            let num = core(eta_solve_numeric(&params, t_init, core(sol.eval(t_init))?, (lo, hi), 1e-4))?;
            ensure(!num.blew_up(), || format!("n = {n} {case:?}: RK4 escaped"))?;
            for (t, v) in num.field.iter() {
                worst_dev = worst_dev.max((v - core(sol.eval(t))?).abs());
            }
            worst_res = worst_res.max(core(ode_residual(&sol, lo, hi, 1000))?.max_abs);
        }
    }
    ensure(worst_dev <= 1e-8 && worst_res <= 1e-10, || {
        format!("max RK4 deviation {worst_dev:e}, max residual {worst_res:e}")
    })?;
    Ok(format!("max RK4 deviation {worst_dev:.2e}, max residual {worst_res:.2e}"))
}

/// Pole of the Tan solution, found by bisection on the sign of `1/eta`
/// integrated with RK4 from inside the domain.
fn pole_by_bisection(sigma: f64, n: usize) -> Result<f64, String> {
    let nf = n as f64;
    let start = 0.5 * PI / nf;
    let q = nf / (nf - 1.0);
    let rhs = |z: f64| 0.5 * (sigma * z * z + q);
    let z0 = 1.0 / core(eta(sigma, 0.0, n)?.eval(start))?;
    let zeta = |t: f64| {
        let steps = 20_000;
        let h = (t - start) / steps as f64;
        let mut z = z0;
        for _ in 0..steps {
            let k1 = rhs(z);
            let k2 = rhs(z + 0.5 * h * k1);
            let k3 = rhs(z + 0.5 * h * k2);
            let k4 = rhs(z + h * k3);
            z += h / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
        }
        z
    };
    let (mut a, mut b) = (start, 2.0 * PI / nf);
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if zeta(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

fn domain_endpoints() -> Outcome {
    let (mut formula, mut bisect) = (0.0f64, 0.0f64);
    for n in 3..=7 {
        let nf = n as f64;
        let d = domain_bounds(&core(EtaParams::<f64>::new(nf * (nf - 1.0), 0.0, n, 0.0))?);
        ensure(d.bounded, || format!("n = {n}: domain reported unbounded"))?;
        formula = formula.max((d.r_plus - PI / nf).abs()).max((d.r_minus + PI / nf).abs());
        bisect = bisect.max((pole_by_bisection(nf * (nf - 1.0), n)? - d.r_plus).abs());
    }
    let d3 = domain_bounds(&core(EtaParams::<f64>::new(6.0, 0.0, 3, 0.0))?);
    ensure(formula <= 1e-12 && bisect <= 1e-9 && (d3.r_plus - 1.047_197_551_197).abs() <= 1e-12, || {
        format!("formula error {formula:e}, bisection gap {bisect:e}, r+ = {}", d3.r_plus)
    })?;
    Ok(format!("r+ = {:.12} at n = 3, bisection gap {bisect:.2e}", d3.r_plus))
}

fn example_bands_saturate() -> Outcome {
    let bands: [(&str, fn(usize, f64, f64) -> bandwidth_core::Result<WarpedBand<f64>>, fn(f64) -> f64); 3] = [
        ("cosine", WarpedBand::cosine, |n| n * (n - 1.0)),
        ("sinh", WarpedBand::sinh, |n| -n * (n - 1.0)),
        ("power", WarpedBand::power, |_| 0.0),
    ];
    let mut worst = 0.0f64;
    for (name, make, sat) in bands {
        for n in 3..=7 {
            let nf = n as f64;
            let (t0, t1) = if name == "cosine" { (-2.1 / nf, 2.1 / nf) } else { (0.5, 1.5) };
            let band = core(make(n, t0, t1))?;
            let sigma = sat(nf);
            let eta = eta(sigma, 0.0, n)?;
            for i in 0..1000 {
                let t = t0 + (t1 - t0) * i as f64 / 999.0;
                let r = core(scalar_curvature(&band, t))?;
                let h = core(mean_curvature(&band, t))?;
                let dh = core(mean_curvature_dt(&band, t))?;
                let scale = 1f64.max(h * h).max(dh.abs());
                let riccati = (r + nf / (nf - 1.0) * h * h + 2.0 * dh).abs() / scale;
                let curvature = (r - sigma).abs() / 1f64.max(sigma.abs());
                ensure(riccati <= 1e-7 && curvature <= 1e-7, || {
                    format!("{name} n = {n} t = {t}: riccati {riccati:e}, curvature {curvature:e}")
                })?;
                let gap = (core(eta.eval(t))? - h).abs();
                ensure(gap <= 1e-10, || format!("{name} n = {n} t = {t}: |eta - H| = {gap:e}"))?;
                worst = worst.max(gap);
            }
        }
    }
    let (code, stdout) = binary(&["examples"])?;
    ensure(code == 0, || format!("examples exited {code}"))?;
    let report: Value = serde_json::from_str(&stdout).map_err(|e| e.to_string())?;
    let note = report["notes"]["sinh_band_sigma"].as_str().unwrap_or("");
    ensure(note.contains("-2n(n-1)") && note.contains("-n(n-1)"), || "sinh sigma note missing from the report".into())?;
    let tight = report["result"]["bands"].as_array().map_or(0, |b| b.iter().filter(|b| b["verdict"] == "tight").count());
    ensure(tight == 3, || format!("{tight} of 3 bands tight"))?;
    Ok(format!("max |eta - H| {worst:.2e}, sinh sigma note present"))
}

fn tight_width_certificate() -> Outcome {
    let band = core(WarpedBand::<f64>::cosine(3, -0.7, 0.7))?;
    let cert = core(check_theorem(&band, &ExtrinsicSpec::umbilic(0.0), 6.0, -0.7, 0.7, 2000, WidthMode::Cmc { lambda: 0.0 }))?;
    let margins = [cert.dec_margin, cert.mod_dec_margin, cert.boundary_minus, cert.boundary_plus, cert.conclusion];
    let worst = margins.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ensure(cert.verdict == Verdict::Tight && worst <= 1e-9, || {
        format!("verdict {}, max |margin| {worst:e}", cert.verdict.as_str())
    })?;
    Ok(format!("tight, max |margin| {worst:.2e}"))
}

fn consistency_sweep_is_clean() -> Outcome {
    let start = Instant::now();
    let report = core(consistency_sweep(42, 500))?;
    let elapsed = start.elapsed();
    ensure(report.theorem_violated == 0 && elapsed <= Duration::from_secs(30), || {
        format!("{} violations in {:.1} s", report.theorem_violated, elapsed.as_secs_f64())
    })?;
    Ok(format!(
        "500 trials, 0 violations ({} tight, {} consistent, {} hypothesis-violated, {} skipped) in {:.1} s",
        report.tight,
        report.consistent,
        report.hypothesis_violated,
        report.skipped,
        elapsed.as_secs_f64()
    ))
}

fn rigid_leaves_marginally_stable() -> Outcome {
    let band: WarpedBand<f64> = core(WarpedBand::<f64>::cosine(3, -0.7, 0.7))?;
    let k = ExtrinsicSpec::umbilic(0.0);
    let p = null_expansion_profile(&band, &k);
    let mut worst = 0.0f64;
    for t in [-0.7f64, -0.35, 0.0, 0.35, 0.7] {
        let data = core(level_set_data(&band, &k, &p, t))?;
        let c0 = core(stability_zeroth_coeff(&data, 3, data.trk))?;
        for lattice in [16, 32] {
            let eig = core(principal_eigenvalue(&data, lattice))?;
            ensure(eig.eigenfunction.iter().all(|&x| x > 0.0), || format!("t = {t}: eigenfunction not positive"))?;
            ensure((eig.lambda1 - c0).abs() <= 1e-8, || format!("t = {t}: lambda1 {} vs zeroth coefficient {c0}", eig.lambda1))?;
            worst = worst.max(eig.lambda1.abs());
        }
    }
    ensure(worst <= 1e-8, || format!("max |lambda1| {worst:e}"))?;
    Ok(format!("max |lambda1| {worst:.2e} on lattices 16 and 32"))
}

fn harmonic_saturation() -> Outcome {
    let band = core(WarpedBand::<f64>::cosine(3, -0.7, 0.7))?;
    let k = ExtrinsicSpec::umbilic(0.0);
    let build = core(build_potential(&band, &eta(6.0, 0.0, 3)?, -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid))?;
    let p = build.to_profile();
    let sol = core(solve_reduced(&core(reduce_ode(&band, &k, &p))?, 2001))?;
    let (report, integrands) = core(verify_integral_inequality(&band, &k, 6.0, &p, &sol, HessianSign::Adopted))?;
    let hessian = integrands.hessian_norm.max_abs();
    let energy = integrands.energy.max_abs();
    let fields = report.saturation_fields().iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    ensure(hessian <= 1e-6 && report.route_gap <= 1e-8 && energy <= 1e-8 && fields <= 1e-6, || {
        format!("|T| {hessian:e}, route gap {:e}, energy {energy:e}, fields {fields:e}", report.route_gap)
    })?;
    Ok(format!("|T| {hessian:.2e}, route gap {:.2e}, energy {energy:.2e}, fields {fields:.2e}", report.route_gap))
}

fn callias_matches_width() -> Outcome {
    let band = core(WarpedBand::<f64>::cosine(3, -0.95, 0.95))?;
    let k = ExtrinsicSpec::umbilic(0.0);
    let eta6 = eta(6.0, 0.0, 3)?;
    let mode = WidthMode::Cmc { lambda: 0.0 };
    let mut worst = 0.0f64;
    for re in [0.0, 0.1, 0.37] {
        let input = core(build_callias_input(&band, &eta6, -0.7, 0.7, 0.04, (0.1, 0.1), Variant::Strict, re, 1001))?;
        let (_, bulk) = core(evaluate_certificate(&band, &k, &input, 1500, mode))?;
        let fields = core(margin_fields(&band, &k, &input.build, 6.0, 1500, mode))?;
        ensure(bulk.len() == fields.mod_dec.len(), || "grids differ".into())?;
        for (b, m) in bulk.values().iter().zip(fields.mod_dec.values()) {
            worst = worst.max((b - (m - 2.0 * re)).abs() / 1f64.max(m.abs()));
        }
    }
    let rigid = core(WarpedBand::<f64>::cosine(3, -0.7, 0.7))?;
    let input = core(build_callias_input(&rigid, &eta6, -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid, 0.0, 2001))?;
    let (cert, _) = core(evaluate_certificate(&rigid, &k, &input, 2000, mode))?;
    let margins = [cert.bulk_margin, cert.boundary_margin_minus, cert.boundary_margin_plus];
    let rigid_worst = margins.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    ensure(worst <= 1e-12 && cert.verdict == CalliasVerdict::Marginal && rigid_worst <= 1e-9, || {
        format!("bracket gap {worst:e}, rigid verdict {}, max |margin| {rigid_worst:e}", cert.verdict.as_str())
    })?;
    Ok(format!("bracket gap {worst:.2e}, rigid certificate marginal (max |margin| {rigid_worst:.2e})"))
}

fn reports_are_deterministic() -> Outcome {
    for args in [&["examples"][..], &["sweep", "--seed", "42"][..]] {
        let first = binary(args)?;
        let second = binary(args)?;
        ensure(first == second, || format!("`{}` differs between runs", args.join(" ")))?;
        ensure(first.0 == 0, || format!("`{}` exited {}", args.join(" "), first.0))?;
    }
    Ok("examples and sweep --seed 42 byte-identical across runs".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form eta matches RK4", closed_forms_match_rk4),
        ("Tan domain endpoints", domain_endpoints),
        ("rigid example bands saturate", example_bands_saturate),
        ("tight width certificate", tight_width_certificate),
        ("consistency sweep", consistency_sweep_is_clean),
        ("stability marginality", rigid_leaves_marginally_stable),
        ("harmonic saturation", harmonic_saturation),
        ("Callias bracket and rigid certificate", callias_matches_width),
        ("determinism", reports_are_deterministic),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
