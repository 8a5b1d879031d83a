use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eta::{eta_closed, EtaParams, EtaSolution};
use crate::geometry::{constraint_sample, null_expansion, CustomWarp, ExtrinsicSpec, Side, Warp, WarpedBand};
use crate::grid::{nodes_and_midpoints, pairwise_min};
use crate::width::{check_theorem_with, Verdict, WidthMode};

const SWEEP_GRID: usize = 2000;

/// One sampled configuration of the sweep and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTrial {
    pub index: usize,
    pub warp: String,
    pub n: usize,
    pub interval: (f64, f64),
    pub lambda: f64,
    pub sigma: f64,
    pub c: f64,
    pub t_minus: f64,
    pub t_plus: f64,
    pub conclusion: Option<f64>,
    pub verdict: Option<Verdict>,
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub trials: usize,
    pub grid: usize,
    pub consistent: usize,
    pub tight: usize,
    pub hypothesis_violated: usize,
    pub theorem_violated: usize,
    /// Draws for which no admissible `t- < t+` inside the domain of `eta` exists.
    pub skipped: usize,
    /// Largest `width - (t+ - t-)` among trials whose hypotheses hold.
    pub max_conclusion_under_hypotheses: Option<f64>,
    /// Trials with verdict THEOREM-VIOLATED.
    pub violations: Vec<SweepTrial>,
}

struct Draw {
    band: WarpedBand<f64>,
    lambda: f64,
    sigma_offset: f64,
    c_shift: f64,
    offsets: (f64, f64),
}

fn draw(rng: &mut ChaCha8Rng) -> Result<Draw> {
    let n = rng.gen_range(3..=6usize);
    let nf = n as f64;
    let kind = rng.gen_range(0..3u8);
    let (base, t0, t1) = match kind {
        0 => {
            let r = 0.9 * std::f64::consts::PI / nf;
            let a = rng.gen_range(-r..0.5 * r);
            let b = rng.gen_range((a + 0.1 * r).min(r)..=r);
            (Warp::Cosine, a, b)
        }
        1 => {
            let a = rng.gen_range(0.2..1.0);
            (Warp::Sinh, a, a + rng.gen_range(0.2..1.5))
        }
        _ => {
            let a = rng.gen_range(0.2..1.0);
            (Warp::Power, a, a + rng.gen_range(0.2..1.5))
        }
    };
    let amplitude = rng.gen_range(0.0..=0.02);
    let frequency = rng.gen_range(0.0..=2.0);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let warp = Warp::Custom(CustomWarp::modulated(base, n, amplitude, frequency, phase));
    let band = WarpedBand::new(n, t0, t1, warp)?;
    let lambda = rng.gen_range(-2.0..=2.0);
    let sigma_offset = rng.gen_range(0.0..0.5);
    let c_shift = rng.gen_range(0.0..1.0);
    let mut offset = || {
        let magnitude = rng.gen_range(0.0..0.1);
        match rng.gen_range(0..3u8) {
            0 => -magnitude,
            1 => 0.0,
            _ => magnitude,
        }
    };
    let offsets = (offset(), offset());
    Ok(Draw { band, lambda, sigma_offset, c_shift, offsets })
}

fn run_trial(index: usize, d: &Draw) -> Result<SweepTrial> {
    let band = &d.band;
    let n = band.n();
    let k = ExtrinsicSpec::umbilic(d.lambda);
    let ts = nodes_and_midpoints(band.t0(), band.t1(), SWEEP_GRID)?;
    let energies = ts
        .iter()
        .map(|&t| constraint_sample(band, &k, t).map(|c| 2.0 * (c.mu - c.abs_j)))
        .collect::<Result<Vec<_>>>()?;
    let sigma = pairwise_min(energies).unwrap_or(f64::NAN) - d.sigma_offset;
    let probe = EtaParams::new(sigma, d.lambda, n, 0.0)?;
    let c = match crate::eta::classify(&probe) {
        crate::eta::EtaCase::Tan => 0.5 * (band.t0() + band.t1()) + (d.c_shift - 0.5) * 0.4 * band.width(),
        _ => band.t0() - 0.05 - d.c_shift,
    };
    let eta: EtaSolution<f64> = eta_closed(&EtaParams::new(sigma, d.lambda, n, c)?);
    let theta_minus = null_expansion(band, &k, band.t0(), Side::Minus)?;
    let theta_plus = null_expansion(band, &k, band.t1(), Side::Plus)?;
    let mut trial = SweepTrial {
        index,
        warp: format!("{:?}", band.warp()),
        n,
        interval: band.interval(),
        lambda: d.lambda,
        sigma,
        c,
        t_minus: f64::NAN,
        t_plus: f64::NAN,
        conclusion: None,
        verdict: None,
        skipped: None,
    };
    // outward offsets satisfy the boundary hypotheses, inward ones break them
    let (t_minus, t_plus) = match (eta.inverse(theta_minus), eta.inverse(theta_plus)) {
        (Ok(a), Ok(b)) => (a - d.offsets.0, b + d.offsets.1),
        _ => {
            trial.skipped = Some("boundary expansion outside the range of eta".into());
            return Ok(trial);
        }
    };
    trial.t_minus = t_minus;
    trial.t_plus = t_plus;
    if !(t_minus < t_plus) || !eta.contains(t_minus) || !eta.contains(t_plus) {
        trial.skipped = Some("no t- < t+ inside the domain of eta".into());
        return Ok(trial);
    }
    let (cert, _) = check_theorem_with(band, &k, &eta, t_minus, t_plus, SWEEP_GRID, WidthMode::Cmc { lambda: d.lambda })?;
    trial.conclusion = Some(cert.conclusion);
    trial.verdict = Some(cert.verdict);
    Ok(trial)
}

/// Random perturbed catalog bands with umbilic CMC data, `sigma` below the
/// sampled minimum of `2 (mu - |J|)` and `t+-` near the inverse images of
/// the boundary expansions. Deterministic for a given `seed`.
pub fn consistency_sweep(seed: u64, trials: usize) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::Config("the sweep needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..trials).map(|_| draw(&mut rng)).collect::<Result<Vec<_>>>()?;
    let results = draws
        .par_iter()
        .enumerate()
        .map(|(i, d)| run_trial(i, d))
        .collect::<Result<Vec<_>>>()?;
    let mut report = SweepReport {
        seed,
        trials,
        grid: SWEEP_GRID,
        consistent: 0,
        tight: 0,
        hypothesis_violated: 0,
        theorem_violated: 0,
        skipped: 0,
        max_conclusion_under_hypotheses: None,
        violations: Vec::new(),
    };
    for trial in results {
        match trial.verdict {
            None => report.skipped += 1,
            Some(Verdict::Consistent) => report.consistent += 1,
            Some(Verdict::Tight) => report.tight += 1,
            Some(Verdict::HypothesisViolated) => report.hypothesis_violated += 1,
            Some(Verdict::TheoremViolated) => report.theorem_violated += 1,
        }
        if matches!(trial.verdict, Some(v) if v != Verdict::HypothesisViolated) {
            let c = trial.conclusion.unwrap_or(f64::NAN);
            report.max_conclusion_under_hypotheses =
                Some(report.max_conclusion_under_hypotheses.map_or(c, |m| m.max(c)));
        }
        if trial.verdict == Some(Verdict::TheoremViolated) {
            report.violations.push(trial);
        }
    }
    Ok(report)
}
