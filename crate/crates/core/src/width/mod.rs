//! Hypotheses and conclusion of the width estimate on a warped band.
//!
//! For `mu - |J| >= sigma / 2`, `theta(t0) <= eta(t-)` and
//! `theta(t1) >= eta(t+)` with `[t-, t+]` in the domain of `eta`, the band
//! satisfies `width <= t+ - t-`.

mod potential;
mod sweep;

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

pub use potential::{build_potential, rigid_width_function, PotentialBuild, Variant, RIGID_WIDTH_TOL};
pub use sweep::{consistency_sweep, SweepReport, SweepTrial};

use crate::error::{Error, Result};
use crate::eta::{eta_closed, EtaParams, EtaSolution};
use crate::geometry::{constraint_sample, null_expansion, ExtrinsicSpec, Side, WarpedBand};
use crate::grid::{nodes_and_midpoints, pairwise_min, GridField1D};
use crate::scalar::Real;

/// Margin classification tolerance.
pub const WIDTH_TOL: f64 = 1e-9;

/// Tolerance for `tr k = lambda` in CMC mode.
pub const CMC_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "consistent")]
    Consistent,
    #[serde(rename = "tight")]
    Tight,
    #[serde(rename = "hypothesis-violated")]
    HypothesisViolated,
    #[serde(rename = "THEOREM-VIOLATED")]
    TheoremViolated,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Tight => "tight",
            Verdict::HypothesisViolated => "hypothesis-violated",
            Verdict::TheoremViolated => "THEOREM-VIOLATED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Classifies hypothesis margins and the conclusion margin
/// `width - (t+ - t-)`. `extra` margins only take part in the tightness test.
pub fn classify_margins<T: Real>(hypotheses: &[T], extra: &[T], conclusion: T, tol: T) -> Verdict {
    if hypotheses.iter().any(|&m| !(m >= -tol)) {
        return Verdict::HypothesisViolated;
    }
    if conclusion > tol {
        return Verdict::TheoremViolated;
    }
    let near = |m: T| m.abs() <= tol;
    if hypotheses.iter().chain(extra).all(|&m| near(m)) && near(conclusion) {
        Verdict::Tight
    } else {
        Verdict::Consistent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WidthMode<T> {
    /// `tr k = lambda` everywhere.
    Cmc { lambda: T },
    /// `tr k <= lambda_sup`; needs `eta(t+) > 0`.
    SupTrace { lambda_sup: T },
}

impl<T: Real> WidthMode<T> {
    pub fn lambda(&self) -> T {
        match *self {
            WidthMode::Cmc { lambda } => lambda,
            WidthMode::SupTrace { lambda_sup } => lambda_sup,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WidthMode::Cmc { .. } => "cmc",
            WidthMode::SupTrace { .. } => "sup_trace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Saturation {
    pub dec: bool,
    pub boundary_minus: bool,
    pub boundary_plus: bool,
    pub width: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<T> {
    pub mode: WidthMode<T>,
    pub sigma: T,
    pub t_minus: T,
    pub t_plus: T,
    pub width: T,
    pub grid: usize,
    /// `min (mu - |J| - sigma / 2)`.
    pub dec_margin: T,
    /// `min (mu - |J| + (n/(n-1) p^2 - 2 p tr k - 2 |grad p|) / 2)`, `p = eta o phi`.
    pub mod_dec_margin: T,
    /// `eta(t-) - theta(t0)`.
    pub boundary_minus: T,
    /// `theta(t1) - eta(t+)`.
    pub boundary_plus: T,
    /// `width - (t+ - t-)`.
    pub conclusion: T,
    pub theta_minus: T,
    pub theta_plus: T,
    pub eta_minus: T,
    pub eta_plus: T,
    /// `min eta` over `[t-, t+]` (sup-trace mode only).
    pub eta_min: Option<T>,
    pub saturated: Saturation,
    pub tol: T,
    pub verdict: Verdict,
}

impl<T: Real> Certificate<T> {
    pub fn hypotheses_hold(&self) -> bool {
        [self.dec_margin, self.boundary_minus, self.boundary_plus]
            .iter()
            .all(|&m| m >= -self.tol)
    }
}

/// Pointwise margin fields on the nodes-and-midpoints grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginFields<T> {
    pub dec: GridField1D<T>,
    pub mod_dec: GridField1D<T>,
}

/// Checks the width estimate with `eta` the closed form for
/// `(sigma, lambda, n, c = 0)` on the default branch.
pub fn check_theorem<T: Real>(
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    sigma: T,
    t_minus: T,
    t_plus: T,
    grid_n: usize,
    mode: WidthMode<T>,
) -> Result<Certificate<T>> {
    let params = EtaParams::new(sigma, mode.lambda(), band.n(), T::zero())?;
    Ok(check_theorem_with(band, k, &eta_closed(&params), t_minus, t_plus, grid_n, mode)?.0)
}

/// [`check_theorem`] with a caller-supplied `eta`, also returning the margin fields.
pub fn check_theorem_with<T: Real>(
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    eta: &EtaSolution<T>,
    t_minus: T,
    t_plus: T,
    grid_n: usize,
    mode: WidthMode<T>,
) -> Result<(Certificate<T>, MarginFields<T>)> {
    let n = band.n();
    if eta.params.n != n {
        return Err(Error::Config(format!("eta built for n = {}, band has n = {n}", eta.params.n)));
    }
    if eta.params.lambda != mode.lambda() {
        return Err(Error::Config("eta lambda differs from the mode's lambda".into()));
    }
    if !(t_minus < t_plus) {
        return Err(Error::Config(format!("need t- < t+, got t- = {t_minus}, t+ = {t_plus}")));
    }
    for t in [t_minus, t_plus] {
        if !eta.contains(t) {
            return Err(Error::Config(format!(
                "[t-, t+] = [{t_minus}, {t_plus}] is not inside the domain ({}, {}) of eta",
                eta.domain.0, eta.domain.1
            )));
        }
    }
    let sigma = eta.params.sigma;
    let eta_plus = eta.eval(t_plus)?;
    let eta_minus = eta.eval(t_minus)?;
    let eta_min = match mode {
        WidthMode::Cmc { .. } => None,
        WidthMode::SupTrace { .. } => {
            if !(eta_plus > T::zero()) {
                return Err(Error::Mode(format!("sup-trace mode needs eta(t+) > 0, got {eta_plus}")));
            }
            Some(eta_plus)
        }
    };
    let potential = rigid_width_function(band, eta, t_minus, t_plus)?;

    let MarginFields { dec, mod_dec } = margin_fields(band, k, &potential, sigma, grid_n, mode)?;
    let dec_margin = pairwise_min(dec.values().iter().copied()).unwrap_or_else(T::nan);
    let mod_dec_margin = pairwise_min(mod_dec.values().iter().copied()).unwrap_or_else(T::nan);

    let theta_minus = null_expansion(band, k, band.t0(), Side::Minus)?;
    let theta_plus = null_expansion(band, k, band.t1(), Side::Plus)?;
    let boundary_minus = eta_minus - theta_minus;
    let boundary_plus = theta_plus - eta_plus;
    let conclusion = band.width() - (t_plus - t_minus);
    let tol = T::lit(WIDTH_TOL);
    let verdict = classify_margins(&[dec_margin, boundary_minus, boundary_plus], &[mod_dec_margin], conclusion, tol);
    let near = |m: T| m.abs() <= tol;
    let certificate = Certificate {
        mode,
        sigma,
        t_minus,
        t_plus,
        width: band.width(),
        grid: grid_n,
        dec_margin,
        mod_dec_margin,
        boundary_minus,
        boundary_plus,
        conclusion,
        theta_minus,
        theta_plus,
        eta_minus,
        eta_plus,
        eta_min,
        saturated: Saturation {
            dec: near(dec_margin),
            boundary_minus: near(boundary_minus),
            boundary_plus: near(boundary_plus),
            width: near(conclusion),
        },
        tol,
        verdict,
    };
    Ok((certificate, MarginFields { dec, mod_dec }))
}

/// Pointwise `mu - |J| - sigma/2` and the modified-DEC bracket
/// `mu - |J| + (n/(n-1) p^2 - 2 p w - 2 |grad p|) / 2` for the potential
/// `p = eta o phi` of `potential`, on the nodes and midpoints of `grid_n`
/// points. `w` is `tr k` in CMC mode and the trace bound otherwise.
pub fn margin_fields<T: Real>(
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    potential: &PotentialBuild<T>,
    sigma: T,
    grid_n: usize,
    mode: WidthMode<T>,
) -> Result<MarginFields<T>> {
    let n = band.n();
    let lambda = mode.lambda();
    let ts = nodes_and_midpoints(band.t0(), band.t1(), grid_n)?;
    let nf = T::count(n);
    let ratio = nf / T::count(n - 1);
    let half = T::lit(0.5);
    let cmc_tol = T::lit(CMC_TOL) * T::one().max(lambda.abs());
    let samples: Vec<(T, T)> = ts
        .par_iter()
        .map(|&t| -> Result<(T, T)> {
            let c = constraint_sample(band, k, t)?;
            let trk = k.trace(n, t)?;
            let weight = match mode {
                WidthMode::Cmc { lambda } => {
                    if (trk - lambda).abs() > cmc_tol {
                        return Err(Error::Mode(format!("tr k = {trk} at t = {t} differs from lambda = {lambda}")));
                    }
                    trk
                }
                WidthMode::SupTrace { lambda_sup } => {
                    if trk > lambda_sup + cmc_tol {
                        return Err(Error::Mode(format!("tr k = {trk} at t = {t} exceeds the bound {lambda_sup}")));
                    }
                    lambda_sup
                }
            };
            let (p, grad) = potential.jet(t)?;
            let base = c.mu - c.abs_j;
            let dec = base - half * sigma;
            let mod_dec = base + half * (ratio * p * p - T::lit(2.0) * p * weight - T::lit(2.0) * grad);
            Ok((dec, mod_dec))
        })
        .collect::<Result<Vec<_>>>()?;

    let step = (band.t1() - band.t0()) / T::count(ts.len() - 1);
    let dec = GridField1D::new(band.t0(), step, samples.iter().map(|s| s.0).collect())?;
    let mod_dec = GridField1D::new(band.t0(), step, samples.iter().map(|s| s.1).collect())?;
    Ok(MarginFields { dec, mod_dec })
}
