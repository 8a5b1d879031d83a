//! Scalar content of the Callias-operator argument: admissibility of the
//! potential and signs of the bulk and boundary integrands of
//!
//! ```text
//! mu - |J| + (n/(n-1) psi~^2 - 2 psi~ tr k - 2 |d psi~|) / 2 - 2 |R^E|,
//! (theta+ - psi~) on d+M,  (-theta- + psi~) on d-M,
//! ```
//!
//! with `psi~ = eta o phi = -2(n-1)/n psi`. The index of the operator is an
//! assumption of the certificate and is never computed.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eta::EtaSolution;
use crate::geometry::{constraint_sample, null_expansion, ExtrinsicSpec, Side, WarpedBand};
use crate::grid::{nodes_and_midpoints, pairwise_max, pairwise_min, GridField1D};
use crate::scalar::Real;
use crate::width::{build_potential, PotentialBuild, Variant, WidthMode, CMC_TOL, WIDTH_TOL};

/// Tolerance of the internal identity checks.
pub const IDENTITY_TOL: f64 = 1e-12;

pub const INDEX_ASSUMPTION: &str = "the Callias operator has non-zero index (assumed, not computed)";

#[derive(Debug, Clone, Serialize)]
pub struct CalliasInput<T> {
    pub build: PotentialBuild<T>,
    pub psi_tilde: GridField1D<T>,
    pub psi: GridField1D<T>,
    /// `|R^E|_inf >= 0`.
    pub re_bound: T,
    pub s_minus: i8,
    pub s_plus: i8,
    pub lambda: T,
    /// `2 psi + lambda` on the plateaus near `d-M` and `d+M`.
    pub plateau_constants: Option<(T, T)>,
    pub admissible: bool,
    pub admissibility_reason: Option<String>,
}

/// `psi~ = eta o phi` and `psi = -n/(2(n-1)) psi~` on `points` nodes.
/// With plateaus on both ends `2 psi + lambda` equals
/// `-n/(n-1) eta(t-+ -+ eps) + lambda` there, which must be non-zero.
#[allow(clippy::too_many_arguments)]
pub fn build_callias_input<T: Real>(
    band: &WarpedBand<T>,
    eta: &EtaSolution<T>,
    t_minus: T,
    t_plus: T,
    eps: T,
    plateaus: (T, T),
    variant: Variant,
    re_bound: T,
    points: usize,
) -> Result<CalliasInput<T>> {
    if !(re_bound >= T::zero()) {
        return Err(Error::Config(format!("the bundle curvature bound must be non-negative, got {re_bound}")));
    }
    let n = band.n();
    let build = build_potential(band, eta, t_minus, t_plus, eps, plateaus, variant)?;
    let psi_tilde = build.sample_p(points)?;
    let factor = -T::count(n) / (T::lit(2.0) * T::count(n - 1));
    let psi = psi_tilde.map(|_, v| factor * v);
    let back = -T::lit(2.0) * T::count(n - 1) / T::count(n);
    let scaling_gap = psi_tilde
        .values()
        .iter()
        .zip(psi.values())
        .map(|(&a, &b)| (a - back * b).abs() / T::one().max(a.abs()))
        .fold(T::zero(), T::max);
    if scaling_gap > T::lit(4.0) * T::epsilon() {
        return Err(Error::Consistency(format!("psi and psi~ violate the scaling identity by {scaling_gap}")));
    }
    let lambda = eta.params.lambda;
    let ratio = T::count(n) / T::count(n - 1);
    let (mut plateau_constants, mut admissible, mut reason) = (None, true, None);
    if plateaus.0 > T::zero() && plateaus.1 > T::zero() {
        let lo = -ratio * eta.eval(t_minus - eps)? + lambda;
        let hi = -ratio * eta.eval(t_plus + eps)? + lambda;
        let scale = T::one().max(lambda.abs());
        for (side, c) in [("d-M", lo), ("d+M", hi)] {
            if c.abs() <= T::lit(IDENTITY_TOL) * scale {
                return Err(Error::Admissibility(format!("2 psi + tr k vanishes on the plateau near {side}")));
            }
        }
        for (t, v) in psi.iter() {
            let on_lo = t <= band.t0() + plateaus.0;
            let on_hi = t >= band.t1() - plateaus.1;
            let expect = if on_lo { lo } else { hi };
            if (on_lo || on_hi) && (T::lit(2.0) * v + lambda - expect).abs() > T::lit(IDENTITY_TOL) * scale.max(expect.abs()) {
                return Err(Error::Consistency(format!("2 psi + tr k is not constant on the plateau at t = {t}")));
            }
        }
        plateau_constants = Some((lo, hi));
    } else {
        admissible = false;
        reason = Some("non-constant near boundary".to_string());
    }
    Ok(CalliasInput {
        build,
        psi_tilde,
        psi,
        re_bound,
        s_minus: -1,
        s_plus: 1,
        lambda,
        plateau_constants,
        admissible,
        admissibility_reason: reason,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CalliasVerdict {
    /// Admissible potential with every margin positive.
    ContradictionCertified,
    /// Every margin within the tolerance of zero.
    Marginal,
    /// Some margin is negative: the chain does not close.
    NotCertified,
    Inconclusive,
}

impl CalliasVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CalliasVerdict::ContradictionCertified => "contradiction-certified",
            CalliasVerdict::Marginal => "marginal",
            CalliasVerdict::NotCertified => "not-certified",
            CalliasVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for CalliasVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalliasCertificate<T> {
    pub assumptions: Vec<String>,
    pub re_bound: T,
    pub bulk_margin: T,
    pub boundary_margin_plus: T,
    pub boundary_margin_minus: T,
    pub admissible: bool,
    pub admissibility_reason: Option<String>,
    pub plateau_constants: Option<(T, T)>,
    /// Largest gap between the `psi` and `psi~` forms of the bulk bracket.
    pub route_gap: T,
    pub grid: usize,
    pub tol: T,
    pub verdict: CalliasVerdict,
}

pub fn classify_certificate<T: Real>(margins: &[T], admissible: bool, tol: T) -> CalliasVerdict {
    if margins.iter().any(|&m| !(m >= -tol)) {
        CalliasVerdict::NotCertified
    } else if margins.iter().all(|&m| m.abs() <= tol) {
        CalliasVerdict::Marginal
    } else if admissible && margins.iter().all(|&m| m > tol) {
        CalliasVerdict::ContradictionCertified
    } else {
        CalliasVerdict::Inconclusive
    }
}

/// Evaluates the margins on the nodes-and-midpoints grid of `grid_n`
/// points. Returns the certificate and the pointwise bulk bracket.
pub fn evaluate_certificate<T: Real>(
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    input: &CalliasInput<T>,
    grid_n: usize,
    mode: WidthMode<T>,
) -> Result<(CalliasCertificate<T>, GridField1D<T>)> {
    let n = band.n();
    let nf = T::count(n);
    let m = T::count(n - 1);
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let build = &input.build;
    if mode.lambda() != input.lambda {
        return Err(Error::Config("the potential was built for a different lambda".into()));
    }
    let cmc_tol = T::lit(CMC_TOL) * T::one().max(input.lambda.abs());
    let ts = nodes_and_midpoints(band.t0(), band.t1(), grid_n)?;
    let rows: Vec<(T, T)> = ts
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
            let (pt, dpt) = build.jet(t)?;
            let re = two * input.re_bound;
            let base = c.mu - c.abs_j;
            let bracket = base + half * (nf / m * pt * pt - two * pt * weight - two * dpt) - re;
            let psi = -nf / (two * m) * pt;
            let dpsi = nf / (two * m) * dpt;
            let via_psi = base - re + two * m / nf * (psi * psi - dpsi + psi * weight);
            Ok((bracket, via_psi))
        })
        .collect::<Result<Vec<_>>>()?;
    let route_gap = pairwise_max(rows.iter().map(|&(a, b)| (a - b).abs() / T::one().max(a.abs())))
        .unwrap_or_else(T::zero);
    if route_gap > T::lit(IDENTITY_TOL) {
        return Err(Error::Consistency(format!("bulk bracket differs between psi and psi~ forms by {route_gap}")));
    }
    let step = (band.t1() - band.t0()) / T::count(ts.len() - 1);
    let bulk = GridField1D::new(band.t0(), step, rows.iter().map(|r| r.0).collect())?;
    let bulk_margin = pairwise_min(bulk.values().iter().copied()).unwrap_or_else(T::nan);
    let theta_plus = null_expansion(band, k, band.t1(), Side::Plus)?;
    let theta_minus = null_expansion(band, k, band.t0(), Side::Minus)?;
    let boundary_margin_plus = theta_plus - build.p(band.t1())?;
    let boundary_margin_minus = -theta_minus + build.p(band.t0())?;
    let tol = T::lit(WIDTH_TOL);
    let verdict = classify_certificate(&[bulk_margin, boundary_margin_plus, boundary_margin_minus], input.admissible, tol);
    Ok((
        CalliasCertificate {
            assumptions: vec![INDEX_ASSUMPTION.to_string()],
            re_bound: input.re_bound,
            bulk_margin,
            boundary_margin_plus,
            boundary_margin_minus,
            admissible: input.admissible,
            admissibility_reason: input.admissibility_reason.clone(),
            plateau_constants: input.plateau_constants,
            route_gap,
            grid: grid_n,
            tol,
            verdict,
        },
        bulk,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::{eta_closed, EtaParams};

    fn eta6() -> EtaSolution<f64> {
        eta_closed(&EtaParams::new(6.0, 0.0, 3, 0.0).unwrap())
    }

    fn cmc0() -> WidthMode<f64> {
        WidthMode::Cmc { lambda: 0.0 }
    }

    #[test]
    fn plateau_constants() {
        let band = WarpedBand::<f64>::cosine(3, -0.95, 0.95).unwrap();
        let input = build_callias_input(&band, &eta6(), -0.7, 0.7, 0.04, (0.1, 0.1), Variant::Strict, 0.0, 801).unwrap();
        let (lo, hi) = input.plateau_constants.unwrap();
        let expect = 1.5 * 2.0 * 1.11f64.tan();
        assert!((lo + expect).abs() < 1e-12);
        assert!((hi - expect).abs() < 1e-12);
        assert!(input.admissible);
    }

    #[test]
    fn zero_plateau_constant_is_rejected() {
        let band = WarpedBand::<f64>::cosine(3, -0.5, 0.5).unwrap();
        let r = build_callias_input(&band, &eta6(), 0.04, 0.3, 0.04, (0.1, 0.1), Variant::Strict, 0.0, 201);
        assert!(matches!(r, Err(Error::Admissibility(_))));
    }

    #[test]
    fn rigid_input_is_marginal_but_inadmissible() {
        let band = WarpedBand::<f64>::cosine(3, -0.7, 0.7).unwrap();
        let input = build_callias_input(&band, &eta6(), -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid, 0.0, 201).unwrap();
        assert!(!input.admissible);
        assert_eq!(input.admissibility_reason.as_deref(), Some("non-constant near boundary"));
        let (c, _) = evaluate_certificate(&band, &ExtrinsicSpec::time_symmetric(), &input, 2000, cmc0()).unwrap();
        assert_eq!(c.verdict, CalliasVerdict::Marginal);
        for m in [c.bulk_margin, c.boundary_margin_plus, c.boundary_margin_minus] {
            assert!(m.abs() < 1e-9);
        }
    }

    #[test]
    fn bundle_curvature_shifts_bulk() {
        let band = WarpedBand::<f64>::cosine(3, -0.7, 0.7).unwrap();
        let input = build_callias_input(&band, &eta6(), -0.7, 0.7, 0.0, (0.0, 0.0), Variant::Rigid, 0.1, 201).unwrap();
        let (c, _) = evaluate_certificate(&band, &ExtrinsicSpec::time_symmetric(), &input, 2000, cmc0()).unwrap();
        assert!((c.bulk_margin + 0.2).abs() < 1e-9);
        assert_eq!(c.verdict, CalliasVerdict::NotCertified);
    }

    #[test]
    fn verdicts() {
        assert_eq!(classify_certificate(&[1.0, 2.0], true, 1e-9), CalliasVerdict::ContradictionCertified);
        assert_eq!(classify_certificate(&[1.0, 2.0], false, 1e-9), CalliasVerdict::Inconclusive);
        assert_eq!(classify_certificate(&[0.0, 1e-10], false, 1e-9), CalliasVerdict::Marginal);
        assert_eq!(classify_certificate(&[1.0, -1.0], true, 1e-9), CalliasVerdict::NotCertified);
    }
}
