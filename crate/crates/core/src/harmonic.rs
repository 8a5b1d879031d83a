//! Perturbed spacetime-harmonic functions on three-dimensional warped bands.
//!
//! For `k~ = k - p g / 2` the equation `Lap u + tr k~ |grad u| = 0` with
//! `u = u(t)` reduces to `u'' + H u' + q |u'| = 0`, `q = tr k - 3p/2`, and
//! the integral inequality
//!
//! ```text
//! int_{d+-M} +-(d_nu |grad u| + k~(grad u, nu))
//!     >= int ds int_{Sigma_s} |T|^2 / (2 |grad u|^2) + mu~ + J~(nu) - K
//! ```
//!
//! is evaluated with `T = Hess u + k~ |grad u|`, leaf area `f^2` and
//! `ds = u' dt`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{constraint_sample, mean_curvature, null_expansion, ExtrinsicSpec, Side, WarpedBand};
use crate::grid::{pairwise_max, GridField1D};
use crate::profile::Profile;
use crate::scalar::Real;

/// Allowed disagreement between the two boundary-term evaluations.
pub const ROUTE_TOL: f64 = 1e-6;

/// Coefficients of the reduced equation `u'' + H u' + q |u'| = 0`.
#[derive(Clone)]
pub struct ReducedOde<T> {
    pub band: WarpedBand<T>,
    pub k: ExtrinsicSpec<T>,
    pub p: Profile<T>,
}

impl<T: Real> ReducedOde<T> {
    /// `(H(t), q(t))`.
    pub fn coefficients(&self, t: T) -> Result<(T, T)> {
        let h = mean_curvature(&self.band, t)?;
        let q = self.k.trace(3, t)? - T::lit(1.5) * self.p.value(t)?;
        Ok((h, q))
    }

    pub fn sample(&self, points: usize) -> Result<(GridField1D<T>, GridField1D<T>)> {
        let (lo, hi) = self.band.interval();
        let h = GridField1D::try_sample(lo, hi, points, |t| Ok(self.coefficients(t)?.0))?;
        let q = GridField1D::try_sample(lo, hi, points, |t| Ok(self.coefficients(t)?.1))?;
        Ok((h, q))
    }
}

pub fn reduce_ode<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, p: &Profile<T>) -> Result<ReducedOde<T>> {
    if band.n() != 3 {
        return Err(Error::Dimension { n: band.n(), reason: "the harmonic reduction is three-dimensional" });
    }
    Ok(ReducedOde { band: band.clone(), k: k.clone(), p: p.clone() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarmonicSolution<T> {
    pub u: GridField1D<T>,
    pub du: GridField1D<T>,
    /// `u''` from finite differences of `u'`.
    pub d2u: GridField1D<T>,
    /// `u'' + H u' + q |u'|` with the finite-difference `u''`.
    pub residual: GridField1D<T>,
    pub monotone: bool,
}

/// On `u' > 0` the reduced equation is linear: integrates
/// `(u, v)' = (v, -(H + q) v)` from `(0, 1)` by RK4 and rescales to
/// `u(t0) = -1`, `u(t1) = 1`.
pub fn solve_reduced<T: Real>(ode: &ReducedOde<T>, points: usize) -> Result<HarmonicSolution<T>> {
    let (lo, hi) = ode.band.interval();
    let ts = crate::grid::nodes(lo, hi, points)?;
    let h = (hi - lo) / T::count(points - 1);
    let half = T::lit(0.5);
    let rate = |t: T| -> Result<T> {
        let (a, b) = ode.coefficients(t)?;
        Ok(-(a + b))
    };
    let mut u = Vec::with_capacity(points);
    let mut v = Vec::with_capacity(points);
    let (mut uu, mut vv) = (T::zero(), T::one());
    u.push(uu);
    v.push(vv);
    for w in ts.windows(2) {
        let (t, step) = (w[0], w[1] - w[0]);
        let mid = t + half * step;
        let (r0, rm, r1) = (rate(t)?, rate(mid)?, rate(w[1])?);
        let (ku1, kv1) = (vv, r0 * vv);
        let (ku2, kv2) = (vv + half * step * kv1, rm * (vv + half * step * kv1));
        let (ku3, kv3) = (vv + half * step * kv2, rm * (vv + half * step * kv2));
        let (ku4, kv4) = (vv + step * kv3, r1 * (vv + step * kv3));
        let sixth = step / T::lit(6.0);
        uu = uu + sixth * (ku1 + T::lit(2.0) * (ku2 + ku3) + ku4);
        vv = vv + sixth * (kv1 + T::lit(2.0) * (kv2 + kv3) + kv4);
        u.push(uu);
        v.push(vv);
    }
    let total = uu;
    if !(total > T::zero()) || !total.is_finite() {
        return Err(Error::Consistency(format!("cannot normalize u: integral of u' is {total}")));
    }
    let scale = T::lit(2.0) / total;
    let mut u: Vec<T> = u.into_iter().map(|x| -T::one() + scale * x).collect();
    u[points - 1] = T::one();
    let du = GridField1D::new(lo, h, v.into_iter().map(|x| scale * x).collect())?;
    let u = GridField1D::new(lo, h, u)?;
    let d2u = du.derivative();
    let monotone = du.values().iter().all(|&x| x > T::zero());
    let mut res = Vec::with_capacity(points);
    for (i, &t) in ts.iter().enumerate() {
        let (hh, q) = ode.coefficients(t)?;
        let d = du.values()[i];
        res.push(d2u.values()[i] + hh * d + q * d.abs());
    }
    let residual = GridField1D::new(lo, h, res)?;
    Ok(HarmonicSolution { u, du, d2u, residual, monotone })
}

/// `(mu~, J~_t) = (mu + (3/2 p^2 - 2 p tr k) / 2, J_t + p')`.
pub fn perturbed_densities<T: Real>(mu: T, j_t: T, trk: T, p: T, dp: T) -> (T, T) {
    (mu + T::lit(0.5) * (T::lit(1.5) * p * p - T::lit(2.0) * p * trk), j_t + dp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HessianSign {
    /// `T = Hess u + k~ |grad u|`, whose trace is the reduced equation.
    #[default]
    Adopted,
    /// `T = Hess u - k~ |grad u|`.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HessianComponents<T> {
    pub t_tt: T,
    /// Each of the two leaf directions.
    pub t_tan: T,
    pub norm: T,
}

/// `T` at grid node `i` of `sol`.
pub fn hessian_tensor<T: Real>(
    sol: &HarmonicSolution<T>,
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    p: &Profile<T>,
    i: usize,
    sign: HessianSign,
) -> Result<HessianComponents<T>> {
    let t = sol.du.t(i);
    let du = sol.du.values()[i];
    let d2u = sol.d2u.values()[i];
    let jet = k.jet(3, t)?;
    let pv = p.value(t)?;
    let half = T::lit(0.5);
    let s = match sign {
        HessianSign::Adopted => T::one(),
        HessianSign::Paper => -T::one(),
    };
    let t_tt = d2u + s * (jet.normal - half * pv) * du.abs();
    let t_tan = half * mean_curvature(band, t)? * du + s * (jet.tangential - half * pv) * du.abs();
    Ok(HessianComponents { t_tt, t_tan, norm: (t_tt * t_tt + T::lit(2.0) * t_tan * t_tan).sqrt() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport<T> {
    pub sigma: T,
    pub hessian_sign: HessianSign,
    /// `(theta(t0) - p(t0)) u'(t0) f(t0)^2`.
    pub boundary_minus: T,
    /// `-(theta(t1) - p(t1)) u'(t1) f(t1)^2`.
    pub boundary_plus: T,
    /// The same two terms from `d_nu |grad u| + k~(grad u, nu)`.
    pub boundary_minus_direct: T,
    pub boundary_plus_direct: T,
    pub route_gap: T,
    pub boundary_total: T,
    /// `int |T|^2 / (2 |grad u|^2)` over `ds` and the leaf.
    pub bulk_hessian: T,
    /// `int |T|^2 / (2 |grad u|)` over `ds` and the leaf.
    pub bulk_hessian_alt: T,
    pub bulk_energy: T,
    /// Flat torus leaves: `K = 0`.
    pub gauss_term: T,
    pub bulk_total: T,
    /// `boundary_total - bulk_total`.
    pub slack: T,
    pub max_hessian_norm: T,
    pub max_energy_abs: T,
    /// `min (mu - |J| - sigma / 2)` on the grid.
    pub dec_margin: T,
}

impl<T: Real> InequalityReport<T> {
    /// The fields that vanish in the rigid configuration.
    pub fn saturation_fields(&self) -> [(&'static str, T); 8] {
        [
            ("boundary_minus", self.boundary_minus),
            ("boundary_plus", self.boundary_plus),
            ("bulk_hessian", self.bulk_hessian),
            ("bulk_energy", self.bulk_energy),
            ("gauss_term", self.gauss_term),
            ("bulk_total", self.bulk_total),
            ("slack", self.slack),
            ("max_energy_abs", self.max_energy_abs),
        ]
    }
}

/// Pointwise integrands of the bulk, in `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BulkIntegrands<T> {
    pub hessian_norm: GridField1D<T>,
    /// `mu~ + J~(nu)`.
    pub energy: GridField1D<T>,
}

pub fn verify_integral_inequality<T: Real>(
    band: &WarpedBand<T>,
    k: &ExtrinsicSpec<T>,
    sigma: T,
    p: &Profile<T>,
    sol: &HarmonicSolution<T>,
    sign: HessianSign,
) -> Result<(InequalityReport<T>, BulkIntegrands<T>)> {
    if band.n() != 3 {
        return Err(Error::Dimension { n: band.n(), reason: "the harmonic reduction is three-dimensional" });
    }
    let points = sol.du.len();
    let half = T::lit(0.5);
    let mut norms = Vec::with_capacity(points);
    let mut hess = Vec::with_capacity(points);
    let mut hess_alt = Vec::with_capacity(points);
    let mut energy = Vec::with_capacity(points);
    let mut energy_w = Vec::with_capacity(points);
    let mut dec = Vec::with_capacity(points);
    for i in 0..points {
        let t = sol.du.t(i);
        let du = sol.du.values()[i];
        let area = band.f(t)?.powi(2);
        let tt = hessian_tensor(sol, band, k, p, i, sign)?;
        let c = constraint_sample(band, k, t)?;
        let (pv, dp) = p.jet(t)?;
        let (mu_t, j_t) = perturbed_densities(c.mu, c.j_t, k.trace(3, t)?, pv, dp);
        let e = mu_t + j_t;
        norms.push(tt.norm);
        // coarea: ds = u' dt
        hess.push(half * tt.norm * tt.norm / du * area);
        hess_alt.push(half * tt.norm * tt.norm * area);
        energy.push(e);
        energy_w.push(e * du * area);
        dec.push(c.mu - c.abs_j - half * sigma);
    }
    let (lo, h) = (sol.du.start(), sol.du.step());
    let field = |v: Vec<T>| GridField1D::new(lo, h, v);
    let bulk_hessian = field(hess)?.trapezoid();
    let bulk_hessian_alt = field(hess_alt)?.trapezoid();
    let bulk_energy = field(energy_w)?.trapezoid();
    let gauss_term = T::zero();
    let bulk_total = bulk_hessian + bulk_energy - gauss_term;

    let ends = [(0usize, band.t0(), Side::Minus), (points - 1, band.t1(), Side::Plus)];
    let mut closed = [T::zero(); 2];
    let mut direct = [T::zero(); 2];
    for (slot, &(i, t, side)) in ends.iter().enumerate() {
        let du = sol.du.values()[i];
        let area = band.f(t)?.powi(2);
        let pv = p.value(t)?;
        let theta = null_expansion(band, k, t, side)?;
        let k_tt = k.jet(3, t)?.normal - half * pv;
        let outward = if side == Side::Plus { T::one() } else { -T::one() };
        // d_nu |grad u| + k~(grad u, nu) with nu = d/dt, signed by the end
        direct[slot] = outward * (sol.d2u.values()[i] + k_tt * du) * area;
        closed[slot] = -outward * (theta - pv) * du * area;
    }
    let route_gap = (closed[0] - direct[0]).abs().max((closed[1] - direct[1]).abs());
    let route_scale = T::one().max(closed[0].abs()).max(closed[1].abs());
    if route_gap > T::lit(ROUTE_TOL) * route_scale {
        return Err(Error::Consistency(format!("boundary terms disagree between the two evaluations by {route_gap}")));
    }
    let boundary_total = closed[0] + closed[1];
    let report = InequalityReport {
        sigma,
        hessian_sign: sign,
        boundary_minus: closed[0],
        boundary_plus: closed[1],
        boundary_minus_direct: direct[0],
        boundary_plus_direct: direct[1],
        route_gap,
        boundary_total,
        bulk_hessian,
        bulk_hessian_alt,
        bulk_energy,
        gauss_term,
        bulk_total,
        slack: boundary_total - bulk_total,
        max_hessian_norm: pairwise_max(norms.iter().copied()).unwrap_or_else(T::nan),
        max_energy_abs: pairwise_max(energy.iter().map(|e| e.abs())).unwrap_or_else(T::nan),
        dec_margin: crate::grid::pairwise_min(dec).unwrap_or_else(T::nan),
    };
    Ok((report, BulkIntegrands { hessian_norm: field(norms)?, energy: field(energy)? }))
}
