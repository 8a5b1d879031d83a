//! Stability operator of a leaf `Sigma_t` with prescribed null expansion
//! `theta = p`:
//!
//! ```text
//! L phi = -Lap phi + 2 <W, grad phi> + (div W - |W|^2 + Q - (p^2 - 2 p tr k + 2 nu(p)) / 2) phi
//! Q     = R_Sigma / 2 - mu - J(nu) - |chi|^2 / 2
//! ```
//!
//! The first-order term is taken with `-|W|^2`. On symmetric leaves of a
//! warped band `W = 0`, `R_Sigma = 0` and every coefficient is constant.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{constraint_sample, mean_curvature, ExtrinsicSpec, WarpedBand};
use crate::grid::{pairwise_max, pairwise_min, pairwise_sum};
use crate::profile::Profile;
use crate::scalar::Real;

/// Tolerance of the regrouping identity check.
pub const REGROUP_TOL: f64 = 1e-10;
/// Power iteration stops once the relative eigen-residual is below this.
pub const EIGEN_TOL: f64 = 1e-10;
pub const MAX_POWER_ITERATIONS: usize = 10_000;
/// Relative tolerance of the inner linear solves.
pub const INNER_TOL: f64 = 1e-12;
/// Largest lattice accepted, in sites.
pub const MAX_SITES: usize = 1 << 22;

/// Closed-form data of the leaf at `t`. `h = (H / (n-1)) g_Sigma` and
/// `chi = h + k|_Sigma` are pure trace, so `|chi^0|^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSetData<T> {
    pub t: T,
    pub n: usize,
    /// `f(t)`; the leaf metric is `f^2 tau`.
    pub scale: T,
    /// `H / (n-1)`.
    pub h: T,
    /// Coefficient of `chi = chi_coeff g_Sigma`.
    pub chi: T,
    pub chi_norm_sq: T,
    pub chi0_norm_sq: T,
    pub w_norm_sq: T,
    pub div_w: T,
    pub r_sigma: T,
    pub mu: T,
    pub j_nu: T,
    pub trk: T,
    pub theta: T,
    pub q: T,
    pub p_val: T,
    pub p_normal_deriv: T,
}

impl<T: Real> LevelSetData<T> {
    /// Same leaf with `mu` raised by `delta`.
    pub fn with_energy_shift(mut self, delta: T) -> Self {
        self.mu = self.mu + delta;
        self.q = self.q - delta;
        self
    }
}

pub fn level_set_data<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, p: &Profile<T>, t: T) -> Result<LevelSetData<T>> {
    let t = band.check(t)?;
    let n = band.n();
    let m = T::count(n - 1);
    let h = mean_curvature(band, t)? / m;
    let chi = h + k.jet(n, t)?.tangential;
    let c = constraint_sample(band, k, t)?;
    let chi_norm_sq = m * chi * chi;
    let (p_val, p_normal_deriv) = p.jet(t)?;
    let r_sigma = T::zero();
    Ok(LevelSetData {
        t,
        n,
        scale: band.f(t)?,
        h,
        chi,
        chi_norm_sq,
        chi0_norm_sq: T::zero(),
        w_norm_sq: T::zero(),
        div_w: T::zero(),
        r_sigma,
        mu: c.mu,
        j_nu: c.j_t,
        trk: k.trace(n, t)?,
        theta: m * chi,
        q: T::lit(0.5) * r_sigma - c.mu - c.j_t - T::lit(0.5) * chi_norm_sq,
        p_val,
        p_normal_deriv,
    })
}

/// Zeroth-order coefficient `div W - |W|^2 + Q - (p^2 - 2 p trk + 2 nu(p)) / 2`,
/// checked against the regrouped form
/// `R_Sigma / 2 - |chi^0|^2 / 2 - [mu + J(nu) + (n/(n-1) p^2 - 2 p trk + 2 nu(p)) / 2]`,
/// which uses `|chi|^2 = |chi^0|^2 + p^2 / (n-1)` and so needs `theta = p`.
pub fn stability_zeroth_coeff<T: Real>(data: &LevelSetData<T>, n: usize, trk: T) -> Result<T> {
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let p = data.p_val;
    let dp = data.p_normal_deriv;
    let c0 = data.div_w - data.w_norm_sq + data.q - half * (p * p - two * p * trk + two * dp);
    let ratio = T::count(n) / T::count(n - 1);
    let regrouped = data.div_w - data.w_norm_sq + half * data.r_sigma - half * data.chi0_norm_sq
        - (data.mu + data.j_nu + half * (ratio * p * p - two * p * trk + two * dp));
    let scale = T::one().max(data.mu.abs()).max(p * p).max(dp.abs()).max(data.chi_norm_sq);
    let gap = (c0 - regrouped).abs();
    if gap > T::lit(REGROUP_TOL) * scale {
        return Err(Error::Consistency(format!(
            "zeroth coefficient {c0} and its regrouping {regrouped} differ by {gap}; the leaf has theta = {} but p = {p}",
            data.theta
        )));
    }
    Ok(c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerSolver {
    Cg,
    Bicgstab,
}

/// `L = -(1/scale^2) Lap_tau + 2 <W, grad> + V` on the periodic lattice with
/// `lattice_n` sites per axis of the unit flat `dim`-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafOperator<T> {
    pub dim: usize,
    pub lattice_n: usize,
    pub scale: T,
    /// Orthonormal components of `W` (constant on the leaf).
    pub w: Vec<T>,
    /// `V` per site, row-major in the lattice index.
    pub potential: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult<T> {
    pub lambda1: T,
    /// Normalized to `max = 1`, row-major over the lattice.
    pub eigenfunction: Vec<T>,
    pub lattice_n: usize,
    pub dim: usize,
    pub iterations: usize,
    pub residual: T,
    pub shift: T,
    pub solver: InnerSolver,
}

impl<T: Real> EigenResult<T> {
    /// Lattice coordinates (in `[0, 1)`) of site `i`.
    pub fn coordinates(&self, i: usize) -> Vec<T> {
        site_coordinates(i, self.dim, self.lattice_n)
    }
}

fn site_coordinates<T: Real>(mut i: usize, dim: usize, n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); dim];
    for a in (0..dim).rev() {
        out[a] = T::count(i % n) / T::count(n);
        i /= n;
    }
    out
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    pairwise_sum(a.iter().zip(b).map(|(&x, &y)| x * y))
}

fn max_abs<T: Real>(a: &[T]) -> T {
    pairwise_max(a.iter().map(|x| x.abs())).unwrap_or_else(T::zero)
}

impl<T: Real> LeafOperator<T> {
    pub fn constant(dim: usize, lattice_n: usize, scale: T, value: T) -> Result<Self> {
        let sites = Self::site_count(dim, lattice_n)?;
        Ok(Self { dim, lattice_n, scale, w: vec![T::zero(); dim], potential: vec![value; sites] })
    }

    fn site_count(dim: usize, lattice_n: usize) -> Result<usize> {
        if dim == 0 {
            return Err(Error::Dimension { n: dim + 1, reason: "leaves need dimension >= 1" });
        }
        if lattice_n < 8 {
            return Err(Error::Config(format!("lattice needs at least 8 sites per axis, got {lattice_n}")));
        }
        let sites = u32::try_from(dim)
            .ok()
            .and_then(|d| lattice_n.checked_pow(d))
            .filter(|&s| s <= MAX_SITES)
            .ok_or_else(|| Error::Config(format!("lattice {lattice_n}^{dim} exceeds {MAX_SITES} sites")))?;
        Ok(sites)
    }

    pub fn sites(&self) -> usize {
        self.potential.len()
    }

    fn validate(&self) -> Result<()> {
        let sites = Self::site_count(self.dim, self.lattice_n)?;
        if self.potential.len() != sites || self.w.len() != self.dim {
            return Err(Error::Config("potential or W has the wrong length for the lattice".into()));
        }
        if !(self.scale > T::zero()) {
            return Err(Error::NonPositiveWarp { t: f64::NAN, value: self.scale.as_f64() });
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.w.iter().all(|&x| x == T::zero())
    }

    /// `(L + shift) x`.
    pub fn apply(&self, x: &[T], shift: T) -> Vec<T> {
        let n = self.lattice_n;
        let hinv = T::count(n);
        let lap = hinv * hinv / (self.scale * self.scale);
        let grad = hinv / self.scale;
        let strides: Vec<usize> = (0..self.dim).map(|a| n.pow((self.dim - 1 - a) as u32)).collect();
        let site = |i: usize| {
            let mut acc = (self.potential[i] + shift) * x[i];
            for (a, &stride) in strides.iter().enumerate() {
                let coord = (i / stride) % n;
                let up = if coord + 1 == n { i + stride - n * stride } else { i + stride };
                let down = if coord == 0 { i + (n - 1) * stride } else { i - stride };
                acc = acc + lap * (T::lit(2.0) * x[i] - x[up] - x[down]);
                if self.w[a] != T::zero() {
                    acc = acc + self.w[a] * grad * (x[up] - x[down]);
                }
            }
            acc
        };
        if x.len() >= 4096 {
            (0..x.len()).into_par_iter().map(site).collect()
        } else {
            (0..x.len()).map(site).collect()
        }
    }

    fn cg(&self, b: &[T], shift: T, x: &mut [T]) -> Result<()> {
        let tol = T::lit(INNER_TOL) * dot(b, b).sqrt();
        let ax = self.apply(x, shift);
        let mut r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
        let mut p = r.clone();
        let mut rr = dot(&r, &r);
        let limit = 10 * b.len() + 100;
        for _ in 0..limit {
            if rr.sqrt() <= tol {
                return Ok(());
            }
            let ap = self.apply(&p, shift);
            let alpha = rr / dot(&p, &ap);
            for i in 0..x.len() {
                x[i] = x[i] + alpha * p[i];
                r[i] = r[i] - alpha * ap[i];
            }
            let next = dot(&r, &r);
            let beta = next / rr;
            rr = next;
            for i in 0..p.len() {
                p[i] = r[i] + beta * p[i];
            }
        }
        if rr.sqrt() <= tol {
            Ok(())
        } else {
            Err(Error::NonConvergence { iterations: limit, residual: rr.sqrt().as_f64() })
        }
    }

    fn bicgstab(&self, b: &[T], shift: T, x: &mut [T]) -> Result<()> {
        let tol = T::lit(INNER_TOL) * dot(b, b).sqrt();
        let ax = self.apply(x, shift);
        let mut r: Vec<T> = b.iter().zip(&ax).map(|(&bi, &ai)| bi - ai).collect();
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (T::one(), T::one(), T::one());
        let mut v = vec![T::zero(); b.len()];
        let mut p = vec![T::zero(); b.len()];
        let limit = 10 * b.len() + 100;
        for _ in 0..limit {
            let norm = dot(&r, &r).sqrt();
            if norm <= tol {
                return Ok(());
            }
            let rho_next = dot(&r_hat, &r);
            let beta = (rho_next / rho) * (alpha / omega);
            rho = rho_next;
            for i in 0..p.len() {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            v = self.apply(&p, shift);
            alpha = rho / dot(&r_hat, &v);
            let s: Vec<T> = r.iter().zip(&v).map(|(&ri, &vi)| ri - alpha * vi).collect();
            if dot(&s, &s).sqrt() <= tol {
                for i in 0..x.len() {
                    x[i] = x[i] + alpha * p[i];
                }
                return Ok(());
            }
            let t = self.apply(&s, shift);
            omega = dot(&t, &s) / dot(&t, &t);
            for i in 0..x.len() {
                x[i] = x[i] + alpha * p[i] + omega * s[i];
                r[i] = s[i] - omega * t[i];
            }
        }
        let norm = dot(&r, &r).sqrt();
        if norm <= tol {
            Ok(())
        } else {
            Err(Error::NonConvergence { iterations: limit, residual: norm.as_f64() })
        }
    }

    /// Principal eigenvalue by shifted inverse power iteration on
    /// `(L + s)^{-1}`, `s = 1 + max |V|`, starting from the constant vector.
    pub fn principal_eigenvalue(&self) -> Result<EigenResult<T>> {
        self.validate()?;
        let shift = T::one() + max_abs(&self.potential);
        let solver = if self.is_symmetric() { InnerSolver::Cg } else { InnerSolver::Bicgstab };
        let mut x = vec![T::one(); self.sites()];
        let mut residual = T::infinity();
        for iteration in 1..=MAX_POWER_ITERATIONS {
            let mut y = x.clone();
            match solver {
                InnerSolver::Cg => self.cg(&x, shift, &mut y)?,
                InnerSolver::Bicgstab => self.bicgstab(&x, shift, &mut y)?,
            }
            // (L + s) y = x, so <y, x> / <y, y> estimates lambda + s
            let mu = dot(&y, &x) / dot(&y, &y);
            let lambda = mu - shift;
            let norm = max_abs(&y);
            // ||(L - lambda) y|| / ||y|| = ||x - mu y|| / ||y||; avoids amplifying the inner solve error by ||L||
            residual = max_abs(&x.iter().zip(&y).map(|(&a, &b)| a - mu * b).collect::<Vec<_>>()) / norm;
            x = y.into_iter().map(|v| v / norm).collect();
            if residual <= T::lit(EIGEN_TOL) * T::one().max(lambda.abs()) {
                let min = pairwise_min(x.iter().copied()).unwrap_or_else(T::nan);
                if !(min > T::zero()) {
                    return Err(Error::NegativeEigenvector { min: min.as_f64() });
                }
                return Ok(EigenResult {
                    lambda1: lambda,
                    eigenfunction: x,
                    lattice_n: self.lattice_n,
                    dim: self.dim,
                    iterations: iteration,
                    residual,
                    shift,
                    solver,
                });
            }
        }
        Err(Error::NonConvergence { iterations: MAX_POWER_ITERATIONS, residual: residual.as_f64() })
    }
}

/// Principal eigenvalue of `L` on the leaf described by `data`, on an
/// `(n-1)`-dimensional lattice with `lattice_n` sites per axis.
pub fn principal_eigenvalue<T: Real>(data: &LevelSetData<T>, lattice_n: usize) -> Result<EigenResult<T>> {
    let c0 = stability_zeroth_coeff(data, data.n, data.trk)?;
    LeafOperator::constant(data.n - 1, lattice_n, data.scale, c0)?.principal_eigenvalue()
}
