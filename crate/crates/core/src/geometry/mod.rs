//! Intrinsic and extrinsic geometry of warped-product bands and the
//! constraint quantities `mu`, `J` of the initial data set `(M, g, k)`.
//!
//! Orientation: `d/dt` points from the lower boundary leaf towards the upper
//! one, and every mean curvature and null expansion is taken with respect to
//! it, at both boundaries.

mod band;
mod extrinsic;
mod oracle;
mod table;
mod warp;

use serde::Serialize;

pub use band::WarpedBand;
pub use extrinsic::{ExtrinsicJet, ExtrinsicSpec};
pub use oracle::{curvature_oracle, CurvatureEstimate, ORACLE_CONSISTENCY_TOL};
pub use table::{load_warp_table, load_warp_table_file};
pub use warp::{CustomWarp, Warp, WarpJet};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::scalar::Real;

/// Which boundary hypothesis a null expansion value feeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Energy and current density at a point of the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstraintSample<T> {
    pub t: T,
    pub mu: T,
    /// `J(d/dt)`, the only non-vanishing component.
    pub j_t: T,
    pub abs_j: T,
}

/// Mean curvature `H = (n-1) f'/f` of the leaf at `t`.
pub fn mean_curvature<T: Real>(band: &WarpedBand<T>, t: T) -> Result<T> {
    Ok(T::count(band.n() - 1) * band.jet(t)?.dlog)
}

/// `dH/dt = (n-1) (log f)''`.
pub fn mean_curvature_dt<T: Real>(band: &WarpedBand<T>, t: T) -> Result<T> {
    Ok(T::count(band.n() - 1) * band.jet(t)?.d2log)
}

/// Scalar curvature of `dt^2 + f^2 tau`:
/// `R = -2(n-1) f''/f - (n-1)(n-2) (f'/f)^2`.
pub fn scalar_curvature<T: Real>(band: &WarpedBand<T>, t: T) -> Result<T> {
    let j = band.jet(t)?;
    let m = T::count(band.n() - 1);
    let n = T::count(band.n());
    // f''/f = (log f)'' + ((log f)')^2
    Ok(-T::lit(2.0) * m * j.d2log - m * n * j.dlog * j.dlog)
}

/// `mu = (R - |k|^2 + (tr k)^2) / 2` and `J_t = (div k - d tr k)(d/dt)`.
///
/// For `k = a dt^2 + b f^2 tau` the divergence gives
/// `J_t = H (a - b) - (n-1) b'`.
pub fn constraint_sample<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, t: T) -> Result<ConstraintSample<T>> {
    let t = band.check(t)?;
    let n = band.n();
    let r = scalar_curvature(band, t)?;
    let tr = k.trace(n, t)?;
    let two_mu = r - k.norm_sq(n, t)? + tr * tr;
    let j_t = match k {
        ExtrinsicSpec::UmbilicCmc { .. } => T::zero(),
        _ => {
            let jet = k.jet(n, t)?;
            let h = mean_curvature(band, t)?;
            h * (jet.normal - jet.tangential) - T::count(n - 1) * jet.tangential_dt
        }
    };
    Ok(ConstraintSample { t, mu: two_mu / T::lit(2.0), j_t, abs_j: j_t.abs() })
}

/// Null expansion `theta = H + tr_{Sigma_t} k` of the leaf at `t`, with
/// respect to `d/dt`. `side` only labels the hypothesis the value feeds:
/// both boundary normals point along `d/dt`.
pub fn null_expansion<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, t: T, side: Side) -> Result<T> {
    let _ = side;
    let t = band.check(t)?;
    Ok(mean_curvature(band, t)? + k.leaf_trace(band.n(), t)?)
}

/// `d theta / dt` along the band.
pub fn null_expansion_dt<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, t: T) -> Result<T> {
    let t = band.check(t)?;
    let n = band.n();
    Ok(mean_curvature_dt(band, t)? + T::count(n - 1) * k.jet(n, t)?.tangential_dt)
}

/// `theta(t)` of the band as a profile, e.g. to prescribe `p = theta`.
pub fn null_expansion_profile<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>) -> Profile<T> {
    let (b, kk) = (band.clone(), k.clone());
    Profile::from_jet("null expansion", move |t| {
        let v = null_expansion(&b, &kk, t, Side::Plus).unwrap_or(T::nan());
        let d = null_expansion_dt(&b, &kk, t).unwrap_or(T::nan());
        (v, d)
    })
}

/// `k~ = k - p g / (n-1)`: a leaf with null expansion `p` for `k` is a
/// MOTS for `k~`, since the leaf trace of `p g / (n-1)` is `p`.
pub fn transfer_to_mots<T: Real>(band: &WarpedBand<T>, k: &ExtrinsicSpec<T>, p: &Profile<T>) -> Result<ExtrinsicSpec<T>> {
    if let Some((lo, hi)) = p.support() {
        let s = band.slack();
        if lo > band.t0() + s || hi < band.t1() - s {
            return Err(Error::Config(format!(
                "potential defined on [{lo}, {hi}] does not cover the band [{}, {}]",
                band.t0(),
                band.t1()
            )));
        }
    }
    if p.is_identically_zero() {
        return Ok(k.clone());
    }
    let n = band.n();
    let shift = -T::one() / T::count(n - 1);
    let delta = p.clone().affine(shift, T::zero());
    Ok(match k {
        ExtrinsicSpec::UmbilicCmc { lambda } => ExtrinsicSpec::Conformal {
            psi: delta.affine(T::one(), *lambda / T::count(n)),
        },
        ExtrinsicSpec::Conformal { psi } => ExtrinsicSpec::Conformal { psi: psi.clone().plus(delta) },
        ExtrinsicSpec::Diagonal { a, b } => ExtrinsicSpec::Diagonal {
            a: a.clone().plus(delta.clone()),
            b: b.clone().plus(delta),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn mean_curvature_examples() {
        let b = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
        assert_eq!(mean_curvature(&b, 0.0).unwrap(), 0.0);
        assert!((mean_curvature(&b, PI / 6.0).unwrap() + 2.0).abs() < 1e-14);
        let s = WarpedBand::<f64>::sinh(3, 0.1, 2.0).unwrap();
        assert!((mean_curvature(&s, 2.0 / 3.0).unwrap() - 2.626_070_570_998_662).abs() < 1e-12);
        assert!(mean_curvature(&b, 1.0).is_err());
    }

    #[test]
    fn catalog_scalar_curvatures() {
        let c = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
        let s = WarpedBand::<f64>::sinh(3, 0.1, 2.0).unwrap();
        let p = WarpedBand::<f64>::power(3, 0.1, 2.0).unwrap();
        for &t in &[0.2, 0.5, 0.85] {
            assert!((scalar_curvature(&c, t).unwrap() - 6.0).abs() < 1e-12);
            assert!((scalar_curvature(&s, t).unwrap() + 6.0).abs() < 1e-12);
            assert!(scalar_curvature(&p, t).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn constraint_examples() {
        let c = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
        let s = constraint_sample(&c, &ExtrinsicSpec::time_symmetric(), 0.2).unwrap();
        assert!((s.mu - 3.0).abs() < 1e-12);
        assert_eq!(s.j_t, 0.0);

        let k = ExtrinsicSpec::conformal(Profile::cosine(1.0, 1.0));
        let s = constraint_sample(&c, &k, 0.5).unwrap();
        assert!((s.j_t - 2.0 * 0.5f64.sin()).abs() < 1e-15);
        assert!((s.j_t - 0.958_851_077_208_406).abs() < 1e-12);

        let lambda = 1.3;
        let s = constraint_sample(&c, &ExtrinsicSpec::umbilic(lambda), 0.4).unwrap();
        assert!((s.mu - 0.5 * (6.0 - lambda * lambda / 3.0 + lambda * lambda)).abs() < 1e-12);
    }

    #[test]
    fn null_expansion_examples() {
        let c = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
        let k0 = ExtrinsicSpec::time_symmetric();
        assert!((null_expansion(&c, &k0, PI / 6.0, Side::Plus).unwrap() + 2.0).abs() < 1e-14);
        let flat = WarpedBand::<f64>::flat(4, 0.0, 1.0).unwrap();
        let th = null_expansion(&flat, &ExtrinsicSpec::umbilic(2.0), 0.3, Side::Minus).unwrap();
        assert!((th - 1.5).abs() < 1e-15);
    }

    #[test]
    fn transfer_examples() {
        let c = WarpedBand::<f64>::cosine(3, -0.9, 0.9).unwrap();
        let k0 = ExtrinsicSpec::time_symmetric();
        let p = null_expansion_profile(&c, &k0);
        let kt = transfer_to_mots(&c, &k0, &p).unwrap();
        for &t in &[-0.8, 0.0, 0.33, 0.9] {
            assert!(null_expansion(&c, &kt, t, Side::Plus).unwrap().abs() < 1e-12);
        }
        let same = transfer_to_mots(&c, &k0, &Profile::zero()).unwrap();
        assert!(matches!(same, ExtrinsicSpec::UmbilicCmc { lambda } if lambda == 0.0));

        let flat = WarpedBand::<f64>::flat(3, 0.0, 1.0).unwrap();
        let lambda = 0.7;
        let k = ExtrinsicSpec::umbilic(lambda);
        let kt = transfer_to_mots(&flat, &k, &Profile::Constant(2.0 * lambda / 3.0)).unwrap();
        assert!(null_expansion(&flat, &kt, 0.5, Side::Plus).unwrap().abs() < 1e-15);
    }

    #[test]
    fn transfer_rejects_short_potential() {
        let c = WarpedBand::<f64>::cosine(3, -0.5, 0.5).unwrap();
        let g = crate::grid::GridField1D::<f64>::sample(-0.4, 0.5, 10, |t| t).unwrap();
        assert!(transfer_to_mots(&c, &ExtrinsicSpec::time_symmetric(), &Profile::Sampled(g)).is_err());
    }
}
