//! Scalar curvature from metric samples alone, through discrete Christoffel
//! symbols. Independent of the closed warped-product formula.

use crate::error::{Error, Result};
use crate::geometry::WarpedBand;
use crate::scalar::Real;

/// Oracle estimate at step `h`, together with the `h/2` rerun.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureEstimate<T> {
    pub value: T,
    pub half_step_value: T,
    pub disagreement: T,
}

/// Relative `h` vs `h/2` disagreement above which the step is rejected.
pub const ORACLE_CONSISTENCY_TOL: f64 = 1e-5;

/// Scalar curvature of `dt^2 + f^2 tau` at `t` from samples `f(t + j h)`,
/// `|j| <= 2`, by second-order central differences. Also reruns with `h/2`
/// and rejects the step if the two disagree beyond [`ORACLE_CONSISTENCY_TOL`].
pub fn curvature_oracle<T: Real>(band: &WarpedBand<T>, t: T, h: T) -> Result<CurvatureEstimate<T>> {
    if !(h > T::zero()) {
        return Err(Error::Config(format!("oracle step must be positive, got {h}")));
    }
    let two = T::lit(2.0);
    band.check(t - two * h)?;
    band.check(t + two * h)?;
    let n = band.n();
    let metric = |s: T| {
        let f = band.warp_value_unchecked(s);
        let mut g = vec![f * f; n];
        g[0] = T::one();
        g
    };
    let value = diagonal_metric_scalar_curvature(n, t, h, &metric);
    let half_step_value = diagonal_metric_scalar_curvature(n, t, h / two, &metric);
    let disagreement = (value - half_step_value).abs();
    if disagreement > T::lit(ORACLE_CONSISTENCY_TOL) * T::one().max(value.abs()) {
        return Err(Error::StepTooLarge { t: t.as_f64(), disagreement: disagreement.as_f64() });
    }
    Ok(CurvatureEstimate { value, half_step_value, disagreement })
}

/// Christoffel symbols `gamma[a][b][c]` of a diagonal metric depending on
/// coordinate 0 only, with `d/dx^0` taken by central differences.
fn christoffel<T: Real>(n: usize, t: T, h: T, metric: &impl Fn(T) -> Vec<T>) -> Vec<Vec<Vec<T>>> {
    let g = metric(t);
    let gp = metric(t + h);
    let gm = metric(t - h);
    let dg: Vec<T> = (0..n).map(|i| (gp[i] - gm[i]) / (T::lit(2.0) * h)).collect();
    let half = T::lit(0.5);
    let mut gamma = vec![vec![vec![T::zero(); n]; n]; n];
    for a in 0..n {
        let inv = T::one() / g[a];
        for b in 0..n {
            for c in 0..n {
                // 1/2 g^{aa} (d_b g_{ac} + d_c g_{ab} - d_a g_{bc}); only d_0 survives
                let mut s = T::zero();
                if b == 0 && a == c {
                    s = s + dg[a];
                }
                if c == 0 && a == b {
                    s = s + dg[a];
                }
                if a == 0 && b == c {
                    s = s - dg[b];
                }
                gamma[a][b][c] = half * inv * s;
            }
        }
    }
    gamma
}

fn diagonal_metric_scalar_curvature<T: Real>(n: usize, t: T, h: T, metric: &impl Fn(T) -> Vec<T>) -> T {
    let g0 = christoffel(n, t, h, metric);
    let gp = christoffel(n, t + h, h, metric);
    let gm = christoffel(n, t - h, h, metric);
    let two_h = T::lit(2.0) * h;
    let d0 = |a: usize, b: usize, c: usize| (gp[a][b][c] - gm[a][b][c]) / two_h;
    let g = metric(t);
    let mut scalar = T::zero();
    for b in 0..n {
        // R_bb = d_a G^a_bb - d_b G^a_ab + G^a_ad G^d_bb - G^a_bd G^d_ab
        let mut ric = d0(0, b, b);
        if b == 0 {
            for a in 0..n {
                ric = ric - d0(a, a, 0);
            }
        }
        for a in 0..n {
            for d in 0..n {
                ric = ric + g0[a][a][d] * g0[d][b][b] - g0[a][b][d] * g0[d][a][b];
            }
        }
        scalar = scalar + ric / g[b];
    }
    scalar
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_patch() {
        // dt^2 + sin(t)^2 dphi^2 has R = 2
        let metric = |s: f64| vec![1.0, s.sin().powi(2)];
        let r = diagonal_metric_scalar_curvature(2, 0.9, 1e-4, &metric);
        assert!((r - 2.0).abs() < 1e-6, "{r}");
    }

    #[test]
    fn rejects_stencil_outside_band() {
        let band = WarpedBand::cosine(3, -0.7, 0.7).unwrap();
        assert!(curvature_oracle(&band, 0.69995, 1e-4).is_err());
        assert!(curvature_oracle(&band, 0.0, -1.0).is_err());
    }

    #[test]
    fn coarse_step_is_reported() {
        let band = WarpedBand::cosine(3, -1.0, 1.0).unwrap();
        match curvature_oracle(&band, 0.6, 0.09) {
            Err(Error::StepTooLarge { .. }) => {}
            other => panic!("expected StepTooLarge, got {other:?}"),
        }
    }
}
