use serde::Serialize;

use crate::error::{Error, Result};
use crate::eta::EtaSolution;
use crate::geometry::WarpedBand;
use crate::grid::GridField1D;
use crate::profile::Profile;
use crate::scalar::Real;

/// Tolerance on `width = t+ - t-` for the rigidity variant.
pub const RIGID_WIDTH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `phi(t0) = t- - eps`, `phi(t1) = t+ + eps`, `Lip(phi) < 1`.
    Strict,
    /// `phi(t0) = t-`, `phi(t1) = t+`, `Lip(phi) = 1`.
    Rigid,
}

/// `phi(t) = clamp(phi_lo + slope (t - t0 - plateau_minus), phi_lo, phi_hi)`
/// and the potential `p = eta o phi`.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialBuild<T> {
    pub variant: Variant,
    pub t_minus: T,
    pub t_plus: T,
    pub eps: T,
    pub interval: (T, T),
    pub phi_lo: T,
    pub phi_hi: T,
    /// Widths of the regions near `t0` and `t1` where `phi` is constant.
    pub plateaus: (T, T),
    pub slope: T,
    pub lip: T,
    #[serde(skip)]
    pub eta: EtaSolution<T>,
}

impl<T: Real> PotentialBuild<T> {
    pub fn phi(&self, t: T) -> T {
        let v = if self.slope == T::one() {
            t + (self.phi_lo - self.interval.0 - self.plateaus.0)
        } else {
            self.phi_lo + self.slope * (t - self.interval.0 - self.plateaus.0)
        };
        v.max(self.phi_lo).min(self.phi_hi)
    }

    /// `phi'(t)`: zero inside the plateaus, `slope` elsewhere (including the junctions).
    pub fn phi_slope(&self, t: T) -> T {
        let s = t - self.interval.0 - self.plateaus.0;
        let v = self.phi_lo + self.slope * s;
        let tol = T::lit(64.0) * T::epsilon() * T::one().max(self.phi_hi.abs()).max(self.phi_lo.abs());
        if v < self.phi_lo - tol || v > self.phi_hi + tol {
            T::zero()
        } else {
            self.slope
        }
    }

    pub fn p(&self, t: T) -> Result<T> {
        self.eta.eval(self.phi(t))
    }

    /// `|grad p| <= |eta' o phi| Lip(phi)`.
    pub fn grad_bound(&self, t: T) -> Result<T> {
        Ok(self.eta.derivative(self.phi(t))?.abs() * self.lip)
    }

    /// `(p, |grad p| bound)` at `t`.
    pub fn jet(&self, t: T) -> Result<(T, T)> {
        let (e, de) = self.eta.jet(self.phi(t))?;
        Ok((e, de.abs() * self.lip))
    }

    /// `p` with `p' = eta'(phi) phi'` as a profile.
    pub fn to_profile(&self) -> Profile<T> {
        let b = self.clone();
        Profile::from_jet("eta o phi", move |t| match b.eta.jet(b.phi(t)) {
            Ok((e, de)) => (e, de * b.phi_slope(t)),
            Err(_) => (T::nan(), T::nan()),
        })
    }

    pub fn sample_phi(&self, points: usize) -> Result<GridField1D<T>> {
        GridField1D::sample(self.interval.0, self.interval.1, points, |t| self.phi(t))
    }

    pub fn sample_p(&self, points: usize) -> Result<GridField1D<T>> {
        GridField1D::try_sample(self.interval.0, self.interval.1, points, |t| self.p(t))
    }

    pub fn sample_grad_bound(&self, points: usize) -> Result<GridField1D<T>> {
        GridField1D::try_sample(self.interval.0, self.interval.1, points, |t| self.grad_bound(t))
    }
}

fn require_in_domain<T: Real>(eta: &EtaSolution<T>, lo: T, hi: T) -> Result<()> {
    for t in [lo, hi] {
        if !eta.contains(t) {
            return Err(Error::Domain { t: t.as_f64(), lo: eta.domain.0.as_f64(), hi: eta.domain.1.as_f64() });
        }
    }
    Ok(())
}

/// Builds `p = eta o phi` on a warped band.
///
/// The strict variant exists only when `width > t+ - t- + 2 eps` (after
/// removing the plateaus); otherwise a geometry error is returned. The rigid
/// variant requires `width = t+ - t-` and admits no plateaus.
pub fn build_potential<T: Real>(
    band: &WarpedBand<T>,
    eta: &EtaSolution<T>,
    t_minus: T,
    t_plus: T,
    eps: T,
    plateaus: (T, T),
    variant: Variant,
) -> Result<PotentialBuild<T>> {
    if !(t_minus < t_plus) {
        return Err(Error::Config(format!("need t- < t+, got {t_minus} >= {t_plus}")));
    }
    if !(eps >= T::zero()) || !(plateaus.0 >= T::zero()) || !(plateaus.1 >= T::zero()) {
        return Err(Error::Config("eps and plateau widths must be non-negative".into()));
    }
    let width = band.width();
    match variant {
        Variant::Strict => {
            let free = width - plateaus.0 - plateaus.1;
            let span = t_plus - t_minus + T::lit(2.0) * eps;
            if !(free > span) {
                return Err(Error::Geometry(format!(
                    "strict potential needs width minus plateaus ({free}) > t+ - t- + 2 eps ({span})"
                )));
            }
            require_in_domain(eta, t_minus - eps, t_plus + eps)?;
            let slope = span / free;
            Ok(PotentialBuild {
                variant,
                t_minus,
                t_plus,
                eps,
                interval: band.interval(),
                phi_lo: t_minus - eps,
                phi_hi: t_plus + eps,
                plateaus,
                slope,
                lip: slope,
                eta: *eta,
            })
        }
        Variant::Rigid => {
            if eps != T::zero() || plateaus != (T::zero(), T::zero()) {
                return Err(Error::Config("the rigid variant takes eps = 0 and no plateaus".into()));
            }
            let gap = width - (t_plus - t_minus);
            if gap.abs() > T::lit(RIGID_WIDTH_TOL) {
                return Err(Error::Geometry(format!("rigid potential needs width = t+ - t-, off by {gap}")));
            }
            rigid_width_function(band, eta, t_minus, t_plus)
        }
    }
}

/// `phi = min(t- + (t - t0), t+)` for any width, the comparison map of the
/// width theorem. `Lip(phi) = 1`; a plateau at `t+` appears when the band
/// is wider than `t+ - t-`.
pub fn rigid_width_function<T: Real>(
    band: &WarpedBand<T>,
    eta: &EtaSolution<T>,
    t_minus: T,
    t_plus: T,
) -> Result<PotentialBuild<T>> {
    if !(t_minus < t_plus) {
        return Err(Error::Config(format!("need t- < t+, got {t_minus} >= {t_plus}")));
    }
    let width = band.width();
    let reach = (t_minus + width).min(t_plus);
    require_in_domain(eta, t_minus, reach)?;
    Ok(PotentialBuild {
        variant: Variant::Rigid,
        t_minus,
        t_plus,
        eps: T::zero(),
        interval: band.interval(),
        phi_lo: t_minus,
        phi_hi: t_plus,
        plateaus: (T::zero(), (width - (t_plus - t_minus)).max(T::zero())),
        slope: T::one(),
        lip: T::one(),
        eta: *eta,
    })
}
