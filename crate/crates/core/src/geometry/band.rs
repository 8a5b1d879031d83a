use crate::error::{Error, Result};
use crate::geometry::warp::{Warp, WarpJet};
use crate::scalar::Real;

/// Band `T^{n-1} x [t0, t1]` with metric `dt^2 + f(t)^2 tau`, `tau` the unit flat torus.
#[derive(Clone)]
pub struct WarpedBand<T> {
    n: usize,
    t0: T,
    t1: T,
    warp: Warp<T>,
}

impl<T: Real> std::fmt::Debug for WarpedBand<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WarpedBand(n = {}, [{}, {}], {:?})", self.n, self.t0, self.t1, self.warp)
    }
}

const POSITIVITY_SAMPLES: usize = 2049;

impl<T: Real> WarpedBand<T> {
    pub fn new(n: usize, t0: T, t1: T, warp: Warp<T>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { n, reason: "bands need n >= 2" });
        }
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(Error::InvalidBand(format!("interval [{t0}, {t1}] is empty or not finite")));
        }
        let limit = T::PI() / T::count(n);
        match &warp {
            Warp::Cosine if !(t0 > -limit && t1 < limit) => {
                return Err(Error::InvalidBand(format!(
                    "cosine band needs [t0, t1] inside (-pi/n, pi/n) = ({}, {}), got [{t0}, {t1}]",
                    -limit, limit
                )))
            }
            Warp::Sinh | Warp::Power if !(t0 > T::zero()) => {
                return Err(Error::InvalidBand(format!("{} band needs t0 > 0, got {t0}", warp.kind())))
            }
            Warp::Custom(c) => {
                let step = (t1 - t0) / T::count(POSITIVITY_SAMPLES - 1);
                for i in 0..POSITIVITY_SAMPLES {
                    let t = if i == POSITIVITY_SAMPLES - 1 { t1 } else { t0 + T::count(i) * step };
                    let v = c.value(t);
                    if !(v > T::zero()) || !v.is_finite() {
                        return Err(Error::NonPositiveWarp { t: t.as_f64(), value: v.as_f64() });
                    }
                }
            }
            _ => {}
        }
        Ok(Self { n, t0, t1, warp })
    }

    pub fn cosine(n: usize, t0: T, t1: T) -> Result<Self> {
        Self::new(n, t0, t1, Warp::Cosine)
    }

    pub fn sinh(n: usize, t0: T, t1: T) -> Result<Self> {
        Self::new(n, t0, t1, Warp::Sinh)
    }

    pub fn power(n: usize, t0: T, t1: T) -> Result<Self> {
        Self::new(n, t0, t1, Warp::Power)
    }

    /// Product band, `f = 1`.
    pub fn flat(n: usize, t0: T, t1: T) -> Result<Self> {
        Self::new(n, t0, t1, Warp::Custom(crate::geometry::CustomWarp::constant(T::one())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn t1(&self) -> T {
        self.t1
    }

    pub fn interval(&self) -> (T, T) {
        (self.t0, self.t1)
    }

    /// Distance between the boundary leaves; `t` is unit speed.
    pub fn width(&self) -> T {
        self.t1 - self.t0
    }

    pub fn warp(&self) -> &Warp<T> {
        &self.warp
    }

    pub(crate) fn slack(&self) -> T {
        T::epsilon() * T::lit(64.0) * T::one().max(self.t0.abs()).max(self.t1.abs())
    }

    /// Clamps `t` into the band, rejecting points further out than rounding slack.
    pub fn check(&self, t: T) -> Result<T> {
        let s = self.slack();
        if !(t >= self.t0 - s && t <= self.t1 + s) {
            return Err(Error::Domain { t: t.as_f64(), lo: self.t0.as_f64(), hi: self.t1.as_f64() });
        }
        Ok(t.max(self.t0).min(self.t1))
    }

    pub fn contains(&self, t: T) -> bool {
        self.check(t).is_ok()
    }

    pub fn f(&self, t: T) -> Result<T> {
        let t = self.check(t)?;
        Ok(self.warp.value(self.n, t))
    }

    /// Warp value with logarithmic derivatives.
    pub fn jet(&self, t: T) -> Result<WarpJet<T>> {
        let t = self.check(t)?;
        self.warp.jet(self.n, t, (self.t0, self.t1))
    }

    /// Raw `f` samples used by the curvature oracle; no derivatives involved.
    pub(crate) fn warp_value_unchecked(&self, t: T) -> T {
        self.warp.value(self.n, t)
    }
}
