use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Warp function `f` at a point, in logarithmic form:
/// `dlog = f'/f`, `d2log = (log f)''`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpJet<T> {
    pub f: T,
    pub dlog: T,
    pub d2log: T,
}

impl<T: Real> WarpJet<T> {
    pub fn df(&self) -> T {
        self.f * self.dlog
    }

    pub fn d2f(&self) -> T {
        self.f * (self.d2log + self.dlog * self.dlog)
    }
}

/// Warp function of the band metric `dt^2 + f(t)^2 tau`.
#[derive(Clone)]
pub enum Warp<T> {
    /// `f = cos(nt/2)^(2/n)` on a subinterval of `(-pi/n, pi/n)`.
    Cosine,
    /// `f = sinh(nt/2)^(2/n)` for `t > 0`.
    Sinh,
    /// `f = (nt/2)^(2/n)` for `t > 0`.
    Power,
    Custom(CustomWarp<T>),
}

impl<T: Real> Warp<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Warp::Cosine => "cosine",
            Warp::Sinh => "sinh",
            Warp::Power => "power",
            Warp::Custom(_) => "custom",
        }
    }

    /// `f`, `(log f)'`, `(log f)''` at `t`. `interval` bounds the stencils
    /// of finite-difference derivatives for custom warps.
    pub(crate) fn jet(&self, n: usize, t: T, interval: (T, T)) -> Result<WarpJet<T>> {
        let nf = T::count(n);
        let half_n = nf / T::lit(2.0);
        let x = half_n * t;
        Ok(match self {
            Warp::Cosine => {
                let c = x.cos();
                let tan = x.tan();
                WarpJet {
                    f: c.powf(T::lit(2.0) / nf),
                    dlog: -tan,
                    d2log: -half_n / (c * c),
                }
            }
            Warp::Sinh => {
                let s = x.sinh();
                WarpJet {
                    f: s.powf(T::lit(2.0) / nf),
                    dlog: x.cosh() / s,
                    d2log: -half_n / (s * s),
                }
            }
            Warp::Power => WarpJet {
                f: x.powf(T::lit(2.0) / nf),
                dlog: T::lit(2.0) / (nf * t),
                d2log: -T::lit(2.0) / (nf * t * t),
            },
            Warp::Custom(c) => {
                let (f, df, d2f) = c.derivatives(t, interval)?;
                let dlog = df / f;
                WarpJet { f, dlog, d2log: d2f / f - dlog * dlog }
            }
        })
    }

    /// `f(t)` without derivatives.
    pub(crate) fn value(&self, n: usize, t: T) -> T {
        let nf = T::count(n);
        let x = nf / T::lit(2.0) * t;
        match self {
            Warp::Cosine => x.cos().powf(T::lit(2.0) / nf),
            Warp::Sinh => x.sinh().powf(T::lit(2.0) / nf),
            Warp::Power => x.powf(T::lit(2.0) / nf),
            Warp::Custom(c) => (c.f)(t),
        }
    }
}

impl<T: Real> fmt::Debug for Warp<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warp::Custom(c) => write!(f, "Custom({})", c.label),
            other => f.write_str(other.kind()),
        }
    }
}

/// User-supplied warp. Derivatives are either analytic or, when
/// `finite_differences` is set, computed by fourth-order central
/// differences with step `max(1e-5, 1e-5 |t1 - t0|)`; second-order
/// one-sided stencils are used where the central stencil would leave the band.
#[derive(Clone)]
pub struct CustomWarp<T> {
    pub label: String,
    f: ScalarFn<T>,
    df: Option<ScalarFn<T>>,
    d2f: Option<ScalarFn<T>>,
    finite_differences: bool,
}

impl<T: Real> CustomWarp<T> {
    pub fn analytic(
        label: impl Into<String>,
        f: impl Fn(T) -> T + Send + Sync + 'static,
        df: impl Fn(T) -> T + Send + Sync + 'static,
        d2f: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            f: Arc::new(f),
            df: Some(Arc::new(df)),
            d2f: Some(Arc::new(d2f)),
            finite_differences: false,
        }
    }

    /// Only `f` is known; derivatives come from finite differences if
    /// `finite_differences` is true and are unavailable otherwise.
    pub fn values_only(label: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static, finite_differences: bool) -> Self {
        Self { label: label.into(), f: Arc::new(f), df: None, d2f: None, finite_differences }
    }

    /// `f = c`.
    pub fn constant(c: T) -> Self {
        Self::analytic(format!("constant {c}"), move |_| c, |_| T::zero(), |_| T::zero())
    }

    /// `f = base * (1 + amplitude sin(frequency t + phase))` with exact derivatives.
    pub fn modulated(base: Warp<T>, n: usize, amplitude: T, frequency: T, phase: T) -> Self {
        let label = format!("{:?} x (1 + {amplitude} sin({frequency} t + {phase}))", base);
        let whole = (T::neg_infinity(), T::infinity());
        let eval = move |t: T| -> (T, T, T) {
            let b = base.jet(n, t, whole).expect("catalog jets are infallible");
            let arg = frequency * t + phase;
            let g = T::one() + amplitude * arg.sin();
            let dg = amplitude * frequency * arg.cos();
            let d2g = -amplitude * frequency * frequency * arg.sin();
            (b.f * g, b.df() * g + b.f * dg, b.d2f() * g + T::lit(2.0) * b.df() * dg + b.f * d2g)
        };
        let eval = Arc::new(eval);
        let (e0, e1, e2) = (eval.clone(), eval.clone(), eval);
        Self::analytic(label, move |t| e0(t).0, move |t| e1(t).1, move |t| e2(t).2)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.df.is_some() && self.d2f.is_some()
    }

    pub fn uses_finite_differences(&self) -> bool {
        !self.has_analytic_derivatives() && self.finite_differences
    }

    pub fn value(&self, t: T) -> T {
        (self.f)(t)
    }

    fn derivatives(&self, t: T, (t0, t1): (T, T)) -> Result<(T, T, T)> {
        let f = (self.f)(t);
        if let (Some(df), Some(d2f)) = (&self.df, &self.d2f) {
            return Ok((f, df(t), d2f(t)));
        }
        if !self.finite_differences {
            return Err(Error::DerivativeUnavailable);
        }
        let h = T::lit(1e-5).max(T::lit(1e-5) * (t1 - t0).abs());
        let two = T::lit(2.0);
        let g = |s: T| (self.f)(s);
        let (d1, d2) = if t - two * h >= t0 && t + two * h <= t1 {
            let (m2, m1, p1, p2) = (g(t - two * h), g(t - h), g(t + h), g(t + two * h));
            let twelve = T::lit(12.0);
            (
                (m2 - T::lit(8.0) * m1 + T::lit(8.0) * p1 - p2) / (twelve * h),
                (-m2 + T::lit(16.0) * m1 - T::lit(30.0) * f + T::lit(16.0) * p1 - p2) / (twelve * h * h),
            )
        } else {
            // one-sided, pointing into the band
            let s = if t - two * h < t0 { h } else { -h };
            let (f1, f2, f3) = (g(t + s), g(t + two * s), g(t + T::lit(3.0) * s));
            (
                (-T::lit(3.0) * f + T::lit(4.0) * f1 - f2) / (two * s),
                (two * f - T::lit(5.0) * f1 + T::lit(4.0) * f2 - f3) / (h * h),
            )
        };
        Ok((f, d1, d2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_jets_match_direct_derivatives() {
        let whole = (f64::NEG_INFINITY, f64::INFINITY);
        for (warp, t) in [(Warp::Cosine, 0.31), (Warp::Sinh, 0.8), (Warp::Power, 1.3)] {
            let n = 4;
            let jet = warp.jet(n, t, whole).unwrap();
            let h = 1e-5;
            let fd = (warp.value(n, t + h) - warp.value(n, t - h)) / (2.0 * h);
            let fdd = (warp.value(n, t + h) - 2.0 * jet.f + warp.value(n, t - h)) / (h * h);
            assert!((jet.df() - fd).abs() < 1e-8, "{warp:?}");
            assert!((jet.d2f() - fdd).abs() < 1e-4, "{warp:?}");
        }
    }

    #[test]
    fn finite_difference_derivatives_of_custom_warp() {
        let fd = CustomWarp::values_only("exp", |t: f64| (0.3 * t).exp(), true);
        let (f, d1, d2) = fd.derivatives(0.5, (0.0, 1.0)).unwrap();
        assert!((f - 0.15f64.exp()).abs() < 1e-15);
        assert!((d1 - 0.3 * f).abs() < 1e-9);
        assert!((d2 - 0.09 * f).abs() < 1e-5);
        // near the boundary the one-sided stencil kicks in
        let (_, d1, d2) = fd.derivatives(0.0, (0.0, 1.0)).unwrap();
        assert!((d1 - 0.3).abs() < 1e-8);
        assert!((d2 - 0.09).abs() < 1e-3);

        let bare = CustomWarp::values_only("exp", |t: f64| t.exp(), false);
        assert_eq!(bare.derivatives(0.5, (0.0, 1.0)), Err(Error::DerivativeUnavailable));
    }

    #[test]
    fn modulated_warp_derivatives() {
        let m = CustomWarp::<f64>::modulated(Warp::Power, 3, 0.02, 1.5, 0.4);
        let (f, d1, d2) = m.derivatives(1.2, (0.5, 2.0)).unwrap();
        let h = 1e-5;
        let fd1 = (m.value(1.2 + h) - m.value(1.2 - h)) / (2.0 * h);
        let fd2 = (m.value(1.2 + h) - 2.0 * f + m.value(1.2 - h)) / (h * h);
        assert!((d1 - fd1).abs() < 1e-9);
        assert!((d2 - fd2).abs() < 1e-4);
    }
}
