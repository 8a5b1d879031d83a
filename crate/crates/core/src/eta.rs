//! The comparison Riccati equation
//!
//! ```text
//! sigma + n/(n-1) eta^2 - 2 lambda eta + 2 eta' = 0,   eta' < 0
//! ```
//!
//! in closed form (three cases by the sign of `sigma - (n-1) lambda^2 / n`)
//! and by fixed-step RK4.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{nodes, GridField1D};
use crate::scalar::Real;

/// `|eta|` beyond which the numerical solution is declared to have escaped.
pub const ESCAPE_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaCase {
    /// `sigma = (n-1) lambda^2 / n`: `eta = x0 + 2(n-1) / (n (t - c))`.
    Rational,
    /// `sigma > (n-1) lambda^2 / n`: `eta = x0 - s tan(alpha (t - c))`.
    Tan,
    /// `sigma < (n-1) lambda^2 / n`: `eta = x0 + a coth(alpha (t - c))`.
    Coth,
}

/// Side of the singularity `t = c` for the Rational and Coth cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `t > c`
    #[default]
    Above,
    /// `t < c`
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaParams<T> {
    pub sigma: T,
    pub lambda: T,
    pub n: usize,
    pub c: T,
    /// `sigma - (n-1) lambda^2 / n`.
    pub discriminant: T,
}

impl<T: Real> EtaParams<T> {
    pub fn new(sigma: T, lambda: T, n: usize, c: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { n, reason: "the Riccati comparison needs n >= 2" });
        }
        if !(sigma.is_finite() && lambda.is_finite() && c.is_finite()) {
            return Err(Error::Config("sigma, lambda and c must be finite".into()));
        }
        let discriminant = sigma - ratio::<T>(n) * lambda * lambda;
        Ok(Self { sigma, lambda, n, c, discriminant })
    }

    /// `(n-1) lambda / n`, the double root / centre of the quadratic.
    pub fn center(&self) -> T {
        ratio::<T>(self.n) * self.lambda
    }

    /// Right-hand side of `eta' = -(sigma + n/(n-1) eta^2 - 2 lambda eta) / 2`.
    pub fn rhs(&self, eta: T) -> T {
        -T::lit(0.5) * self.quadratic(eta)
    }

    /// `p(x) = n/(n-1) x^2 - 2 lambda x + sigma`.
    pub fn quadratic(&self, x: T) -> T {
        x * x / ratio::<T>(self.n) - T::lit(2.0) * self.lambda * x + self.sigma
    }

    /// `sigma + n/(n-1) eta^2 - 2 eta lambda + 2 eta'`.
    pub fn residual(&self, eta: T, deta: T) -> T {
        self.quadratic(eta) + T::lit(2.0) * deta
    }

    pub fn eps_classify(&self) -> T {
        T::lit(1e-12) * T::one().max(self.sigma.abs()).max(self.lambda * self.lambda)
    }
}

fn ratio<T: Real>(n: usize) -> T {
    T::count(n - 1) / T::count(n)
}

pub fn classify<T: Real>(params: &EtaParams<T>) -> EtaCase {
    let d = params.discriminant;
    let eps = params.eps_classify();
    if d.abs() <= eps {
        EtaCase::Rational
    } else if d > eps {
        EtaCase::Tan
    } else {
        EtaCase::Coth
    }
}

/// Endpoints `r-`, `r+` of the Tan-case domain for `c = 0`:
/// `r+- = +-(n-1) pi / n * ((n-1)/n (sigma - (n-1) lambda^2 / n))^(-1/2)`.
/// In the other cases the maximal monotone domain of the default branch is
/// reported (`(0, inf)` for `c = 0`) with `bounded = false`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainBounds<T> {
    pub r_minus: T,
    pub r_plus: T,
    pub bounded: bool,
}

pub fn domain_bounds<T: Real>(params: &EtaParams<T>) -> DomainBounds<T> {
    match classify(params) {
        EtaCase::Tan => {
            let n = params.n;
            let r = ratio::<T>(n) * T::PI() / (ratio::<T>(n) * params.discriminant).sqrt();
            DomainBounds { r_minus: -r, r_plus: r, bounded: true }
        }
        _ => DomainBounds { r_minus: T::zero(), r_plus: T::infinity(), bounded: false },
    }
}

/// Closed-form solution with its maximal domain, an open interval on which
/// `eta' < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaSolution<T> {
    pub case: EtaCase,
    pub params: EtaParams<T>,
    pub domain: (T, T),
    /// `None` for the Tan case.
    pub branch: Option<Branch>,
    /// `s` for Tan, `a` for Coth, unused (zero) for Rational.
    amplitude: T,
    /// Argument scale `n / (2(n-1)) * amplitude`.
    rate: T,
}

/// Closed form on the default branch `t > c`.
pub fn eta_closed<T: Real>(params: &EtaParams<T>) -> EtaSolution<T> {
    eta_closed_on(params, Branch::Above)
}

pub fn eta_closed_on<T: Real>(params: &EtaParams<T>, branch: Branch) -> EtaSolution<T> {
    let n = params.n;
    let half_inv = T::count(n) / (T::lit(2.0) * T::count(n - 1));
    let c = params.c;
    let side = |b: Branch| match b {
        Branch::Above => (c, T::infinity()),
        Branch::Below => (T::neg_infinity(), c),
    };
    match classify(params) {
        EtaCase::Tan => {
            let s = (ratio::<T>(n) * params.discriminant).sqrt();
            let rate = half_inv * s;
            let half_width = T::FRAC_PI_2() / rate;
            EtaSolution {
                case: EtaCase::Tan,
                params: *params,
                domain: (c - half_width, c + half_width),
                branch: None,
                amplitude: s,
                rate,
            }
        }
        EtaCase::Coth => {
            let a = (-ratio::<T>(n) * params.discriminant).sqrt();
            EtaSolution {
                case: EtaCase::Coth,
                params: *params,
                domain: side(branch),
                branch: Some(branch),
                amplitude: a,
                rate: half_inv * a,
            }
        }
        EtaCase::Rational => EtaSolution {
            case: EtaCase::Rational,
            params: *params,
            domain: side(branch),
            branch: Some(branch),
            amplitude: T::zero(),
            rate: T::zero(),
        },
    }
}

impl<T: Real> EtaSolution<T> {
    /// `a` of the Coth case, `sqrt((n-1)/n ((n-1)/n lambda^2 - sigma))`.
    pub fn coth_parameter(&self) -> Option<T> {
        (self.case == EtaCase::Coth).then_some(self.amplitude)
    }

    /// Roots `x+-` of the quadratic in the Coth case.
    pub fn roots(&self) -> Option<(T, T)> {
        self.coth_parameter()
            .map(|a| (self.params.center() - a, self.params.center() + a))
    }

    pub fn contains(&self, t: T) -> bool {
        t > self.domain.0 && t < self.domain.1
    }

    fn check(&self, t: T) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::Domain { t: t.as_f64(), lo: self.domain.0.as_f64(), hi: self.domain.1.as_f64() })
        }
    }

    /// `(eta(t), eta'(t))`.
    pub fn jet(&self, t: T) -> Result<(T, T)> {
        self.check(t)?;
        let x0 = self.params.center();
        let z = t - self.params.c;
        Ok(match self.case {
            EtaCase::Tan => {
                let arg = self.rate * z;
                let sec = T::one() / arg.cos();
                (x0 - self.amplitude * arg.tan(), -self.amplitude * self.rate * sec * sec)
            }
            EtaCase::Coth => {
                let arg = self.rate * z;
                let sh = arg.sinh();
                (x0 + self.amplitude * arg.cosh() / sh, -self.amplitude * self.rate / (sh * sh))
            }
            EtaCase::Rational => {
                let k = T::lit(2.0) * T::count(self.params.n - 1) / T::count(self.params.n);
                (x0 + k / z, -k / (z * z))
            }
        })
    }

    pub fn eval(&self, t: T) -> Result<T> {
        Ok(self.jet(t)?.0)
    }

    pub fn derivative(&self, t: T) -> Result<T> {
        Ok(self.jet(t)?.1)
    }

    /// The `t` in the domain with `eta(t) = y`, if the value is attained.
    pub fn inverse(&self, y: T) -> Result<T> {
        let x0 = self.params.center();
        let c = self.params.c;
        let none = || Error::Domain { t: y.as_f64(), lo: self.range().0.as_f64(), hi: self.range().1.as_f64() };
        let t = match self.case {
            EtaCase::Tan => c + ((x0 - y) / self.amplitude).atan() / self.rate,
            EtaCase::Coth => {
                let q = self.amplitude / (y - x0);
                if !(q.abs() < T::one()) {
                    return Err(none());
                }
                c + q.atanh() / self.rate
            }
            EtaCase::Rational => {
                let k = T::lit(2.0) * T::count(self.params.n - 1) / T::count(self.params.n);
                c + k / (y - x0)
            }
        };
        if self.contains(t) {
            Ok(t)
        } else {
            Err(none())
        }
    }

    /// Open range of values taken on the domain.
    pub fn range(&self) -> (T, T) {
        let x0 = self.params.center();
        match (self.case, self.branch) {
            (EtaCase::Tan, _) => (T::neg_infinity(), T::infinity()),
            (EtaCase::Coth, Some(Branch::Below)) => (T::neg_infinity(), x0 - self.amplitude),
            (EtaCase::Coth, _) => (x0 + self.amplitude, T::infinity()),
            (EtaCase::Rational, Some(Branch::Below)) => (T::neg_infinity(), x0),
            (EtaCase::Rational, _) => (x0, T::infinity()),
        }
    }
}

/// RK4 solution of the Riccati equation sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEta<T> {
    pub field: GridField1D<T>,
    /// First `t` below `t_init` where the escape guard fired.
    pub escape_below: Option<T>,
    /// First `t` above `t_init` where the escape guard fired.
    pub escape_above: Option<T>,
}

impl<T: Real> NumericEta<T> {
    pub fn blew_up(&self) -> bool {
        self.escape_below.is_some() || self.escape_above.is_some()
    }

    /// Turns a recorded escape into [`Error::BlowUp`].
    pub fn require_complete(self) -> Result<Self> {
        match self.escape_above.or(self.escape_below) {
            Some(t) => Err(Error::BlowUp { t: t.as_f64() }),
            None => Ok(self),
        }
    }
}

/// Classical RK4 with fixed `step`, integrated in both directions from
/// `(t_init, eta_init)` across `range`. Integration towards a side stops at
/// the first step where `|eta|` exceeds [`ESCAPE_THRESHOLD`] (or becomes
/// non-finite); the escape time is recorded and the grid ends at the last
/// valid sample. `params.c` is ignored.
pub fn eta_solve_numeric<T: Real>(
    params: &EtaParams<T>,
    t_init: T,
    eta_init: T,
    range: (T, T),
    step: T,
) -> Result<NumericEta<T>> {
    let (lo, hi) = range;
    let length = hi - lo;
    if !(length > T::zero()) {
        return Err(Error::Config(format!("empty range [{lo}, {hi}]")));
    }
    if !(step > T::zero()) || step >= length / T::lit(16.0) {
        return Err(Error::Step { step: step.as_f64(), range: length.as_f64() });
    }
    if !(t_init >= lo && t_init <= hi) {
        return Err(Error::Domain { t: t_init.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
    }
    let fuzz = T::lit(1e-9);
    let steps_up = ((hi - t_init) / step + fuzz).floor().to_usize().unwrap_or(0);
    let steps_down = ((t_init - lo) / step + fuzz).floor().to_usize().unwrap_or(0);
    let (up, escape_above) = integrate(params, t_init, eta_init, step, steps_up);
    let (down, escape_below) = integrate(params, t_init, eta_init, -step, steps_down);
    let start = t_init - T::count(down.len() - 1) * step;
    let mut values: Vec<T> = down.into_iter().rev().collect();
    values.extend(up.into_iter().skip(1));
    Ok(NumericEta { field: GridField1D::new(start, step, values)?, escape_below, escape_above })
}

fn integrate<T: Real>(params: &EtaParams<T>, t0: T, y0: T, h: T, steps: usize) -> (Vec<T>, Option<T>) {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0);
    let mut y = y0;
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let limit = T::lit(ESCAPE_THRESHOLD);
    for i in 0..steps {
        // autonomous right-hand side
        let k1 = params.rhs(y);
        let k2 = params.rhs(y + half * h * k1);
        let k3 = params.rhs(y + half * h * k2);
        let k4 = params.rhs(y + h * k3);
        let next = y + h * sixth * (k1 + T::lit(2.0) * (k2 + k3) + k4);
        if !next.is_finite() || next.abs() > limit {
            return (out, Some(t0 + T::count(i + 1) * h));
        }
        y = next;
        out.push(y);
    }
    (out, None)
}

/// Pointwise residual of the Riccati equation with its max-norm and the
/// monotonicity verdict (`eta' < 0` at every sample).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport<T> {
    pub residual: GridField1D<T>,
    pub max_abs: T,
    pub strictly_decreasing: bool,
}

impl<T: Real> ResidualReport<T> {
    /// Rejects fields that solve the equation but are not decreasing,
    /// e.g. the stationary solution at a root of the quadratic.
    pub fn ensure_decreasing(&self) -> Result<()> {
        if self.strictly_decreasing {
            Ok(())
        } else {
            Err(Error::NotDecreasing("eta' >= 0 somewhere on the sampled range".into()))
        }
    }
}

/// Residual of a closed form at `points` nodes of `[lo, hi]` using the
/// analytic derivative.
pub fn ode_residual<T: Real>(solution: &EtaSolution<T>, lo: T, hi: T, points: usize) -> Result<ResidualReport<T>> {
    let ts = nodes(lo, hi, points)?;
    let mut res = Vec::with_capacity(ts.len());
    let mut decreasing = true;
    for &t in &ts {
        let (e, d) = solution.jet(t)?;
        decreasing &= d < T::zero();
        res.push(solution.params.residual(e, d));
    }
    let residual = GridField1D::new(lo, (hi - lo) / T::count(points - 1), res)?;
    Ok(ResidualReport { max_abs: residual.max_abs(), residual, strictly_decreasing: decreasing })
}

/// Residual of sampled `eta` with `eta'` from finite differences.
pub fn ode_residual_grid<T: Real>(eta: &GridField1D<T>, params: &EtaParams<T>) -> Result<ResidualReport<T>> {
    let d = eta.derivative();
    let decreasing = d.values().iter().all(|&x| x < T::zero());
    let residual = eta.zip_with(&d, |_, e, de| params.residual(e, de))?;
    Ok(ResidualReport { max_abs: residual.max_abs(), residual, strictly_decreasing: decreasing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(sigma: f64, lambda: f64, n: usize) -> EtaParams<f64> {
        EtaParams::new(sigma, lambda, n, 0.0).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&p(6.0, 0.0, 3)), EtaCase::Tan);
        assert_eq!(classify(&p(6.0, 3.0, 3)), EtaCase::Rational);
        assert_eq!(classify(&p(-6.0, 0.0, 3)), EtaCase::Coth);
        assert!(EtaParams::new(1.0, 0.0, 1, 0.0).is_err());
    }

    #[test]
    fn domain_bound_examples() {
        let b = domain_bounds(&p(6.0, 0.0, 3));
        assert!(b.bounded);
        assert!((b.r_plus - PI / 3.0).abs() < 1e-15);
        assert!((b.r_minus + 1.047_197_551_196_597_6).abs() < 1e-15);
        for n in 3..=7 {
            let b = domain_bounds(&p((n * (n - 1)) as f64, 0.0, n));
            assert!((b.r_plus - PI / n as f64).abs() < 1e-12);
        }
        assert!(!domain_bounds(&p(0.0, 0.0, 3)).bounded);
    }

    #[test]
    fn closed_form_examples() {
        let tan = eta_closed(&p(6.0, 0.0, 3));
        assert!((tan.eval(PI / 6.0).unwrap() + 2.0).abs() < 1e-14);
        let rat = eta_closed(&p(6.0, 3.0, 3));
        assert_eq!(rat.case, EtaCase::Rational);
        assert!((rat.eval(1.0).unwrap() - 10.0 / 3.0).abs() < 1e-14);
        let coth = eta_closed(&p(-6.0, 0.0, 3));
        assert!((coth.eval(2.0 / 3.0).unwrap() - 2.626_070_570_998_663).abs() < 1e-13);
        assert!(coth.eval(-0.5).is_err());
        let below = eta_closed_on(&p(-6.0, 0.0, 3), Branch::Below);
        assert!((below.eval(-2.0 / 3.0).unwrap() + 2.626_070_570_998_663).abs() < 1e-13);
    }

    #[test]
    fn inverse_recovers_t() {
        for (sigma, lambda, n, t) in [(6.0, 0.5, 3, 0.3), (-6.0, 1.0, 4, 0.8), (0.0, 0.0, 3, 1.7), (2.0, 2.0, 5, -0.6)] {
            let mut params = p(sigma, lambda, n);
            if t < 0.0 {
                params.c = -1.0;
            }
            let s = eta_closed(&params);
            let y = s.eval(t).unwrap();
            assert!((s.inverse(y).unwrap() - t).abs() < 1e-12, "{s:?}");
        }
        let coth = eta_closed(&p(-6.0, 0.0, 3));
        assert!(coth.inverse(1.0).is_err());
    }

    #[test]
    fn numeric_validation() {
        let params = p(6.0, 0.0, 3);
        assert!(matches!(eta_solve_numeric(&params, 0.0, 0.0, (-1.0, 1.0), 0.2), Err(Error::Step { .. })));
        assert!(eta_solve_numeric(&params, 2.0, 0.0, (-1.0, 1.0), 1e-3).is_err());
        let sol = eta_solve_numeric(&params, 0.0, 0.0, (-1.2, 1.2), 1e-4).unwrap();
        let up = sol.escape_above.unwrap();
        let down = sol.escape_below.unwrap();
        assert!((up - PI / 3.0).abs() < 1e-3, "{up}");
        assert!((down + PI / 3.0).abs() < 1e-3, "{down}");
        assert!(matches!(sol.require_complete(), Err(Error::BlowUp { .. })));
    }

    #[test]
    fn stationary_solution_rejected() {
        let params = p(6.0, 3.0, 3);
        let flat = GridField1D::sample(0.0, 1.0, 101, |_| params.center()).unwrap();
        let report = ode_residual_grid(&flat, &params).unwrap();
        assert!(report.max_abs < 1e-12);
        assert!(report.ensure_decreasing().is_err());
    }

    #[test]
    fn f32_closed_form_tracks_f64() {
        let p32 = EtaParams::<f32>::new(6.0, 0.0, 3, 0.0).unwrap();
        let s32 = eta_closed(&p32);
        let s64 = eta_closed(&p(6.0, 0.0, 3));
        for &t in &[-0.9f32, -0.3, 0.0, 0.5, 0.9] {
            let a = s32.eval(t).unwrap() as f64;
            let b = s64.eval(t as f64).unwrap();
            assert!((a - b).abs() < 1e-4 * b.abs().max(1.0), "{t}: {a} vs {b}");
        }
    }
}
