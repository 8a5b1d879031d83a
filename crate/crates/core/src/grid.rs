//! Uniformly sampled scalar fields on an interval and order-independent reductions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Scalar field sampled at `start + i * step`, `i = 0..values.len()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridField1D<T> {
    start: T,
    step: T,
    values: Vec<T>,
}

impl<T: Real> GridField1D<T> {
    pub fn new(start: T, step: T, values: Vec<T>) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::Config(format!("grid step must be positive, got {step}")));
        }
        if values.is_empty() {
            return Err(Error::Config("grid field needs at least one sample".into()));
        }
        Ok(Self { start, step, values })
    }

    /// Samples `f` at `points` equally spaced nodes covering `[lo, hi]`.
    pub fn sample(lo: T, hi: T, points: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let nodes = nodes(lo, hi, points)?;
        let step = (hi - lo) / T::count(points - 1);
        Self::new(lo, step, nodes.into_iter().map(f).collect())
    }

    /// Fallible variant of [`GridField1D::sample`].
    pub fn try_sample(lo: T, hi: T, points: usize, f: impl Fn(T) -> Result<T>) -> Result<Self> {
        let nodes = nodes(lo, hi, points)?;
        let step = (hi - lo) / T::count(points - 1);
        let values = nodes.into_iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(lo, step, values)
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn end(&self) -> T {
        self.t(self.values.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn t(&self, i: usize) -> T {
        self.start + T::count(i) * self.step
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.values.len()).map(move |i| self.t(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.t(i), v))
    }

    pub fn first(&self) -> T {
        self.values[0]
    }

    pub fn last(&self) -> T {
        self.values[self.values.len() - 1]
    }

    pub fn map(&self, f: impl Fn(T, T) -> T) -> Self {
        Self {
            start: self.start,
            step: self.step,
            values: self.iter().map(|(t, v)| f(t, v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(T, T, T) -> T) -> Result<Self> {
        if self.len() != other.len() || self.start != other.start || self.step != other.step {
            return Err(Error::Config("grid fields live on different grids".into()));
        }
        Ok(Self {
            start: self.start,
            step: self.step,
            values: self
                .iter()
                .zip(other.values.iter())
                .map(|((t, a), &b)| f(t, a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> T {
        pairwise_max(self.values.iter().map(|v| v.abs())).unwrap_or_else(T::zero)
    }

    pub fn min(&self) -> T {
        pairwise_min(self.values.iter().copied()).expect("grid field is non-empty")
    }

    pub fn max(&self) -> T {
        pairwise_max(self.values.iter().copied()).expect("grid field is non-empty")
    }

    /// Composite trapezoid rule over the whole grid.
    pub fn trapezoid(&self) -> T {
        let n = self.values.len();
        if n < 2 {
            return T::zero();
        }
        let half = T::lit(0.5);
        let interior = pairwise_sum(self.values[1..n - 1].iter().copied());
        self.step * (interior + half * (self.values[0] + self.values[n - 1]))
    }

    /// Derivative by finite differences: fourth-order central stencils in the
    /// interior, fourth-order one-sided stencils at the two ends of the grid.
    /// Grids shorter than five samples fall back to second order.
    pub fn derivative(&self) -> Self {
        let v = &self.values;
        let n = v.len();
        let h = self.step;
        let mut out = Vec::with_capacity(n);
        if n < 2 {
            out.push(T::zero());
        } else if n < 5 {
            let two = T::lit(2.0);
            for i in 0..n {
                let d = if i == 0 {
                    if n == 2 {
                        (v[1] - v[0]) / h
                    } else {
                        (-T::lit(3.0) * v[0] + T::lit(4.0) * v[1] - v[2]) / (two * h)
                    }
                } else if i == n - 1 {
                    if n == 2 {
                        (v[1] - v[0]) / h
                    } else {
                        (T::lit(3.0) * v[n - 1] - T::lit(4.0) * v[n - 2] + v[n - 3]) / (two * h)
                    }
                } else {
                    (v[i + 1] - v[i - 1]) / (two * h)
                };
                out.push(d);
            }
        } else {
            let c12 = T::lit(12.0);
            let fwd = |s: &[T]| {
                (-T::lit(25.0) * s[0] + T::lit(48.0) * s[1] - T::lit(36.0) * s[2] + T::lit(16.0) * s[3]
                    - T::lit(3.0) * s[4])
                    / (c12 * h)
            };
            // second node: (-3, -10, 18, -6, 1) / 12h
            let fwd1 = |s: &[T]| {
                (-T::lit(3.0) * s[0] - T::lit(10.0) * s[1] + T::lit(18.0) * s[2] - T::lit(6.0) * s[3] + s[4])
                    / (c12 * h)
            };
            for i in 0..n {
                let d = if i == 0 {
                    fwd(&v[0..5])
                } else if i == 1 {
                    fwd1(&v[0..5])
                } else if i == n - 2 {
                    let r: Vec<T> = v[n - 5..].iter().rev().copied().collect();
                    -fwd1(&r)
                } else if i == n - 1 {
                    let r: Vec<T> = v[n - 5..].iter().rev().copied().collect();
                    -fwd(&r)
                } else {
                    (v[i - 2] - T::lit(8.0) * v[i - 1] + T::lit(8.0) * v[i + 1] - v[i + 2]) / (c12 * h)
                };
                out.push(d);
            }
        }
        Self { start: self.start, step: self.step, values: out }
    }

    /// Cubic Lagrange interpolation through the four nearest samples.
    /// Returns the interpolated value and its derivative.
    pub fn interpolate(&self, t: T) -> Result<(T, T)> {
        let lo = self.start;
        let hi = self.end();
        let slack = self.step * T::lit(1e-9);
        if t < lo - slack || t > hi + slack {
            return Err(Error::Domain { t: t.as_f64(), lo: lo.as_f64(), hi: hi.as_f64() });
        }
        let n = self.values.len();
        if n == 1 {
            return Ok((self.values[0], T::zero()));
        }
        if n < 4 {
            let x = ((t - lo) / self.step).max(T::zero());
            let i = x.floor().to_usize().unwrap_or(0).min(n - 2);
            let s = x - T::count(i);
            let (a, b) = (self.values[i], self.values[i + 1]);
            return Ok((a + s * (b - a), (b - a) / self.step));
        }
        let x = (t - lo) / self.step;
        let i = x.floor().to_usize().unwrap_or(0).min(n - 2);
        let base = i.saturating_sub(1).min(n - 4);
        let s = x - T::count(base);
        let y = &self.values[base..base + 4];
        let nodes = [T::zero(), T::one(), T::lit(2.0), T::lit(3.0)];
        let mut value = T::zero();
        let mut deriv = T::zero();
        for j in 0..4 {
            let mut denom = T::one();
            let mut basis = T::one();
            let mut dbasis = T::zero();
            for m in 0..4 {
                if m == j {
                    continue;
                }
                denom = denom * (nodes[j] - nodes[m]);
                dbasis = dbasis * (s - nodes[m]) + basis;
                basis = basis * (s - nodes[m]);
            }
            value = value + y[j] * basis / denom;
            deriv = deriv + y[j] * dbasis / denom;
        }
        Ok((value, deriv / self.step))
    }
}

/// `points` equally spaced nodes on `[lo, hi]` (endpoints exact).
pub fn nodes<T: Real>(lo: T, hi: T, points: usize) -> Result<Vec<T>> {
    if points < 2 {
        return Err(Error::Config(format!("need at least 2 grid points, got {points}")));
    }
    if !(hi > lo) {
        return Err(Error::Config(format!("empty interval [{lo}, {hi}]")));
    }
    let step = (hi - lo) / T::count(points - 1);
    Ok((0..points)
        .map(|i| if i == points - 1 { hi } else { lo + T::count(i) * step })
        .collect())
}

/// Grid nodes together with all cell midpoints: `2 * points - 1` samples.
pub fn nodes_and_midpoints<T: Real>(lo: T, hi: T, points: usize) -> Result<Vec<T>> {
    nodes(lo, hi, 2 * points - 1)
}

fn pairwise<T: Copy>(xs: &[T], op: &impl Fn(T, T) -> T) -> Option<T> {
    match xs.len() {
        0 => None,
        1 => Some(xs[0]),
        n => {
            let (a, b) = xs.split_at(n / 2);
            Some(op(pairwise(a, op)?, pairwise(b, op)?))
        }
    }
}

/// Minimum by balanced tree reduction; NaN propagates.
pub fn pairwise_min<T: Real>(xs: impl IntoIterator<Item = T>) -> Option<T> {
    let v: Vec<T> = xs.into_iter().collect();
    pairwise(&v, &|a: T, b: T| if a.is_nan() || b.is_nan() { T::nan() } else { a.min(b) })
}

/// Maximum by balanced tree reduction; NaN propagates.
pub fn pairwise_max<T: Real>(xs: impl IntoIterator<Item = T>) -> Option<T> {
    let v: Vec<T> = xs.into_iter().collect();
    pairwise(&v, &|a: T, b: T| if a.is_nan() || b.is_nan() { T::nan() } else { a.max(b) })
}

/// Sum by balanced tree reduction (zero for an empty input).
pub fn pairwise_sum<T: Real>(xs: impl IntoIterator<Item = T>) -> T {
    let v: Vec<T> = xs.into_iter().collect();
    pairwise(&v, &|a: T, b: T| a + b).unwrap_or_else(T::zero)
}
