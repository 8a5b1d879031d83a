//! Real functions of the band coordinate `t`, evaluated together with their
//! first derivative. Extrinsic curvature components and potentials are
//! expressed through this type.

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::grid::GridField1D;
use crate::scalar::Real;

type JetFn<T> = Arc<dyn Fn(T) -> (T, T) + Send + Sync>;

/// A function of `t` with an available first derivative.
#[derive(Clone)]
pub enum Profile<T> {
    Constant(T),
    /// `c[0] + c[1] t + c[2] t^2 + ...`
    Polynomial(Vec<T>),
    /// `offset + amplitude * cos(frequency * t + phase)`
    Cosine { amplitude: T, frequency: T, phase: T, offset: T },
    /// Interpolated samples (cubic, four nearest nodes).
    Sampled(GridField1D<T>),
    /// Closure returning `(value, derivative)`.
    Jet { label: String, jet: JetFn<T> },
    /// `scale * inner + offset`
    Affine { scale: T, offset: T, inner: Box<Profile<T>> },
    Sum(Box<Profile<T>>, Box<Profile<T>>),
}

impl<T: Real> Profile<T> {
    pub fn zero() -> Self {
        Profile::Constant(T::zero())
    }

    pub fn cosine(amplitude: T, frequency: T) -> Self {
        Profile::Cosine { amplitude, frequency, phase: T::zero(), offset: T::zero() }
    }

    pub fn from_jet(label: impl Into<String>, jet: impl Fn(T) -> (T, T) + Send + Sync + 'static) -> Self {
        Profile::Jet { label: label.into(), jet: Arc::new(jet) }
    }

    pub fn affine(self, scale: T, offset: T) -> Self {
        match self {
            Profile::Constant(c) => Profile::Constant(scale * c + offset),
            other => Profile::Affine { scale, offset, inner: Box::new(other) },
        }
    }

    pub fn plus(self, other: Profile<T>) -> Self {
        match (self, other) {
            (Profile::Constant(a), Profile::Constant(b)) => Profile::Constant(a + b),
            (Profile::Constant(c), p) | (p, Profile::Constant(c)) if c == T::zero() => p,
            (a, b) => Profile::Sum(Box::new(a), Box::new(b)),
        }
    }

    /// Value and first derivative at `t`.
    pub fn jet(&self, t: T) -> Result<(T, T)> {
        Ok(match self {
            Profile::Constant(c) => (*c, T::zero()),
            Profile::Polynomial(c) => {
                let mut v = T::zero();
                let mut d = T::zero();
                for &ci in c.iter().rev() {
                    d = d * t + v;
                    v = v * t + ci;
                }
                (v, d)
            }
            Profile::Cosine { amplitude, frequency, phase, offset } => {
                let arg = *frequency * t + *phase;
                (*offset + *amplitude * arg.cos(), -*amplitude * *frequency * arg.sin())
            }
            Profile::Sampled(g) => g.interpolate(t)?,
            Profile::Jet { jet, .. } => jet(t),
            Profile::Affine { scale, offset, inner } => {
                let (v, d) = inner.jet(t)?;
                (*scale * v + *offset, *scale * d)
            }
            Profile::Sum(a, b) => {
                let (va, da) = a.jet(t)?;
                let (vb, db) = b.jet(t)?;
                (va + vb, da + db)
            }
        })
    }

    pub fn value(&self, t: T) -> Result<T> {
        Ok(self.jet(t)?.0)
    }

    pub fn derivative(&self, t: T) -> Result<T> {
        Ok(self.jet(t)?.1)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Profile::Constant(_) => true,
            Profile::Polynomial(c) => c.iter().skip(1).all(|x| *x == T::zero()),
            Profile::Cosine { amplitude, frequency, .. } => *amplitude == T::zero() || *frequency == T::zero(),
            Profile::Affine { scale, inner, .. } => *scale == T::zero() || inner.is_constant(),
            Profile::Sum(a, b) => a.is_constant() && b.is_constant(),
            Profile::Sampled(_) | Profile::Jet { .. } => false,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        matches!(self, Profile::Constant(c) if *c == T::zero())
    }

    /// Interval on which a sampled component is defined, if any.
    pub fn support(&self) -> Option<(T, T)> {
        match self {
            Profile::Sampled(g) => Some((g.start(), g.end())),
            Profile::Affine { inner, .. } => inner.support(),
            Profile::Sum(a, b) => match (a.support(), b.support()) {
                (Some((a0, a1)), Some((b0, b1))) => Some((a0.max(b0), a1.min(b1))),
                (s, None) | (None, s) => s,
            },
            _ => None,
        }
    }
}

impl<T: Real> fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            Profile::Cosine { amplitude, frequency, phase, offset } => {
                write!(f, "{offset} + {amplitude} cos({frequency} t + {phase})")
            }
            Profile::Sampled(g) => write!(f, "Sampled({} points on [{}, {}])", g.len(), g.start(), g.end()),
            Profile::Jet { label, .. } => write!(f, "Jet({label})"),
            Profile::Affine { scale, offset, inner } => write!(f, "{scale} * ({inner:?}) + {offset}"),
            Profile::Sum(a, b) => write!(f, "({a:?}) + ({b:?})"),
        }
    }
}
