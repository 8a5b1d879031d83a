use crate::error::Result;
use crate::profile::Profile;
use crate::scalar::Real;

/// Second fundamental form `k` of the slice, compatible with the torus symmetry.
#[derive(Clone)]
pub enum ExtrinsicSpec<T> {
    /// `k = (lambda / n) g`.
    UmbilicCmc { lambda: T },
    /// `k = a(t) dt^2 + b(t) f(t)^2 tau`.
    Diagonal { a: Profile<T>, b: Profile<T> },
    /// `k = psi(t) g`.
    Conformal { psi: Profile<T> },
}

impl<T: Real> std::fmt::Debug for ExtrinsicSpec<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtrinsicSpec::UmbilicCmc { lambda } => write!(f, "UmbilicCmc {{ lambda: {lambda} }}"),
            ExtrinsicSpec::Diagonal { a, b } => write!(f, "Diagonal {{ a: {a:?}, b: {b:?} }}"),
            ExtrinsicSpec::Conformal { psi } => write!(f, "Conformal {{ psi: {psi:?} }}"),
        }
    }
}

/// Components of `k` in an orthonormal frame adapted to the leaves, with
/// their `t`-derivatives: `k(dt, dt) = normal`, `k(e, e) = tangential`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtrinsicJet<T> {
    pub normal: T,
    pub normal_dt: T,
    pub tangential: T,
    pub tangential_dt: T,
}

impl<T: Real> ExtrinsicSpec<T> {
    pub fn time_symmetric() -> Self {
        ExtrinsicSpec::UmbilicCmc { lambda: T::zero() }
    }

    pub fn umbilic(lambda: T) -> Self {
        ExtrinsicSpec::UmbilicCmc { lambda }
    }

    pub fn conformal(psi: Profile<T>) -> Self {
        ExtrinsicSpec::Conformal { psi }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            ExtrinsicSpec::UmbilicCmc { .. } => "umbilic",
            ExtrinsicSpec::Diagonal { .. } => "diagonal",
            ExtrinsicSpec::Conformal { .. } => "conformal",
        }
    }

    pub fn jet(&self, n: usize, t: T) -> Result<ExtrinsicJet<T>> {
        Ok(match self {
            ExtrinsicSpec::UmbilicCmc { lambda } => {
                let c = *lambda / T::count(n);
                ExtrinsicJet { normal: c, normal_dt: T::zero(), tangential: c, tangential_dt: T::zero() }
            }
            ExtrinsicSpec::Diagonal { a, b } => {
                let (av, ad) = a.jet(t)?;
                let (bv, bd) = b.jet(t)?;
                ExtrinsicJet { normal: av, normal_dt: ad, tangential: bv, tangential_dt: bd }
            }
            ExtrinsicSpec::Conformal { psi } => {
                let (v, d) = psi.jet(t)?;
                ExtrinsicJet { normal: v, normal_dt: d, tangential: v, tangential_dt: d }
            }
        })
    }

    /// `tr_g k`.
    pub fn trace(&self, n: usize, t: T) -> Result<T> {
        if let ExtrinsicSpec::UmbilicCmc { lambda } = self {
            return Ok(*lambda);
        }
        let j = self.jet(n, t)?;
        Ok(j.normal + T::count(n - 1) * j.tangential)
    }

    /// `|k|^2_g`.
    pub fn norm_sq(&self, n: usize, t: T) -> Result<T> {
        if let ExtrinsicSpec::UmbilicCmc { lambda } = self {
            return Ok(*lambda * *lambda / T::count(n));
        }
        let j = self.jet(n, t)?;
        Ok(j.normal * j.normal + T::count(n - 1) * j.tangential * j.tangential)
    }

    /// `tr_{Sigma_t} k = tr_g k - k(dt, dt)`.
    pub fn leaf_trace(&self, n: usize, t: T) -> Result<T> {
        if let ExtrinsicSpec::UmbilicCmc { lambda } = self {
            return Ok(*lambda * T::count(n - 1) / T::count(n));
        }
        Ok(T::count(n - 1) * self.jet(n, t)?.tangential)
    }

    /// `t`-derivative of `tr_g k`.
    pub fn trace_dt(&self, n: usize, t: T) -> Result<T> {
        let j = self.jet(n, t)?;
        Ok(j.normal_dt + T::count(n - 1) * j.tangential_dt)
    }

    /// Samples on which a tabulated component is defined, if any.
    pub fn support(&self) -> Option<(T, T)> {
        match self {
            ExtrinsicSpec::UmbilicCmc { .. } => None,
            ExtrinsicSpec::Diagonal { a, b } => match (a.support(), b.support()) {
                (Some((a0, a1)), Some((b0, b1))) => Some((a0.max(b0), a1.min(b1))),
                (s, None) | (None, s) => s,
            },
            ExtrinsicSpec::Conformal { psi } => psi.support(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_and_norm_per_mode() {
        let n = 4;
        let u = ExtrinsicSpec::umbilic(2.0);
        assert_eq!(u.trace(n, 0.3).unwrap(), 2.0);
        assert_eq!(u.norm_sq(n, 0.3).unwrap(), 1.0);

        let d = ExtrinsicSpec::Diagonal { a: Profile::Constant(1.5), b: Profile::Polynomial(vec![0.0, 1.0]) };
        assert_eq!(d.trace(n, 0.5).unwrap(), 1.5 + 3.0 * 0.5);
        assert_eq!(d.norm_sq(n, 0.5).unwrap(), 2.25 + 3.0 * 0.25);
        assert_eq!(d.trace_dt(n, 0.5).unwrap(), 3.0);

        let c = ExtrinsicSpec::conformal(Profile::Constant(0.5));
        assert_eq!(c.trace(n, 0.0).unwrap(), 2.0);
        assert_eq!(c.norm_sq(n, 0.0).unwrap(), 1.0);
        assert_eq!(c.leaf_trace(n, 0.0).unwrap(), 1.5);
    }
}
