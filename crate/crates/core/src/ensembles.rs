//! Exact tridiagonal models of the Hermite, Laguerre and Jacobi β-ensembles.
//!
//! Each model draws independent coefficients and diagonalizes:
//!
//! * Hermite, `V(x) = (x−μ)²/(2σ²)`: `a_n ~ N(μ, σ²)`, `b_n ~ Gamma(β/2·(N−n), σ²)`.
//! * Laguerre, `V(x) = −(k−1) ln x + x/θ`: `ξ_{2n−1} ~ Gamma(β/2·(N−n)+k, θ)`,
//!   `ξ_{2n} ~ Gamma(β/2·(N−n), θ)`, mapped to `(a, b)` by the Cholesky relations.
//! * Jacobi, `V(x) = −(p−1) ln x − (q−1) ln(1−x)`:
//!   `c_{2n−1} ~ Beta(β/2·(N−n)+p, β/2·(N−n)+q)`,
//!   `c_{2n} ~ Beta(β/2·(N−n), β/2·(N−n−1)+p+q)`, mapped through ξ to `(a, b)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{sample_beta, sample_gamma, RngStream};
use crate::spectral::{eigvals_tridiagonal, SpectralSample};
use crate::tridiag::{c_to_xi, xi_to_ab, CanonicalMoments, JacobiCoefficients, XiParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EnsembleKind {
    Hermite { mu: f64, sigma: f64 },
    Laguerre { k: f64, theta: f64 },
    Jacobi { p: f64, q: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub beta: f64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, beta: f64) -> Result<Self> {
        let spec = Self { kind, n, beta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hermite(n: usize, beta: f64, mu: f64, sigma: f64) -> Result<Self> {
        Self::new(EnsembleKind::Hermite { mu, sigma }, n, beta)
    }

    pub fn laguerre(n: usize, beta: f64, k: f64, theta: f64) -> Result<Self> {
        Self::new(EnsembleKind::Laguerre { k, theta }, n, beta)
    }

    pub fn jacobi(n: usize, beta: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(EnsembleKind::Jacobi { p, q }, n, beta)
    }

    /// Hermite ensemble with potential `(βN/2)·x²/2`: spectrum fills [−2, 2].
    pub fn rescaled_hermite(n: usize, beta: f64) -> Result<Self> {
        Self::hermite(n, beta, 0.0, (2.0 / (beta * n as f64)).sqrt())
    }

    /// Laguerre ensemble normalized so that the spectrum converges to the
    /// Marchenko–Pastur law with ratio `N/M ∈ (0, 1]` and unit mean.
    pub fn rescaled_laguerre(n: usize, beta: f64, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidParameter(format!("Marchenko-Pastur ratio {ratio} outside (0, 1]")));
        }
        let m = n as f64 / ratio;
        let k = beta / 2.0 * (m - n as f64 + 1.0);
        Self::laguerre(n, beta, k, 2.0 / (beta * m))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidParameter(what));
        if self.n == 0 {
            return bad("N must be at least 1".into());
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad(format!("beta = {} must be positive", self.beta));
        }
        match self.kind {
            EnsembleKind::Hermite { mu, sigma } => {
                if !mu.is_finite() || !(sigma > 0.0 && sigma.is_finite()) {
                    return bad(format!("Hermite needs finite mu and sigma > 0 (mu = {mu}, sigma = {sigma})"));
                }
            }
            EnsembleKind::Laguerre { k, theta } => {
                if !(k > 0.0 && k.is_finite()) || !(theta > 0.0 && theta.is_finite()) {
                    return bad(format!("Laguerre needs k > 0 and theta > 0 (k = {k}, theta = {theta})"));
                }
            }
            EnsembleKind::Jacobi { p, q } => {
                if !(p > 0.0 && p.is_finite()) || !(q > 0.0 && q.is_finite()) {
                    return bad(format!("Jacobi needs p > 0 and q > 0 (p = {p}, q = {q})"));
                }
            }
        }
        Ok(())
    }
}

/// Independent coefficient draws of the tridiagonal model.
///
/// Draw order is fixed: Hermite draws all `a` then all `b`; Laguerre draws
/// `ξ_1, ξ_2, …`; Jacobi draws `c_1, c_2, …`.
pub fn sample_coefficients(spec: &EnsembleSpec, rng: &mut RngStream) -> Result<JacobiCoefficients> {
    spec.validate()?;
    let n = spec.n;
    let half_beta = spec.beta / 2.0;
    // β/2·(N−n) for 1-based n
    let dof = |idx: usize| half_beta * (n - idx) as f64;
    match spec.kind {
        EnsembleKind::Hermite { mu, sigma } => {
            let a: Vec<f64> = (0..n).map(|_| mu + sigma * rng.normal()).collect();
            let b: Vec<f64> = (1..n).map(|i| sample_gamma(dof(i), sigma * sigma, rng)).collect();
            JacobiCoefficients::new(a, b)
        }
        EnsembleKind::Laguerre { k, theta } => {
            let mut xi = Vec::with_capacity(2 * n - 1);
            for i in 1..=n {
                xi.push(sample_gamma(dof(i) + k, theta, rng));
                if i < n {
                    xi.push(sample_gamma(dof(i), theta, rng));
                }
            }
            Ok(xi_to_ab(&XiParams::new(xi)?))
        }
        EnsembleKind::Jacobi { p, q } => {
            let mut c = Vec::with_capacity(2 * n - 1);
            for i in 1..=n {
                c.push(sample_beta(dof(i) + p, dof(i) + q, rng));
                if i < n {
                    c.push(sample_beta(dof(i), half_beta * (n - i - 1) as f64 + p + q, rng));
                }
            }
            let xi = c_to_xi(&CanonicalMoments::new(c)?);
            Ok(xi_to_ab(&xi))
        }
    }
}

/// One exact draw from the ensemble: eigenvalues of the sampled Jacobi matrix.
pub fn sample_ensemble(spec: &EnsembleSpec, rng: &mut RngStream) -> Result<SpectralSample> {
    eigvals_tridiagonal(&sample_coefficients(spec, rng)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(EnsembleSpec::hermite(0, 2.0, 0.0, 1.0).is_err());
        assert!(EnsembleSpec::hermite(3, 0.0, 0.0, 1.0).is_err());
        assert!(EnsembleSpec::hermite(3, 2.0, 0.0, -1.0).is_err());
        assert!(EnsembleSpec::laguerre(3, 2.0, 0.0, 1.0).is_err());
        assert!(EnsembleSpec::jacobi(3, 2.0, 1.0, 0.0).is_err());
        assert!(EnsembleSpec::rescaled_laguerre(3, 2.0, 1.5).is_err());
        assert!(EnsembleSpec::rescaled_laguerre(3, 2.0, 0.5).is_ok());
    }

    #[test]
    fn laguerre_coefficients_follow_cholesky_map() {
        // Same stream, drawn by hand: ξ1 ~ Gamma(2, 2), ξ2 ~ Gamma(1, 2), ξ3 ~ Gamma(1, 2).
        let spec = EnsembleSpec::laguerre(2, 2.0, 1.0, 2.0).unwrap();
        let j = sample_coefficients(&spec, &mut RngStream::new(11, 0)).unwrap();
        let mut r = RngStream::new(11, 0);
        let x1 = sample_gamma(2.0, 2.0, &mut r);
        let x2 = sample_gamma(1.0, 2.0, &mut r);
        let x3 = sample_gamma(1.0, 2.0, &mut r);
        assert_eq!(j.a(), &[x1, x2 + x3]);
        assert_eq!(j.b(), &[x1 * x2]);
    }

    #[test]
    fn hermite_coefficient_laws() {
        // b_1 ~ Gamma(2, 1), b_2 ~ Gamma(1, 1), a_n ~ N(0, 1), replayed on the same stream.
        let spec = EnsembleSpec::hermite(3, 2.0, 0.0, 1.0).unwrap();
        let j = sample_coefficients(&spec, &mut RngStream::new(3, 9)).unwrap();
        let mut r = RngStream::new(3, 9);
        let a: Vec<f64> = (0..3).map(|_| r.normal()).collect();
        let b1 = sample_gamma(2.0, 1.0, &mut r);
        let b2 = sample_gamma(1.0, 1.0, &mut r);
        assert_eq!(j.a(), a.as_slice());
        assert_eq!(j.b(), &[b1, b2]);
    }

    #[test]
    fn jacobi_single_coefficient_is_beta() {
        let spec = EnsembleSpec::jacobi(1, 2.0, 1.0, 1.0).unwrap();
        let j = sample_coefficients(&spec, &mut RngStream::new(8, 8)).unwrap();
        let mut r = RngStream::new(8, 8);
        assert_eq!(j.a(), &[sample_beta(1.0, 1.0, &mut r)]);
        assert!(j.b().is_empty());
    }

    #[test]
    fn supports() {
        let mut rng = RngStream::new(1, 2);
        for beta in [0.5, 1.0, 2.0, 4.0] {
            let l = EnsembleSpec::laguerre(30, beta, 0.7, 1.3).unwrap();
            let s = sample_ensemble(&l, &mut rng).unwrap();
            assert!(s.eigenvalues[0] > 0.0);
            let jc = EnsembleSpec::jacobi(30, beta, 0.6, 2.5).unwrap();
            let s = sample_ensemble(&jc, &mut rng).unwrap();
            assert!(s.eigenvalues[0] > 0.0 && s.max() < 1.0);
        }
    }

    #[test]
    fn deterministic() {
        let spec = EnsembleSpec::rescaled_hermite(50, 2.0).unwrap();
        let a = sample_ensemble(&spec, &mut RngStream::new(42, 1)).unwrap();
        let b = sample_ensemble(&spec, &mut RngStream::new(42, 1)).unwrap();
        assert_eq!(a, b);
    }
}
