use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::JacobiCoefficients;

/// Highest power of J whose trace is ever needed.
pub const MAX_DEGREE: usize = 6;

/// `V(x) = g_6 x⁶ + g_4 x⁴ + g_3 x³ + g_2 x² + g_1 x` (no quintic term).
///
/// With `rescale_by_n` the chain targets `W = (βN/2)·V`, the normalization
/// under which the empirical spectrum converges to the equilibrium measure of `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolynomialPotential {
    g: [f64; MAX_DEGREE + 1],
    pub rescale_by_n: bool,
}

impl PolynomialPotential {
    /// `g = [g_1, g_2, g_3, g_4, g_5, g_6]`; `g_5` must be zero.
    pub fn new(g: [f64; 6], rescale_by_n: bool) -> Result<Self> {
        if g.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("potential coefficients"));
        }
        if g[4] != 0.0 {
            return Err(Error::UnsupportedPotential("degree-5 term must be zero".into()));
        }
        let [g1, g2, g3, g4, _, g6] = g;
        let confining = g6 > 0.0 || (g6 == 0.0 && g4 > 0.0) || (g6 == 0.0 && g4 == 0.0 && g3 == 0.0 && g2 > 0.0);
        if !confining {
            return Err(Error::UnsupportedPotential(
                "leading even coefficient must be positive (g6 > 0, or g6 = 0 and g4 > 0, or g6 = g4 = g3 = 0 and g2 > 0)"
                    .into(),
            ));
        }
        Ok(Self { g: [0.0, g1, g2, g3, g4, 0.0, g6], rescale_by_n })
    }

    pub fn quadratic(g2: f64, rescale_by_n: bool) -> Result<Self> {
        Self::new([0.0, g2, 0.0, 0.0, 0.0, 0.0], rescale_by_n)
    }

    pub fn quartic(g2: f64, g4: f64, rescale_by_n: bool) -> Result<Self> {
        Self::new([0.0, g2, 0.0, g4, 0.0, 0.0], rescale_by_n)
    }

    pub fn sextic(g2: f64, g4: f64, g6: f64, rescale_by_n: bool) -> Result<Self> {
        Self::new([0.0, g2, 0.0, g4, 0.0, g6], rescale_by_n)
    }

    /// Coefficients indexed by power, `[0, g_1, …, g_6]`.
    pub fn coefficients(&self) -> &[f64; MAX_DEGREE + 1] {
        &self.g
    }

    pub fn g(&self, k: usize) -> f64 {
        self.g[k]
    }

    pub fn degree(&self) -> usize {
        (1..=MAX_DEGREE).rev().find(|&k| self.g[k] != 0.0).unwrap_or(0)
    }

    /// Only even powers.
    pub fn is_even(&self) -> bool {
        self.g[1] == 0.0 && self.g[3] == 0.0
    }

    /// Multiplier applied to V in the target density.
    pub fn weight(&self, beta: f64, n: usize) -> f64 {
        if self.rescale_by_n {
            beta * n as f64 / 2.0
        } else {
            1.0
        }
    }

    /// Coefficients of the potential actually sampled (`W` or `V`).
    pub fn effective_coefficients(&self, beta: f64, n: usize) -> [f64; MAX_DEGREE + 1] {
        let w = self.weight(beta, n);
        self.g.map(|c| c * w)
    }

    /// The rescaled potential whose equilibrium measure describes this
    /// target at size `n`: itself when rescaled, `2V/(βN)` otherwise.
    pub fn rescaled_equivalent(&self, beta: f64, n: usize) -> Self {
        if self.rescale_by_n {
            return *self;
        }
        let f = 2.0 / (beta * n as f64);
        Self { g: self.g.map(|c| c * f), rescale_by_n: true }
    }

    pub fn eval(&self, x: f64) -> f64 {
        crate::poly::eval(&self.g, x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        crate::poly::eval(&crate::poly::derivative(&self.g), x)
    }
}

/// `(J^k)_{mm}` for `k = 0 … 6`, as weighted closed-walk sums.
///
/// Works with the similar, square-root-free matrix carrying `b_i` above the
/// diagonal and `1` below it; a walk of length ≤ 6 never leaves distance 3
/// from its start, so a radius-3 window is exact.
fn diagonal_powers(a: &[f64], b: &[f64], m: usize) -> [f64; MAX_DEGREE + 1] {
    let n = a.len();
    let lo = m.saturating_sub(3);
    let hi = (m + 3).min(n - 1);
    let len = hi - lo + 1;
    let mut v = [0.0; 7];
    let mut w = [0.0; 7];
    v[m - lo] = 1.0;
    let mut out = [0.0; MAX_DEGREE + 1];
    out[0] = 1.0;
    for slot in out.iter_mut().skip(1) {
        for i in 0..len {
            let g = lo + i;
            let mut s = a[g] * v[i];
            if i + 1 < len {
                s += b[g] * v[i + 1];
            }
            if i > 0 {
                s += v[i - 1];
            }
            w[i] = s;
        }
        v[..len].copy_from_slice(&w[..len]);
        *slot = v[m - lo];
    }
    out
}

/// Power sums `Tr J^k`, `k = 0 … 6`, from the tridiagonal walk expansion.
pub fn trace_power_sums_raw(a: &[f64], b: &[f64]) -> [f64; MAX_DEGREE + 1] {
    let mut tr = [0.0; MAX_DEGREE + 1];
    for m in 0..a.len() {
        let d = diagonal_powers(a, b, m);
        for (t, x) in tr.iter_mut().zip(d) {
            *t += x;
        }
    }
    tr
}

pub fn trace_power_sums(j: &JacobiCoefficients) -> [f64; MAX_DEGREE + 1] {
    trace_power_sums_raw(j.a(), j.b())
}

/// `Σ_k coeffs[k]·Tr J^k` on raw coefficient slices.
pub(crate) fn trace_polynomial(a: &[f64], b: &[f64], coeffs: &[f64; MAX_DEGREE + 1]) -> f64 {
    let tr = trace_power_sums_raw(a, b);
    (1..=MAX_DEGREE).map(|k| coeffs[k] * tr[k]).sum()
}

/// `Tr V(J)` (the unscaled potential).
pub fn trace_potential(j: &JacobiCoefficients, v: &PolynomialPotential) -> f64 {
    trace_polynomial(j.a(), j.b(), v.coefficients())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::build_jacobi;
    use approx::assert_relative_eq;

    #[test]
    fn validation() {
        assert!(PolynomialPotential::new([0.0, 0.0, 0.0, 1.0, 1.0, 0.0], false).is_err());
        assert!(PolynomialPotential::new([0.0, 0.0, 1.0, 0.0, 0.0, 0.0], false).is_err());
        assert!(PolynomialPotential::new([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], false).is_err());
        assert!(PolynomialPotential::new([0.0, -1.0, 0.0, 0.0, 0.0, 0.0], false).is_err());
        assert!(PolynomialPotential::new([0.3, -1.0, 2.0, 0.25, 0.0, 0.0], false).is_ok());
        assert!(PolynomialPotential::new([0.0, 0.0, 0.0, -1.0, 0.0, 0.5], false).is_ok());
        assert_eq!(PolynomialPotential::quartic(-1.25, 0.25, true).unwrap().degree(), 4);
    }

    #[test]
    fn trace_examples() {
        let j = build_jacobi(vec![0.0, 0.0], vec![1.0]).unwrap();
        let v = PolynomialPotential::quadratic(1.0, false).unwrap();
        assert_eq!(trace_potential(&j, &v), 2.0);
        let j = build_jacobi(vec![0.5, -1.5, 2.0], vec![0.3, 0.7]).unwrap();
        let tr = trace_power_sums(&j);
        assert_relative_eq!(tr[1], 1.0, epsilon = 1e-15);
        assert_relative_eq!(tr[2], 0.25 + 2.25 + 4.0 + 2.0, epsilon = 1e-14);
        assert_eq!(tr[0], 3.0);
    }

    #[test]
    fn trace_matches_dense_powers() {
        let j = build_jacobi(
            vec![0.3, -0.8, 1.1, 0.4, -0.2, 0.9, 0.0, -1.3],
            vec![0.6, 1.2, 0.3, 0.8, 1.5, 0.2, 0.7],
        )
        .unwrap();
        let dense = j.to_dense();
        let mut p = dense.clone();
        let tr = trace_power_sums(&j);
        for t in &tr[1..] {
            assert_relative_eq!(*t, p.trace(), max_relative = 1e-12);
            p = &p * &dense;
        }
    }
}
