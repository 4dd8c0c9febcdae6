//! Full conditionals of the joint law on Jacobi coefficients,
//!
//! ```text
//! Π_n b_n^{β/2·(N−n) − 1} · exp(−Tr W(J)),
//! ```
//!
//! built by interpolating a windowed trace. A closed walk of length `k` through
//! a coefficient stays within `k/2` sites of it, so the trace of the principal
//! submatrix on a window of radius `deg V / 2` differs from the full trace by a
//! constant, and nothing outside that window is ever read.

use serde::{Deserialize, Serialize};

use super::potential::{trace_polynomial, PolynomialPotential, MAX_DEGREE};
use crate::poly;
use crate::tridiag::JacobiCoefficients;

/// Which coefficient a conditional refers to (0-based: `Diagonal(i)` is `a_{i+1}`,
/// `OffDiagonal(i)` is `b_{i+1}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConditionalKind {
    Diagonal(usize),
    OffDiagonal(usize),
}

/// Unnormalized univariate density.
///
/// Diagonal entries: `exp(−poly(x))` on ℝ. Off-diagonal entries:
/// `x^{shape−1}·exp(−poly(x))` on `(0, ∞)`. `poly[0]` is always zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalDensity {
    pub kind: ConditionalKind,
    pub poly: [f64; MAX_DEGREE + 1],
    pub shape: f64,
}

impl ConditionalDensity {
    pub fn diagonal(poly: [f64; MAX_DEGREE + 1]) -> Self {
        Self { kind: ConditionalKind::Diagonal(0), poly, shape: 0.0 }
    }

    pub fn off_diagonal(poly: [f64; MAX_DEGREE + 1], shape: f64) -> Self {
        Self { kind: ConditionalKind::OffDiagonal(0), poly, shape }
    }

    pub fn is_off_diagonal(&self) -> bool {
        matches!(self.kind, ConditionalKind::OffDiagonal(_))
    }

    /// Lower end of the support, if any.
    pub fn lower_bound(&self) -> Option<f64> {
        self.is_off_diagonal().then_some(0.0)
    }

    pub fn poly_value(&self, x: f64) -> f64 {
        poly::eval(&self.poly, x)
    }

    pub fn poly_derivative(&self, x: f64) -> f64 {
        poly::eval(&poly::derivative(&self.poly), x)
    }

    /// Unnormalized log density; `−∞` outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        if self.is_off_diagonal() {
            if x <= 0.0 {
                return f64::NEG_INFINITY;
            }
            (self.shape - 1.0) * x.ln() - self.poly_value(x)
        } else {
            -self.poly_value(x)
        }
    }

    pub fn grad_log_density(&self, x: f64) -> f64 {
        if self.is_off_diagonal() {
            (self.shape - 1.0) / x - self.poly_derivative(x)
        } else {
            -self.poly_derivative(x)
        }
    }

    /// Whether the density is integrable: the top coefficient must be positive,
    /// of even degree ≥ 2 on ℝ.
    pub fn is_proper(&self) -> bool {
        let p = poly::trim(&self.poly, 0.0);
        match p.len().checked_sub(1) {
            None | Some(0) => false,
            Some(deg) => p[deg] > 0.0 && (self.is_off_diagonal() || deg % 2 == 0) && (!self.is_off_diagonal() || self.shape > 0.0),
        }
    }

    /// Log-concavity certificate: the polynomial part must be convex on the
    /// support and, for off-diagonal entries, `shape ≥ 1`.
    pub fn is_log_concave(&self) -> bool {
        let second = poly::derivative(&poly::derivative(&self.poly));
        let scale = self.poly.iter().map(|c| c.abs()).fold(0.0, f64::max).max(1.0);
        let tol = 1e-12 * scale;
        if self.is_off_diagonal() {
            self.shape >= 1.0 && poly::is_nonnegative(&second, Some(0.0), tol)
        } else {
            poly::is_nonnegative(&second, None, tol)
        }
    }
}

fn radius(v: &PolynomialPotential) -> usize {
    (v.degree() / 2).max(1)
}

/// Window of sites whose principal submatrix carries every walk through `a_i`.
fn window_a(n: usize, i: usize, r: usize) -> (usize, usize) {
    (i.saturating_sub(r), (i + r).min(n - 1))
}

/// Window of sites carrying every walk through the edge `(i, i+1)`.
fn window_b(n: usize, i: usize, r: usize) -> (usize, usize) {
    (i.saturating_sub(r - 1), (i + r).min(n - 1))
}

fn finish(fit: Vec<f64>, degree: usize) -> [f64; MAX_DEGREE + 1] {
    let mut out = [0.0; MAX_DEGREE + 1];
    let top = degree.min(MAX_DEGREE);
    out[1..=top].copy_from_slice(&fit[1..=top]);
    out
}

/// Conditional law of the diagonal entry `a_{i+1}` given all other coefficients.
pub fn conditional_for_a(i: usize, j: &JacobiCoefficients, v: &PolynomialPotential, beta: f64) -> ConditionalDensity {
    let n = j.n();
    assert!(i < n, "diagonal index {i} out of range for N = {n}");
    let coeffs = v.effective_coefficients(beta, n);
    let (lo, hi) = window_a(n, i, radius(v));
    let mut a = j.a()[lo..=hi].to_vec();
    let b = &j.b()[lo..hi];
    let local = i - lo;
    let scale = 1.0 + a.iter().map(|x| x.abs()).chain(b.iter().map(|x| x.sqrt())).fold(0.0, f64::max);
    let fit = poly::chebyshev_fit(
        |t| {
            a[local] = t;
            trace_polynomial(&a, b, &coeffs)
        },
        0.0,
        scale,
        MAX_DEGREE,
    );
    ConditionalDensity { kind: ConditionalKind::Diagonal(i), poly: finish(fit, v.degree()), shape: 0.0 }
}

/// Conditional law of the squared off-diagonal entry `b_{i+1}` given all other
/// coefficients; its shape is `β/2·(N − (i+1))`.
pub fn conditional_for_b(i: usize, j: &JacobiCoefficients, v: &PolynomialPotential, beta: f64) -> ConditionalDensity {
    let n = j.n();
    assert!(i + 1 < n, "off-diagonal index {i} out of range for N = {n}");
    let coeffs = v.effective_coefficients(beta, n);
    let (lo, hi) = window_b(n, i, radius(v));
    let a = &j.a()[lo..=hi];
    let mut b = j.b()[lo..hi].to_vec();
    let local = i - lo;
    let scale = 1.0 + a.iter().map(|x| x * x).chain(b.iter().copied()).fold(0.0, f64::max);
    let fit = poly::chebyshev_fit(
        |t| {
            b[local] = t;
            trace_polynomial(a, &b, &coeffs)
        },
        0.0,
        scale,
        MAX_DEGREE,
    );
    let shape = beta / 2.0 * (n - i - 1) as f64;
    ConditionalDensity { kind: ConditionalKind::OffDiagonal(i), poly: finish(fit, v.degree() / 2), shape }
}
