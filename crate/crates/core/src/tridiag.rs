//! Parametrizations of a finite atomic measure.
//!
//! An N-atomic probability measure `μ = Σ w_n δ_{x_n}` is equivalently described
//! by the recurrence coefficients `(a, b)` of its monic orthogonal polynomials,
//!
//! ```text
//! P_{n+1}(x) = (x - a_{n+1}) P_n(x) - b_n P_{n-1}(x),
//! ```
//!
//! which are the entries of the Jacobi matrix with diagonal `a` and off-diagonal
//! `√b`. Measures supported in `(0, ∞)` additionally admit the Cholesky
//! parameters ξ (`J = Ξ Ξᵀ` with `Ξ` lower bidiagonal), and measures supported in
//! `(0, 1)` the canonical moments `c ∈ (0, 1)^{2N-1}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

/// Relative breakdown threshold of the Stieltjes procedure on `‖P_k‖²`.
pub const STIELTJES_BREAKDOWN: f64 = 1e-28;

/// Tolerance on `Σ w_n = 1` accepted by [`AtomicMeasure::new`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Recurrence coefficients of an N-atomic measure: `a` holds the N diagonal
/// entries, `b` the N−1 *squared* off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiCoefficients {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl JacobiCoefficients {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::LengthMismatch("a must hold at least one entry".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::LengthMismatch(format!(
                "len(b) = {} but len(a) = {}",
                b.len(),
                a.len()
            )));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("a"));
        }
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("b"));
        }
        if let Some((index, &value)) = b.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NonPositiveOffDiagonal { index, value });
        }
        Ok(Self { a, b })
    }

    /// Matrix size N.
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.a, self.b)
    }

    pub(crate) fn set_a(&mut self, i: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.a[i] = value;
    }

    pub(crate) fn set_b(&mut self, i: usize, value: f64) {
        debug_assert!(value.is_finite() && value > 0.0);
        self.b[i] = value;
    }

    /// Dense symmetric matrix with off-diagonal entries `√b_n`.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for (i, &ai) in self.a.iter().enumerate() {
            m[(i, i)] = ai;
        }
        for (i, &bi) in self.b.iter().enumerate() {
            let s = bi.sqrt();
            m[(i, i + 1)] = s;
            m[(i + 1, i)] = s;
        }
        m
    }

    /// Frobenius norm, used as the scale for eigenvalue tolerances.
    pub fn frobenius_norm(&self) -> f64 {
        let sa: f64 = self.a.iter().map(|x| x * x).sum();
        let sb: f64 = self.b.iter().sum();
        (sa + 2.0 * sb).sqrt()
    }
}

/// Convenience wrapper around [`JacobiCoefficients::new`].
pub fn build_jacobi(a: Vec<f64>, b: Vec<f64>) -> Result<JacobiCoefficients> {
    JacobiCoefficients::new(a, b)
}

/// N distinct atoms in strictly decreasing order with positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomicMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    /// Validates and sorts the atoms into decreasing order (weights follow).
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::build(atoms, weights, false)
    }

    /// Like [`AtomicMeasure::new`], but rescales positive weights to sum to one.
    pub fn normalized(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        Self::build(atoms, weights, true)
    }

    fn build(atoms: Vec<f64>, weights: Vec<f64>, renormalize: bool) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::LengthMismatch(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if atoms.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("atoms"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::NonFinite("weights"));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::InvalidMeasure("weights must be positive".into()));
        }
        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(weights).collect();
        pairs.sort_by(|p, q| q.0.total_cmp(&p.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateAtoms);
        }
        let (atoms, mut weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let total: f64 = weights.iter().sum();
        if renormalize {
            weights.iter_mut().for_each(|w| *w /= total);
        } else if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { atoms, weights })
    }

    pub fn n(&self) -> usize {
        self.atoms.len()
    }

    /// Atoms in decreasing order.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Squared Vandermonde determinant `Π_{i<j} (x_i - x_j)²`.
    pub fn vandermonde_squared(&self) -> f64 {
        let mut prod = 1.0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let d = self.atoms[i] - self.atoms[j];
                prod *= d * d;
            }
        }
        prod
    }
}

/// Cholesky parameters ξ₁ … ξ_{2N−1}, all positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiParams(Vec<f64>);

impl XiParams {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch(format!(
                "xi must have odd length 2N-1, got {}",
                xi.len()
            )));
        }
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("xi"));
        }
        if let Some((index, &value)) = xi.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(Error::NotPositiveDefinite { index, value });
        }
        Ok(Self(xi))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Matrix size N.
    pub fn n(&self) -> usize {
        self.0.len().div_ceil(2)
    }
}

/// Canonical moments c₁ … c_{2N−1}, all in the open unit interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalMoments(Vec<f64>);

impl CanonicalMoments {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch(format!(
                "c must have odd length 2N-1, got {}",
                c.len()
            )));
        }
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("c"));
        }
        if let Some((index, &value)) = c.iter().enumerate().find(|(_, &v)| v <= 0.0 || v >= 1.0) {
            return Err(Error::NotInUnitInterval { index, value });
        }
        Ok(Self(c))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len().div_ceil(2)
    }
}

/// Moments `m_1 … m_K` of a probability measure (`m_0 = 1` is implicit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector(Vec<f64>);

impl MomentVector {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("moments"));
        }
        Ok(Self(m))
    }

    /// `m_k`, with `m_0 = 1`.
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.0[k - 1]
        }
    }

    /// Number of stored moments K.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `a_1 = ξ_1`, `a_n = ξ_{2n−2} + ξ_{2n−1}`, `b_n = ξ_{2n−1} ξ_{2n}`.
pub fn xi_to_ab(xi: &XiParams) -> JacobiCoefficients {
    let x = xi.as_slice();
    let n = xi.n();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n - 1);
    a.push(x[0]);
    for k in 1..n {
        // 0-based: xi_{2k} = x[2k-1], xi_{2k+1} = x[2k]
        a.push(x[2 * k - 1] + x[2 * k]);
        b.push(x[2 * k - 2] * x[2 * k - 1]);
    }
    JacobiCoefficients { a, b }
}

/// Scalar Cholesky recursion; fails unless the Jacobi matrix is positive definite.
pub fn ab_to_xi(j: &JacobiCoefficients) -> Result<XiParams> {
    let (a, b) = (j.a(), j.b());
    let mut xi = Vec::with_capacity(2 * j.n() - 1);
    let check = |index: usize, value: f64| {
        if value > 0.0 && value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NotPositiveDefinite { index, value })
        }
    };
    xi.push(check(0, a[0])?);
    for k in 0..b.len() {
        let even = b[k] / xi[2 * k];
        xi.push(check(2 * k + 1, even)?);
        let odd = a[k + 1] - even;
        xi.push(check(2 * k + 2, odd)?);
    }
    Ok(XiParams(xi))
}

/// `ξ_1 = c_1`, `ξ_n = (1 − c_{n−1}) c_n`.
pub fn c_to_xi(c: &CanonicalMoments) -> XiParams {
    let c = c.as_slice();
    let mut xi = Vec::with_capacity(c.len());
    xi.push(c[0]);
    for k in 1..c.len() {
        xi.push((1.0 - c[k - 1]) * c[k]);
    }
    XiParams(xi)
}

/// Inverse of [`c_to_xi`]; succeeds iff every `c_n` lands in `(0, 1)`.
pub fn xi_to_c(xi: &XiParams) -> Result<CanonicalMoments> {
    let x = xi.as_slice();
    let mut c = Vec::with_capacity(x.len());
    let mut prev = 0.0;
    for (index, &v) in x.iter().enumerate() {
        let value = v / (1.0 - prev);
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::NotInUnitInterval { index, value });
        }
        c.push(value);
        prev = value;
    }
    Ok(CanonicalMoments(c))
}

/// Output of the Stieltjes procedure: coefficients and the squared norms
/// `‖P_k‖²`, k = 0 … N−1, of the monic orthogonal polynomials.
#[derive(Debug, Clone)]
pub struct StieltjesOutput {
    pub coefficients: JacobiCoefficients,
    pub norms_squared: Vec<f64>,
}

/// Recurrence coefficients of `mu` by the discretized Stieltjes procedure.
pub fn stieltjes_from_atoms(mu: &AtomicMeasure) -> Result<JacobiCoefficients> {
    stieltjes(mu).map(|out| out.coefficients)
}

/// Stieltjes procedure with polynomials stored as their values on the atoms.
///
/// The polynomials are carried in orthonormal form and re-orthogonalized
/// against all previous ones, which keeps the last coefficients accurate when
/// the degree reaches the number of atoms.
pub fn stieltjes(mu: &AtomicMeasure) -> Result<StieltjesOutput> {
    let x = mu.atoms();
    let w = mu.weights();
    let n = mu.n();
    let inner = |p: &[f64], q: &[f64]| -> f64 { w.iter().zip(p).zip(q).map(|((wi, pi), qi)| wi * pi * qi).sum() };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    let mut b: Vec<f64> = Vec::with_capacity(n.saturating_sub(1));
    let mut norms = Vec::with_capacity(n);

    let norm0: f64 = w.iter().sum();
    let q0: Vec<f64> = vec![1.0 / norm0.sqrt(); n];
    norms.push(norm0);
    let xq: Vec<f64> = x.iter().zip(&q0).map(|(xi, qi)| xi * qi).collect();
    a.push(inner(&xq, &q0));
    basis.push(q0);

    for k in 1..n {
        let qk = &basis[k - 1];
        let mut r: Vec<f64> = x.iter().zip(qk).map(|(xi, qi)| (xi - a[k - 1]) * qi).collect();
        if k >= 2 {
            let s = b[k - 2].sqrt();
            r.iter_mut().zip(&basis[k - 2]).for_each(|(ri, pi)| *ri -= s * pi);
        }
        // Re-orthogonalize; the corrections are at rounding level in exact arithmetic.
        for _ in 0..2 {
            for q in &basis {
                let proj = inner(&r, q);
                r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= proj * qi);
            }
        }
        let bk = inner(&r, &r);
        let norm_k = norms[k - 1] * bk;
        if bk.is_nan() || bk <= 0.0 || norm_k.is_nan() || norm_k <= STIELTJES_BREAKDOWN * norm0 {
            return Err(Error::NumericalBreakdown { degree: k });
        }
        norms.push(norm_k);
        b.push(bk);
        let s = bk.sqrt();
        let qnext: Vec<f64> = r.iter().map(|ri| ri / s).collect();
        let xq: Vec<f64> = x.iter().zip(&qnext).map(|(xi, qi)| xi * qi).collect();
        a.push(inner(&xq, &qnext));
        basis.push(qnext);
    }
    Ok(StieltjesOutput { coefficients: JacobiCoefficients::new(a, b)?, norms_squared: norms })
}

/// `m_k = Σ w_n x_n^k` for `k = 1 … kmax`.
pub fn moments_from_atoms(mu: &AtomicMeasure, kmax: usize) -> MomentVector {
    let mut m = vec![0.0; kmax];
    for (&x, &w) in mu.atoms().iter().zip(mu.weights()) {
        let mut p = w;
        for mk in m.iter_mut() {
            p *= x;
            *mk += p;
        }
    }
    MomentVector(m)
}

/// Determinants of the three N×N moment matrices `[m_{i+j}]`, `[m_{i+j+1}]`
/// and `[m_{i+j} − m_{i+j+1}]`, `i, j = 0 … N−1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelDeterminants {
    pub even: f64,
    pub odd: f64,
    pub bar: f64,
}

/// Hankel determinants by pivoted LU. Test-scale only: these matrices are
/// exponentially ill-conditioned in N.
pub fn hankel_determinants(m: &MomentVector, n: usize) -> Result<HankelDeterminants> {
    if n == 0 || m.len() < 2 * n - 1 {
        return Err(Error::LengthMismatch(format!(
            "need {} moments for N = {n}, got {}",
            2 * n - 1,
            m.len()
        )));
    }
    let even = DMatrix::from_fn(n, n, |i, j| m.get(i + j));
    let odd = DMatrix::from_fn(n, n, |i, j| m.get(i + j + 1));
    let bar = DMatrix::from_fn(n, n, |i, j| m.get(i + j) - m.get(i + j + 1));
    Ok(HankelDeterminants { even: even.determinant(), odd: odd.determinant(), bar: bar.determinant() })
}

/// Absolute determinant of the central finite-difference Jacobian of `f` at `x`.
///
/// Coordinate `i` is perturbed by `±h·max(1, |x_i|)`. `f` must return a vector
/// of the same length as `x`.
pub fn fd_jacobian_det<F>(f: F, x: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    let mut probe = x.to_vec();
    for i in 0..dim {
        let step = h * x[i].abs().max(1.0);
        probe[i] = x[i] + step;
        let plus = f(&probe)?;
        probe[i] = x[i] - step;
        let minus = f(&probe)?;
        probe[i] = x[i];
        if plus.len() != dim || minus.len() != dim {
            return Err(Error::LengthMismatch("map must be square".into()));
        }
        for r in 0..dim {
            jac[(r, i)] = (plus[r] - minus[r]) / (2.0 * step);
        }
    }
    let det = jac.determinant().abs();
    if !det.is_finite() || det == 0.0 {
        return Err(Error::SingularJacobian);
    }
    Ok(det)
}

/// Finite-difference estimate of `|∂(x_{1:N}, w_{1:N−1}) / ∂(a_{1:N}, b_{1:N−1})|`
/// through the composite map `(a, b) → eigendecomposition → (atoms, weights)`.
pub fn favard_jacobian_fd(mu: &AtomicMeasure, h: f64) -> Result<f64> {
    if !(1e-7..=1e-4).contains(&h) {
        return Err(Error::InvalidParameter(format!("step h = {h} outside [1e-7, 1e-4]")));
    }
    let n = mu.n();
    if n == 1 {
        return Ok(1.0);
    }
    let j = stieltjes_from_atoms(mu)?;
    let mut theta = j.a().to_vec();
    theta.extend_from_slice(j.b());
    let map = |p: &[f64]| -> Result<Vec<f64>> {
        let jac = JacobiCoefficients::new(p[..n].to_vec(), p[n..].to_vec())?;
        let s = spectral::eig_with_weights(&jac)?;
        let w = s.weights.as_ref().expect("weights requested");
        // decreasing atom order, matching AtomicMeasure
        let mut out: Vec<f64> = s.eigenvalues.iter().rev().copied().collect();
        out.extend(w.iter().rev().take(n - 1));
        Ok(out)
    };
    fd_jacobian_det(map, &theta, h)
}
