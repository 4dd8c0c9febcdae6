//! Implicit QL eigensolver for Jacobi matrices.
//!
//! Eigenvalues alone cost O(N²). The quadrature weights of the spectral measure
//! are the squared first components of the normalized eigenvectors; only the
//! first row of the accumulated rotation product is carried, so they come at
//! the same O(N²) price.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::{AtomicMeasure, JacobiCoefficients};

/// Maximum QL sweeps spent on any single eigenvalue.
pub const MAX_SWEEPS: usize = 50;

/// Eigenvalues sorted ascending, with optional spectral weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub eigenvalues: Vec<f64>,
    pub weights: Option<Vec<f64>>,
}

impl SpectralSample {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue.
    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    /// The spectral measure `Σ w_n δ_{λ_n}`; requires weights.
    pub fn to_measure(&self) -> Result<AtomicMeasure> {
        let w = self
            .weights
            .as_ref()
            .ok_or_else(|| Error::InvalidMeasure("spectral sample carries no weights".into()))?;
        AtomicMeasure::normalized(self.eigenvalues.clone(), w.clone())
    }
}

/// All eigenvalues of the Jacobi matrix, ascending.
pub fn eigvals_tridiagonal(j: &JacobiCoefficients) -> Result<SpectralSample> {
    let (mut d, mut e) = working_copy(j);
    implicit_ql(&mut d, &mut e, None)?;
    d.sort_by(f64::total_cmp);
    Ok(SpectralSample { eigenvalues: d, weights: None })
}

/// Eigenvalues with weights `w_n = (first eigenvector component)²`.
pub fn eig_with_weights(j: &JacobiCoefficients) -> Result<SpectralSample> {
    let (mut d, mut e) = working_copy(j);
    let mut z = vec![0.0; d.len()];
    z[0] = 1.0;
    implicit_ql(&mut d, &mut e, Some(&mut z))?;
    let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z.into_iter().map(|v| v * v)).collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (eigenvalues, weights) = pairs.into_iter().unzip();
    Ok(SpectralSample { eigenvalues, weights: Some(weights) })
}

fn working_copy(j: &JacobiCoefficients) -> (Vec<f64>, Vec<f64>) {
    let d = j.a().to_vec();
    let mut e: Vec<f64> = j.b().iter().map(|b| b.sqrt()).collect();
    e.push(0.0);
    (d, e)
}

/// Implicit QL with Wilkinson shifts on diagonal `d` and off-diagonal `e`
/// (`e[i]` couples `i` and `i+1`; `e[n-1]` is scratch). When `z` is given it
/// holds a row vector that receives every plane rotation.
fn implicit_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::ConvergenceFailure { index: l });
            }
            // Wilkinson shift from the leading 2×2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tridiag::{build_jacobi, stieltjes_from_atoms};
    use approx::assert_relative_eq;

    #[test]
    fn two_by_two() {
        let j = build_jacobi(vec![0.0, 0.0], vec![1.0]).unwrap();
        let s = eig_with_weights(&j).unwrap();
        assert_relative_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-15);
        let w = s.weights.unwrap();
        assert_relative_eq!(w[0], 0.5, epsilon = 1e-15);
        assert_relative_eq!(w[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn one_by_one() {
        let j = build_jacobi(vec![5.0], vec![]).unwrap();
        assert_eq!(eigvals_tridiagonal(&j).unwrap().eigenvalues, vec![5.0]);
        let s = eig_with_weights(&j).unwrap();
        assert_eq!(s.weights.unwrap(), vec![1.0]);
    }

    #[test]
    fn three_point_uniform() {
        let j = build_jacobi(vec![0.0; 3], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let s = eig_with_weights(&j).unwrap();
        for (got, want) in s.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
            assert_relative_eq!(*got, want, epsilon = 1e-14);
        }
        for w in s.weights.unwrap() {
            assert_relative_eq!(w, 1.0 / 3.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn roundtrip_through_measure() {
        let j = build_jacobi(vec![0.3, -1.2, 2.0, 0.1], vec![0.5, 1.7, 0.2]).unwrap();
        let mu = eig_with_weights(&j).unwrap().to_measure().unwrap();
        let back = stieltjes_from_atoms(&mu).unwrap();
        for (x, y) in back.a().iter().zip(j.a()) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
        for (x, y) in back.b().iter().zip(j.b()) {
            assert_relative_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn decoupled_blocks() {
        // tiny coupling: nearly block diagonal, still converges
        let j = build_jacobi(vec![1.0, 1.0, 3.0], vec![1e-300, 1.0]).unwrap();
        let s = eigvals_tridiagonal(&j).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 2.0 - 2f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(s.eigenvalues[2], 2.0 + 2f64.sqrt(), epsilon = 1e-14);
    }
}
