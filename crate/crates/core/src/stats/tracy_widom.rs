use nalgebra::DMatrix;

use super::airy::airy;
use super::quadrature::gauss_legendre;

pub const DEFAULT_QUAD_ORDER: usize = 64;
const MAP_SCALE: f64 = 10.0;

/// Airy kernel `K(x, y) = [Ai(x)Ai'(y) − Ai'(x)Ai(y)]/(x − y)`, with the
/// diagonal limit `Ai'(x)² − x Ai(x)²` near `x = y`.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    let (ax, apx) = airy(x);
    if (x - y).abs() < 1e-6 * (1.0 + x.abs()) {
        return apx * apx - x * ax * ax;
    }
    let (ay, apy) = airy(y);
    (ax * apy - apx * ay) / (x - y)
}

/// `F₂(s) = det(I − K_Ai)` on `L²(s, ∞)`, discretized by Gauss–Legendre
/// nodes pulled back through `x = s + L(1 + t)/(1 − t)`, `L = 10`.
pub fn tracy_widom2_cdf(s: f64, quad_order: usize) -> f64 {
    let m = quad_order.max(1);
    let (t, w) = gauss_legendre(m);
    let x: Vec<f64> = t.iter().map(|&ti| s + MAP_SCALE * (1.0 + ti) / (1.0 - ti)).collect();
    let sw: Vec<f64> = t
        .iter()
        .zip(&w)
        .map(|(&ti, &wi)| (wi * 2.0 * MAP_SCALE / ((1.0 - ti) * (1.0 - ti))).sqrt())
        .collect();
    let ai: Vec<(f64, f64)> = x.iter().map(|&xi| airy(xi)).collect();
    let mut k = DMatrix::<f64>::identity(m, m);
    for i in 0..m {
        for j in 0..m {
            let (ax, apx) = ai[i];
            let kij = if (x[i] - x[j]).abs() < 1e-6 * (1.0 + x[i].abs()) {
                apx * apx - x[i] * ax * ax
            } else {
                let (ay, apy) = ai[j];
                (ax * apy - apx * ay) / (x[i] - x[j])
            };
            k[(i, j)] -= sw[i] * kij * sw[j];
        }
    }
    k.determinant().clamp(0.0, 1.0)
}
