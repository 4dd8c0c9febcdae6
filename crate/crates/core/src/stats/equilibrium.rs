//! Equilibrium measures: closed-form classical limits and the one-cut /
//! symmetric two-cut solutions for polynomial potentials.
//!
//! For a one-cut support `[c − r, c + r]` write `V'(c + r t) = Σ v_k T_k(t)`.
//! The endpoint conditions are `v_0 = 0` and `r·v_1 = 4`, and the density is
//!
//! ```text
//! ρ(c + r t) = √(1 − t²) / (2π) · Σ_{k ≥ 1} v_k U_{k−1}(t).
//! ```
//!
//! A symmetric measure on two cuts pushes forward under `s = x²` to the
//! one-cut equilibrium measure `ν` of `Ṽ(s) = 2V(√s)`, and `ρ(x) = |x|·ρ_ν(x²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};
use crate::gibbs::PolynomialPotential;
use crate::poly;

const CDF_NODES: usize = 64;
const CHEB_NODES: usize = 8;
const EDGE_FIT_FRACTION: f64 = 0.02;

/// Closed-form limits of the rescaled classical ensembles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum ClassicalLaw {
    /// Semicircle on [−2, 2].
    Semicircle,
    /// Marchenko–Pastur with ratio `λ = N/M ∈ (0, 1]` and unit mean.
    MarchenkoPastur { ratio: f64 },
    /// Arcsine law on [0, 1].
    Arcsine,
}

#[derive(Debug, Clone, PartialEq)]
enum Density {
    Semicircle { center: f64, radius: f64 },
    MarchenkoPastur { ratio: f64 },
    Arcsine { lo: f64, hi: f64 },
    OneCut(OneCut),
    TwoCut(OneCut),
}

/// Solution on `[c − r, c + r]`; `h` holds the coefficients of `Σ v_k U_{k−1}`
/// in the basis `U_0, U_1, …`.
#[derive(Debug, Clone, PartialEq)]
struct OneCut {
    c: f64,
    r: f64,
    h: Vec<f64>,
}

impl OneCut {
    fn factor(&self, t: f64) -> f64 {
        // Clenshaw for Σ h_j U_j(t)
        let (mut b1, mut b2) = (0.0, 0.0);
        for &hj in self.h.iter().rev() {
            let b0 = hj + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        b1
    }

    fn pdf(&self, x: f64) -> f64 {
        let t = (x - self.c) / self.r;
        if t.abs() >= 1.0 {
            return 0.0;
        }
        ((1.0 - t * t).sqrt() * self.factor(t) / (2.0 * PI)).max(0.0)
    }

    /// `ρ(x) ≈ c·√(E − x)` at `E = c + r`.
    fn edge_coefficient(&self) -> f64 {
        self.factor(1.0) / (2.0 * PI) * (2.0 / self.r).sqrt()
    }

    fn edges(&self) -> (f64, f64) {
        (self.c - self.r, self.c + self.r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumMeasure {
    density: Density,
    support: Vec<(f64, f64)>,
    masses: Vec<f64>,
    nodes: (Vec<f64>, Vec<f64>),
}

impl EquilibriumMeasure {
    fn from_density(density: Density) -> Self {
        let support = match &density {
            Density::Semicircle { center, radius } => vec![(center - radius, center + radius)],
            Density::MarchenkoPastur { ratio } => {
                let s = ratio.sqrt();
                vec![((1.0 - s).powi(2), (1.0 + s).powi(2))]
            }
            Density::Arcsine { lo, hi } => vec![(*lo, *hi)],
            Density::OneCut(oc) => vec![oc.edges()],
            Density::TwoCut(nu) => {
                let (a, b) = nu.edges();
                vec![(-b.sqrt(), -a.sqrt()), (a.sqrt(), b.sqrt())]
            }
        };
        let mut m = Self { density, support, masses: Vec::new(), nodes: gauss_legendre(CDF_NODES) };
        m.masses = m.support.iter().map(|&(lo, hi)| m.integrate(lo, hi, hi)).collect();
        m
    }

    /// Support intervals, ascending.
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    pub fn left_edge(&self) -> f64 {
        self.support[0].0
    }

    pub fn right_edge(&self) -> f64 {
        self.support[self.support.len() - 1].1
    }

    pub fn is_two_cut(&self) -> bool {
        self.support.len() == 2
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.density {
            Density::Semicircle { center, radius } => {
                let t = (x - center) / radius;
                if t.abs() >= 1.0 {
                    0.0
                } else {
                    2.0 / (PI * radius) * (1.0 - t * t).sqrt()
                }
            }
            Density::MarchenkoPastur { ratio } => {
                let (a, b) = self.support[0];
                if x <= a || x >= b || x <= 0.0 {
                    0.0
                } else {
                    ((b - x) * (x - a)).sqrt() / (2.0 * PI * ratio * x)
                }
            }
            Density::Arcsine { lo, hi } => {
                if x <= *lo || x >= *hi {
                    0.0
                } else {
                    1.0 / (PI * ((x - lo) * (hi - x)).sqrt())
                }
            }
            Density::OneCut(oc) => oc.pdf(x),
            Density::TwoCut(nu) => x.abs() * nu.pdf(x * x),
        }
    }

    /// `∫_{lo}^{x} pdf` over one support interval `[lo, hi]`, integrated in
    /// `x = lo + (hi − lo)(1 − cos θ)/2`, which removes the edge singularities.
    fn integrate(&self, lo: f64, hi: f64, x: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let theta_max = (1.0 - (x - lo) / half).clamp(-1.0, 1.0).acos();
        let (t, w) = &self.nodes;
        let mut s = 0.0;
        for (ti, wi) in t.iter().zip(w) {
            let th = 0.5 * theta_max * (ti + 1.0);
            let xi = lo + half * (1.0 - th.cos());
            s += wi * self.pdf_in_theta(lo, hi, xi, th);
        }
        s * 0.5 * theta_max * half
    }

    /// `pdf(x)·sin θ`, evaluated without dividing by vanishing square roots.
    fn pdf_in_theta(&self, lo: f64, hi: f64, x: f64, th: f64) -> f64 {
        match &self.density {
            Density::Arcsine { .. } => 2.0 / (PI * (hi - lo)),
            Density::MarchenkoPastur { ratio } => {
                let half = 0.5 * (hi - lo);
                half * th.sin().powi(2) / (2.0 * PI * ratio * x)
            }
            _ => self.pdf(x) * th.sin(),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x >= self.right_edge() {
            return 1.0;
        }
        let mut total = 0.0;
        for (&(lo, hi), &mass) in self.support.iter().zip(&self.masses) {
            if x >= hi {
                total += mass;
            } else if x > lo {
                total += self.integrate(lo, hi, x);
            }
        }
        total.clamp(0.0, 1.0)
    }

    /// `c` in `pdf(x) ≈ c·√(E − x)` at the right edge `E`, from the closed form.
    pub fn edge_coefficient(&self) -> Result<f64> {
        match &self.density {
            Density::Semicircle { radius, .. } => Ok(2.0 / (PI * radius) * (2.0 / radius).sqrt()),
            Density::MarchenkoPastur { ratio } => Ok(ratio.powf(-0.75) / (PI * (1.0 + ratio.sqrt()).powi(2))),
            Density::Arcsine { .. } => Err(Error::NoSoftEdge),
            Density::OneCut(oc) => Ok(oc.edge_coefficient()),
            Density::TwoCut(nu) => {
                let e = self.right_edge();
                Ok(e * nu.edge_coefficient() * (2.0 * e).sqrt())
            }
        }
    }

    /// Edge coefficient estimated from the density alone: intercept of a
    /// least-squares line through `pdf(x)/√(E − x)` against `E − x` on the
    /// last 2% of the support.
    pub fn fitted_edge_coefficient(&self) -> Result<f64> {
        if matches!(self.density, Density::Arcsine { .. }) {
            return Err(Error::NoSoftEdge);
        }
        let e = self.right_edge();
        let width = EDGE_FIT_FRACTION * (e - self.left_edge());
        let m = 200;
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for i in 1..=m {
            let d = width * i as f64 / m as f64;
            let y = self.pdf(e - d) / d.sqrt();
            sx += d;
            sy += y;
            sxx += d * d;
            sxy += d * y;
        }
        let mf = m as f64;
        let slope = (mf * sxy - sx * sy) / (mf * sxx - sx * sx);
        let c = (sy - slope * sx) / mf;
        if c > 0.0 {
            Ok(c)
        } else {
            Err(Error::NoSoftEdge)
        }
    }
}

pub fn equilibrium_classical(law: ClassicalLaw) -> Result<EquilibriumMeasure> {
    let density = match law {
        ClassicalLaw::Semicircle => Density::Semicircle { center: 0.0, radius: 2.0 },
        ClassicalLaw::MarchenkoPastur { ratio } => {
            if !(ratio > 0.0 && ratio <= 1.0) {
                return Err(Error::InvalidParameter(format!("Marchenko-Pastur ratio {ratio} outside (0, 1]")));
            }
            Density::MarchenkoPastur { ratio }
        }
        ClassicalLaw::Arcsine => Density::Arcsine { lo: 0.0, hi: 1.0 },
    };
    Ok(EquilibriumMeasure::from_density(density))
}

/// Equilibrium measure of a rescaled polynomial potential (the coefficients
/// are used as given; see `PolynomialPotential::rescaled_equivalent`).
pub fn equilibrium_polynomial(v: &PolynomialPotential) -> Result<EquilibriumMeasure> {
    let dv = poly::derivative(v.coefficients());
    if let Some(oc) = solve_one_cut(&dv, v.is_even()) {
        return Ok(EquilibriumMeasure::from_density(Density::OneCut(oc)));
    }
    if v.is_even() {
        // Ṽ(s) = 2V(√s) = 2(g_2 s + g_4 s² + g_6 s³)
        let tilde = [0.0, 2.0 * v.g(2), 2.0 * v.g(4), 2.0 * v.g(6)];
        if let Some(nu) = solve_one_cut(&poly::derivative(&tilde), false) {
            if nu.c - nu.r > 0.0 {
                return Ok(EquilibriumMeasure::from_density(Density::TwoCut(nu)));
            }
        }
    }
    Err(Error::UnsupportedPotential(
        "equilibrium measure is neither one-cut nor symmetric two-cut".into(),
    ))
}

/// Chebyshev coefficients `v_k` of `V'(c + r t)`.
fn chebyshev_coefficients(dv: &[f64], c: f64, r: f64) -> [f64; CHEB_NODES] {
    let m = CHEB_NODES as f64;
    let mut out = [0.0; CHEB_NODES];
    for (k, ok) in out.iter_mut().enumerate() {
        let mut s = 0.0;
        for j in 0..CHEB_NODES {
            let th = PI * (j as f64 + 0.5) / m;
            s += poly::eval(dv, c + r * th.cos()) * (k as f64 * th).cos();
        }
        *ok = 2.0 * s / m;
    }
    out[0] *= 0.5;
    out
}

fn endpoint_residual(dv: &[f64], c: f64, r: f64) -> [f64; 2] {
    let v = chebyshev_coefficients(dv, c, r);
    [v[0], r * v[1] - 4.0]
}

fn build(dv: &[f64], c: f64, r: f64) -> Option<OneCut> {
    let v = chebyshev_coefficients(dv, c, r);
    let mut h: Vec<f64> = v[1..].to_vec();
    let scale = h.iter().map(|x| x.abs()).fold(0.0, f64::max);
    while h.len() > 1 && h.last().is_some_and(|x| x.abs() <= 1e-13 * scale) {
        h.pop();
    }
    let oc = OneCut { c, r, h };
    let tol = 1e-10 * scale;
    let nonneg = (0..=2000).all(|i| oc.factor(-1.0 + i as f64 / 1000.0) >= -tol);
    nonneg.then_some(oc)
}

/// Positive roots of `r ↦ r·v_1(c, r) − 4`, largest first.
fn radius_candidates(dv: &[f64], c: f64) -> Vec<f64> {
    let g = |r: f64| endpoint_residual(dv, c, r)[1];
    let mut hi = 1.0;
    let mut grow = 0;
    while g(hi) <= 0.0 && grow < 200 {
        hi *= 2.0;
        grow += 1;
    }
    let steps = 4000;
    let mut roots = Vec::new();
    let mut prev = (hi * 1e-6, g(hi * 1e-6));
    for i in 1..=steps {
        let r = hi * i as f64 / steps as f64;
        let gr = g(r);
        if (gr > 0.0) != (prev.1 > 0.0) {
            roots.push(poly::bisect(g, prev.0, r, 0.0, 200));
        }
        prev = (r, gr);
    }
    roots.reverse();
    roots
}

fn solve_one_cut(dv: &[f64], symmetric: bool) -> Option<OneCut> {
    if symmetric {
        return radius_candidates(dv, 0.0).into_iter().find_map(|r| build(dv, 0.0, r));
    }
    radius_candidates(dv, 0.0).into_iter().find_map(|r0| {
        let (c, r) = newton(dv, 0.0, r0)?;
        build(dv, c, r)
    })
}

/// Damped Newton on the endpoint conditions with a finite-difference Jacobian.
fn newton(dv: &[f64], mut c: f64, mut r: f64) -> Option<(f64, f64)> {
    let norm = |f: [f64; 2]| f[0].hypot(f[1]);
    let mut f = endpoint_residual(dv, c, r);
    for _ in 0..200 {
        if norm(f) < 1e-14 {
            return Some((c, r));
        }
        let h = 1e-7 * (1.0 + c.abs().max(r));
        let fc = endpoint_residual(dv, c + h, r);
        let fr = endpoint_residual(dv, c, r + h);
        let j = [[(fc[0] - f[0]) / h, (fr[0] - f[0]) / h], [(fc[1] - f[1]) / h, (fr[1] - f[1]) / h]];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dc = (j[1][1] * f[0] - j[0][1] * f[1]) / det;
        let dr = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let mut lambda = 1.0;
        loop {
            let (cn, rn) = (c - lambda * dc, r - lambda * dr);
            if rn > 0.0 {
                let fnew = endpoint_residual(dv, cn, rn);
                if norm(fnew) < norm(f) {
                    c = cn;
                    r = rn;
                    f = fnew;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                return (norm(f) < 1e-10).then_some((c, r));
            }
        }
    }
    (norm(f) < 1e-10).then_some((c, r))
}

/// Soft-edge rescaling `s = (x_max − E)·N^{2/3}·(π c)^{2/3}`.
pub fn edge_rescale(x_max: f64, n: usize, eq: &EquilibriumMeasure) -> Result<f64> {
    let c = eq.edge_coefficient()?;
    Ok((x_max - eq.right_edge()) * (n as f64).powf(2.0 / 3.0) * (PI * c).powf(2.0 / 3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn semicircle_basics() {
        let m = equilibrium_classical(ClassicalLaw::Semicircle).unwrap();
        assert_relative_eq!(m.pdf(0.0), 1.0 / PI, epsilon = 1e-15);
        assert_eq!(m.support(), &[(-2.0, 2.0)]);
        assert_relative_eq!(m.cdf(0.0), 0.5, epsilon = 1e-13);
        assert_relative_eq!(m.cdf(2.0), 1.0, epsilon = 1e-13);
        assert_relative_eq!(m.edge_coefficient().unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert_eq!(edge_rescale(2.0, 100, &m).unwrap(), 0.0);
    }

    #[test]
    fn arcsine_and_mp() {
        let a = equilibrium_classical(ClassicalLaw::Arcsine).unwrap();
        assert_relative_eq!(a.cdf(0.5), 0.5, epsilon = 1e-13);
        assert_relative_eq!(a.cdf(0.25), 2.0 / PI * 0.25f64.sqrt().asin(), epsilon = 1e-13);
        assert_eq!(a.edge_coefficient(), Err(Error::NoSoftEdge));
        let mp = equilibrium_classical(ClassicalLaw::MarchenkoPastur { ratio: 1.0 }).unwrap();
        assert_eq!(mp.right_edge(), 4.0);
        assert_relative_eq!(mp.cdf(4.0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(mp.edge_coefficient().unwrap(), 1.0 / (4.0 * PI), epsilon = 1e-15);
        let mp = equilibrium_classical(ClassicalLaw::MarchenkoPastur { ratio: 0.3 }).unwrap();
        assert_relative_eq!(mp.cdf(mp.right_edge()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_is_semicircle() {
        let v = PolynomialPotential::quadratic(0.5, true).unwrap();
        let m = equilibrium_polynomial(&v).unwrap();
        let (lo, hi) = m.support()[0];
        assert_relative_eq!(lo, -2.0, epsilon = 1e-10);
        assert_relative_eq!(hi, 2.0, epsilon = 1e-10);
        let sc = equilibrium_classical(ClassicalLaw::Semicircle).unwrap();
        for i in 0..=100 {
            let x = -2.5 + 5.0 * i as f64 / 100.0;
            assert!((m.pdf(x) - sc.pdf(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn shifted_quadratic() {
        // (x − 1)²/2 + const: semicircle centred at 1
        let v = PolynomialPotential::new([-1.0, 0.5, 0.0, 0.0, 0.0, 0.0], true).unwrap();
        let m = equilibrium_polynomial(&v).unwrap();
        let (lo, hi) = m.support()[0];
        assert_relative_eq!(lo, -1.0, epsilon = 1e-9);
        assert_relative_eq!(hi, 3.0, epsilon = 1e-9);
    }

    #[test]
    fn double_well_splits() {
        let v = PolynomialPotential::quartic(-1.25, 0.25, true).unwrap();
        let m = equilibrium_polynomial(&v).unwrap();
        assert!(m.is_two_cut());
        let (a, b) = m.support()[1];
        assert_relative_eq!(a, 0.5f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(b, 4.5f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(m.cdf(0.0), 0.5, epsilon = 1e-12);
        assert_relative_eq!(m.cdf(3.0), 1.0, epsilon = 1e-12);
    }
}
