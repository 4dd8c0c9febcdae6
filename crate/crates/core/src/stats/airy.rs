//! Airy function `Ai` and its derivative on the real line.
//!
//! * `|x| ≤ 4.5`: Maclaurin series.
//! * `x > 4.5`: `Ai(x) = √(x/3)/π · K_{1/3}(ζ)`, `Ai'(x) = −x/(π√3) · K_{2/3}(ζ)`,
//!   `ζ = (2/3) x^{3/2}`, with `K_ν(z) = ∫_0^∞ e^{−z cosh t} cosh(ν t) dt`
//!   evaluated by the trapezoidal rule.
//! * `−10 < x < −4.5`: Taylor steps of `y'' = x y` from `x = −4.5`.
//! * `x ≤ −10`: the oscillatory asymptotic expansion.

use std::f64::consts::{FRAC_PI_4, PI};

const AI0: f64 = 0.355_028_053_887_817_2;
const AIP0: f64 = -0.258_819_403_792_806_8;
const SERIES_LIMIT: f64 = 4.5;
const ASYMPTOTIC_LIMIT: f64 = -10.0;
const TAYLOR_STEP: f64 = 0.25;

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        bessel_k_form(x)
    } else if x > ASYMPTOTIC_LIMIT {
        let start = maclaurin(-SERIES_LIMIT);
        taylor_walk(-SERIES_LIMIT, start, x)
    } else {
        oscillatory(x)
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy(x).0
}

fn maclaurin(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (AI0, AIP0);
    }
    // Ai = Ai(0)·f + Ai'(0)·g with f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}
    let x3 = x * x * x;
    let (mut f, mut g, mut fp, mut gp) = (1.0, x, 0.0, 1.0);
    let (mut a, mut b) = (1.0, x);
    for k in 1..200 {
        let kf = k as f64;
        a *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        f += a;
        g += b;
        fp += 3.0 * kf * a / x;
        gp += (3.0 * kf + 1.0) * b / x;
        if k > 2 && a.abs() + b.abs() < 1e-18 * (f.abs() + g.abs()) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * fp + AIP0 * gp)
}

/// `e^z·K_ν(z)` by the trapezoidal rule.
fn scaled_bessel_k(nu: f64, z: f64) -> f64 {
    let h = (0.5 / z.sqrt()).min(0.1);
    let mut s = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let term = (-z * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        s += term;
        if term < 1e-20 * s {
            break;
        }
        k += 1;
    }
    s * h
}

fn bessel_k_form(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let decay = (-zeta).exp();
    let ai = (x / 3.0).sqrt() / PI * scaled_bessel_k(1.0 / 3.0, zeta) * decay;
    let aip = -x / (PI * 3f64.sqrt()) * scaled_bessel_k(2.0 / 3.0, zeta) * decay;
    (ai, aip)
}

/// Integrates `y'' = x y` from `(x0, y, y')` to `x1` with truncated Taylor series.
fn taylor_walk(x0: f64, start: (f64, f64), x1: f64) -> (f64, f64) {
    let steps = ((x1 - x0).abs() / TAYLOR_STEP).ceil().max(1.0) as usize;
    let h = (x1 - x0) / steps as f64;
    let (mut y, mut yp) = start;
    let mut x = x0;
    for _ in 0..steps {
        // e_n = y^{(n)}(x)/n!,  e_{n+2} = (x e_n + e_{n−1}) / ((n+1)(n+2))
        let mut e = [0.0; 40];
        e[0] = y;
        e[1] = yp;
        for n in 0..38 {
            let prev = if n >= 1 { e[n - 1] } else { 0.0 };
            e[n + 2] = (x * e[n] + prev) / ((n + 1) as f64 * (n + 2) as f64);
        }
        let (mut ny, mut nyp) = (0.0, 0.0);
        for n in (0..40).rev() {
            ny = ny * h + e[n];
            if n >= 1 {
                nyp = nyp * h + n as f64 * e[n];
            }
        }
        y = ny;
        yp = nyp;
        x += h;
    }
    (y, yp)
}

fn oscillatory(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // c_k = Γ(3k+½)/(54^k k! Γ(k+½)),  d_k = −(6k+1)/(6k−1)·c_k
    let (mut p, mut q, mut pd, mut qd) = (0.0, 0.0, 0.0, 0.0);
    let mut c = 1.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            c *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0));
            zk /= zeta;
        }
        let d = if k == 0 { 1.0 } else { -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * c };
        let term = c * zk;
        if term.abs() > last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
            pd += sign * d * zk;
        } else {
            q += sign * term;
            qd += sign * d * zk;
        }
    }
    let phase = zeta + FRAC_PI_4;
    let (s, co) = phase.sin_cos();
    let amp = 1.0 / (PI.sqrt() * z.powf(0.25));
    let ai = amp * (s * p - co * q);
    let aip = -z.powf(0.25) / PI.sqrt() * (co * pd + s * qd);
    (ai, aip)
}
