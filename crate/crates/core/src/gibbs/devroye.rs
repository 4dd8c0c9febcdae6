//! Exact rejection sampling of log-concave conditionals.
//!
//! With mode `m` and `u' < 0 < v'` solving `π(m + x) = π(m)/4`, set
//! `u = u'/2`, `v = v'/2`. The dominating function `h` is
//!
//! * `π(m)` on `[m+u, m+v]`,
//! * `π(m+u)` on `[m+2u, m+u]` and `π(m+v)` on `[m+v, m+2v]`,
//! * `π(m)·4^{−x/(2v)}` for `x = t − m ≥ 2v`, mirrored on the left with `u`.
//!
//! Log-concavity puts `log π` below the chord through `(m, π(m))` and
//! `(m+2v, π(m)/4)`, hence below the tails, and `∫h ≤ 5∫π`.

use std::f64::consts::LN_2;

use super::conditional::ConditionalDensity;
use crate::error::{Error, Result};
use crate::poly;
use crate::random::RngStream;

const LN_4: f64 = 2.0 * LN_2;
const MODE_TOL: f64 = 1e-12;
const EDGE_BISECTIONS: usize = 80;

/// Plateau-plus-tails envelope; heights are stored relative to `π(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DevroyeEnvelope {
    density: ConditionalDensity,
    mode: f64,
    log_peak: f64,
    u: f64,
    v: f64,
    left_tail: bool,
    left_height: f64,
    right_height: f64,
    masses: [f64; 5],
}

impl DevroyeEnvelope {
    pub fn new(d: &ConditionalDensity) -> Result<Self> {
        if !d.is_proper() || !d.is_log_concave() {
            return Err(Error::NotLogConcave);
        }
        let density = d.clone();
        let mode = find_mode(&density);
        let log_peak = log_pi(&density, mode);
        let rel = |x: f64| log_pi(&density, x) - log_peak;

        let v = 0.5 * edge_distance(|t| rel(mode + t), None);
        let (u, left_tail) = if density.is_off_diagonal() {
            if mode <= 0.0 {
                (0.0, false)
            } else if rel(0.0) > -LN_4 {
                (-0.5 * mode, false)
            } else {
                (-0.5 * edge_distance(|t| rel(mode - t), Some(mode)), true)
            }
        } else {
            (-0.5 * edge_distance(|t| rel(mode - t), None), true)
        };

        let right_height = rel(mode + v).exp();
        let left_height = if u < 0.0 { rel(mode + u).exp() } else { 0.0 };
        let masses = [
            v - u,
            v * right_height,
            -u * left_height,
            2.0 * v / LN_4 / 4.0,
            if left_tail { -2.0 * u / LN_4 / 4.0 } else { 0.0 },
        ];
        Ok(Self { density, mode, log_peak, u, v, left_tail, left_height, right_height, masses })
    }

    pub fn mode(&self) -> f64 {
        self.mode
    }

    /// Half-distance `u = u'/2 ≤ 0` to the left quarter-height point.
    pub fn u(&self) -> f64 {
        self.u
    }

    /// Half-distance `v = v'/2 > 0` to the right quarter-height point.
    pub fn v(&self) -> f64 {
        self.v
    }

    /// Envelope mass in units of `π(m)`.
    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `log h(x) − log π(m)`; `−∞` where the envelope vanishes.
    pub fn log_envelope(&self, x: f64) -> f64 {
        let t = x - self.mode;
        let (u, v) = (self.u, self.v);
        if let Some(lo) = self.density.lower_bound() {
            if x < lo {
                return f64::NEG_INFINITY;
            }
        }
        if t >= 2.0 * v {
            -LN_4 * t / (2.0 * v)
        } else if t > v {
            self.right_height.ln()
        } else if t >= u {
            0.0
        } else if t >= 2.0 * u {
            self.left_height.ln()
        } else if self.left_tail {
            -LN_4 * t / (2.0 * u)
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `log π(x) − log π(m)`.
    pub fn log_target(&self, x: f64) -> f64 {
        log_pi(&self.density, x) - self.log_peak
    }

    /// One exact draw and the number of proposals it took.
    pub fn sample(&self, rng: &mut RngStream) -> (f64, u64) {
        let total = self.total_mass();
        let (m, u, v) = (self.mode, self.u, self.v);
        let mut trials = 0;
        loop {
            trials += 1;
            let mut pick = rng.uniform() * total;
            let mut piece = 0;
            while piece < 4 && pick >= self.masses[piece] {
                pick -= self.masses[piece];
                piece += 1;
            }
            let x = match piece {
                0 => m + u + (v - u) * rng.uniform(),
                1 => m + v + v * rng.uniform(),
                2 => m + 2.0 * u - u * rng.uniform(),
                3 => m + 2.0 * v + 2.0 * v / LN_4 * rng.exponential(),
                _ => m + 2.0 * u + 2.0 * u / LN_4 * rng.exponential(),
            };
            let log_h = self.log_envelope(x);
            if log_h == f64::NEG_INFINITY {
                continue;
            }
            if rng.uniform().ln() + log_h <= self.log_target(x) {
                return (x, trials);
            }
        }
    }
}

/// Log density including the boundary value at 0 for off-diagonal entries.
fn log_pi(d: &ConditionalDensity, x: f64) -> f64 {
    if d.is_off_diagonal() && x <= 0.0 {
        return if x == 0.0 && d.shape == 1.0 { -d.poly_value(0.0) } else { f64::NEG_INFINITY };
    }
    d.log_density(x)
}

/// Root of the decreasing score `(log π)'`, or 0 when an off-diagonal
/// density is decreasing on its whole support.
fn find_mode(d: &ConditionalDensity) -> f64 {
    if d.is_off_diagonal() {
        if d.shape == 1.0 && d.poly_derivative(0.0) >= 0.0 {
            return 0.0;
        }
        let score = |x: f64| d.grad_log_density(x);
        let mut hi = 1.0;
        while score(hi) > 0.0 {
            hi *= 2.0;
        }
        return poly::bisect(score, 0.0, hi, MODE_TOL, 400);
    }
    let score = |x: f64| -d.poly_derivative(x);
    let s0 = score(0.0);
    if s0 == 0.0 {
        return 0.0;
    }
    let dir = s0.signum();
    let mut step = 1.0;
    while score(dir * step) * dir > 0.0 {
        step *= 2.0;
    }
    let (lo, hi) = if dir > 0.0 { (0.0, step) } else { (-step, 0.0) };
    poly::bisect(score, lo, hi, MODE_TOL, 400)
}

/// Smallest `t > 0` with `rel(t) = −ln 4`: a geometric bracket from 1, capped
/// at `cap`, followed by bisection.
fn edge_distance<F: Fn(f64) -> f64>(rel: F, cap: Option<f64>) -> f64 {
    let mut hi = cap.map_or(1.0, |c| c.min(1.0));
    while rel(hi) > -LN_4 {
        hi *= 2.0;
        if let Some(c) = cap {
            hi = hi.min(c);
        }
    }
    let mut lo = 0.0;
    for _ in 0..EDGE_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if rel(mid) > -LN_4 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One exact draw from a log-concave conditional.
pub fn devroye_sample(d: &ConditionalDensity, rng: &mut RngStream) -> Result<f64> {
    Ok(DevroyeEnvelope::new(d)?.sample(rng).0)
}
