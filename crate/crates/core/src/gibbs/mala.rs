//! Metropolis-adjusted Langevin updates for univariate conditionals.
//!
//! Diagonal entries move on ℝ directly. Off-diagonal entries move in
//! `y = ln b`, where the target becomes `γ·y − poly(e^y)`.

use super::conditional::ConditionalDensity;
use crate::random::RngStream;

/// Endpoint of a run of MALA transitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MalaOutcome {
    pub value: f64,
    pub accepted: usize,
    pub steps: usize,
}

impl MalaOutcome {
    pub fn acceptance_rate(&self) -> f64 {
        if self.steps == 0 {
            return 0.0;
        }
        self.accepted as f64 / self.steps as f64
    }
}

/// Map from the entry's value to the coordinate MALA moves in.
pub fn to_working(d: &ConditionalDensity, x: f64) -> f64 {
    if d.is_off_diagonal() {
        x.ln()
    } else {
        x
    }
}

pub fn from_working(d: &ConditionalDensity, z: f64) -> f64 {
    if d.is_off_diagonal() {
        z.exp()
    } else {
        z
    }
}

/// Unnormalized log target in working coordinates.
pub fn working_log_target(d: &ConditionalDensity, z: f64) -> f64 {
    if d.is_off_diagonal() {
        let b = z.exp();
        if b == 0.0 || !b.is_finite() {
            return f64::NEG_INFINITY;
        }
        d.shape * z - d.poly_value(b)
    } else {
        -d.poly_value(z)
    }
}

pub fn working_gradient(d: &ConditionalDensity, z: f64) -> f64 {
    if d.is_off_diagonal() {
        let b = z.exp();
        d.shape - b * d.poly_derivative(b)
    } else {
        -d.poly_derivative(z)
    }
}

fn log_proposal(d: &ConditionalDensity, from: f64, to: f64, step: f64) -> f64 {
    let mean = from + 0.5 * step * step * working_gradient(d, from);
    let r = (to - mean) / step;
    -0.5 * r * r
}

/// Off-diagonal part of the transition kernel in working coordinates,
/// `q(z → z')·α(z, z')`, for `z ≠ z'`.
pub fn mala_transition_density(d: &ConditionalDensity, z: f64, z_new: f64, step: f64) -> f64 {
    let log_q = log_proposal(d, z, z_new, step) - (step * (2.0 * std::f64::consts::PI).sqrt()).ln();
    let log_alpha = (working_log_target(d, z_new) + log_proposal(d, z_new, z, step)
        - working_log_target(d, z)
        - log_proposal(d, z, z_new, step))
    .min(0.0);
    (log_q + log_alpha).exp()
}

/// `nsteps` MALA transitions started at `x0` (an entry value, not a working coordinate).
pub fn mala_update(d: &ConditionalDensity, x0: f64, step: f64, nsteps: usize, rng: &mut RngStream) -> MalaOutcome {
    let mut z = to_working(d, x0);
    let mut lp = working_log_target(d, z);
    let mut grad = working_gradient(d, z);
    let mut accepted = 0;
    let h2 = 0.5 * step * step;
    for _ in 0..nsteps {
        let prop = z + h2 * grad + step * rng.normal();
        let lp_new = working_log_target(d, prop);
        let u = rng.uniform();
        if !lp_new.is_finite() {
            continue;
        }
        let grad_new = working_gradient(d, prop);
        let fwd = prop - z - h2 * grad;
        let bwd = z - prop - h2 * grad_new;
        let log_ratio = lp_new - lp - 0.5 * (bwd * bwd - fwd * fwd) / (step * step);
        if u.ln() < log_ratio {
            z = prop;
            lp = lp_new;
            grad = grad_new;
            accepted += 1;
        }
    }
    let value = if accepted == 0 { x0 } else { from_working(d, z) };
    MalaOutcome { value, accepted, steps: nsteps }
}
