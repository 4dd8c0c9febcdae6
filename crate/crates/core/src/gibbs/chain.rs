use serde::{Deserialize, Serialize};

use super::conditional::{conditional_for_a, conditional_for_b, ConditionalDensity};
use super::devroye::DevroyeEnvelope;
use super::mala::mala_update;
use super::potential::PolynomialPotential;
use crate::error::{Error, Result};
use crate::random::RngStream;
use crate::spectral::{eigvals_tridiagonal, SpectralSample};
use crate::tridiag::JacobiCoefficients;

/// Starting value of every `b_n`; zero lies outside the state space.
pub const INITIAL_B: f64 = 1e-3;

const TARGET_ACCEPTANCE: f64 = 0.574;
const ADAPT_RATE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MalaConfig {
    /// Initial step size, in units of the conditional's natural width `1/√(βN/2)`
    /// when the potential is rescaled.
    pub step_size: f64,
    pub steps_per_update: usize,
    /// Tune step sizes toward acceptance 0.574 during the first tenth of a run.
    pub adapt: bool,
}

impl MalaConfig {
    pub fn default_for(v: &PolynomialPotential) -> Self {
        Self { step_size: 0.5, steps_per_update: if v.degree() >= 6 { 100 } else { 1 }, adapt: true }
    }
}

/// Counters for how conditionals were sampled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStats {
    pub devroye_draws: u64,
    pub devroye_trials: u64,
    pub mala_updates: u64,
    pub mala_steps: u64,
    pub mala_accepted: u64,
}

#[derive(Debug, Clone)]
pub struct GibbsChain {
    coefficients: JacobiCoefficients,
    potential: PolynomialPotential,
    beta: f64,
    pass: usize,
    rng: RngStream,
    mala: MalaConfig,
    step_a: f64,
    step_b: f64,
    adapt_until: Option<usize>,
    stats: ChainStats,
}

impl GibbsChain {
    /// Chain started at `a = 0`, `b = INITIAL_B`.
    pub fn new(n: usize, potential: PolynomialPotential, beta: f64, mala: MalaConfig, rng: RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        let start = JacobiCoefficients::new(vec![0.0; n], vec![INITIAL_B; n - 1])?;
        Self::from_coefficients(start, potential, beta, mala, rng)
    }

    pub fn from_coefficients(
        coefficients: JacobiCoefficients,
        potential: PolynomialPotential,
        beta: f64,
        mala: MalaConfig,
        rng: RngStream,
    ) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be positive")));
        }
        if !(mala.step_size > 0.0 && mala.step_size.is_finite()) || mala.steps_per_update == 0 {
            return Err(Error::InvalidParameter("MALA needs step_size > 0 and steps_per_update ≥ 1".into()));
        }
        let width = potential.weight(beta, coefficients.n()).sqrt().recip();
        let step = mala.step_size * width;
        Ok(Self {
            coefficients,
            potential,
            beta,
            pass: 0,
            rng,
            mala,
            step_a: step,
            step_b: mala.step_size,
            adapt_until: None,
            stats: ChainStats::default(),
        })
    }

    pub fn coefficients(&self) -> &JacobiCoefficients {
        &self.coefficients
    }

    pub fn potential(&self) -> &PolynomialPotential {
        &self.potential
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn pass(&self) -> usize {
        self.pass
    }

    pub fn n(&self) -> usize {
        self.coefficients.n()
    }

    pub fn mala(&self) -> &MalaConfig {
        &self.mala
    }

    /// Current (possibly adapted) step sizes for `a` and `log b`.
    pub fn step_sizes(&self) -> (f64, f64) {
        (self.step_a, self.step_b)
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    /// Pass index before which step sizes are tuned. Defaults to a tenth of
    /// the first `run_chain` call.
    pub fn set_adaptation_passes(&mut self, passes: usize) {
        self.adapt_until = Some(passes);
    }

    /// Whether diagonal conditionals go to the exact sampler: quartic or
    /// quadratic potentials with `g_2 ≥ 0` and `g_3 = 0`.
    pub fn exact_diagonal_updates(&self) -> bool {
        let v = &self.potential;
        v.g(3) == 0.0 && v.g(6) == 0.0 && v.g(2) >= 0.0
    }

    pub fn conditional_for_a(&self, i: usize) -> ConditionalDensity {
        conditional_for_a(i, &self.coefficients, &self.potential, self.beta)
    }

    pub fn conditional_for_b(&self, i: usize) -> ConditionalDensity {
        conditional_for_b(i, &self.coefficients, &self.potential, self.beta)
    }

    fn adapting(&self) -> bool {
        self.mala.adapt && self.adapt_until.is_some_and(|t| self.pass < t)
    }

    fn resample(&mut self, d: &ConditionalDensity, current: f64, exact: bool) -> f64 {
        if exact {
            if let Ok(env) = DevroyeEnvelope::new(d) {
                let (x, trials) = env.sample(&mut self.rng);
                self.stats.devroye_draws += 1;
                self.stats.devroye_trials += trials;
                return x;
            }
        }
        let off = d.is_off_diagonal();
        let step = if off { self.step_b } else { self.step_a };
        let out = mala_update(d, current, step, self.mala.steps_per_update, &mut self.rng);
        self.stats.mala_updates += 1;
        self.stats.mala_steps += out.steps as u64;
        self.stats.mala_accepted += out.accepted as u64;
        if self.adapting() {
            let tuned = step * (ADAPT_RATE * (out.acceptance_rate() - TARGET_ACCEPTANCE)).exp();
            if off {
                self.step_b = tuned;
            } else {
                self.step_a = tuned;
            }
        }
        out.value
    }

    /// One systematic sweep: `a_1, b_1, a_2, b_2, …, a_N`.
    pub fn step(&mut self) -> Result<()> {
        let n = self.n();
        let exact_a = self.exact_diagonal_updates();
        for i in 0..n {
            let d = self.conditional_for_a(i);
            let x = self.resample(&d, self.coefficients.a()[i], exact_a);
            if !x.is_finite() {
                return Err(Error::NonFinite("diagonal update"));
            }
            self.coefficients.set_a(i, x);
            if i + 1 < n {
                let d = self.conditional_for_b(i);
                let x = self.resample(&d, self.coefficients.b()[i], true);
                if !(x > 0.0 && x.is_finite()) {
                    return Err(Error::NonPositiveOffDiagonal { index: i, value: x });
                }
                self.coefficients.set_b(i, x);
            }
        }
        self.pass += 1;
        Ok(())
    }
}

/// One Gibbs pass over all coefficients.
pub fn gibbs_pass(chain: &mut GibbsChain) -> Result<()> {
    chain.step()
}

/// Runs `passes` Gibbs passes, recording the spectrum every `snapshot_every` passes.
pub fn run_chain(chain: &mut GibbsChain, passes: usize, snapshot_every: usize) -> Result<Vec<SpectralSample>> {
    if passes == 0 || snapshot_every == 0 {
        return Err(Error::InvalidParameter("passes and snapshot_every must be at least 1".into()));
    }
    if chain.adapt_until.is_none() {
        chain.adapt_until = Some(chain.pass + passes.div_ceil(10));
    }
    let mut snapshots = Vec::with_capacity(passes / snapshot_every);
    for t in 1..=passes {
        chain.step()?;
        if t % snapshot_every == 0 {
            snapshots.push(eigvals_tridiagonal(&chain.coefficients)?);
        }
    }
    Ok(snapshots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapshot_shape_and_determinism() {
        let v = PolynomialPotential::quartic(0.0, 0.25, true).unwrap();
        let mk = || GibbsChain::new(12, v, 2.0, MalaConfig::default_for(&v), RngStream::new(5, 2)).unwrap();
        let mut c = mk();
        let snaps = run_chain(&mut c, 3, 1).unwrap();
        assert_eq!(snaps.len(), 3);
        for s in &snaps {
            assert_eq!(s.n(), 12);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
        assert_eq!(c.pass(), 3);
        assert_eq!(snaps, run_chain(&mut mk(), 3, 1).unwrap());
        assert_eq!(c.stats().mala_updates, 0);
    }

    #[test]
    fn single_coefficient_gaussian() {
        let v = PolynomialPotential::quadratic(2.0, false).unwrap();
        let mut c = GibbsChain::new(1, v, 2.0, MalaConfig::default_for(&v), RngStream::new(1, 0)).unwrap();
        let mut acc = (0.0, 0.0);
        let m = 20_000;
        for _ in 0..m {
            c.step().unwrap();
            let x = c.coefficients().a()[0];
            acc.0 += x;
            acc.1 += x * x;
        }
        let mean = acc.0 / m as f64;
        let var = acc.1 / m as f64 - mean * mean;
        assert!(mean.abs() < 0.02);
        assert!((var - 0.25).abs() < 0.02, "{var}");
    }

    #[test]
    fn sextic_routes_diagonal_to_mala() {
        let v = PolynomialPotential::sextic(0.0, 0.0, 1.0 / 6.0, true).unwrap();
        let mut cfg = MalaConfig::default_for(&v);
        assert_eq!(cfg.steps_per_update, 100);
        cfg.steps_per_update = 5;
        let mut c = GibbsChain::new(6, v, 2.0, cfg, RngStream::new(3, 1)).unwrap();
        run_chain(&mut c, 4, 2).unwrap();
        assert_eq!(c.stats().mala_updates, 24);
        assert!(c.coefficients().b().iter().all(|&b| b > 0.0));
    }
}
