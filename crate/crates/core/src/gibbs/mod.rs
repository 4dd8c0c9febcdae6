//! Gibbs and Metropolis-within-Gibbs sampling of Jacobi coefficients for
//! polynomial potentials of degree ≤ 6.

mod chain;
mod conditional;
mod devroye;
mod mala;
mod potential;

pub use chain::{gibbs_pass, run_chain, ChainStats, GibbsChain, MalaConfig, INITIAL_B};
pub use conditional::{conditional_for_a, conditional_for_b, ConditionalDensity, ConditionalKind};
pub use devroye::{devroye_sample, DevroyeEnvelope};
pub use mala::{
    from_working, mala_transition_density, mala_update, to_working, working_gradient, working_log_target, MalaOutcome,
};
pub use potential::{trace_potential, trace_power_sums, trace_power_sums_raw, PolynomialPotential, MAX_DEGREE};
