//! Batch front end for `betaforge`: seeded parallel runs of the exact
//! tridiagonal samplers and of the Gibbs sampler, plus KS and Tracy–Widom
//! summaries of the resulting eigenvalue files.

pub mod analysis;
pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{ClassicalConfig, GibbsConfig, Manifest, RunConfig};
pub use error::{CliError, Result};
pub use run::run;
