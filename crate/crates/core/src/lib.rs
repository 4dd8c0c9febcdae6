//! Samplers for β-ensembles on the real line.
//!
//! Three layers:
//!
//! * [`tridiag`] and [`spectral`]: the deterministic correspondence between an
//!   N-atomic probability measure, its recurrence coefficients `(a, b)` (a Jacobi
//!   matrix), the Cholesky parameters ξ and the canonical moments c, plus an
//!   implicit QL eigensolver that goes back from `(a, b)` to atoms and weights.
//! * [`ensembles`] and [`gibbs`]: exact O(N²) samplers for the Hermite, Laguerre
//!   and Jacobi ensembles, and a systematic-scan Gibbs sampler on Jacobi
//!   coefficients for polynomial potentials of degree at most six.
//! * [`stats`]: the verification toolkit (empirical CDFs, KS distances,
//!   equilibrium measures, soft-edge rescaling, Airy functions and the
//!   Tracy–Widom F₂ distribution).

pub mod ensembles;
pub mod error;
pub mod gibbs;
pub mod poly;
pub mod random;
pub mod spectral;
pub mod stats;
pub mod tridiag;

pub use error::{Error, Result};
pub use random::RngStream;
pub use spectral::SpectralSample;
pub use tridiag::{AtomicMeasure, CanonicalMoments, JacobiCoefficients, MomentVector, XiParams};
