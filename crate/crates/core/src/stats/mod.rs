//! Empirical distribution functions, Kolmogorov–Smirnov distances,
//! equilibrium measures and the Tracy–Widom F₂ law.

mod airy;
mod ecdf;
mod equilibrium;
mod quadrature;
mod tracy_widom;

pub use airy::{airy, airy_ai};
pub use ecdf::{ks_distance, ks_two_sample, EmpiricalCdf};
pub use equilibrium::{edge_rescale, equilibrium_classical, equilibrium_polynomial, ClassicalLaw, EquilibriumMeasure};
pub use quadrature::gauss_legendre;
pub use tracy_widom::{airy_kernel, tracy_widom2_cdf, DEFAULT_QUAD_ORDER};
