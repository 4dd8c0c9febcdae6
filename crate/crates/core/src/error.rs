use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("off-diagonal entry b[{index}] = {value} is not positive")]
    NonPositiveOffDiagonal { index: usize, value: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("Jacobi matrix is not positive definite (xi[{index}] = {value})")]
    NotPositiveDefinite { index: usize, value: f64 },
    #[error("canonical moment c[{index}] = {value} is outside (0, 1)")]
    NotInUnitInterval { index: usize, value: f64 },
    #[error("atoms are not distinct")]
    DuplicateAtoms,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("Stieltjes procedure broke down at degree {degree}")]
    NumericalBreakdown { degree: usize },
    #[error("finite-difference Jacobian is numerically singular")]
    SingularJacobian,
    #[error("eigenvalue {index} failed to converge")]
    ConvergenceFailure { index: usize },
    #[error("target density is not certified log-concave")]
    NotLogConcave,
    #[error("unsupported potential: {0}")]
    UnsupportedPotential(String),
    #[error("equilibrium measure has no soft right edge")]
    NoSoftEdge,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
