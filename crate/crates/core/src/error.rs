use thiserror::Error;

/// Errors raised by the tensor, geometry, homogenization and energy routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spatial dimension must be 2 or 3, got {0}")]
    InvalidDim(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },

    /// Components that should coincide under an index permutation differ.
    /// Indices are reported 1-based.
    #[error("symmetry violated: component {at} = {value} but {partner} = {partner_value}")]
    Symmetry {
        at: String,
        value: f64,
        partner: String,
        partner_value: f64,
    },

    #[error("third-order tensor has the wrong symmetric index pair for this operation")]
    PairMode,

    #[error("tensor is singular on its symmetric subspace (smallest eigenvalue {eig_min:e})")]
    Singular { eig_min: f64 },

    #[error("tensor is indefinite on its symmetric subspace (smallest eigenvalue {eig_min:e})")]
    Indefinite { eig_min: f64 },

    #[error("volume fraction must lie in (0, 1), got {0}")]
    VolumeFraction(f64),

    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("degenerate shape: {0}")]
    DegenerateShape(String),

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("the admissible beta subspace is trivial")]
    TrivialKernel,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn fmt_indices(idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("({})", parts.join(","))
}
