//! Crate-wide error type.

/// Errors surfaced by geometry construction, contract checks, samplers,
/// evolution steps and persistence.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Lattice construction with unsupported extents / boundary combinations.
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    /// A configuration, operator and state disagree about the auxiliary basis
    /// or the number of sites.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// Spin values outside {+1, −1} or otherwise malformed configurations.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Exact-capacity guards (dense vectors, density matrices, enumeration).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Log-derivatives or ratios requested at an exactly vanishing amplitude.
    #[error("zero amplitude: {0}")]
    ZeroAmplitude(String),

    /// Sampler misuse (empty batches, wrong batch source for an estimator, …).
    #[error("sampling: {0}")]
    Sampling(String),

    /// Singular / non-finite linear algebra outside the regularized solver's
    /// contract.
    #[error("linear algebra: {0}")]
    Linalg(String),

    /// An evolution step failed (divergence guard exhausted, non-finite
    /// velocities, …).
    #[error("evolution: {0}")]
    Evolution(String),

    /// The p-ITE inner optimization did not reach its infidelity target.
    #[error("optimization: {0}")]
    Optimization(String),

    /// Malformed run configurations, checkpoints or series files.
    #[error("schema: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
