use thiserror::Error;

/// Errors produced by the fidelity-bound toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operators live on different Hilbert spaces")]
    SpaceMismatch,

    #[error("factor `{label}` has dimension {dim}; only qubit factors are allowed here")]
    NonQubitFactor { label: String, dim: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("unknown factor label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate factor label `{0}`")]
    DuplicateLabel(String),

    #[error("partial trace needs a nonempty set of kept factors")]
    EmptyKeep,

    #[error("temperature must be nonnegative, got {0}")]
    NegativeTemperature(f64),

    #[error("cannot parse Pauli string `{0}`")]
    ParsePauli(String),

    #[error("invalid target state: {0}")]
    InvalidSpec(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid stabilizer generators: {0}")]
    InvalidGenerators(String),

    #[error("witness failed spectrum validation (worst eigenvalue {worst:e}): {reason}")]
    WitnessValidation { worst: f64, reason: String },

    #[error("basis is not closed under commutation: residual {residual:e} for [{left}, {right}]")]
    ClosureViolation {
        left: String,
        right: String,
        residual: f64,
    },

    #[error("invalid Cartan frame: {0}")]
    InvalidFrame(String),

    #[error("weight spectrum is degenerate: {0}")]
    DegenerateWeights(String),

    #[error("linear penalty form requires every weight sum below the highest weight sum")]
    LinearFormInvalid,

    #[error("invalid trap configuration: {0}")]
    InvalidConfig(String),

    #[error("Fock truncation not converged: |dF^2| = {delta:e} at t = {t:e} s (n_max = {n_max})")]
    TruncationNotConverged { n_max: usize, t: f64, delta: f64 },

    #[error("sampling error: {0}")]
    Sampling(String),

    #[error("csv export failed: {0}")]
    Export(String),
}

pub type Result<T> = std::result::Result<T, Error>;
