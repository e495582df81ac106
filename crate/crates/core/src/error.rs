use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: operator dim {op_dim}, state dim {state_dim}")]
    DimensionMismatch { op_dim: usize, state_dim: usize },

    #[error("system size {n} exceeds the configured maximum {max}")]
    SizeOverflow { n: usize, max: usize },

    #[error("state vector norm {norm} deviates from 1 beyond tolerance")]
    UnnormalizedState { norm: f64 },

    #[error("single-qubit factor {index} has norm {norm}, expected 1 within 1e-10")]
    UnnormalizedFactor { index: usize, norm: f64 },

    #[error("expectation value has imaginary part {imag:.3e}, beyond the Hermiticity tolerance")]
    NonHermitianDrift { imag: f64 },

    #[error("operator entries are not closed under conjugate transpose at ({row},{col})")]
    NotHermitian { row: usize, col: usize },

    #[error("partition instance invalid: {0}")]
    InvalidInstance(String),

    #[error("instance file line {line}: {msg}")]
    InstanceParse { line: usize, msg: String },

    #[error("interpolation parameter s={0} outside [0,1]")]
    ScheduleOutOfRange(f64),

    #[error("eigensolver failed to converge at s={s}: {msg}")]
    EigensolverFailure { s: f64, msg: String },

    #[error("time step too coarse: per-step angle {angle:.3} exceeds 0.5; increase steps")]
    StepTooCoarse { angle: f64 },

    #[error("threshold scan exceeded cap {cap:.3e} without reaching target success")]
    ScanCapExceeded { cap: f64 },

    #[error("brute-force enumeration cap exceeded: N={n} > {max}")]
    EnumerationCap { n: usize, max: usize },

    #[error("spin assignment length {got} does not match instance size {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("all-identity observable has no ±1 outcome statistics")]
    IdentityObservable,

    #[error("Bloch vector norm {norm:.4} exceeds 1 beyond the clipping tolerance (qubit {index})")]
    BlochNormExceeded { index: usize, norm: f64 },

    #[error("missing Pauli expectations for full reconstruction: {0:?}")]
    MissingPaulis(Vec<String>),

    #[error("scaling fit input invalid: {0}")]
    InvalidFitInput(String),

    #[error("instance generation: rejection sampling exceeded {tries} tries at N={n}")]
    RejectionExhausted { n: usize, tries: usize },

    #[error("nonpositive gap {0} in criterion ratio")]
    NonpositiveGap(f64),

    #[error("unknown output format {0:?}")]
    UnknownFormat(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
