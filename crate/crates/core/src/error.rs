use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be positive")]
    EmptyDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid truth table: {0}")]
    InvalidTruthTable(String),
    #[error("observable is not projective")]
    NotProjective,
    #[error("eigenvalue {0} is outside the expected alphabet")]
    EigenvalueOutOfAlphabet(f64),
    #[error("{m}^({m}^{n}) does not fit in 128 bits")]
    CountOverflow { m: u32, n: u32 },
    #[error("singular interpolation system")]
    SingularSystem,
    #[error("value {value} outside [{lo}, {hi}] for {what}")]
    OutOfRange { what: &'static str, value: f64, lo: f64, hi: f64 },
    #[error("empty decision list")]
    NoDecisions,
    #[error(transparent)]
    Formula(#[from] crate::formula::FormulaError),
    #[error("invalid vehicle: {0}")]
    InvalidVehicle(String),
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("time step must be positive, got {0}")]
    InvalidTimestep(f64),
}
