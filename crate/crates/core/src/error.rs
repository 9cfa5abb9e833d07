use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be a positive integer")]
    InvalidModulus(u64),
    #[error("character index {index} out of range for modulus {q} ({count} characters)")]
    CharacterIndex { q: u64, index: u64, count: u64 },
    #[error("pole at s = {re} + {im}i")]
    Pole { re: f64, im: f64 },
    #[error("non-finite argument: {0}")]
    NonFinite(String),
    #[error("invalid settings: {0}")]
    Settings(String),
    #[error("parameter {0} out of range: {1}")]
    Domain(&'static str, String),
    #[error("functional equation variant {variant} requires parity {expected}, character has {actual}")]
    Parity {
        variant: &'static str,
        expected: i8,
        actual: i8,
    },
    #[error("character {0} is not primitive")]
    Imprimitive(String),
    #[error("scan grid is empty: step {step} exceeds interval length {len}")]
    EmptyGrid { step: f64, len: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("growth fit undefined: {0}")]
    UndefinedFit(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degenerate metric: edge {0} has zero formal norm")]
    DegenerateMetric(&'static str),
    #[error("degenerate triangle: vertices must be pairwise distinct")]
    DegenerateTriangle,
    #[error("chi({n}) = 0 for modulus {q}")]
    ZeroValue { q: u64, n: i64 },
    #[error("vanishing area: |denominator| = {0:e}")]
    VanishingArea(f64),
    #[error("unknown claim id {0}")]
    UnknownClaim(String),
    #[error("empty claim selection")]
    EmptySelection,
    #[error("unknown format {0}")]
    UnknownFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
