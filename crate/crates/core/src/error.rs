use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("channel vector is zero (norm {0:e}); no precoding basis exists")]
    ZeroChannel(f64),
    #[error("need at least 2 transmit antennas, got {0}")]
    TooFewAntennas(usize),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("eavesdropper SNR denominator vanishes ({0:e}); artificial noise cannot jam this draw")]
    DegenerateDenominator(f64),
    #[error("total power budget must be positive, got {0}")]
    InvalidBudget(f64),
    #[error("capacity series term {term} is not finite at beta = {beta}")]
    NonConvergent { beta: f64, term: usize },
    #[error("adaptive quadrature missed tolerance {tolerance:e} (estimated error {estimate:e})")]
    QuadratureFailure { tolerance: f64, estimate: f64 },
    #[error("length {0} is not a power of two")]
    BadLength(usize),
    #[error("no frozen value supplied for frozen index {0}")]
    MissingFrozenValue(usize),
    #[error("eavesdropper rate exceeds legitimate rate (k_eve = {k_eve} > k_bob = {k_bob})")]
    RateInversion { k_bob: usize, k_eve: usize },
    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("{degenerate} of {total} eavesdropper draws had no null-space component")]
    DegenerateSample { degenerate: usize, total: usize },
    #[error("pair {pair_id} skipped: {reason}")]
    SkippedPair { pair_id: usize, reason: String },
    #[error("construction record: {0}")]
    Record(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
