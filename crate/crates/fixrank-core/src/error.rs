use core::fmt;

/// Errors reported by the checked entry points of this crate.
#[derive(Clone, Debug, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// Target rank outside the range admitted by the operation.
    RankOutOfRange { rank: usize, min: usize, max: usize },
    /// A spectrum was empty, contained a negative or non-finite entry, or
    /// was not non-increasing.
    InvalidSpectrum,
    /// A matrix or signal contained NaN or an infinity.
    NonFinite,
    /// A parameter that must be strictly positive was not.
    NonPositive { name: &'static str, value: f64 },
    /// A parameter that must be non-negative was not.
    Negative { name: &'static str, value: f64 },
    /// Two operands that must share a shape did not.
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A row of a matrix literal had the wrong length.
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },
    /// Hankel row count outside `1..=len`.
    RowsOutOfRange { rows: usize, len: usize },
    /// A vector had the wrong length for the operation.
    LengthMismatch { expected: usize, got: usize },
    /// A signal with too few samples to pose the Hankel problem.
    SignalTooShort { len: usize },
    /// Simplex parameters outside `1 <= kept <= block`.
    SimplexOutOfRange { block: usize, kept: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankOutOfRange { rank, min, max } => {
                write!(f, "rank {rank} outside admissible range {min}..={max}")
            }
            Error::InvalidSpectrum => {
                write!(
                    f,
                    "spectrum must be non-empty, non-negative, finite, and non-increasing"
                )
            }
            Error::NonFinite => write!(f, "input contains NaN or infinity"),
            Error::NonPositive { name, value } => {
                write!(f, "{name} must be positive, got {value}")
            }
            Error::Negative { name, value } => {
                write!(f, "{name} must be non-negative, got {value}")
            }
            Error::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::RaggedRows { row, expected, got } => {
                write!(f, "row {row} has {got} entries, expected {expected}")
            }
            Error::RowsOutOfRange { rows, len } => {
                write!(
                    f,
                    "row count {rows} outside 1..={len} for a length-{len} signal"
                )
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::SignalTooShort { len } => {
                write!(f, "signal has {len} samples, need at least 3")
            }
            Error::SimplexOutOfRange { block, kept } => {
                write!(f, "simplex parameters must satisfy 1 <= kept <= block, got kept={kept}, block={block}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value <= 0.0 || !value.is_finite() {
        return Err(Error::NonPositive { name, value });
    }
    Ok(())
}

pub(crate) fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if value < 0.0 || !value.is_finite() {
        return Err(Error::Negative { name, value });
    }
    Ok(())
}
