use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid bit vector length {0} (must be 1..=2^20)")]
    InvalidLength(usize),
    #[error("invalid character {0:?} in bit string")]
    InvalidBitChar(char),
    #[error("operands belong to different fields (degrees {0} and {1})")]
    FieldMismatch(u32, u32),
    #[error("unsupported field degree {0} (supported: 2..=64)")]
    UnsupportedDegree(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("spectrum length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("spectrum dimension {k} exceeds limit {max}")]
    DimensionTooLarge { k: usize, max: usize },
    #[error("parameter out of range: {0}")]
    Parameter(&'static str),
    #[error("guesser returned {0}, expected -1, 0 or +1")]
    GuesserOutput(i8),
    #[error("distribution invalid: {0}")]
    Distribution(&'static str),
    #[error("function is not a bijection on its domain")]
    NotBijective,
    #[error("too few bits for the statistical test: {got} < {min}")]
    TooFewBits { got: usize, min: usize },
}
