use thiserror::Error;

/// Errors surfaced by the arithmetic and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Dedekind sums require gcd(d, c) = 1.
    #[error("arguments not coprime: gcd({d}, {c}) != 1")]
    NotCoprime { d: String, c: String },

    /// Matrix entries do not satisfy ad - bc = 1.
    #[error("matrix is not unimodular (ad - bc != 1)")]
    NotUnimodular,

    /// An enclosure is too wide (or too close to a half-integer) to round.
    #[error("rounding ambiguous: enclosure {0} does not isolate an integer")]
    RoundingAmbiguous(String),

    /// Certified truncation needs a larger cutoff than the caller supplied.
    #[error("truncation point too small: {0}")]
    TruncationTooSmall(String),

    /// No tabulated constant for this delta and none supplied.
    #[error("unsupported delta {0}; supply an explicit ell constant")]
    UnsupportedDelta(String),

    /// Work size exceeds a hard feasibility limit.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// The imaginary part of a Kloosterman sum excludes zero.
    #[error("imaginary part of Kloosterman sum excludes zero: {0}")]
    ImaginaryPartNonzero(String),

    /// Comparison stayed indeterminate at the precision cap.
    #[error("verdict unknown at precision cap ({0} bits)")]
    UnknownAtCap(u32),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
