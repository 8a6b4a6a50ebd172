use thiserror::Error;

/// Library-wide error type. Every fallible operation names one of these
/// variants so that callers (and the CLI exit-code mapping) can react to
/// the precise failure class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input string is not a valid fraction, decimal, or named constant.
    #[error("parse error: {0}")]
    Parse(String),

    /// The value reduces to an integer modulo 1, so there is no fractional
    /// rotation to analyze.
    #[error("alpha out of range: value is an integer modulo 1")]
    AlphaOutOfRange,

    /// The error bound on an approximate value straddles a quantity that a
    /// comparison must decide; re-supply the input at higher precision.
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),

    /// Refusal to enumerate a Farey sequence above the configured cap.
    #[error("farey sequence order {n} exceeds cap {cap}")]
    FareySizeCap { n: u64, cap: u64 },

    /// Index outside the partition's valid range `0..=n`.
    #[error("index {i} out of range 0..={n}")]
    IndexOutOfRange { i: u64, n: u64 },

    /// The doubling search for minimal return indices hit its cap.
    #[error("gap search cap {0} exceeded before both return indices were found")]
    GapSearchCapExceeded(u64),

    /// The rotation orbit returned to 0 inside the scan horizon, so the
    /// irrationality hypothesis is violated at this scale.
    #[error("alpha is rational with orbit closure inside the scan horizon")]
    RationalAlphaDegenerate,

    /// `gap_after` was given a position at or beyond beta.
    #[error("position {0} is not a hit (not below beta)")]
    NotAHit(String),

    /// Oracle routines take exact rationals only.
    #[error("oracle requires exact input (err = 0)")]
    ApproximateInputRefused,

    /// Argument validation failure (zero order, empty list, bad range...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
