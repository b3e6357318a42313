use thiserror::Error;

/// Errors shared by every layer of the crate.
///
/// Validation errors carry enough context to point at the offending rule or
/// position; arithmetic errors signal that a result would not fit the fixed
/// integer widths this crate guarantees (lengths and counts in `u64`, kernel
/// values in `u128`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A grammar with zero rules has no root and derives nothing.
    #[error("grammar has no rules")]
    EmptyProgram,

    /// Rule `rule` (1-based) refers to a rule at or after itself.
    #[error("rule {rule} references a rule not defined before it")]
    ForwardReference { rule: usize },

    /// The derived string would be longer than 2^63 - 1 bytes.
    #[error("derived length exceeds 2^63 - 1")]
    LengthOverflow,

    /// The caller asked to materialize a string longer than its stated cap.
    #[error("expansion of {len} bytes exceeds the {limit}-byte limit")]
    LimitExceeded { len: u64, limit: u64 },

    /// An occurrence count no longer fits in 64 bits.
    #[error("occurrence count overflowed 64 bits")]
    CountOverflow,

    /// q-gram length zero is meaningless for every operation here.
    #[error("q must be at least 1")]
    QZero,

    /// The grammar reduction is defined only for q of at least 2.
    #[error("q must be at least 2 for the weighted-text reduction, got {q}")]
    QTooSmall { q: usize },

    /// The quadratic reference index refuses inputs it cannot sort quickly.
    #[error("input of {len} bytes exceeds the naive index cap of {max}")]
    InputTooLarge { len: usize, max: usize },

    /// A reported occurrence does not fit inside the subject string.
    #[error("position {pos} plus q={q} overruns a {len}-byte string")]
    PositionOutOfRange { pos: usize, q: usize, len: usize },

    /// A kernel inner product no longer fits in 128 bits.
    #[error("kernel value overflowed 128 bits")]
    KernelOverflow,

    /// Discovery needs at least one document on each side.
    #[error("document set is empty")]
    EmptySet,

    /// No document in either set is long enough to contain a q-gram.
    #[error("no q-gram of length {q} occurs in any document")]
    NoQgram { q: usize },

    /// The text form of a grammar failed to parse; `line` is 1-based.
    #[error("malformed grammar file at line {line}: {msg}")]
    Format { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
