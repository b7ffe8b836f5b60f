use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),

    #[error("invalid G-set: {0}")]
    InvalidGSet(String),

    #[error("invalid equivariant map: {0}")]
    InvalidMap(String),

    #[error("{what} exceeds the configured cap ({actual} > {limit})")]
    SizeCap {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("truncation overflow: bound {bound} is too small, at least {required} is needed")]
    TruncationOverflow { bound: usize, required: usize },

    #[error(
        "K0 did not stabilize: bound {bound} gives {group_at_bound}, bound {larger_bound} gives {group_at_larger}"
    )]
    Stabilization {
        bound: usize,
        group_at_bound: String,
        larger_bound: usize,
        group_at_larger: String,
    },

    #[error("incomplete presentation: {0}")]
    Incomplete(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("integer overflow while converting an exact result to i64")]
    Overflow,
}

impl Error {
    pub(crate) fn cap(what: &'static str, limit: usize, actual: usize) -> Self {
        Error::SizeCap {
            what,
            limit,
            actual,
        }
    }
}
