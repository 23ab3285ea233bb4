use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Lanczos ran out of independent directions before reaching the requested depth.
    #[error("rank deficiency at Lanczos step {step}: {distinct} distinct nodes, depth {depth} requested")]
    RankDeficient {
        step: usize,
        distinct: usize,
        depth: usize,
    },

    /// The z-chain recursion produced a negative entry or a vanishing pivot.
    #[error("coefficients are not those of a measure on [0, inf): z_{index} = {value}")]
    NotHalfLine { index: usize, value: f64 },

    #[error("degenerate Verblunsky coefficient alpha_{index} = {value} (|alpha| must be < 1)")]
    Degenerate { index: usize, value: f64 },

    #[error("recovered Verblunsky coefficient alpha_{index} = {value} lies outside (-1, 1)")]
    OutOfClass { index: usize, value: f64 },

    #[error("point {x} lies outside the potential domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("eigenvalue iteration failed to converge for index {0}")]
    NoConvergence(usize),
}

/// Shorthand for building an [`Error::InvalidInput`] with a formatted message.
macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::Error::InvalidInput(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
