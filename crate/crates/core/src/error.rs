use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shift is empty after trimming")]
    EmptyShift,
    #[error("word {word:?} is not admissible: {reason}")]
    InadmissibleWord { word: Vec<usize>, reason: String },
    #[error("empty word where a word of positive length is required")]
    EmptyWord,
    #[error("fiber over {zword:?} is empty")]
    EmptyFiber { zword: Vec<usize> },
    #[error("block {base:?} does not generate an admissible periodic point")]
    InadmissiblePeriod { base: Vec<usize> },
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("kernel support has {classes} closed communicating classes")]
    Reducible { classes: usize },
    #[error("entropy bracket needs n >= {min}, got {n}")]
    InsufficientN { n: usize, min: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("requested order {order} needs n > {order}, got n = {n}")]
    OrderTooLarge { order: usize, n: usize },
    #[error("weight exponent {0} outside [0, 1]")]
    InvalidOmega(f64),
    #[error("level n = 0 is not allowed")]
    ZeroLevel,
    #[error("code is not transition compatible: {from}->{to} maps to a forbidden pair")]
    NotTransitionCompatible { from: String, to: String },
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("sliding block code has window {0}; recode to a 1-block code first")]
    WideWindow(usize),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Domain errors (empty fibers, bad periodic blocks) as opposed to malformed input.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::EmptyFiber { .. } | Error::InadmissiblePeriod { .. } | Error::Reducible { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
