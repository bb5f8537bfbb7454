use thiserror::Error;

/// Errors surfaced by the library.
///
/// Inconsistent guesses are not errors; see [`crate::kprefix::Inconsistent`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance has no words")]
    NoWords,
    #[error("alphabet needs at least two letters, got {0}")]
    TooFewLetters(usize),
    #[error("letter costs must be strictly positive")]
    NonPositiveCost,
    #[error("word frequencies must be strictly positive")]
    NonPositiveWeight,
    #[error("{0} must be sorted in {1} order")]
    Unsorted(&'static str, &'static str),
    #[error("epsilon must lie in (0, 1], got {0}")]
    EpsilonOutOfRange(String),
    #[error("weights cannot be represented as 64-bit integers after scaling")]
    WeightOverflow,
    #[error("cost does not fit the integer cost grid")]
    CostOverflow,
    #[error("cheapest letter cost {ell1} is at most epsilon/n = {bound}; use the small-letter solver")]
    TinyCheapestLetter { ell1: String, bound: String },
    #[error("cheapest letter cost {ell1} (relative to l_2) exceeds epsilon/n = {bound}")]
    CheapestLetterTooLarge { ell1: String, bound: String },
    #[error("k = {0} is not of the form 1 + m*epsilon")]
    InvalidK(String),
    #[error("guess does not match the cost graph: {0}")]
    InvalidGuess(String),
    #[error("codeword for word {0} is missing")]
    MissingCodeword(usize),
    #[error("code is not injective: words {0} and {1} share a codeword")]
    NotInjective(usize, usize),
    #[error("input code is not {0}-prefix-free")]
    NotKPrefixFree(String),
    #[error("letter index {0} is outside the alphabet")]
    BadLetter(u32),
    #[error("instance has {n} words; the exact solver accepts at most {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("letter costs are not all equal")]
    UnequalCosts,
    #[error("search budget of {budget} nodes exceeded; smallest epsilon within budget is about {suggested}")]
    BudgetExceeded { budget: u64, suggested: String },
    #[error("no feasible code was found for any guess")]
    NoFeasibleGuess,
}

pub type Result<T> = std::result::Result<T, Error>;
