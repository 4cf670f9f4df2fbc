use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<u8>),
    #[error("invalid positive root ({a},{b}) for n={n}")]
    InvalidRoot { a: u8, b: u8, n: usize },
    #[error("invalid level {level} for n={n}")]
    InvalidLevel { level: usize, n: usize },
    #[error("rank parameter n={0} is out of range")]
    InvalidRank(usize),
    #[error("roots ({0},{1}) and ({2},{3}) are not orthogonal")]
    NonOrthogonalRoots(u8, u8, u8, u8),
    #[error("duplicate root ({0},{1})")]
    DuplicateRoot(u8, u8),
    #[error("orthocell {0} is not monogressive")]
    NotMonogressive(String),
    #[error("orthocell {cell} is not {i}{j}-effective")]
    NotEffective { cell: String, i: usize, j: usize },
    #[error("root ({0},{1}) is not simple")]
    NonSimpleRoot(u8, u8),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not divisible by {1} in the Laurent ring")]
    NotDivisible(String, String),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("vector is not in the span {0}")]
    NotInSpan(String),
    #[error("span rank {rank} differs from the expected dimension {expected}")]
    RankDeficiency { rank: usize, expected: usize },
    #[error("vector is not a weight vector")]
    NotWeightVector,
    #[error("q0 = {0} must be a nonzero rational other than 1 and -1")]
    InvalidQ(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("vectors have inconsistent lengths")]
    DimensionMismatch,
    #[error("parse error: {0}")]
    Parse(String),
}
