use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("non-crystallographic unsupported: m({i},{j}) = {m}")]
    NonCrystallographic { i: usize, j: usize, m: u32 },
    #[error("coxeter matrix is not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("coxeter matrix must have m(i,i) = 1 (row {0})")]
    BadDiagonal(usize),
    #[error("invalid cartan matrix: {0}")]
    BadCartan(String),
    #[error("unknown or invalid Coxeter type {0}")]
    UnknownType(String),
    #[error("coxeter group is infinite (more than {0} positive roots); only finite groups are supported")]
    InfiniteGroup(usize),
    #[error("letter {letter} out of range 1..={rank}")]
    LetterOutOfRange { letter: usize, rank: usize },
    #[error("position {pos} out of range 1..={len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("elements belong to different Coxeter systems")]
    MixedSystems,
    #[error("lower element is not below upper element in Bruhat order")]
    NotBelow,
    #[error("poset elements {0} and {1} are not comparable")]
    Incomparable(usize, usize),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("pair ({0},{1}) is not a deletion pair of the expression")]
    NotDeletionPair(usize, usize),
    #[error("cannot resolve reflection for position {0}: prefix is not reduced one step back")]
    UnresolvedReflection(usize),
    #[error("operation requires a full-mode collapse trace")]
    NotFullMode,
    #[error("word too long for face enumeration ({0} letters, max {1})")]
    WordTooLong(usize, usize),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("singular braid substitution: t1 + t3 = 0")]
    SingularBraid,
    #[error("matrix is not upper unitriangular")]
    NotUnitriangular,
    #[error("operation requires a type A system")]
    NotTypeA,
    #[error("parse error: {0}")]
    Parse(String),
}
