use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // lattice algebra
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lattice is not a sublattice of the given superlattice")]
    NotASublattice,
    #[error("modulus lattice is rank-deficient")]
    ModulusRankDeficient,
    #[error("sublattice enumeration exceeded its cap of {0}")]
    SublatticeBudget(usize),

    // finite groups
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    MissingInverse(usize),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("matrix group closure exceeded cap {0}")]
    CapExceeded(usize),
    #[error("matrix is not unimodular")]
    NonUnimodular,

    // representations
    #[error("not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("values are not constant on conjugacy classes")]
    NotClassConstant,
    #[error("no splitting prime worked: {0}")]
    SplittingPrimeFailure(String),
    #[error("no prime found below search bound {0}")]
    PrimeSearchBound(u64),
    #[error("prime {0} divides the group order")]
    PrimeDividesOrder(u64),
    #[error("prime {0} is not a splitting prime for this representation")]
    NonSplittingPrime(u64),
    #[error("character lift out of range for prime {0}")]
    LiftOutOfRange(u64),

    // virtually abelian groups
    #[error("cocycle not closed at ({0}, {1})")]
    CocycleNotClosed(usize, usize),
    #[error("cocycle value at the identity must be zero")]
    NonzeroIdentityCocycle,
    #[error("factor set is not a normalized 2-cocycle: {0}")]
    NotACocycle(String),
    #[error("no integer solution")]
    NoIntegerSolution,
    #[error("element is not a member of the group")]
    NonMember,
    #[error("lattice is not invariant under the action")]
    NotInvariant,
    #[error("lattice is not contained in |G|Z^h")]
    NTooLarge,
    #[error("inputs are conjugate")]
    InputsConjugate,
    #[error("element {0} does not lie in the centralizer")]
    NotInCentralizer(usize),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    // front end
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded(_) | Error::SublatticeBudget(_) => 2,
            Error::Internal(_) | Error::LiftOutOfRange(_) | Error::NoIntegerSolution => 3,
            _ => 1,
        }
    }
}
