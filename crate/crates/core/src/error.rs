use core::fmt;

/// Everything that can go wrong inside the core crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    NotPrime(u64),
    Unsupported(u64),
    DivisionByZero,
    FieldMismatch,
    InfiniteField,
    Singular,
    ShapeMismatch,
    /// The exhaustive search would need this many element tests.
    BudgetExceeded(u128),
    ZeroVector,
    NotSymmetric,
    Char2AlternatingResidual,
    ZeroDiagonalEntry,
    SquareClassNotViolated,
    NoInvertibleSolution,
    /// The enumeration would visit this many subspaces.
    CapExceeded(u128),
    HeavyRunRequired(u128),
    UnsupportedCensusField(u64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::Unsupported(p) => write!(f, "prime {p} outside the supported range [2, 2^31)"),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::FieldMismatch => f.write_str("operands belong to different fields"),
            Error::InfiniteField => f.write_str("operation requires a finite field"),
            Error::Singular => f.write_str("matrix is singular"),
            Error::ShapeMismatch => f.write_str("shape mismatch"),
            Error::BudgetExceeded(n) => write!(f, "exhaustive search needs {n} element tests, over budget"),
            Error::ZeroVector => f.write_str("zero vector"),
            Error::NotSymmetric => f.write_str("matrix is not symmetric"),
            Error::Char2AlternatingResidual => {
                f.write_str("characteristic 2: residual block is alternating and nonzero")
            }
            Error::ZeroDiagonalEntry => f.write_str("diagonal entry is zero"),
            Error::SquareClassNotViolated => {
                f.write_str("square-class condition holds; no falsifying witness at this index")
            }
            Error::NoInvertibleSolution => f.write_str("no invertible symmetrizer found"),
            Error::CapExceeded(n) => write!(f, "enumeration would visit {n} subspaces, over cap"),
            Error::HeavyRunRequired(n) => {
                write!(f, "enumeration of {n} subspaces is a heavy run and must be requested explicitly")
            }
            Error::UnsupportedCensusField(q) => write!(f, "census supports q in {{2, 3, 5}}, got {q}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
