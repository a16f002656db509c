use thiserror::Error;

/// Errors raised while constructing or verifying the Suzuki objects.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in GF(q)")]
    DivisionByZero,

    #[error("q must be an odd power of 2, q ≥ 8 (got {0})")]
    InvalidOrder(u64),

    #[error("field degree {0} is unsupported: it must be odd and at least 3")]
    InvalidDegree(u32),

    #[error("no default irreducible polynomial for degree {0}; pass one explicitly")]
    NoDefaultPolynomial(u32),

    #[error("polynomial {poly:#x} has degree {found}, expected {expected}")]
    WrongDegree { poly: u64, expected: u32, found: u32 },

    #[error("polynomial {0:#x} is reducible over GF(2)")]
    ReduciblePolynomial(u64),

    #[error("projective point has all coordinates zero")]
    ZeroVector,

    #[error("points must be pairwise distinct")]
    PointsNotDistinct,

    #[error("matrix does not preserve the ovoid")]
    NotInOvoid,

    #[error("ordered pair must consist of distinct points")]
    EqualIndices,

    #[error("group too large for enumeration (budget {0})")]
    BudgetExceeded(usize),

    #[error("orbit size {orbit} does not divide group order {group}")]
    NotDivisible { orbit: u64, group: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed design file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
