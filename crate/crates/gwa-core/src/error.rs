use thiserror::Error;

pub type MathResult<T> = Result<T, MathError>;

/// Errors surfaced by the exact-arithmetic and module-analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("operands live over different scalar fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero polynomial has no monic normalization")]
    ZeroPolynomial,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantInput,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("factor {factor} failed the irreducibility check ({status})")]
    NotIrreducible { factor: String, status: String },
    #[error("unit must be nonzero")]
    ZeroUnit,
    #[error("{0} does not divide a")]
    NotADivisor(String),
    #[error("factor {0} lies outside the requested orbit")]
    FactorOutsideOrbit(String),
    #[error("no nonnegative shift maps {from} onto {to}")]
    NotComparable { from: String, to: String },
    #[error("module has infinite length: the orbit of {0} is finite")]
    InfiniteLength(String),
    #[error("modules are defined over different algebras")]
    SpecMismatch,
    #[error("generator is not a single chain or full-orbit product")]
    NotMaximal,
    #[error("ideal generator {0} is not irreducible")]
    ReducibleIdeal(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("last invariant factor {dn} does not divide a")]
    NotCompatible { dn: String },
    #[error("matrix is not invertible over the polynomial ring")]
    NotInvertible,
    #[error("factor {factor} is not minimal: shifting it back {k} steps hits the factor {witness} of a")]
    NotMinimal {
        factor: String,
        k: i64,
        witness: String,
    },
    #[error("construction requires all orbits infinite, but the orbit of {0} is finite")]
    FiniteOrbit(String),
    #[error("no concrete maximal submodule could be produced; supply orbit probes")]
    NoMaximalSubmodule,
    #[error("vector has length {got}, module rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
