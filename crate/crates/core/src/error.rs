use thiserror::Error;

/// Errors returned by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),
    #[error("invalid parameter for {name}: {reason}")]
    InvalidParameter { name: String, reason: String },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("lattice is not even")]
    NotEven,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("twist by zero")]
    ZeroTwist,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot mix elements of the cyclotomic fields for p = {0} and p = {1}")]
    FieldMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("point type {t} is out of range for p = {p}")]
    TypeOutOfRange { p: u32, t: u32 },
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    #[error("(r, a) = ({r}, {a}) is not admissible for p = {p}")]
    Inadmissible { p: u32, r: u32, a: u32 },
    #[error("p = 2 requires the delta invariant")]
    MissingDelta,
    #[error("catalog verification failed: {0}")]
    CatalogMismatch(String),
    #[error("Weierstrass model is not minimal at {0}")]
    NonMinimal(String),
    #[error("no Kodaira type has orders (f, g, delta) = ({f}, {g}, {delta})")]
    InconsistentOrders { f: String, g: String, delta: u32 },
    #[error("discriminant vanishes identically")]
    ZeroDiscriminant,
    #[error("degree bound exceeded: deg {name} = {degree} > {bound}")]
    DegreeBound { name: String, degree: usize, bound: usize },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("generic sampling failed: {0}")]
    SamplingFailed(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("order exceeds bound {0}")]
    OrderExceedsBound(u32),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("reference data: {0}")]
    Reference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
