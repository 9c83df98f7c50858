use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be positive")]
    ZeroModulus,
    #[error("gcd({p}, {q}) = {gcd}, expected coprime")]
    NotCoprime { p: i64, q: i64, gcd: i64 },
    #[error("index {i} out of range [0, {bound})")]
    IndexOutOfRange { i: i64, bound: i64 },
    #[error("Alexander polynomial is not normalized: Δ(1) = {0}")]
    NotNormalized(i64),
    #[error("Alexander polynomial has a vanishing leading coefficient")]
    ZeroLeadingCoefficient,
    #[error("not an L-space knot: {0}")]
    NotAdmissible(String),
    #[error("p/q = {p}/{q} is outside the L-space surgery range for genus {genus}")]
    OutsideLSpaceRange { p: u64, q: u64, genus: usize },
    #[error("invalid torus knot parameters T({0},{1})")]
    InvalidTorusKnot(i64, i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("catalog parse error on line {line}: {message}")]
    CatalogParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
