use thiserror::Error;

/// Errors reported by the algebra and the checkers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside 1..=16")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus} is not an irreducible polynomial of degree {degree} over GF(2)")]
    InvalidModulus { degree: u32, modulus: u32 },
    #[error("element code {code} is out of range for GF({q})")]
    InvalidElement { code: u32, q: u32 },
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
