use num_bigint::BigUint;
use thiserror::Error;

/// Failures shared by the arithmetic layers.
///
/// `NonInvertible` carries `gcd(value, modulus)`. Whenever that gcd is a
/// proper divisor it is a factor of the modulus, so callers turn it into a
/// composite verdict instead of discarding it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible: gcd with the modulus is {0}")]
    NonInvertible(BigUint),
    #[error("operands belong to different residue rings")]
    RingMismatch,
    #[error("no square root found")]
    NoSquareRoot,
    #[error("no solution")]
    NoSolution,
    #[error("vector is not invertible for the convolution product")]
    NotConvInvertible,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("curve discriminant is not a unit")]
    SingularCurve,
    #[error("discriminant {0} is not in the Hilbert class polynomial table")]
    NotInTable(u64),
    #[error("no root found")]
    NoRoot,
    #[error("sampling budget exceeded: {0}")]
    BudgetExceeded(&'static str),
    #[error("evaluation point A lies on the kernel of the dual isogeny; pick another A")]
    RetryA,
    #[error("auxiliary point M gives a non-invertible u_N; pick another M")]
    RetryM,
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Returns the nontrivial factor carried by `NonInvertible`, if any.
    pub fn factor_of(&self, n: &BigUint) -> Option<BigUint> {
        match self {
            Error::NonInvertible(g) if g > &BigUint::from(1u32) && g < n => Some(g.clone()),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
