use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input exceeded a configured size limit.
    #[error("{what} = {value} exceeds the configured bound {bound}")]
    OutOfRange {
        what: &'static str,
        value: u128,
        bound: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("gcd({0}, {1}) != 1")]
    NotCoprime(i128, i128),
    #[error("the closed-form pipeline needs an even numerator, got {0}")]
    OddNumerator(i64),
    #[error("expected an odd argument, got {0}")]
    EvenArgument(i64),
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// True for errors caused by a size limit rather than an invalid argument.
    pub fn is_bound(&self) -> bool {
        matches!(self, Error::OutOfRange { .. })
    }
}
