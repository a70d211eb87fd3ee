use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("integer {0} is too large to factor (limit 2^64)")]
    TooLarge(String),

    #[error("polynomial is reducible over Q: {0}")]
    ReduciblePolynomial(String),
    #[error("could not certify irreducibility of {0}")]
    IrreducibilityUnknown(String),
    #[error("invalid override at p = {prime}: sum of e*f is {sum}, expected {degree}")]
    InvalidOverride { prime: u64, sum: u32, degree: u32 },
    #[error("p = {0} does not divide the polynomial discriminant")]
    NotBadPrime(u64),
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: u64, modulus: u64 },

    #[error("coefficient limits differ: {0} vs {1}")]
    LimitMismatch(usize, usize),
    #[error("beta = {0} is outside the supported range 1 < beta <= 50")]
    BetaOutOfRange(f64),
    #[error("index {0} is masked")]
    MaskedIndex(u64),
    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),
    #[error("discriminant {0} is not negative")]
    NotNegative(i64),
    #[error("discriminants differ: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("group order exceeds cap {0}")]
    GroupTooLarge(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup indices differ: {0} vs {1}")]
    IndexMismatch(usize, usize),

    #[error("undetermined splitting at primes {0:?}")]
    UndeterminedPrime(Vec<u64>),
    #[error("fields are not arithmetically equivalent (first mismatch at n = {0})")]
    NotEquivalent(u64),
    #[error("no inertia-degree preserving matching above p = {0}")]
    Obstruction(u64),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
