use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("zero is not invertible modulo {0}")]
    NotInvertible(u64),

    #[error("modulus must be greater than 1, got {0}")]
    InvalidModulus(i64),

    #[error("coordinate {value} out of range [0, {m}) for {what}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        m: i64,
    },

    #[error("({x}, {y}, {z}) is not a nonzero vector with norm divisible by {p}")]
    NotIsotropic { x: i64, y: i64, z: i64, p: u64 },

    #[error("map has no value assigned at cell ({0}, {1}, {2})")]
    IncompleteMap(i64, i64, i64),

    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: i64, got: i64 },

    #[error("modulus {0} is not an odd prime; permutation verification requires one")]
    UnsupportedModulus(i64),

    #[error(
        "point set does not cover each coset exactly once: \
         {} point(s) off the 1/{m} grid, {} coset(s) missing, {} duplicated",
        off_grid.len(), missing.len(), duplicated.len()
    )]
    CosetCoverage {
        m: i64,
        missing: Vec<(i64, i64, i64)>,
        duplicated: Vec<(i64, i64, i64)>,
        off_grid: Vec<usize>,
    },

    #[error("{m_prime} does not divide {m}")]
    InvalidDivisor { m: i64, m_prime: i64 },

    #[error("point ({x}/{den}, {y}/{den}, {z}/{den}) is not on the sphere of squared radius {n}")]
    NotOnSphere {
        x: i64,
        y: i64,
        z: i64,
        den: i64,
        n: u64,
    },

    #[error("{0} is not a sum of three integer squares")]
    NotRepresentable(u64),

    #[error("denominator must be positive, got {0}")]
    NonPositiveDenominator(i64),

    #[error("integer overflow while {0}")]
    Overflow(&'static str),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
