use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot substitute a non-unit value for `{0}`, which occurs with negative exponents")]
    NonUnitSubstitutionIntoLaurent(String),
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("denominator factor `{0}` is not a unit at the origin")]
    NonUnitDenominator(String),
    #[error("expected {expected} exponents, got {got}")]
    ExponentCount { expected: usize, got: usize },
    #[error("size {n} exceeds the brute-force bound {max}")]
    SizeTooLargeForBruteForce { n: usize, max: usize },
    #[error("sequence {0} is not in the family A_n")]
    SequenceNotInFamily(String),
    #[error("change-of-basis matrix is singular over the integers at size {0}")]
    SingularChangeOfBasis(usize),
    #[error("polynomial is not homogeneous of z-degree {expected}")]
    DegreeMismatch { expected: i32 },
    #[error("polynomial is not expressible in tau = -q - q^-1: {0}")]
    NotInTauSubring(String),
    #[error("{what} = {n} exceeds the configured bound {max} (raise it with {flag})")]
    ResourceBound { what: &'static str, n: usize, max: usize, flag: &'static str },
    #[error("parse error: {0}")]
    Parse(String),
}
