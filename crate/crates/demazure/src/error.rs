//! Shared error type for every layer of the library.
//!
//! Hypothesis failures (`NotInRing`, `DivisionCrossCheck`) are diagnostic
//! signals, not bugs: they surface exactly the configurations where the
//! regularity assumptions behind the algebra break down.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring descriptor mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: String, found: String },

    #[error("{a} is not divisible by {b} in the coefficient ring")]
    NotDivisibleRing { a: String, b: String },

    #[error("series division failed at homogeneous degree {degree} (witness monomial {witness})")]
    NotDivisibleSeries { degree: u32, witness: String },

    #[error("division by zero (or by a zero series)")]
    DivisionByZero,

    #[error("linear part of the divisor is not a regular constant times a unimodular row: {detail}")]
    NotUnimodularLinearPart { detail: String },

    #[error("substitution image has a nonzero constant term (index {index})")]
    NonzeroConstantTerm { index: usize },

    #[error("constant term {term} is not a unit of the coefficient ring")]
    NonUnitConstantTerm { term: String },

    #[error("precision exhausted: needed {needed} more degrees, only {available} available")]
    PrecisionExhausted { needed: u32, available: u32 },

    #[error("formal group law axiom violated: {axiom} fails at degree {degree}")]
    AxiomViolation { axiom: String, degree: u32 },

    #[error("invalid lattice: {reason}")]
    InvalidLattice { reason: String },

    #[error("unknown or unsupported Dynkin type: {detail}")]
    UnknownType { detail: String },

    #[error("Weyl group too large: |W| exceeds the configured cap {cap}")]
    GroupTooLarge { cap: usize },

    #[error("vector {vector} is not a root of the datum")]
    NotARoot { vector: String },

    #[error("gcd of the row is {gcd}, not 1: row cannot be completed to a unimodular matrix")]
    NotUnimodularRow { gcd: String },

    #[error("linear system has no solution over the requested ring")]
    NoSolution,

    #[error("coefficient not in the base algebra: denominator factor for root {root} fails at degree {degree}")]
    NotInRing { root: usize, degree: u32 },

    #[error("division-free and division-based Demazure values disagree for root {root}")]
    DivisionCrossCheck { root: usize },

    #[error("certificate failure: {reason}")]
    CertificateFailure { reason: String },

    #[error("word {word:?} does not evaluate to the expected Weyl element")]
    BadWord { word: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
