//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree {degree} out of range (max {max})")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("generator index {index} not valid for {ring}")]
    InvalidIndex { index: u32, ring: String },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("binomial C({a}, {b}) undefined for negative upper argument")]
    BinomDomain { a: i64, b: u64 },

    #[error("rank {rank} not valid for family {family} (need {need})")]
    InvalidRank {
        rank: u32,
        family: String,
        need: String,
    },

    #[error("modules have different degree caps ({left} vs {right})")]
    MaxDegreeMismatch { left: usize, right: usize },

    #[error("element of degree {degree} does not belong to module (dim {dim}, coords len {len})")]
    ElementOutsideModule {
        degree: usize,
        dim: usize,
        len: usize,
    },

    #[error("not closed under {action} at degree {degree}: {witness} escapes ({image})")]
    NotClosed {
        action: String,
        degree: usize,
        witness: String,
        image: String,
    },

    #[error("E-module relation {relation} fails at degree {degree}, basis vector {witness}")]
    RelationViolation {
        relation: String,
        degree: usize,
        witness: String,
    },

    #[error("degree {degree} too close to cap {max}: need headroom {needed}")]
    Window {
        degree: usize,
        max: usize,
        needed: usize,
    },

    #[error("accounting failure at degree {degree}: {detail}")]
    Accounting { degree: usize, detail: String },

    #[error("lemma violated: {0}")]
    LemmaViolation(String),

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("integrity: {0}")]
    Integrity(String),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
