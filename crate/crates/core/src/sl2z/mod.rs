//! SL(2,Z): matrices, exact eigen-data, words in a free pair, ping-pong
//! certificates and the candidate search for a hyperbolic `f₀`.

pub mod eigen;
pub mod matrix;
pub mod pingpong;
pub mod search;
pub mod words;

pub use eigen::{conditions_check, eigen_decompose, eigenvector_test, Conditions, EigenData, QuadVec};
pub use matrix::{IntVec2, Mat2Z};
pub use pingpong::{ping_pong_certify, ping_pong_certify_with, Arc, PingPongCertificate, ProjPoint};
pub use search::{search_candidate, Candidate, InteriorFixedPoint};
pub use words::{reduced_word_count, reduced_words, sanov_generators, word_to_matrix, Letter, Word};

use thiserror::Error;

use crate::arith::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2zError {
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(String),
    #[error("{0} is not hyperbolic")]
    NotHyperbolic(String),
    #[error("square-free part {0} of the discriminant does not fit in 64 bits")]
    FieldTooLarge(String),
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("no candidate up to word length {0}")]
    NotFound(usize),
    #[error(transparent)]
    Field(#[from] FieldError),
}
