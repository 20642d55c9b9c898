//! Measure-preserving embeddings of Boolean algebras into submeasured
//! lattices, and the search for algebrifications.

mod algebrification;
mod embedding;

use crate::lattice::LatticeError;
use crate::lp::NormError;
use crate::quotient::QuotientError;

pub use algebrification::{
    find_algebrifications, join_prime_elements, uniqueness_probe, Algebrification,
    UniquenessReport, MAX_SEARCH_ATOMS, MEASURE_GRID_CAP,
};
pub use embedding::{
    check_embedding_isometry, Embedding, EmbeddingFailure, EmbeddingFile, EmbeddingReport,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MorphismError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("hypothesis unmet: {}", .0.join("; "))]
    HypothesisUnmet(Vec<String>),
    #[error("search space exceeded: {0}")]
    SearchSpaceExceeded(String),
}
