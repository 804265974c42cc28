//! Feature extraction: the abstract bag of words (A), URI ID shape (U),
//! incoming/outgoing property counts (E) and the alignment verdict (D).

mod blocks;
mod dictionary;
mod matrix;
mod property;
mod space;
mod tokenize;
mod uri;
mod vector;

use thiserror::Error;

pub use blocks::{Block, BlockSet};
pub use dictionary::{TokenDictionary, DEFAULT_MAX_TOKENS};
pub use matrix::{read_matrix, write_matrix, MatrixHeader, SparseMatrix};
pub use property::{property_features, Direction, PropertyKey};
pub use space::{abstract_features, FeatureConfig, FeatureSpace, Layout};
pub use tokenize::tokenize;
pub use uri::{uri_features, UriFeatures};
pub use vector::{FeatureVector, SpaceId};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("cannot build a dictionary from an empty corpus")]
    EmptyCorpus,
    #[error("block set must not be empty")]
    NoBlocks,
    #[error("invalid block set `{0}` (use letters from AUED)")]
    BadBlocks(String),
    #[error("matrix line {line}: {message}")]
    BadMatrix { line: u64, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
