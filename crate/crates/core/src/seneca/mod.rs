//! Alignment-path classification.
//!
//! Entities are judged by the existence of typed paths through a graph of
//! cross-dataset alignments and taxonomies:
//!
//! * **Class**: the entity is aligned to a BabelNet synset that is itself
//!   aligned to a WordNet synset, an OmegaWiki synset or a Wiktionary page,
//!   or the entity is typed as `owl:Class` by Tìpalo. Everything else is an
//!   instance.
//! * **Physical object**: one of the entity's categories is aligned to a
//!   YAGO class whose YAGO superclasses include one aligned to a
//!   (Onto)WordNet synset that specialises `dul:PhysicalObject`; or a
//!   Tìpalo type of the entity specialises `dul:PhysicalObject`.

mod bitset;
mod graph;
mod rules;

use thiserror::Error;

pub use bitset::BitSet;
pub use graph::{
    AlignmentGraph, AlignmentGraphBuilder, Dataset, EdgeKind, GraphStats, NodeId, NodeKey,
    SenecaConfig, DUL_PHYSICAL_OBJECT, OWL_CLASS, WORDNET_INSTANCE_MARKER,
};
pub use rules::{
    read_verdicts, seneca_batch, seneca_class_instance, seneca_physical_object, verdict_for, write_verdicts,
    BatchSummary, ClassInstance, Physical, SenecaVerdict, VerdictSet, WitnessStep,
};

#[derive(Debug, Error)]
pub enum SenecaError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{file}:{row}: unknown edge type `{edge}`")]
    UnknownEdgeType { file: String, row: u64, edge: String },
    #[error("{file}:{row}: {message}")]
    BadRow {
        file: String,
        row: u64,
        message: String,
    },
    #[error("verdict file line {line}: {message}")]
    BadVerdict { line: u64, message: String },
}
