//! Classification of knowledge-graph entities along two foundational
//! distinctions: class vs. instance, and physical object vs. not.
//!
//! The crate is organised as a pipeline:
//!
//! * [`ingest`] streams N-Triples dumps into an [`ingest::EntityStore`].
//! * [`seneca`] loads cross-dataset alignment edges and derives the
//!   alignment-path verdicts for each entity.
//! * [`features`] turns entity records into the A/U/E/D feature blocks.
//! * [`classify`] hosts the weight-aware binary classifiers.
//! * [`crowd`] aggregates trust-weighted judgments and balances datasets.
//! * [`sampler`] reproduces nearest-neighbour dataset sampling.
//! * [`harness`] runs cross-validation and feature-combination sweeps.

pub mod classify;
pub mod crowd;
pub mod diag;
pub mod features;
pub mod harness;
pub mod ingest;
pub mod label;
pub mod sampler;
pub mod seneca;

pub use diag::Diagnostic;
pub use label::{Label, Task};
