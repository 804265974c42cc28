//! Experiment orchestration: example assembly, stratified cross-validation,
//! the feature-combination sweep, alignment-rule evaluation and reports.

mod cv;
mod folds;
mod metrics;
mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::ClassifyError;
use crate::crowd::{AggregatedLabel, Source};
use crate::features::{BlockSet, FeatureError};
use crate::ingest::{EntityRecord, EntityStore};
use crate::seneca::VerdictSet;
use crate::{Diagnostic, Label, Task};

pub use cv::{cross_validate, fold_spaces, sweep, CvConfig};
pub use folds::stratified_folds;
pub use metrics::{metrics, ClassScores, Confusion, Metrics};
pub use report::{
    config_hash, eval_seneca, render_table, seneca_audit, AuditEntry, EvalReport,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("prediction and gold sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no labels to evaluate")]
    Empty,
    #[error("{examples} examples cannot fill {folds} folds")]
    TooFewExamples { examples: usize, folds: usize },
    #[error("need at least 2 folds")]
    TooFewFolds,
    #[error("block set {0} needs alignment verdicts, which were not supplied")]
    MissingVerdicts(BlockSet),
    #[error("block set {0} is not usable with {1}")]
    UnsupportedBlocks(BlockSet, String),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// A labelled entity ready for feature extraction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub record: EntityRecord,
    pub label: Label,
    pub weight: f64,
    /// Alignment verdict for the task, if verdicts were supplied.
    pub verdict: Option<bool>,
}

/// Joins labels with store records (and verdicts, when given). Labels of
/// entities missing from the store, or with a class outside the task, are
/// skipped with a diagnostic. Output is sorted by IRI.
pub fn build_examples(
    store: &EntityStore,
    labels: &[AggregatedLabel],
    verdicts: Option<&VerdictSet>,
    task: Task,
) -> (Vec<Example>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    for l in labels {
        let Some(label) = l.label(task) else {
            diags.push(Diagnostic::new(&l.entity, format!("`{}` is not a {task} class", l.class)));
            continue;
        };
        let Some(rec) = store.get(&l.entity) else {
            diags.push(Diagnostic::new(&l.entity, "not in the entity store"));
            continue;
        };
        if l.agreement.is_nan() || l.agreement <= 0.0 {
            diags.push(Diagnostic::new(&l.entity, "zero agreement"));
            continue;
        }
        out.push(Example {
            record: rec.clone(),
            label,
            weight: if l.source == Source::Expert { 1.0 } else { l.agreement.min(1.0) },
            verdict: verdicts.map(|v| v.flag(task, &l.entity).unwrap_or(false)),
        });
    }
    out.sort_by(|a, b| a.record.iri.cmp(&b.record.iri));
    (out, diags)
}

/// "E" when every label is expert-sourced, "C" otherwise.
pub fn dataset_tag(labels: &[AggregatedLabel]) -> &'static str {
    if labels.iter().all(|l| l.source == Source::Expert) {
        "E"
    } else {
        "C"
    }
}
