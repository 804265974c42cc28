use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::stratified_folds;
use super::metrics::metrics;
use super::report::EvalReport;
use super::{Example, HarnessError};
use crate::classify::{self, Hyperparameters, LabeledExample, ModelKind};
use crate::features::{Block, BlockSet, FeatureConfig, FeatureSpace};
use crate::ingest::EntityRecord;
use crate::{Label, Task};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CvConfig {
    pub folds: usize,
    pub seed: u64,
    pub hyperparameters: Hyperparameters,
    pub features: FeatureConfig,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            folds: 10,
            seed: 42,
            hyperparameters: Hyperparameters::default(),
            features: FeatureConfig::default(),
        }
    }
}

impl CvConfig {
    /// Model seed for one fold, derived from the run seed.
    fn fold_hyperparameters(&self, fold: usize) -> Hyperparameters {
        Hyperparameters {
            seed: self
                .seed
                .wrapping_add((fold as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            ..self.hyperparameters.clone()
        }
    }

    pub(super) fn snapshot(&self, kind: ModelKind, blocks: BlockSet) -> serde_json::Value {
        serde_json::json!({
            "kind": kind,
            "blocks": blocks,
            "folds": self.folds,
            "seed": self.seed,
            "stratified": true,
            "order": "balance-then-stratify",
            "fit_on_training_folds": ["dictionary", "properties", "standardization"],
            "hyperparameters": self.hyperparameters,
            "features": self.features,
        })
    }
}

fn check_blocks(examples: &[Example], kind: ModelKind, blocks: BlockSet) -> Result<(), HarnessError> {
    if blocks.is_empty() {
        return Err(crate::features::FeatureError::NoBlocks.into());
    }
    if kind == ModelKind::MultinomialNb && blocks.contains(Block::D) {
        return Err(HarnessError::UnsupportedBlocks(blocks, kind.to_string()));
    }
    if blocks.contains(Block::D) && examples.iter().any(|e| e.verdict.is_none()) {
        return Err(HarnessError::MissingVerdicts(blocks));
    }
    Ok(())
}

/// The feature space of each fold, fit on that fold's training examples
/// only.
pub fn fold_spaces(
    examples: &[Example],
    assignment: &[usize],
    folds: usize,
    blocks: BlockSet,
    features: &FeatureConfig,
) -> Result<Vec<FeatureSpace>, HarnessError> {
    (0..folds)
        .map(|f| {
            let train: Vec<&EntityRecord> = examples
                .iter()
                .zip(assignment)
                .filter(|(_, &a)| a != f)
                .map(|(e, _)| &e.record)
                .collect();
            Ok(FeatureSpace::fit(&train, blocks, features.clone())?)
        })
        .collect()
}

fn run_fold(
    examples: &[Example],
    assignment: &[usize],
    fold: usize,
    kind: ModelKind,
    blocks: BlockSet,
    cfg: &CvConfig,
) -> Result<Vec<(usize, Label)>, HarnessError> {
    let (train, test): (Vec<usize>, Vec<usize>) =
        (0..examples.len()).partition(|&i| assignment[i] != fold);
    let records: Vec<&EntityRecord> = train.iter().map(|&i| &examples[i].record).collect();
    let space = FeatureSpace::fit(&records, blocks, cfg.features.clone())?;
    let mut diags = Vec::new();
    let labelled: Vec<LabeledExample> = train
        .iter()
        .map(|&i| {
            let e = &examples[i];
            let v = space.assemble(&e.record, e.verdict.unwrap_or(false), &mut diags);
            LabeledExample::new(e.record.iri.clone(), v, e.label, e.weight)
        })
        .collect();
    let model = classify::train(kind, &space, &labelled, &cfg.fold_hyperparameters(fold))?;
    let mut out = Vec::with_capacity(test.len());
    for i in test {
        let e = &examples[i];
        let v = space.assemble(&e.record, e.verdict.unwrap_or(false), &mut diags);
        out.push((i, model.predict(&v)?.label));
    }
    log::debug!("fold {fold}: {} feature diagnostics", diags.len());
    Ok(out)
}

/// Stratified k-fold cross-validation. Every fold fits its own feature
/// space and model on the training part; metrics are pooled over all
/// held-out predictions.
pub fn cross_validate(
    examples: &[Example],
    task: Task,
    dataset: &str,
    kind: ModelKind,
    blocks: BlockSet,
    cfg: &CvConfig,
) -> Result<EvalReport, HarnessError> {
    check_blocks(examples, kind, blocks)?;
    let labels: Vec<Label> = examples.iter().map(|e| e.label).collect();
    let assignment = stratified_folds(&labels, cfg.folds, cfg.seed)?;
    let per_fold: Vec<Vec<(usize, Label)>> = (0..cfg.folds)
        .into_par_iter()
        .map(|f| run_fold(examples, &assignment, f, kind, blocks, cfg))
        .collect::<Result<_, _>>()?;
    let mut predicted = vec![Label::Negative; examples.len()];
    for (i, l) in per_fold.into_iter().flatten() {
        predicted[i] = l;
    }
    let m = metrics(&predicted, &labels, task)?;
    let mut notes = vec![];
    if kind == ModelKind::Svm {
        notes.push("linear SVM (primal subgradient)".to_string());
    }
    Ok(EvalReport::new(
        task,
        dataset,
        kind.name(),
        Some(blocks),
        m,
        Some(cfg.folds),
        cfg.seed,
        examples.len(),
        cfg.snapshot(kind, blocks),
        notes,
    ))
}

/// Cross-validates every block combination of `universe` (without `{D}`
/// alone) in the published table order. Multinomial naive Bayes never
/// sees D.
pub fn sweep(
    examples: &[Example],
    task: Task,
    dataset: &str,
    kind: ModelKind,
    universe: BlockSet,
    cfg: &CvConfig,
) -> Result<Vec<EvalReport>, HarnessError> {
    let universe = if kind == ModelKind::MultinomialNb {
        universe.without(Block::D)
    } else {
        universe
    };
    check_blocks(examples, kind, universe)?;
    universe
        .sweep_combinations()
        .into_par_iter()
        .map(|b| cross_validate(examples, task, dataset, kind, b, cfg))
        .collect()
}
