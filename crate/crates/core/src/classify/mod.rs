//! Weight-aware binary classifiers behind one train/predict interface.
//!
//! Labels are `Label::Positive` (+1) and `Label::Negative` (-1). Every
//! example carries a weight in (0, 1], usually the crowd agreement of its
//! label; expert labels have weight 1.

mod knn;
mod linear;
mod model;
mod nb;
mod standardize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{FeatureSpace, FeatureVector, SpaceId};
use crate::Label;

pub use linear::{logreg_gradient, logreg_objective};
pub use model::{NbParams, Params, StoredExample, TrainedModel, MODEL_FORMAT, MODEL_VERSION};
pub use standardize::Standardizer;

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error("need at least 2 training examples, got {0}")]
    TooFewExamples(usize),
    #[error("training data contains only {0:?} labels")]
    SingleLabel(Label),
    #[error("{entity}: non-finite feature value")]
    NonFinite { entity: String },
    #[error("{entity}: weight {weight} outside (0, 1]")]
    BadWeight { entity: String, weight: f64 },
    #[error("{entity}: negative feature value not allowed for multinomial naive Bayes")]
    NegativeCount { entity: String },
    #[error("feature space mismatch: model expects {expected}, vector is from {found}")]
    SpaceMismatch { expected: SpaceId, found: SpaceId },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid hyperparameter: {0}")]
    BadHyperparameter(String),
    #[error("invalid model file: {0}")]
    BadModel(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "svm")]
    Svm,
    #[serde(rename = "logreg")]
    LogReg,
    #[serde(rename = "bernoulli-nb")]
    BernoulliNb,
    #[serde(rename = "multinomial-nb")]
    MultinomialNb,
    #[serde(rename = "knn")]
    Knn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Svm,
        ModelKind::LogReg,
        ModelKind::BernoulliNb,
        ModelKind::MultinomialNb,
        ModelKind::Knn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Svm => "svm",
            ModelKind::LogReg => "logreg",
            ModelKind::BernoulliNb => "bernoulli-nb",
            ModelKind::MultinomialNb => "multinomial-nb",
            ModelKind::Knn => "knn",
        }
    }

    /// Whether the dense U/D columns are z-scored before training.
    pub fn standardizes(self) -> bool {
        matches!(self, ModelKind::Svm | ModelKind::LogReg | ModelKind::Knn)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "svm" => Ok(ModelKind::Svm),
            "logreg" | "lr" | "logistic" => Ok(ModelKind::LogReg),
            "bernoulli-nb" | "bnb" | "nb" => Ok(ModelKind::BernoulliNb),
            "multinomial-nb" | "mnb" => Ok(ModelKind::MultinomialNb),
            "knn" => Ok(ModelKind::Knn),
            other => Err(format!(
                "unknown classifier `{other}` (expected svm, logreg, bnb, mnb or knn)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparameters {
    pub svm_lambda: f64,
    pub svm_epochs: usize,
    pub logreg_l2: f64,
    pub logreg_epochs: usize,
    pub nb_alpha: f64,
    pub knn_k: usize,
    /// Seeds the per-epoch example shuffle of the SVM.
    pub seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            svm_lambda: 1e-4,
            svm_epochs: 50,
            logreg_l2: 1e-4,
            logreg_epochs: 200,
            nb_alpha: 1.0,
            knn_k: 5,
            seed: 42,
        }
    }
}

impl Hyperparameters {
    fn validate(&self, kind: ModelKind) -> Result<(), ClassifyError> {
        let bad = |m: &str| Err(ClassifyError::BadHyperparameter(m.to_string()));
        match kind {
            ModelKind::Svm if !(self.svm_lambda > 0.0 && self.svm_lambda.is_finite()) => {
                bad("svm_lambda must be positive")
            }
            ModelKind::Svm if self.svm_epochs == 0 => bad("svm_epochs must be positive"),
            ModelKind::LogReg if !(self.logreg_l2 >= 0.0 && self.logreg_l2.is_finite()) => {
                bad("logreg_l2 must be non-negative")
            }
            ModelKind::BernoulliNb | ModelKind::MultinomialNb
                if !(self.nb_alpha > 0.0 && self.nb_alpha.is_finite()) =>
            {
                bad("nb_alpha must be positive")
            }
            ModelKind::Knn if self.knn_k == 0 => bad("knn_k must be positive"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample {
    pub entity: String,
    pub features: FeatureVector,
    pub label: Label,
    pub weight: f64,
}

impl LabeledExample {
    pub fn new(entity: impl Into<String>, features: FeatureVector, label: Label, weight: f64) -> Self {
        LabeledExample {
            entity: entity.into(),
            features,
            label,
            weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Label,
    /// Signed decision value: margin for linear models, log posterior odds
    /// for naive Bayes, normalized weighted vote for KNN.
    pub score: f64,
    /// The score was exactly zero and the tie went to +1.
    pub tie: bool,
}

impl Prediction {
    fn from_score(score: f64) -> Self {
        let tie = score == 0.0;
        Prediction {
            label: Label::from_bool(score >= 0.0),
            score,
            tie,
        }
    }
}

/// Trains a model on examples from `space`; dense U/D columns are
/// standardized for the kinds that need it.
pub fn train(
    kind: ModelKind,
    space: &FeatureSpace,
    examples: &[LabeledExample],
    hp: &Hyperparameters,
) -> Result<TrainedModel, ClassifyError> {
    train_with_dense_columns(kind, &space.layout().dense_columns(), examples, hp)
}

/// Like [`train`] for vectors not tied to a fitted [`FeatureSpace`];
/// `dense_columns` lists the columns to standardize.
pub fn train_with_dense_columns(
    kind: ModelKind,
    dense_columns: &[usize],
    examples: &[LabeledExample],
    hp: &Hyperparameters,
) -> Result<TrainedModel, ClassifyError> {
    hp.validate(kind)?;
    let (space, dim) = validate_examples(examples)?;
    if kind == ModelKind::MultinomialNb {
        if let Some(e) = examples
            .iter()
            .find(|e| e.features.entries().iter().any(|x| x.1 < 0.0))
        {
            return Err(ClassifyError::NegativeCount {
                entity: e.entity.clone(),
            });
        }
    }
    let standardizer = if kind.standardizes() {
        Standardizer::fit(dense_columns, examples.iter().map(|e| &e.features))
    } else {
        Standardizer::identity()
    };
    let xs: Vec<FeatureVector> = examples
        .iter()
        .map(|e| standardizer.apply(&e.features))
        .collect();
    let params = match kind {
        ModelKind::Svm => linear::train_svm(&xs, examples, dim, hp),
        ModelKind::LogReg => linear::train_logreg(&xs, examples, dim, hp),
        ModelKind::BernoulliNb => nb::train(&xs, examples, dim, hp.nb_alpha, false),
        ModelKind::MultinomialNb => nb::train(&xs, examples, dim, hp.nb_alpha, true),
        ModelKind::Knn => knn::store(&xs, examples),
    };
    Ok(TrainedModel {
        kind,
        space,
        dim,
        hyperparameters: hp.clone(),
        standardizer,
        params,
    })
}

fn validate_examples(examples: &[LabeledExample]) -> Result<(SpaceId, usize), ClassifyError> {
    if examples.len() < 2 {
        return Err(ClassifyError::TooFewExamples(examples.len()));
    }
    let first = &examples[0].features;
    let (space, dim) = (first.space(), first.dim());
    for e in examples {
        if e.features.space() != space {
            return Err(ClassifyError::SpaceMismatch {
                expected: space,
                found: e.features.space(),
            });
        }
        if e.features.dim() != dim {
            return Err(ClassifyError::DimensionMismatch {
                expected: dim,
                found: e.features.dim(),
            });
        }
        if !e.features.is_finite() {
            return Err(ClassifyError::NonFinite {
                entity: e.entity.clone(),
            });
        }
        if !(e.weight > 0.0 && e.weight <= 1.0) {
            return Err(ClassifyError::BadWeight {
                entity: e.entity.clone(),
                weight: e.weight,
            });
        }
    }
    let l0 = examples[0].label;
    if examples.iter().all(|e| e.label == l0) {
        return Err(ClassifyError::SingleLabel(l0));
    }
    Ok((space, dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(x: &[f64], label: Label) -> LabeledExample {
        LabeledExample::new("e", FeatureVector::from_dense(SpaceId(7), x), label, 1.0)
    }

    #[test]
    fn rejects_bad_inputs() {
        let hp = Hyperparameters::default();
        let one = [ex(&[1.0], Label::Positive)];
        assert!(matches!(
            train_with_dense_columns(ModelKind::Svm, &[], &one, &hp),
            Err(ClassifyError::TooFewExamples(1))
        ));
        let same = [ex(&[1.0], Label::Positive), ex(&[2.0], Label::Positive)];
        assert!(matches!(
            train_with_dense_columns(ModelKind::Svm, &[], &same, &hp),
            Err(ClassifyError::SingleLabel(Label::Positive))
        ));
        let nan = [ex(&[f64::NAN], Label::Positive), ex(&[2.0], Label::Negative)];
        assert!(matches!(
            train_with_dense_columns(ModelKind::LogReg, &[], &nan, &hp),
            Err(ClassifyError::NonFinite { .. })
        ));
        let mut heavy = [ex(&[1.0], Label::Positive), ex(&[2.0], Label::Negative)];
        heavy[1].weight = 1.5;
        assert!(matches!(
            train_with_dense_columns(ModelKind::Knn, &[], &heavy, &hp),
            Err(ClassifyError::BadWeight { .. })
        ));
        let neg = [ex(&[-1.0], Label::Positive), ex(&[2.0], Label::Negative)];
        assert!(matches!(
            train_with_dense_columns(ModelKind::MultinomialNb, &[], &neg, &hp),
            Err(ClassifyError::NegativeCount { .. })
        ));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ModelKind::ALL {
            assert_eq!(k.name().parse::<ModelKind>().unwrap(), k);
        }
    }
}
