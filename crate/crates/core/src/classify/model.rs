use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::standardize::Standardizer;
use super::{knn, ClassifyError, Hyperparameters, ModelKind, Prediction};
use crate::features::{FeatureVector, SpaceId};
use crate::Label;

pub const MODEL_FORMAT: &str = "fd-model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub multinomial: bool,
    pub prior_positive: f64,
    pub prior_negative: f64,
    pub likelihood_positive: Vec<f64>,
    pub likelihood_negative: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredExample {
    pub entity: String,
    pub label: Label,
    pub weight: f64,
    /// Standardized sparse entries.
    pub features: Vec<(u32, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Params {
    Linear { weights: Vec<f64>, bias: f64 },
    NaiveBayes(NbParams),
    Knn { examples: Vec<StoredExample> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: ModelKind,
    pub space: SpaceId,
    pub dim: usize,
    pub hyperparameters: Hyperparameters,
    pub standardizer: Standardizer,
    pub params: Params,
}

#[derive(Serialize)]
struct Envelope<'a> {
    format: &'static str,
    version: u32,
    #[serde(flatten)]
    model: &'a TrainedModel,
}

#[derive(Deserialize)]
struct OwnedEnvelope {
    format: String,
    version: u32,
    #[serde(flatten)]
    model: TrainedModel,
}

impl TrainedModel {
    /// A linear model over raw (unstandardized) features.
    pub fn linear(kind: ModelKind, space: SpaceId, weights: Vec<f64>, bias: f64) -> Self {
        TrainedModel {
            kind,
            space,
            dim: weights.len(),
            hyperparameters: Hyperparameters::default(),
            standardizer: Standardizer::identity(),
            params: Params::Linear { weights, bias },
        }
    }

    pub fn predict(&self, v: &FeatureVector) -> Result<Prediction, ClassifyError> {
        self.check(v)?;
        let x = self.standardizer.apply(v);
        let score = match &self.params {
            Params::Linear { weights, bias } => x.dot(weights) + bias,
            Params::NaiveBayes(nb) => nb.log_odds(&x),
            Params::Knn { examples } => {
                knn::vote(examples, &x, self.hyperparameters.knn_k, &self.standardizer)
            }
        };
        let p = Prediction::from_score(score);
        if p.tie {
            log::debug!("tied score for a {} prediction, choosing +1", self.kind);
        }
        Ok(p)
    }

    /// `(P(+1|v), P(-1|v))` for logistic regression and naive Bayes.
    pub fn probabilities(&self, v: &FeatureVector) -> Result<Option<(f64, f64)>, ClassifyError> {
        let score = match (&self.params, self.kind) {
            (Params::Linear { .. }, ModelKind::LogReg) | (Params::NaiveBayes(_), _) => {
                self.predict(v)?.score
            }
            _ => return Ok(None),
        };
        let pos = 1.0 / (1.0 + (-score).exp());
        Ok(Some((pos, 1.0 - pos)))
    }

    fn check(&self, v: &FeatureVector) -> Result<(), ClassifyError> {
        if v.space() != self.space {
            return Err(ClassifyError::SpaceMismatch {
                expected: self.space,
                found: v.space(),
            });
        }
        if v.dim() != self.dim {
            return Err(ClassifyError::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, ClassifyError> {
        Ok(serde_json::to_string_pretty(&Envelope {
            format: MODEL_FORMAT,
            version: MODEL_VERSION,
            model: self,
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        let env: OwnedEnvelope = serde_json::from_str(text)?;
        if env.format != MODEL_FORMAT {
            return Err(ClassifyError::BadModel(format!("unknown format `{}`", env.format)));
        }
        if env.version != MODEL_VERSION {
            return Err(ClassifyError::BadModel(format!(
                "unsupported version {} (expected {MODEL_VERSION})",
                env.version
            )));
        }
        let m = env.model;
        let dim_ok = match (&m.params, m.kind) {
            (Params::Linear { weights, .. }, ModelKind::Svm | ModelKind::LogReg) => {
                weights.len() == m.dim
            }
            (Params::NaiveBayes(nb), ModelKind::BernoulliNb | ModelKind::MultinomialNb) => {
                nb.multinomial == (m.kind == ModelKind::MultinomialNb)
                    && nb.likelihood_positive.len() == m.dim
                    && nb.likelihood_negative.len() == m.dim
            }
            (Params::Knn { examples }, ModelKind::Knn) => examples
                .iter()
                .all(|e| e.features.iter().all(|f| (f.0 as usize) < m.dim)),
            _ => {
                return Err(ClassifyError::BadModel(format!(
                    "parameters do not match kind {}",
                    m.kind
                )))
            }
        };
        if !dim_ok || m.standardizer.columns.iter().any(|c| c.0 >= m.dim) {
            return Err(ClassifyError::BadModel("parameter sizes disagree with dim".into()));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), ClassifyError> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, ClassifyError> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
