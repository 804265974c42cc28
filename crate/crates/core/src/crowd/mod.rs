//! Trust-weighted aggregation of crowd judgments, agreement buckets,
//! comparison against expert labels and class balancing.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Label, Task};

pub use io::{
    read_judgments, read_labels, write_labels, Column, JudgmentColumns, LabelColumns,
};

/// Slack for comparisons against agreement thresholds, which are ratios of
/// sums of decimal trust scores.
pub const AGREEMENT_EPS: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CrowdError {
    #[error("{0}: no votes")]
    NoVotes(String),
    #[error("{0}: total trust is zero")]
    ZeroTrust(String),
    #[error("{entity}: trust {trust} outside (0, 1]")]
    BadTrust { entity: String, trust: f64 },
    #[error("threshold {0} outside [0.5, 1]")]
    BadThreshold(f64),
    #[error("the two label sets have no entity in common")]
    EmptyIntersection,
    #[error("balancing needs exactly two classes, found {0:?}")]
    NotBinary(Vec<String>),
    #[error("{file}:{row}: {message}")]
    BadRow { file: String, row: u64, message: String },
    #[error("{0}: listed more than once")]
    DuplicateEntity(String),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vote {
    pub worker: String,
    pub label: String,
    pub trust: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JudgmentSet {
    pub entity: String,
    pub votes: Vec<Vote>,
}

impl JudgmentSet {
    pub fn new(entity: impl Into<String>) -> Self {
        JudgmentSet {
            entity: entity.into(),
            votes: Vec::new(),
        }
    }

    pub fn vote(mut self, worker: &str, label: &str, trust: f64) -> Self {
        self.votes.push(Vote {
            worker: worker.to_string(),
            label: label.to_string(),
            trust,
        });
        self
    }

    pub fn classes(&self) -> BTreeSet<&str> {
        self.votes.iter().map(|v| v.label.as_str()).collect()
    }

    pub fn workers(&self) -> usize {
        self.votes
            .iter()
            .map(|v| v.worker.as_str())
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn validate(&self) -> Result<(), CrowdError> {
        if self.votes.is_empty() {
            return Err(CrowdError::NoVotes(self.entity.clone()));
        }
        if let Some(v) = self.votes.iter().find(|v| !(v.trust > 0.0 && v.trust <= 1.0)) {
            return Err(CrowdError::BadTrust {
                entity: self.entity.clone(),
                trust: v.trust,
            });
        }
        Ok(())
    }

    /// Trust mass per class, each summed in ascending order so the result
    /// does not depend on vote order.
    fn trust_by_class(&self) -> (BTreeMap<&str, f64>, f64) {
        let mut per: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
        for v in &self.votes {
            per.entry(v.label.as_str()).or_default().push(v.trust);
        }
        let mut all: Vec<f64> = self.votes.iter().map(|v| v.trust).collect();
        all.sort_by(f64::total_cmp);
        let total = all.iter().sum();
        let sums = per
            .into_iter()
            .map(|(c, mut ts)| {
                ts.sort_by(f64::total_cmp);
                (c, ts.iter().sum())
            })
            .collect();
        (sums, total)
    }
}

/// `SumOfTrust(e, c) / SumOfTrustOfWorkers(e)`.
pub fn agreement(e: &JudgmentSet, class: &str) -> Result<f64, CrowdError> {
    e.validate()?;
    let (sums, total) = e.trust_by_class();
    if total <= 0.0 {
        return Err(CrowdError::ZeroTrust(e.entity.clone()));
    }
    Ok(sums.get(class).copied().unwrap_or(0.0) / total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Crowd,
    Expert,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Crowd => "crowd",
            Source::Expert => "expert",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregatedLabel {
    pub entity: String,
    pub class: String,
    pub agreement: f64,
    pub source: Source,
    /// Another class has the same trust mass, or no class reaches 0.5.
    #[serde(default)]
    pub contested: bool,
}

impl AggregatedLabel {
    pub fn expert(entity: impl Into<String>, class: impl Into<String>) -> Self {
        AggregatedLabel {
            entity: entity.into(),
            class: class.into(),
            agreement: 1.0,
            source: Source::Expert,
            contested: false,
        }
    }

    /// The binary label of this entity for `task`, if its class is one of
    /// the task's classes.
    pub fn label(&self, task: Task) -> Option<Label> {
        task.parse_label(&self.class)
    }
}

/// The class with the most trust mass. Ties go to the lexicographically
/// smaller class name and mark the entity contested.
pub fn aggregate(e: &JudgmentSet) -> Result<AggregatedLabel, CrowdError> {
    e.validate()?;
    let (sums, total) = e.trust_by_class();
    if total <= 0.0 {
        return Err(CrowdError::ZeroTrust(e.entity.clone()));
    }
    let mut best: Option<(&str, f64)> = None;
    let mut tied = false;
    for (&c, &s) in &sums {
        match best {
            Some((_, b)) if (s - b).abs() <= 1e-12 * total => tied = true,
            Some((_, b)) if s < b => {}
            _ => {
                best = Some((c, s));
                tied = false;
            }
        }
    }
    let (class, mass) = best.expect("validated non-empty");
    let agreement = mass / total;
    Ok(AggregatedLabel {
        entity: e.entity.clone(),
        class: class.to_string(),
        agreement,
        source: Source::Crowd,
        contested: tied || agreement < 0.5,
    })
}

pub fn aggregate_all(sets: &[JudgmentSet]) -> Result<Vec<AggregatedLabel>, CrowdError> {
    sets.iter().map(aggregate).collect()
}

/// Mean winning agreement over entities.
pub fn mean_agreement(labels: &[AggregatedLabel]) -> Option<f64> {
    if labels.is_empty() {
        return None;
    }
    let mut a: Vec<f64> = labels.iter().map(|l| l.agreement).collect();
    a.sort_by(f64::total_cmp);
    Some(a.iter().sum::<f64>() / a.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bucket {
    pub threshold: f64,
    pub kept: Vec<AggregatedLabel>,
    pub counts: BTreeMap<String, usize>,
}

impl Bucket {
    pub fn total(&self) -> usize {
        self.kept.len()
    }

    pub fn count(&self, class: &str) -> usize {
        self.counts.get(class).copied().unwrap_or(0)
    }

    /// `≥ 0.5 & 1934 & 2568 & 4502`, classes in the given order.
    pub fn table_row(&self, classes: &[&str]) -> String {
        let mut row = format!("≥ {}", self.threshold);
        for c in classes {
            row.push_str(&format!(" & {}", self.count(c)));
        }
        row.push_str(&format!(" & {}", self.total()));
        row
    }
}

/// Keeps labels whose winning agreement reaches `threshold`.
pub fn bucket(labels: &[AggregatedLabel], threshold: f64) -> Result<Bucket, CrowdError> {
    if !(0.5..=1.0).contains(&threshold) {
        return Err(CrowdError::BadThreshold(threshold));
    }
    let kept: Vec<AggregatedLabel> = labels
        .iter()
        .filter(|l| l.agreement >= threshold - AGREEMENT_EPS)
        .cloned()
        .collect();
    let mut counts = BTreeMap::new();
    for l in &kept {
        *counts.entry(l.class.clone()).or_insert(0) += 1;
    }
    Ok(Bucket {
        threshold,
        kept,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub entity: String,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub common: usize,
    pub matching: usize,
    pub rate: f64,
    /// Sorted by entity IRI.
    pub disagreements: Vec<Disagreement>,
}

/// Agreement between two labelings over their common entities.
pub fn compare(a: &[AggregatedLabel], b: &[AggregatedLabel]) -> Result<Comparison, CrowdError> {
    let bm: HashMap<&str, &str> = b
        .iter()
        .map(|l| (l.entity.as_str(), l.class.as_str()))
        .collect();
    let mut common = 0;
    let mut disagreements = Vec::new();
    let mut seen = BTreeSet::new();
    for l in a {
        if !seen.insert(l.entity.as_str()) {
            continue;
        }
        if let Some(&other) = bm.get(l.entity.as_str()) {
            common += 1;
            if other != l.class {
                disagreements.push(Disagreement {
                    entity: l.entity.clone(),
                    a: l.class.clone(),
                    b: other.to_string(),
                });
            }
        }
    }
    if common == 0 {
        return Err(CrowdError::EmptyIntersection);
    }
    disagreements.sort_by(|x, y| x.entity.cmp(&y.entity));
    let matching = common - disagreements.len();
    Ok(Comparison {
        common,
        matching,
        rate: matching as f64 / common as f64,
        disagreements,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BalanceStrategy {
    RandomDrop,
    LowAgreementDrop,
}

impl std::str::FromStr for BalanceStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" | "random-drop" | "random_drop" => Ok(BalanceStrategy::RandomDrop),
            "low-agreement" | "low-agreement-drop" | "low_agreement_drop" => {
                Ok(BalanceStrategy::LowAgreementDrop)
            }
            other => Err(format!(
                "unknown strategy `{other}` (expected random-drop or low-agreement-drop)"
            )),
        }
    }
}

/// Removes majority-class entities until both classes have the size of
/// the minority class. The result is sorted by entity IRI.
pub fn balance(
    labels: &[AggregatedLabel],
    strategy: BalanceStrategy,
    seed: u64,
) -> Result<Vec<AggregatedLabel>, CrowdError> {
    let mut by_class: BTreeMap<&str, Vec<&AggregatedLabel>> = BTreeMap::new();
    for l in labels {
        by_class.entry(l.class.as_str()).or_default().push(l);
    }
    if by_class.len() != 2 {
        return Err(CrowdError::NotBinary(
            by_class.keys().map(|c| c.to_string()).collect(),
        ));
    }
    let mut groups: Vec<Vec<&AggregatedLabel>> = by_class.into_values().collect();
    for g in &mut groups {
        g.sort_by(|x, y| x.entity.cmp(&y.entity));
    }
    groups.sort_by_key(|g| g.len());
    let target = groups[0].len();
    let majority = &mut groups[1];
    let excess = majority.len() - target;
    match strategy {
        BalanceStrategy::RandomDrop => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            majority.shuffle(&mut rng);
            majority.drain(..excess);
        }
        BalanceStrategy::LowAgreementDrop => {
            majority.sort_by(|x, y| {
                x.agreement
                    .total_cmp(&y.agreement)
                    .then_with(|| x.entity.cmp(&y.entity))
            });
            majority.drain(..excess);
        }
    }
    let mut out: Vec<AggregatedLabel> = groups.into_iter().flatten().cloned().collect();
    out.sort_by(|x, y| x.entity.cmp(&y.entity));
    Ok(out)
}
