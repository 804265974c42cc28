use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::metrics::{metrics, Metrics};
use super::HarnessError;
use crate::features::BlockSet;
use crate::seneca::{VerdictSet, WitnessStep};
use crate::{Label, Task};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task: Task,
    /// "E" (expert labels), "C" (crowd labels) or a caller-chosen name.
    pub dataset: String,
    /// "SENECA" or a classifier name.
    pub method: String,
    pub blocks: Option<BlockSet>,
    pub metrics: Metrics,
    pub folds: Option<usize>,
    pub seed: u64,
    pub examples: usize,
    pub config: serde_json::Value,
    pub config_hash: String,
    #[serde(default)]
    pub notes: Vec<String>,
}

/// SHA-256 (hex) of the compact JSON text of `config`. Object keys are
/// serialized sorted, so equal values hash equally.
pub fn config_hash(config: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(
        serde_json::to_vec(config).expect("JSON values serialize"),
    ))
}

impl EvalReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        task: Task,
        dataset: &str,
        method: &str,
        blocks: Option<BlockSet>,
        metrics: Metrics,
        folds: Option<usize>,
        seed: u64,
        examples: usize,
        config: serde_json::Value,
        notes: Vec<String>,
    ) -> Self {
        EvalReport {
            task,
            dataset: dataset.to_string(),
            method: method.to_string(),
            blocks,
            metrics,
            folds,
            seed,
            examples,
            config_hash: config_hash(&config),
            config,
            notes,
        }
    }
}

/// Scores the alignment verdicts against reference labels. Entities
/// without a verdict get the default Instance / NPO prediction.
pub fn eval_seneca(
    verdicts: &VerdictSet,
    gold: &[(String, Label)],
    task: Task,
    dataset: &str,
) -> Result<EvalReport, HarnessError> {
    let predicted: Vec<Label> = gold.iter().map(|(e, _)| verdicts.predict(task, e)).collect();
    let labels: Vec<Label> = gold.iter().map(|g| g.1).collect();
    let m = metrics(&predicted, &labels, task)?;
    let missing = gold.iter().filter(|(e, _)| verdicts.flag(task, e).is_none()).count();
    let config = serde_json::json!({
        "method": "SENECA",
        "verdicts": verdicts.len(),
        "gold": gold.len(),
        "missing_verdicts": missing,
    });
    let mut notes = Vec::new();
    if missing > 0 {
        notes.push(format!("{missing} gold entities had no verdict; default rule applied"));
    }
    Ok(EvalReport::new(task, dataset, "SENECA", None, m, None, 0, gold.len(), config, notes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub entity: String,
    pub gold: Label,
    pub predicted: Label,
    /// The path that made the rule fire, for false positives.
    pub witness: Option<Vec<WitnessStep>>,
}

/// Misclassified gold entities, in gold order.
pub fn seneca_audit(verdicts: &VerdictSet, gold: &[(String, Label)], task: Task) -> Vec<AuditEntry> {
    gold.iter()
        .filter_map(|(e, g)| {
            let predicted = verdicts.predict(task, e);
            (predicted != *g).then(|| AuditEntry {
                entity: e.clone(),
                gold: *g,
                predicted,
                witness: verdicts.verdicts.get(e).and_then(|v| match task {
                    Task::ClassInstance => v.class_witness.clone(),
                    Task::PhysicalObject => v.physical_witness.clone(),
                }),
            })
        })
        .collect()
}

/// `.982` style: three decimals without the leading zero.
fn short(x: f64) -> String {
    let s = format!("{x:.3}");
    s.strip_prefix('0').map(str::to_string).unwrap_or(s)
}

/// Plain-text table with one row per report: method, dataset, blocks,
/// P/R/F1 for each class and the average F1.
pub fn render_table(reports: &[EvalReport]) -> String {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let (pos, neg) = reports
        .first()
        .map(|r| r.task.class_names())
        .unwrap_or(("+", "-"));
    rows.push(
        [
            "Method".to_string(),
            "Data".to_string(),
            "Features".to_string(),
            format!("P_{pos}"),
            format!("R_{pos}"),
            format!("F1_{pos}"),
            format!("P_{neg}"),
            format!("R_{neg}"),
            format!("F1_{neg}"),
            "avg F1".to_string(),
        ]
        .to_vec(),
    );
    for r in reports {
        let c = &r.metrics.classes;
        rows.push(vec![
            r.method.clone(),
            format!("{}_{}", r.task, r.dataset),
            r.blocks.map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
            short(c[0].precision),
            short(c[0].recall),
            short(c[0].f1),
            short(c[1].precision),
            short(c[1].recall),
            short(c[1].f1),
            short(r.metrics.avg_f1),
        ]);
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, cell)| {
                if j < 3 {
                    format!("{cell:<w$}", w = widths[j])
                } else {
                    format!("{cell:>w$}", w = widths[j])
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
        if i == 0 {
            let total = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            let _ = writeln!(out, "{}", "-".repeat(total));
        }
    }
    out
}
