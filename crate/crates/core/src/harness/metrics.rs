use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::{Label, Task};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    /// Counts with respect to the positive class.
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Positive class first.
    pub classes: Vec<ClassScores>,
    /// Mean of the two per-class F1 values.
    pub avg_f1: f64,
    pub confusion: Confusion,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn scores(class: &str, tp: usize, fp: usize, fn_: usize) -> ClassScores {
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    ClassScores {
        class: class.to_string(),
        precision,
        recall,
        f1,
        support: tp + fn_,
    }
}

/// Per-class precision, recall and F1 on the binary confusion matrix.
pub fn metrics(predicted: &[Label], gold: &[Label], task: Task) -> Result<Metrics, HarnessError> {
    if predicted.len() != gold.len() {
        return Err(HarnessError::LengthMismatch(predicted.len(), gold.len()));
    }
    if gold.is_empty() {
        return Err(HarnessError::Empty);
    }
    let mut c = Confusion::default();
    for (p, g) in predicted.iter().zip(gold) {
        match (p.is_positive(), g.is_positive()) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    let (pos, neg) = task.class_names();
    let classes = vec![scores(pos, c.tp, c.fp, c.fn_), scores(neg, c.tn, c.fn_, c.fp)];
    let avg_f1 = (classes[0].f1 + classes[1].f1) / 2.0;
    Ok(Metrics {
        classes,
        avg_f1,
        confusion: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Negative as N, Positive as P};

    #[test]
    fn perfect() {
        let m = metrics(&[P, N, P], &[P, N, P], Task::ClassInstance).unwrap();
        for c in &m.classes {
            assert_eq!((c.precision, c.recall, c.f1), (1.0, 1.0, 1.0));
        }
        assert_eq!(m.avg_f1, 1.0);
    }

    #[test]
    fn three_one_one() {
        let pred = [P, P, P, P, N, N];
        let gold = [P, P, P, N, P, N];
        let m = metrics(&pred, &gold, Task::ClassInstance).unwrap();
        let c = &m.classes[0];
        assert_eq!((c.class.as_str(), c.precision, c.recall, c.f1), ("C", 0.75, 0.75, 0.75));
    }

    #[test]
    fn degenerate_class_scores_zero() {
        let m = metrics(&[P, P], &[P, P], Task::PhysicalObject).unwrap();
        assert_eq!(m.classes[1].f1, 0.0);
        assert_eq!(m.avg_f1, 0.5);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(metrics(&[P], &[P, N], Task::ClassInstance), Err(HarnessError::LengthMismatch(1, 2))));
    }
}
