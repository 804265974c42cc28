use serde::{Deserialize, Serialize};

use crate::features::FeatureVector;

/// Per-column z-scoring of selected columns, fit on training vectors.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    /// `(column, mean, standard deviation)`; a zero deviation is stored as 1.
    pub columns: Vec<(usize, f64, f64)>,
}

impl Standardizer {
    pub fn identity() -> Self {
        Standardizer::default()
    }

    pub fn fit<'a>(columns: &[usize], vectors: impl Iterator<Item = &'a FeatureVector>) -> Self {
        let vs: Vec<&FeatureVector> = vectors.collect();
        let n = vs.len() as f64;
        let columns = columns
            .iter()
            .map(|&c| {
                // Sorted so the result does not depend on example order.
                let mut xs: Vec<f64> = vs.iter().map(|v| v.get(c)).collect();
                xs.sort_by(f64::total_cmp);
                let mean = xs.iter().sum::<f64>() / n;
                let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
                let sd = var.sqrt();
                (c, mean, if sd > 0.0 { sd } else { 1.0 })
            })
            .collect();
        Standardizer { columns }
    }

    pub fn is_identity(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn apply(&self, v: &FeatureVector) -> FeatureVector {
        if self.columns.is_empty() {
            return v.clone();
        }
        let mut entries: Vec<(u32, f64)> = v.entries().to_vec();
        entries.retain(|e| !self.columns.iter().any(|c| c.0 == e.0 as usize));
        for &(c, mean, sd) in &self.columns {
            entries.push((c as u32, (v.get(c) - mean) / sd));
        }
        FeatureVector::new(v.space(), v.dim(), entries)
    }
}
