use super::model::{NbParams, Params};
use super::LabeledExample;
use crate::features::FeatureVector;

/// Weighted naive Bayes. Class priors are weighted class frequencies.
///
/// Bernoulli: features are present when non-zero;
/// `P(xⱼ=1 | c) = (Wcⱼ + α) / (Wc + 2α)`, `Wcⱼ` the weight of class-`c`
/// examples having feature `j`.
///
/// Multinomial: `θcⱼ = (Σ s·xⱼ + α) / (Σⱼ Σ s·xⱼ + α·dim)` over class-`c`
/// examples.
pub(super) fn train(
    xs: &[FeatureVector],
    examples: &[LabeledExample],
    dim: usize,
    alpha: f64,
    multinomial: bool,
) -> Params {
    let mut class_weight = [0.0f64; 2];
    let mut mass = [vec![0.0f64; dim], vec![0.0f64; dim]];
    for i in super::knn::canonical_order(xs, examples) {
        let (x, e) = (&xs[i], &examples[i]);
        let c = class_index(e.label.is_positive());
        class_weight[c] += e.weight;
        for &(j, v) in x.entries() {
            mass[c][j as usize] += if multinomial { e.weight * v } else { e.weight };
        }
    }
    let total = class_weight[0] + class_weight[1];
    let likelihood = |c: usize| -> Vec<f64> {
        let denom = if multinomial {
            mass[c].iter().sum::<f64>() + alpha * dim as f64
        } else {
            class_weight[c] + 2.0 * alpha
        };
        mass[c].iter().map(|m| (m + alpha) / denom).collect()
    };
    Params::NaiveBayes(NbParams {
        multinomial,
        prior_positive: class_weight[0] / total,
        prior_negative: class_weight[1] / total,
        likelihood_positive: likelihood(0),
        likelihood_negative: likelihood(1),
    })
}

fn class_index(positive: bool) -> usize {
    if positive {
        0
    } else {
        1
    }
}

impl NbParams {
    fn log_joint(&self, x: &FeatureVector, positive: bool) -> f64 {
        let (prior, like) = if positive {
            (self.prior_positive, &self.likelihood_positive)
        } else {
            (self.prior_negative, &self.likelihood_negative)
        };
        let mut s = prior.ln();
        if self.multinomial {
            for &(j, v) in x.entries() {
                s += v * like[j as usize].ln();
            }
        } else {
            let mut present = x.entries().iter().map(|e| e.0 as usize).peekable();
            for (j, p) in like.iter().enumerate() {
                if present.peek() == Some(&j) {
                    present.next();
                    s += p.ln();
                } else {
                    s += (-p).ln_1p();
                }
            }
        }
        s
    }

    /// `ln P(+|x) - ln P(-|x)`.
    pub fn log_odds(&self, x: &FeatureVector) -> f64 {
        self.log_joint(x, true) - self.log_joint(x, false)
    }
}
