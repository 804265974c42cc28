use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::Params;
use super::{Hyperparameters, LabeledExample};
use crate::features::FeatureVector;

/// Linear SVM by stochastic subgradient descent on
/// `λ/2 ‖w‖² + Σ sᵢ hinge(yᵢ, w·xᵢ + b) / Σ sᵢ`.
///
/// The bias is learned as the weight of a constant feature, so it is
/// regularized with the rest of `w`. Each step samples one example
/// (epoch-wise seeded shuffle) and scales its hinge subgradient by
/// `sᵢ / mean(s)`, which is an unbiased estimate of the weighted loss.
/// `w` is kept as `scale · v` so the `(1 - ηλ)` shrink is O(1).
pub(super) fn train_svm(
    xs: &[FeatureVector],
    examples: &[LabeledExample],
    dim: usize,
    hp: &Hyperparameters,
) -> Params {
    let lambda = hp.svm_lambda;
    let mean_s = examples.iter().map(|e| e.weight).sum::<f64>() / examples.len() as f64;
    let rel: Vec<f64> = examples.iter().map(|e| e.weight / mean_s).collect();
    let bias = dim;
    let mut v = vec![0.0f64; dim + 1];
    let mut scale = 1.0f64;
    let mut v_norm2 = 0.0f64;
    let radius2 = 1.0 / lambda;
    let mut order: Vec<usize> = (0..xs.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);
    let mut t = 0u64;
    for _ in 0..hp.svm_epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let y = examples[i].label.sign();
            let margin = y * scale * (xs[i].dot(&v) + v[bias]);
            if t == 1 {
                v.fill(0.0);
                scale = 1.0;
                v_norm2 = 0.0;
            } else {
                scale *= 1.0 - 1.0 / t as f64;
            }
            if margin < 1.0 {
                let step = eta * rel[i] * y / scale;
                for &(c, x) in xs[i].entries() {
                    let old = v[c as usize];
                    let new = old + step * x;
                    v_norm2 += new * new - old * old;
                    v[c as usize] = new;
                }
                let old = v[bias];
                v[bias] = old + step;
                v_norm2 += v[bias] * v[bias] - old * old;
            }
            let norm2 = scale * scale * v_norm2;
            if norm2 > radius2 {
                scale *= (radius2 / norm2).sqrt();
            }
            if scale < 1e-6 {
                for x in &mut v {
                    *x *= scale;
                }
                v_norm2 = v.iter().map(|x| x * x).sum();
                scale = 1.0;
            }
        }
    }
    let b = v[bias] * scale;
    v.truncate(dim);
    for x in &mut v {
        *x *= scale;
    }
    Params::Linear {
        weights: v,
        bias: b,
    }
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `1 / (1 + e^z)`, computed without overflow.
fn sigmoid_neg(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

struct Data<'a> {
    xs: &'a [FeatureVector],
    ys: Vec<f64>,
    /// Weights normalized to sum to 1.
    ps: Vec<f64>,
}

impl<'a> Data<'a> {
    fn new(xs: &'a [FeatureVector], examples: &[LabeledExample]) -> Self {
        let total: f64 = examples.iter().map(|e| e.weight).sum();
        Data {
            xs,
            ys: examples.iter().map(|e| e.label.sign()).collect(),
            ps: examples.iter().map(|e| e.weight / total).collect(),
        }
    }

    fn objective(&self, w: &[f64], b: f64, l2: f64) -> f64 {
        let loss: f64 = (0..self.xs.len())
            .map(|i| self.ps[i] * softplus(-self.ys[i] * (self.xs[i].dot(w) + b)))
            .sum();
        loss + 0.5 * l2 * w.iter().map(|x| x * x).sum::<f64>()
    }

    fn gradient(&self, w: &[f64], b: f64, l2: f64) -> (Vec<f64>, f64) {
        let mut g: Vec<f64> = w.iter().map(|x| l2 * x).collect();
        let mut gb = 0.0;
        for i in 0..self.xs.len() {
            let m = self.ys[i] * (self.xs[i].dot(w) + b);
            let coef = -self.ps[i] * self.ys[i] * sigmoid_neg(m);
            for &(c, x) in self.xs[i].entries() {
                g[c as usize] += coef * x;
            }
            gb += coef;
        }
        (g, gb)
    }
}

/// Weighted, L2-regularized logistic loss
/// `Σ pᵢ log(1 + exp(-yᵢ(w·xᵢ + b))) + l2/2 ‖w‖²` with `pᵢ = sᵢ / Σ s`.
/// The bias is not regularized.
pub fn logreg_objective(examples: &[LabeledExample], w: &[f64], b: f64, l2: f64) -> f64 {
    let xs: Vec<FeatureVector> = examples.iter().map(|e| e.features.clone()).collect();
    Data::new(&xs, examples).objective(w, b, l2)
}

/// Analytic gradient of [`logreg_objective`] with respect to `(w, b)`.
pub fn logreg_gradient(examples: &[LabeledExample], w: &[f64], b: f64, l2: f64) -> (Vec<f64>, f64) {
    let xs: Vec<FeatureVector> = examples.iter().map(|e| e.features.clone()).collect();
    Data::new(&xs, examples).gradient(w, b, l2)
}

/// Full-batch gradient descent with step `1/L`, `L` being the Lipschitz
/// bound `max ‖(xᵢ, 1)‖² / 4 + l2` of the gradient.
pub(super) fn train_logreg(
    xs: &[FeatureVector],
    examples: &[LabeledExample],
    dim: usize,
    hp: &Hyperparameters,
) -> Params {
    let data = Data::new(xs, examples);
    let max_norm2 = xs.iter().map(|x| x.norm_sq() + 1.0).fold(0.0, f64::max);
    let step = 1.0 / (0.25 * max_norm2 + hp.logreg_l2);
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    for _ in 0..hp.logreg_epochs {
        let (g, gb) = data.gradient(&w, b, hp.logreg_l2);
        for (wj, gj) in w.iter_mut().zip(&g) {
            *wj -= step * gj;
        }
        b -= step * gb;
    }
    Params::Linear { weights: w, bias: b }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_helpers() {
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(softplus(-1000.0), 0.0);
        assert_eq!(softplus(1000.0), 1000.0);
        assert_eq!(sigmoid_neg(0.0), 0.5);
        assert_eq!(sigmoid_neg(1000.0), 0.0);
        assert_eq!(sigmoid_neg(-1000.0), 1.0);
    }
}
