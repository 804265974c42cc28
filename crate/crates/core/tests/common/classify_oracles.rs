//! Hand-computed references for the classifiers.
#![allow(dead_code)]

use fdistinct::classify::{
    logreg_gradient, logreg_objective, train_with_dense_columns, Hyperparameters, LabeledExample,
    ModelKind, TrainedModel,
};
use fdistinct::features::{FeatureVector, SpaceId};
use fdistinct::Label;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SPACE: SpaceId = SpaceId(0xfeed);

pub fn ex(entity: &str, x: &[f64], label: Label, weight: f64) -> LabeledExample {
    LabeledExample::new(entity, FeatureVector::from_dense(SPACE, x), label, weight)
}

pub fn train(kind: ModelKind, examples: &[LabeledExample]) -> TrainedModel {
    train_with_dense_columns(kind, &[], examples, &Hyperparameters::default()).unwrap()
}

/// 40 points in the plane, labelled by the side of the line
/// `0.6x - 0.8y + 0.5 = 0`, each at distance at least 1 from it.
pub fn separable_40(seed: u64) -> Vec<LabeledExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 40 {
        let (x, y): (f64, f64) = (rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0));
        let d = 0.6 * x - 0.8 * y + 0.5;
        if d.abs() < 1.0 {
            continue;
        }
        let label = Label::from_bool(d > 0.0);
        out.push(ex(&format!("p{:02}", out.len()), &[x, y], label, 1.0));
    }
    out
}

/// Best training accuracy over a grid of line directions and offsets.
pub fn best_line_accuracy(examples: &[LabeledExample]) -> f64 {
    let pts: Vec<(f64, f64, f64)> = examples
        .iter()
        .map(|e| (e.features.get(0), e.features.get(1), e.label.sign()))
        .collect();
    let mut best = 0usize;
    for a in 0..720 {
        let th = a as f64 * std::f64::consts::PI / 360.0;
        let (c, s) = (th.cos(), th.sin());
        for o in -80..=80 {
            let off = o as f64 * 0.1;
            let ok = pts
                .iter()
                .filter(|(x, y, l)| (c * x + s * y + off) * l > 0.0)
                .count();
            best = best.max(ok);
        }
    }
    best as f64 / pts.len() as f64
}

pub fn accuracy(m: &TrainedModel, examples: &[LabeledExample]) -> f64 {
    let ok = examples
        .iter()
        .filter(|e| m.predict(&e.features).unwrap().label == e.label)
        .count();
    ok as f64 / examples.len() as f64
}

pub fn nb_corpus() -> Vec<LabeledExample> {
    vec![
        ex("a", &[1.0, 1.0, 0.0], Label::Positive, 1.0),
        ex("b", &[1.0, 0.0, 0.0], Label::Positive, 1.0),
        ex("c", &[1.0, 1.0, 1.0], Label::Positive, 1.0),
        ex("d", &[0.0, 0.0, 1.0], Label::Negative, 1.0),
        ex("e", &[0.0, 1.0, 1.0], Label::Negative, 1.0),
        ex("f", &[1.0, 0.0, 1.0], Label::Negative, 1.0),
    ]
}

/// Posterior of the positive class for `(1, 0, 1)` on the 6-example
/// corpus, as trained and as worked out by hand.
pub fn bernoulli_hand_posterior() -> (f64, f64) {
    let m = train(ModelKind::BernoulliNb, &nb_corpus());
    let q = FeatureVector::from_dense(SPACE, &[1.0, 0.0, 1.0]);
    // P(+) 1/2, p+ = (4/5, 3/5, 2/5); P(-) 1/2, p- = (2/5, 2/5, 4/5).
    let pos = 0.5 * 0.8 * (1.0 - 0.6) * 0.4;
    let neg = 0.5 * 0.4 * (1.0 - 0.4) * 0.8;
    (m.probabilities(&q).unwrap().unwrap().0, pos / (pos + neg))
}

/// Worst relative error between the analytic LogReg gradient and central
/// differences over `rounds` random weighted datasets.
pub fn logreg_gradient_error(rounds: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..rounds {
        let dim = rng.gen_range(1..6);
        let n = rng.gen_range(3..15);
        let data: Vec<LabeledExample> = (0..n)
            .map(|i| {
                let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
                ex(&format!("e{i}"), &x, Label::from_bool(rng.gen()), rng.gen_range(0.05..=1.0))
            })
            .collect();
        let w: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = rng.gen_range(-1.0..1.0);
        let l2 = rng.gen_range(0.0..0.5);
        let (g, gb) = logreg_gradient(&data, &w, b, l2);
        let h = 1e-6;
        let rel = |a: f64, n: f64| (a - n).abs() / a.abs().max(n.abs()).max(1e-8);
        for j in 0..dim {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp[j] += h;
            wm[j] -= h;
            let num = (logreg_objective(&data, &wp, b, l2) - logreg_objective(&data, &wm, b, l2)) / (2.0 * h);
            worst = worst.max(rel(g[j], num));
        }
        let num = (logreg_objective(&data, &w, b + h, l2) - logreg_objective(&data, &w, b - h, l2)) / (2.0 * h);
        worst = worst.max(rel(gb, num));
    }
    worst
}
