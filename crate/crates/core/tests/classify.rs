mod common;

use common::classify_oracles::*;
use fdistinct::classify::{
    train_with_dense_columns, ClassifyError, Hyperparameters, LabeledExample, ModelKind, TrainedModel,
};
use fdistinct::features::{FeatureVector, SpaceId};
use fdistinct::Label;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn svm_separates_margin_one_set() {
    for seed in 0..5 {
        let data = separable_40(seed);
        assert_eq!(best_line_accuracy(&data), 1.0, "oracle: seed {seed} not separable");
        let m = train(ModelKind::Svm, &data);
        assert_eq!(accuracy(&m, &data), 1.0, "seed {seed}");
    }
}

#[test]
fn logreg_separates_margin_one_set() {
    let data = separable_40(11);
    assert_eq!(accuracy(&train(ModelKind::LogReg, &data), &data), 1.0);
}

#[test]
fn uniform_weight_scaling_leaves_svm_unchanged() {
    let full = separable_40(3);
    let half: Vec<_> = full
        .iter()
        .map(|e| LabeledExample { weight: 0.5, ..e.clone() })
        .collect();
    let a = train(ModelKind::Svm, &full);
    let b = train(ModelKind::Svm, &half);
    assert_eq!(a.params, b.params);
}

#[test]
fn svm_decision_is_the_dot_product() {
    let m = TrainedModel::linear(ModelKind::Svm, SPACE, vec![1.0, 0.0], 0.0);
    let p = m.predict(&FeatureVector::from_dense(SPACE, &[2.0, 5.0])).unwrap();
    assert_eq!((p.label, p.score), (Label::Positive, 2.0));
}

#[test]
fn zero_score_ties_go_positive() {
    let m = TrainedModel::linear(ModelKind::Svm, SPACE, vec![1.0, -1.0], 0.0);
    let p = m.predict(&FeatureVector::from_dense(SPACE, &[3.0, 3.0])).unwrap();
    assert_eq!(p.label, Label::Positive);
    assert!(p.tie);
}

#[test]
fn space_mismatch_is_an_error() {
    let m = TrainedModel::linear(ModelKind::Svm, SPACE, vec![1.0, 0.0], 0.0);
    let v = FeatureVector::from_dense(SpaceId(1), &[2.0, 5.0]);
    assert!(matches!(m.predict(&v), Err(ClassifyError::SpaceMismatch { .. })));
}

#[test]
fn bernoulli_nb_matches_hand_posterior() {
    let (got, want) = bernoulli_hand_posterior();
    assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    let m = train(ModelKind::BernoulliNb, &nb_corpus());
    let q = FeatureVector::from_dense(SPACE, &[1.0, 0.0, 1.0]);
    let (p, q_) = m.probabilities(&q).unwrap().unwrap();
    assert!((p + q_ - 1.0).abs() < 1e-12);
    assert_eq!(m.predict(&q).unwrap().label, Label::Negative);
}

#[test]
fn weighted_bernoulli_nb_matches_hand_posterior() {
    let mut data = nb_corpus();
    data[1].weight = 0.5;
    let m = train(ModelKind::BernoulliNb, &data);
    let q = FeatureVector::from_dense(SPACE, &[1.0, 0.0, 1.0]);
    // W+ = 2.5, W- = 3; p+ = (3.5, 3, 2) / 4.5.
    let pos = (2.5 / 5.5) * (3.5 / 4.5) * (1.0 - 3.0 / 4.5) * (2.0 / 4.5);
    let neg = (3.0 / 5.5) * 0.4 * (1.0 - 0.4) * 0.8;
    let (p, _) = m.probabilities(&q).unwrap().unwrap();
    assert!((p - pos / (pos + neg)).abs() < 1e-12);
}

#[test]
fn multinomial_nb_matches_hand_posterior() {
    let data = vec![
        ex("a", &[2.0, 1.0], Label::Positive, 1.0),
        ex("b", &[0.0, 3.0], Label::Negative, 1.0),
    ];
    let m = train(ModelKind::MultinomialNb, &data);
    // θ+ = (3/5, 2/5), θ- = (1/5, 4/5), equal priors.
    let q = FeatureVector::from_dense(SPACE, &[1.0, 1.0]);
    let pos = 0.6 * 0.4;
    let neg = 0.2 * 0.8;
    let (p, _) = m.probabilities(&q).unwrap().unwrap();
    assert!((p - pos / (pos + neg)).abs() < 1e-12);
}

#[test]
fn knn_returns_stored_label_at_stored_point() {
    let data = separable_40(5);
    let hp = Hyperparameters { knn_k: 1, ..Default::default() };
    let m = train_with_dense_columns(ModelKind::Knn, &[0, 1], &data, &hp).unwrap();
    for e in &data {
        assert_eq!(m.predict(&e.features).unwrap().label, e.label);
    }
}

#[test]
fn logreg_probabilities_are_complementary() {
    let data = separable_40(8);
    let m = train(ModelKind::LogReg, &data);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let v = FeatureVector::from_dense(SPACE, &[rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0)]);
        let (p, q) = m.probabilities(&v).unwrap().unwrap();
        assert!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0);
        assert!((p + q - 1.0).abs() < 1e-12);
    }
}

#[test]
fn logreg_gradient_matches_finite_differences() {
    let worst = logreg_gradient_error(20, 2024);
    assert!(worst < 1e-5, "relative error {worst}");
}

fn dataset() -> impl Strategy<Value = Vec<LabeledExample>> {
    prop::collection::vec(
        (prop::collection::vec(0u8..4, 4), any::<bool>(), 1u8..=10),
        4..24,
    )
    .prop_map(|rows| {
        let mut out: Vec<LabeledExample> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (x, l, w))| {
                let x: Vec<f64> = x.into_iter().map(f64::from).collect();
                ex(&format!("e{i:02}"), &x, Label::from_bool(l), w as f64 / 10.0)
            })
            .collect();
        out[0].label = Label::Positive;
        out[1].label = Label::Negative;
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn training_is_deterministic_and_round_trips(data in dataset()) {
        for kind in ModelKind::ALL {
            let a = train_with_dense_columns(kind, &[3], &data, &Hyperparameters::default()).unwrap();
            let b = train_with_dense_columns(kind, &[3], &data, &Hyperparameters::default()).unwrap();
            prop_assert_eq!(&a, &b);
            let back = TrainedModel::from_json(&a.to_json().unwrap()).unwrap();
            prop_assert_eq!(&back, &a);
            for e in &data {
                let (p, q) = (a.predict(&e.features).unwrap(), back.predict(&e.features).unwrap());
                prop_assert_eq!(p.score.to_bits(), q.score.to_bits());
            }
        }
    }

    #[test]
    fn nb_and_knn_ignore_example_order(data in dataset(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = data.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for kind in [ModelKind::BernoulliNb, ModelKind::MultinomialNb, ModelKind::Knn] {
            let a = train_with_dense_columns(kind, &[3], &data, &Hyperparameters::default()).unwrap();
            let b = train_with_dense_columns(kind, &[3], &shuffled, &Hyperparameters::default()).unwrap();
            prop_assert_eq!(&a, &b);
        }
    }

    #[test]
    fn nb_weight_increase_never_lowers_own_posterior(data in dataset(), pick in any::<prop::sample::Index>()) {
        let i = pick.index(data.len());
        let mut lighter = data.clone();
        lighter[i].weight = (data[i].weight / 2.0).max(0.05);
        for kind in [ModelKind::BernoulliNb, ModelKind::MultinomialNb] {
            let hi = train(kind, &data);
            let lo = train(kind, &lighter);
            let own = |m: &TrainedModel| {
                let (p, q) = m.probabilities(&data[i].features).unwrap().unwrap();
                if data[i].label.is_positive() { p } else { q }
            };
            prop_assert!(own(&hi) >= own(&lo) - 1e-12, "{} < {}", own(&hi), own(&lo));
        }
    }
}
