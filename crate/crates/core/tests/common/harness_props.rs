//! Shared datasets and property bodies for the cross-validation harness.
#![allow(dead_code)]

use fdistinct::classify::ModelKind;
use fdistinct::features::{BlockSet, FeatureConfig};
use fdistinct::harness::{config_hash, cross_validate, fold_spaces, stratified_folds, CvConfig, EvalReport, Example};
use fdistinct::ingest::EntityRecord;
use fdistinct::{Label, Task};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example(id: &str, abs: &str, label: Label, verdict: Option<bool>) -> Example {
    let mut r = EntityRecord::new(format!("http://dbpedia.org/resource/{id}"));
    r.abstract_text = Some(abs.to_string());
    Example { record: r, label, weight: 1.0, verdict }
}

/// Class entities read "a kind of"; instances read "born in"; IDs differ in
/// capitalisation and shape as well.
pub fn separable(n: usize, seed: u64) -> Vec<Example> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let filler = ["the", "with", "many", "old", "large", "city", "river", "known", "used"];
    (0..n)
        .map(|i| {
            let pos = i % 2 == 0;
            let mut words: Vec<&str> = (0..6).map(|_| filler[rng.gen_range(0..filler.len())]).collect();
            let cue = if pos { ["is", "a", "kind", "of"] } else { ["was", "born", "in", "1900"] };
            words.splice(2..2, cue);
            let id = if pos { format!("Tool{i}") } else { format!("John_Smith_{i}") };
            let mut e = example(&id, &words.join(" "), Label::from_bool(pos), Some(pos));
            e.weight = 0.8 + 0.2 * rng.gen::<f64>();
            e.record.out_degree.insert(if pos { "p:sub" } else { "p:birth" }.into(), 1);
            e
        })
        .collect()
}

pub fn fast() -> CvConfig {
    let mut c = CvConfig::default();
    c.hyperparameters.svm_epochs = 20;
    c.hyperparameters.logreg_epochs = 50;
    c
}

pub fn small_dataset() -> impl Strategy<Value = (Vec<Example>, usize, u64)> {
    let row = (
        prop::collection::vec(prop_oneof![Just("a"), Just("b"), Just("C"), Just("d."), Just("e-f")], 1..6),
        prop::collection::btree_map("[pq]", 1u64..4, 0..3),
        any::<bool>(),
        any::<bool>(),
        1u8..=10,
    );
    (prop::collection::vec(row, 8..20), 2usize..5, any::<u64>()).prop_map(|(rows, folds, seed)| {
        let mut ex: Vec<Example> = rows
            .into_iter()
            .enumerate()
            .map(|(i, (words, props, l, v, w))| {
                let mut e = example(&format!("E{i:02}_x"), &words.join(" "), Label::from_bool(l), Some(v));
                e.record.out_degree = props.into_iter().collect();
                e.weight = w as f64 / 10.0;
                e
            })
            .collect();
        for (i, e) in ex.iter_mut().take(2 * folds).enumerate() {
            e.label = Label::from_bool(i % 2 == 0);
        }
        (ex, folds, seed)
    })
}

/// Deleting one entity leaves the feature space of its held-out fold
/// untouched.
pub fn no_leakage_case(ex: &[Example], folds: usize, seed: u64, pick: prop::sample::Index) -> Result<(), TestCaseError> {
    let labels: Vec<Label> = ex.iter().map(|e| e.label).collect();
    let assignment = stratified_folds(&labels, folds, seed).unwrap();
    let cfg = FeatureConfig::default();
    let spaces = fold_spaces(ex, &assignment, folds, BlockSet::ALL, &cfg).unwrap();
    let victim = pick.index(ex.len());
    let fold = assignment[victim];
    let mut ex2 = ex.to_vec();
    let mut as2 = assignment.clone();
    ex2.remove(victim);
    as2.remove(victim);
    let after = fold_spaces(&ex2, &as2, folds, BlockSet::ALL, &cfg).unwrap();
    prop_assert_eq!(after[fold].dictionary(), spaces[fold].dictionary());
    prop_assert_eq!(&after[fold], &spaces[fold]);
    Ok(())
}

/// Two runs with one seed give byte-identical reports that round-trip
/// through JSON with their config hash intact.
pub fn determinism_case(ex: &[Example], folds: usize, seed: u64, k: usize) -> Result<(), TestCaseError> {
    let kind = ModelKind::ALL[k];
    let blocks: BlockSet = if kind == ModelKind::MultinomialNb { "AUE" } else { "AUED" }.parse().unwrap();
    let cfg = CvConfig { folds, seed, ..fast() };
    let a = cross_validate(ex, Task::PhysicalObject, "C", kind, blocks, &cfg).unwrap();
    let b = cross_validate(ex, Task::PhysicalObject, "C", kind, blocks, &cfg).unwrap();
    let ja = serde_json::to_string(&a).unwrap();
    prop_assert_eq!(&ja, &serde_json::to_string(&b).unwrap());
    let back: EvalReport = serde_json::from_str(&ja).unwrap();
    prop_assert_eq!(&back, &a);
    prop_assert_eq!(config_hash(&back.config), back.config_hash.clone());
    prop_assert_eq!(back.seed, seed);
    Ok(())
}
