//! The bundled 50-entity fixture and the end-to-end pipeline over it.
#![allow(dead_code)]

use std::path::PathBuf;

use fdistinct::crowd::{self, AggregatedLabel, BalanceStrategy, JudgmentColumns};
use fdistinct::features::BlockSet;
use fdistinct::harness::{self, CvConfig, EvalReport};
use fdistinct::ingest::{EntityStore, IngestConfig, ParseMode};
use fdistinct::seneca::{seneca_batch, AlignmentGraph, SenecaConfig, VerdictSet};
use fdistinct::classify::ModelKind;
use fdistinct::Task;

pub const RESOURCE: &str = "http://dbpedia.org/resource/";

pub fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/mini").join(name)
}

pub fn manifest() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path("manifest.json")).unwrap()).unwrap()
}

pub fn store() -> EntityStore {
    EntityStore::ingest_files(&[path("entities.nt")], &IngestConfig::default(), ParseMode::Strict).unwrap()
}

pub fn graph() -> AlignmentGraph {
    AlignmentGraph::load(&[path("alignments.tsv")], SenecaConfig::default()).unwrap()
}

pub fn labels(task: Task) -> Vec<AggregatedLabel> {
    let f = std::fs::File::open(path("judgments.tsv")).unwrap();
    let sets = crowd::read_judgments(f, "judgments.tsv", &JudgmentColumns::default(), Some(task)).unwrap();
    crowd::aggregate_all(&sets).unwrap()
}

pub struct PipelineRun {
    pub verdicts: VerdictSet,
    pub balanced: Vec<AggregatedLabel>,
    pub reports: Vec<EvalReport>,
}

/// ingest, alignment verdicts, agreement, the 0.8 bucket, balancing and
/// the full SVM sweep for class vs. instance.
pub fn run_pipeline(seed: u64) -> PipelineRun {
    let store = store();
    let g = graph();
    let verdicts = seneca_batch(&store, &g);
    let labels = labels(Task::ClassInstance);
    let kept = crowd::bucket(&labels, 0.8).unwrap().kept;
    let balanced = crowd::balance(&kept, BalanceStrategy::LowAgreementDrop, seed).unwrap();
    let (examples, diags) = harness::build_examples(&store, &balanced, Some(&verdicts), Task::ClassInstance);
    assert!(diags.is_empty(), "{diags:?}");
    let cfg = CvConfig { seed, ..CvConfig::default() };
    let reports = harness::sweep(
        &examples,
        Task::ClassInstance,
        harness::dataset_tag(&balanced),
        ModelKind::Svm,
        "AUED".parse::<BlockSet>().unwrap(),
        &cfg,
    )
    .unwrap();
    PipelineRun { verdicts, balanced, reports }
}
