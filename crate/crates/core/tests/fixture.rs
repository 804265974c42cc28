mod common;

use std::collections::BTreeSet;

use common::fixture::{self, RESOURCE};
use fdistinct::crowd::{self, Source};
use fdistinct::harness::{eval_seneca, seneca_audit};
use fdistinct::seneca::{seneca_batch, WitnessStep};
use fdistinct::{Label, Task};

fn names(v: &serde_json::Value) -> BTreeSet<String> {
    v.as_array().unwrap().iter().map(|s| format!("{RESOURCE}{}", s.as_str().unwrap())).collect()
}

#[test]
fn store_matches_manifest() {
    let m = fixture::manifest();
    let s = fixture::store();
    assert_eq!(s.stats().records, m["store"]["records"].as_u64().unwrap());
    assert_eq!(s.stats().abstracts, m["store"]["abstracts"].as_u64().unwrap());
    assert_eq!(
        s.stats().abstracts_filtered_by_language,
        m["store"]["abstracts_filtered_by_language"].as_u64().unwrap()
    );
    let rome = s.get(&format!("{RESOURCE}Rome")).unwrap();
    assert!(rome.abstract_text.as_deref().unwrap().starts_with("Rome is the capital"));
}

#[test]
fn alignments_match_manifest() {
    let m = &fixture::manifest()["alignments"];
    let g = fixture::graph();
    assert_eq!(g.stats().rows, m["rows"].as_u64().unwrap());
    assert_eq!(g.edge_count() as u64, m["edges"].as_u64().unwrap());
    assert_eq!(g.stats().subclass_cycles, m["subclass_cycles"].as_u64().unwrap());
}

#[test]
fn seneca_batch_matches_manifest() {
    let m = &fixture::manifest()["seneca"];
    let store = fixture::store();
    let g = fixture::graph();
    let set = seneca_batch(&store, &g);
    assert_eq!(set.len(), store.targets().count());
    assert_eq!(set.summary.candidate_classes, m["candidate_classes"].as_u64().unwrap());
    assert_eq!(set.summary.candidate_physical_objects, m["candidate_physical_objects"].as_u64().unwrap());
    let classes: BTreeSet<String> = set.verdicts.values().filter(|v| v.flag(Task::ClassInstance)).map(|v| v.entity.clone()).collect();
    let pos: BTreeSet<String> = set.verdicts.values().filter(|v| v.flag(Task::PhysicalObject)).map(|v| v.entity.clone()).collect();
    assert_eq!(classes, names(&m["class"]));
    assert_eq!(pos, names(&m["physical_object"]));
    for v in set.verdicts.values() {
        for w in [&v.class_witness, &v.physical_witness].into_iter().flatten() {
            let w: &Vec<WitnessStep> = w;
            // category memberships come from the store, not the graph
            assert!(w.iter().filter(|s| !matches!(s.kind, fdistinct::seneca::EdgeKind::MemberOfCategory)).all(|s| s.holds_in(&g)));
        }
    }
}

#[test]
fn seneca_scores_match_hand_confusion() {
    let m = &fixture::manifest()["seneca"]["ci_confusion"];
    let set = seneca_batch(&fixture::store(), &fixture::graph());
    let gold: Vec<(String, Label)> = fixture::labels(Task::ClassInstance)
        .iter()
        .map(|l| (l.entity.clone(), l.label(Task::ClassInstance).unwrap()))
        .collect();
    let r = eval_seneca(&set, &gold, Task::ClassInstance, "C").unwrap();
    let c = &r.metrics.confusion;
    assert_eq!([c.tp, c.fp, c.fn_, c.tn].map(|x| x as u64), ["tp", "fp", "fn", "tn"].map(|k| m[k].as_u64().unwrap()));
    let audit = seneca_audit(&set, &gold, Task::ClassInstance);
    let wrong: BTreeSet<&str> = audit.iter().filter(|a| a.gold != a.predicted).map(|a| a.entity.trim_start_matches(RESOURCE)).collect();
    assert_eq!(wrong, ["Friendship", "Mona_Lisa", "Novel", "Symphony"].into());
}

#[test]
fn crowd_buckets_match_manifest() {
    let m = &fixture::manifest()["crowd"];
    let labels = fixture::labels(Task::ClassInstance);
    assert_eq!(labels.len(), 50);
    assert!(labels.iter().all(|l| l.source == Source::Crowd && !l.contested));
    for (th, key) in [(0.5, "bucket_0.5"), (0.8, "bucket_0.8")] {
        let b = crowd::bucket(&labels, th).unwrap();
        assert_eq!(b.count("C") as u64, m[key]["C"].as_u64().unwrap(), "{key}");
        assert_eq!(b.count("I") as u64, m[key]["I"].as_u64().unwrap(), "{key}");
    }
    let kept = crowd::bucket(&labels, 0.8).unwrap().kept;
    let bal = crowd::balance(&kept, crowd::BalanceStrategy::LowAgreementDrop, 1).unwrap();
    let gone: BTreeSet<String> = kept.iter().map(|l| l.entity.clone()).filter(|e| !bal.iter().any(|b| &b.entity == e)).collect();
    assert_eq!(gone, names(&m["balanced_0.8"]["dropped"]));
    assert_eq!(bal.len(), 46);
}
