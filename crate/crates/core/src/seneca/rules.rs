use std::collections::{BTreeMap, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bitset::BitSet;
use super::graph::{AlignmentGraph, Dataset, EdgeKind, NodeId, NodeKey};
use super::SenecaError;
use crate::ingest::EntityStore;
use crate::{Label, Task};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassInstance {
    #[serde(rename = "C")]
    Class,
    #[serde(rename = "I")]
    Instance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Physical {
    #[serde(rename = "PO")]
    PhysicalObject,
    #[serde(rename = "NPO")]
    NotPhysicalObject,
}

/// One traversed edge. `reversed` is set when an ALIGNED edge was walked
/// against its loaded direction (only possible with symmetrization on).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub from: NodeKey,
    pub kind: EdgeKind,
    pub to: NodeKey,
    pub reversed: bool,
}

impl WitnessStep {
    /// Whether this step is an edge of `g`. Memberships that came from an
    /// entity store rather than the graph do not hold.
    pub fn holds_in(&self, g: &AlignmentGraph) -> bool {
        if self.reversed {
            self.kind == EdgeKind::Aligned
                && g.config().symmetrize_aligned
                && g.has_edge(&self.to, self.kind, &self.from)
        } else {
            g.has_edge(&self.from, self.kind, &self.to)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenecaVerdict {
    pub entity: String,
    pub class_or_instance: ClassInstance,
    pub physical: Physical,
    /// Present iff the class rule fired.
    pub class_witness: Option<Vec<WitnessStep>>,
    /// Present iff the physical-object rule fired.
    pub physical_witness: Option<Vec<WitnessStep>>,
}

impl SenecaVerdict {
    /// The verdict as a binary flag for `task` (true = Class / PO).
    pub fn flag(&self, task: Task) -> bool {
        match task {
            Task::ClassInstance => self.class_or_instance == ClassInstance::Class,
            Task::PhysicalObject => self.physical == Physical::PhysicalObject,
        }
    }
}

fn step(g: &AlignmentGraph, from: NodeId, kind: EdgeKind, to: NodeId, reversed: bool) -> WitnessStep {
    WitnessStep {
        from: g.key(from).clone(),
        kind,
        to: g.key(to).clone(),
        reversed,
    }
}

fn class_witness(g: &AlignmentGraph, e: NodeId) -> Option<Vec<WitnessStep>> {
    let cfg = g.config();
    let instance_marker = g.id(&cfg.wordnet_instance_marker);
    for &(b, rev_b) in g.aligned_neighbors(e) {
        if g.dataset(b) != Dataset::BabelNet {
            continue;
        }
        for &(w, rev_w) in g.aligned_neighbors(b) {
            let lexical = matches!(
                g.dataset(w),
                Dataset::WordNet | Dataset::OmegaWiki | Dataset::Wiktionary
            );
            if !lexical {
                continue;
            }
            let vetoed = cfg.instance_flag_vetoes
                && g.dataset(w) == Dataset::WordNet
                && instance_marker.is_some_and(|m| g.out_edges(w, EdgeKind::HasType).any(|t| t == m));
            if vetoed {
                continue;
            }
            return Some(vec![
                step(g, e, EdgeKind::Aligned, b, rev_b),
                step(g, b, EdgeKind::Aligned, w, rev_w),
            ]);
        }
    }
    let marker = g.id(&cfg.owl_class_marker)?;
    g.out_edges(e, EdgeKind::HasType)
        .find(|&t| t == marker)
        .map(|t| vec![step(g, e, EdgeKind::HasType, t, false)])
}

/// Class rule for a single DBpedia entity. Absent entities are instances.
pub fn seneca_class_instance(iri: &str, g: &AlignmentGraph) -> ClassInstance {
    match g.id(&NodeKey::dbpedia(iri)).and_then(|e| class_witness(g, e)) {
        Some(_) => ClassInstance::Class,
        None => ClassInstance::Instance,
    }
}

/// Cached reachability for the physical-object rule.
#[derive(Debug)]
pub(crate) struct PhysicalIndex {
    /// Nodes with a SUBCLASS_OF* path to the root (root included).
    reach_root: BitSet,
    next_to_root: Vec<Option<NodeId>>,
    /// YAGO nodes aligned to a (Onto)WordNet node in `reach_root`.
    bridge: Vec<Option<(NodeId, bool)>>,
    /// YAGO nodes with a YAGO-only SUBCLASS_OF* path to a bridge node.
    yago_reach: BitSet,
    next_in_yago: Vec<Option<NodeId>>,
    /// Category nodes aligned to a node in `yago_reach`.
    category_hit: Vec<Option<(NodeId, bool)>>,
}

impl PhysicalIndex {
    fn build(g: &AlignmentGraph) -> Self {
        let n = g.node_count();
        let mut idx = PhysicalIndex {
            reach_root: BitSet::new(n),
            next_to_root: vec![None; n],
            bridge: vec![None; n],
            yago_reach: BitSet::new(n),
            next_in_yago: vec![None; n],
            category_hit: vec![None; n],
        };
        let Some(root) = g.id(&g.config().physical_object_root) else {
            return idx;
        };

        // reverse BFS from the root over SUBCLASS_OF
        let mut queue = VecDeque::from([root]);
        idx.reach_root.insert(root.index());
        while let Some(v) = queue.pop_front() {
            for child in g.in_edges(v, EdgeKind::SubclassOf) {
                if idx.reach_root.insert(child.index()) {
                    idx.next_to_root[child.index()] = Some(v);
                    queue.push_back(child);
                }
            }
        }

        let mut queue = VecDeque::new();
        for i in 0..n {
            let y = NodeId(i as u32);
            if g.dataset(y) != Dataset::Yago {
                continue;
            }
            let hit = g.aligned_neighbors(y).iter().copied().find(|&(w, _)| {
                matches!(g.dataset(w), Dataset::WordNet | Dataset::OntoWordNet)
                    && idx.reach_root.contains(w.index())
            });
            if let Some(hit) = hit {
                idx.bridge[i] = Some(hit);
                idx.yago_reach.insert(i);
                queue.push_back(y);
            }
        }
        while let Some(v) = queue.pop_front() {
            for child in g.in_edges(v, EdgeKind::SubclassOf) {
                if g.dataset(child) == Dataset::Yago && idx.yago_reach.insert(child.index()) {
                    idx.next_in_yago[child.index()] = Some(v);
                    queue.push_back(child);
                }
            }
        }

        for i in 0..n {
            let c = NodeId(i as u32);
            if g.dataset(c) != Dataset::DBpediaCategory {
                continue;
            }
            idx.category_hit[i] = g
                .aligned_neighbors(c)
                .iter()
                .copied()
                .find(|&(y, _)| idx.yago_reach.contains(y.index()));
        }
        idx
    }

    fn category_path(
        &self,
        g: &AlignmentGraph,
        e_key: &NodeKey,
        c: NodeId,
    ) -> Option<Vec<WitnessStep>> {
        let (y1, rev) = self.category_hit[c.index()]?;
        let mut path = vec![
            WitnessStep {
                from: e_key.clone(),
                kind: EdgeKind::MemberOfCategory,
                to: g.key(c).clone(),
                reversed: false,
            },
            step(g, c, EdgeKind::Aligned, y1, rev),
        ];
        let mut cur = y1;
        while self.bridge[cur.index()].is_none() {
            let next = self.next_in_yago[cur.index()].expect("yago reach parent");
            path.push(step(g, cur, EdgeKind::SubclassOf, next, false));
            cur = next;
        }
        let (w, rev) = self.bridge[cur.index()].expect("bridge");
        path.push(step(g, cur, EdgeKind::Aligned, w, rev));
        self.climb_to_root(g, w, &mut path);
        Some(path)
    }

    fn climb_to_root(&self, g: &AlignmentGraph, mut cur: NodeId, path: &mut Vec<WitnessStep>) {
        while let Some(next) = self.next_to_root[cur.index()] {
            path.push(step(g, cur, EdgeKind::SubclassOf, next, false));
            cur = next;
        }
    }

    /// `extra_categories` are memberships known only to an entity store;
    /// they are tried after the graph's own MEMBER_OF_CATEGORY edges.
    fn witness(
        &self,
        g: &AlignmentGraph,
        e_key: &NodeKey,
        extra_categories: &[NodeId],
    ) -> Option<Vec<WitnessStep>> {
        let e = g.id(e_key);
        if let Some(e) = e {
            for c in g.out_edges(e, EdgeKind::MemberOfCategory) {
                if let Some(p) = self.category_path(g, e_key, c) {
                    return Some(p);
                }
            }
        }
        for &c in extra_categories {
            if let Some(p) = self.category_path(g, e_key, c) {
                return Some(p);
            }
        }
        let e = e?;
        g.out_edges(e, EdgeKind::HasType)
            .find(|&t| g.dataset(t) == Dataset::Tipalo && self.reach_root.contains(t.index()))
            .map(|t| {
                let mut path = vec![step(g, e, EdgeKind::HasType, t, false)];
                self.climb_to_root(g, t, &mut path);
                path
            })
    }
}

fn physical_index(g: &AlignmentGraph) -> &PhysicalIndex {
    g.physical.get_or_init(|| PhysicalIndex::build(g))
}

/// Physical-object rule for a single DBpedia entity, using only the
/// category memberships present in the graph.
pub fn seneca_physical_object(iri: &str, g: &AlignmentGraph) -> Physical {
    let key = NodeKey::dbpedia(iri);
    match physical_index(g).witness(g, &key, &[]) {
        Some(_) => Physical::PhysicalObject,
        None => Physical::NotPhysicalObject,
    }
}

/// Both verdicts with witnesses. `categories` are extra category IRIs (from
/// an entity store) treated as MEMBER_OF_CATEGORY edges.
pub fn verdict_for<'a>(
    iri: &str,
    categories: impl IntoIterator<Item = &'a String>,
    g: &AlignmentGraph,
) -> SenecaVerdict {
    let key = NodeKey::dbpedia(iri);
    let e = g.id(&key);
    let class_witness = e.and_then(|e| class_witness(g, e));
    let extra: Vec<NodeId> = categories
        .into_iter()
        .filter_map(|c| g.id(&NodeKey::new(Dataset::DBpediaCategory, c.clone())))
        .collect();
    let physical_witness = physical_index(g).witness(g, &key, &extra);
    SenecaVerdict {
        entity: iri.to_string(),
        class_or_instance: if class_witness.is_some() {
            ClassInstance::Class
        } else {
            ClassInstance::Instance
        },
        physical: if physical_witness.is_some() {
            Physical::PhysicalObject
        } else {
            Physical::NotPhysicalObject
        },
        class_witness,
        physical_witness,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub entities: u64,
    pub candidate_classes: u64,
    pub candidate_physical_objects: u64,
}

/// Verdicts for a batch of entities, keyed by IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerdictSet {
    pub verdicts: BTreeMap<String, SenecaVerdict>,
    pub summary: BatchSummary,
}

impl VerdictSet {
    /// Binary flag for `task`; `None` when the entity has no verdict.
    pub fn flag(&self, task: Task, iri: &str) -> Option<bool> {
        self.verdicts.get(iri).map(|v| v.flag(task))
    }

    /// Prediction for `task`, applying the default rule (Instance / NPO)
    /// to entities without a verdict.
    pub fn predict(&self, task: Task, iri: &str) -> Label {
        Label::from_bool(self.flag(task, iri).unwrap_or(false))
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }

    fn summarize(verdicts: BTreeMap<String, SenecaVerdict>) -> Self {
        let summary = BatchSummary {
            entities: verdicts.len() as u64,
            candidate_classes: verdicts
                .values()
                .filter(|v| v.class_or_instance == ClassInstance::Class)
                .count() as u64,
            candidate_physical_objects: verdicts
                .values()
                .filter(|v| v.physical == Physical::PhysicalObject)
                .count() as u64,
        };
        VerdictSet { verdicts, summary }
    }
}

/// Verdicts for every classifiable entity of the store. Category
/// memberships recorded in the store count as MEMBER_OF_CATEGORY edges.
pub fn seneca_batch(store: &EntityStore, g: &AlignmentGraph) -> VerdictSet {
    physical_index(g);
    let targets: Vec<_> = store.targets().collect();
    let verdicts: Vec<SenecaVerdict> = targets
        .par_iter()
        .map(|rec| verdict_for(&rec.iri, &rec.categories, g))
        .collect();
    let set = VerdictSet::summarize(verdicts.into_iter().map(|v| (v.entity.clone(), v)).collect());
    log::info!(
        "seneca: {} entities, {} candidate classes, {} candidate physical objects",
        set.summary.entities,
        set.summary.candidate_classes,
        set.summary.candidate_physical_objects
    );
    set
}

/// Writes `iri <TAB> C|I <TAB> PO|NPO` lines in IRI order.
pub fn write_verdicts<W: Write>(mut w: W, set: &VerdictSet) -> std::io::Result<()> {
    for v in set.verdicts.values() {
        let ci = match v.class_or_instance {
            ClassInstance::Class => "C",
            ClassInstance::Instance => "I",
        };
        let po = match v.physical {
            Physical::PhysicalObject => "PO",
            Physical::NotPhysicalObject => "NPO",
        };
        writeln!(w, "{}\t{}\t{}", v.entity, ci, po)?;
    }
    w.flush()
}

/// Reads a verdict TSV. Witness paths are not part of the file.
pub fn read_verdicts<R: BufRead>(r: R) -> Result<VerdictSet, SenecaError> {
    let mut verdicts = BTreeMap::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let line_no = i as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let bad = |message: &str| SenecaError::BadVerdict {
            line: line_no,
            message: message.to_string(),
        };
        if cols.len() != 3 {
            return Err(bad("expected 3 columns"));
        }
        let class_or_instance = match cols[1] {
            "C" => ClassInstance::Class,
            "I" => ClassInstance::Instance,
            _ => return Err(bad("second column must be C or I")),
        };
        let physical = match cols[2] {
            "PO" => Physical::PhysicalObject,
            "NPO" => Physical::NotPhysicalObject,
            _ => return Err(bad("third column must be PO or NPO")),
        };
        verdicts.insert(
            cols[0].to_string(),
            SenecaVerdict {
                entity: cols[0].to_string(),
                class_or_instance,
                physical,
                class_witness: None,
                physical_witness: None,
            },
        );
    }
    Ok(VerdictSet::summarize(verdicts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::EntityRecord;
    use crate::seneca::{AlignmentGraphBuilder, SenecaConfig, DUL_PHYSICAL_OBJECT, OWL_CLASS};

    fn graph(rows: &[(&str, EdgeKind, &str)]) -> AlignmentGraph {
        graph_with(rows, SenecaConfig::default())
    }

    fn graph_with(rows: &[(&str, EdgeKind, &str)], cfg: SenecaConfig) -> AlignmentGraph {
        let mut b = AlignmentGraphBuilder::new();
        for (s, k, d) in rows {
            b.add_edge(s.parse().unwrap(), *k, d.parse().unwrap());
        }
        b.build(cfg)
    }

    fn po_root() -> String {
        format!("dul:{DUL_PHYSICAL_OBJECT}")
    }

    #[test]
    fn babelnet_to_wordnet_is_class() {
        let g = graph(&[
            ("dbpedia:e", EdgeKind::Aligned, "babelnet:b"),
            ("babelnet:b", EdgeKind::Aligned, "wordnet:w"),
        ]);
        assert_eq!(seneca_class_instance("e", &g), ClassInstance::Class);
    }

    #[test]
    fn isolated_entity_is_instance() {
        let g = graph(&[("dbpedia:other", EdgeKind::Aligned, "babelnet:b")]);
        assert_eq!(seneca_class_instance("e", &g), ClassInstance::Instance);
        assert_eq!(seneca_physical_object("e", &g), Physical::NotPhysicalObject);
    }

    #[test]
    fn tipalo_owl_class_is_class() {
        let g = graph(&[("dbpedia:e", EdgeKind::HasType, &format!("tipalo:{OWL_CLASS}"))]);
        assert_eq!(seneca_class_instance("e", &g), ClassInstance::Class);
    }

    #[test]
    fn direct_alignment_to_wordnet_is_not_enough() {
        let g = graph(&[("dbpedia:e", EdgeKind::Aligned, "wordnet:w")]);
        assert_eq!(seneca_class_instance("e", &g), ClassInstance::Instance);
    }

    #[test]
    fn reverse_alignment_needs_symmetrization() {
        let rows = [
            ("babelnet:b", EdgeKind::Aligned, "dbpedia:e"),
            ("wordnet:w", EdgeKind::Aligned, "babelnet:b"),
        ];
        assert_eq!(seneca_class_instance("e", &graph(&rows)), ClassInstance::Class);
        let cfg = SenecaConfig {
            symmetrize_aligned: false,
            ..Default::default()
        };
        assert_eq!(
            seneca_class_instance("e", &graph_with(&rows, cfg)),
            ClassInstance::Instance
        );
    }

    #[test]
    fn wordnet_instance_flag_vetoes_class() {
        let rows = [
            ("dbpedia:e", EdgeKind::Aligned, "babelnet:b"),
            ("babelnet:b", EdgeKind::Aligned, "wordnet:w"),
            ("wordnet:w", EdgeKind::HasType, "wordnet:instance"),
        ];
        assert_eq!(seneca_class_instance("e", &graph(&rows)), ClassInstance::Instance);
        let cfg = SenecaConfig {
            instance_flag_vetoes: false,
            ..Default::default()
        };
        assert_eq!(
            seneca_class_instance("e", &graph_with(&rows, cfg)),
            ClassInstance::Class
        );
    }

    #[test]
    fn category_yago_ontowordnet_chain_is_po() {
        let root = po_root();
        let g = graph(&[
            ("dbpedia:e", EdgeKind::MemberOfCategory, "category:c"),
            ("category:c", EdgeKind::Aligned, "yago:y"),
            ("yago:y", EdgeKind::Aligned, "ontowordnet:s"),
            ("ontowordnet:s", EdgeKind::SubclassOf, &root),
        ]);
        assert_eq!(seneca_physical_object("e", &g), Physical::PhysicalObject);
        let v = verdict_for("e", &[], &g);
        let w = v.physical_witness.unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.iter().all(|s| s.holds_in(&g)));
        assert_eq!(w.last().unwrap().to.to_string(), root);
    }

    #[test]
    fn yago_taxonomy_is_navigated() {
        let root = po_root();
        let g = graph(&[
            ("dbpedia:e", EdgeKind::MemberOfCategory, "category:c"),
            ("category:c", EdgeKind::Aligned, "yago:leaf"),
            ("yago:leaf", EdgeKind::SubclassOf, "yago:mid"),
            ("yago:mid", EdgeKind::SubclassOf, "yago:top"),
            ("yago:top", EdgeKind::Aligned, "wordnet:artifact"),
            ("wordnet:artifact", EdgeKind::SubclassOf, "ontowordnet:object"),
            ("ontowordnet:object", EdgeKind::SubclassOf, &root),
        ]);
        let v = verdict_for("e", &[], &g);
        assert_eq!(v.physical, Physical::PhysicalObject);
        let w = v.physical_witness.unwrap();
        assert_eq!(w.len(), 7);
        for pair in w.windows(2) {
            assert_eq!(pair[0].to, pair[1].from);
        }
    }

    #[test]
    fn yago_star_does_not_leave_yago() {
        let root = po_root();
        // the only route from yago:y to an aligned synset passes through a
        // non-YAGO node, which the rule does not allow
        let g = graph(&[
            ("dbpedia:e", EdgeKind::MemberOfCategory, "category:c"),
            ("category:c", EdgeKind::Aligned, "yago:y"),
            ("yago:y", EdgeKind::SubclassOf, "dul:Middle"),
            ("dul:Middle", EdgeKind::SubclassOf, "yago:z"),
            ("yago:z", EdgeKind::Aligned, "wordnet:w"),
            ("wordnet:w", EdgeKind::SubclassOf, &root),
        ]);
        assert_eq!(seneca_physical_object("e", &g), Physical::NotPhysicalObject);
    }

    #[test]
    fn tipalo_type_under_physical_object() {
        let root = po_root();
        let g = graph(&[
            ("dbpedia:e", EdgeKind::HasType, "tipalo:Tool"),
            ("tipalo:Tool", EdgeKind::SubclassOf, "dul:DesignedArtifact"),
            ("dul:DesignedArtifact", EdgeKind::SubclassOf, &root),
        ]);
        assert_eq!(seneca_physical_object("e", &g), Physical::PhysicalObject);
    }

    #[test]
    fn categories_that_never_reach_root_give_npo() {
        let g = graph(&[
            ("dbpedia:e", EdgeKind::MemberOfCategory, "category:c"),
            ("category:c", EdgeKind::Aligned, "yago:y"),
            ("yago:y", EdgeKind::Aligned, "wordnet:w"),
            ("wordnet:w", EdgeKind::SubclassOf, "dul:SocialObject"),
        ]);
        assert_eq!(seneca_physical_object("e", &g), Physical::NotPhysicalObject);
    }

    #[test]
    fn cycle_in_taxonomy_does_not_hang() {
        let root = po_root();
        let g = graph(&[
            ("dbpedia:e", EdgeKind::MemberOfCategory, "category:c"),
            ("category:c", EdgeKind::Aligned, "yago:a"),
            ("yago:a", EdgeKind::SubclassOf, "yago:b"),
            ("yago:b", EdgeKind::SubclassOf, "yago:a"),
            ("yago:b", EdgeKind::Aligned, "wordnet:w"),
            ("wordnet:w", EdgeKind::SubclassOf, &root),
        ]);
        assert_eq!(g.stats().subclass_cycles, 1);
        assert_eq!(seneca_physical_object("e", &g), Physical::PhysicalObject);
    }

    #[test]
    fn batch_counts_and_store_categories() {
        let root = po_root();
        let mut b = AlignmentGraphBuilder::new();
        for (s, k, d) in [
            ("dbpedia:cls", EdgeKind::Aligned, "babelnet:b"),
            ("babelnet:b", EdgeKind::Aligned, "omegawiki:o"),
            ("category:Tools", EdgeKind::Aligned, "yago:tool"),
            ("yago:tool", EdgeKind::Aligned, "wordnet:tool"),
            ("wordnet:tool", EdgeKind::SubclassOf, root.as_str()),
        ] {
            b.add_edge(s.parse().unwrap(), k, d.parse().unwrap());
        }
        let g = b.build(SenecaConfig::default());
        let mut po = EntityRecord::new("po");
        po.categories.insert("Tools".into());
        let store = EntityStore::from_records([
            EntityRecord::new("cls"),
            po,
            EntityRecord::new("neither"),
        ]);
        let set = seneca_batch(&store, &g);
        assert_eq!(set.summary.entities, 3);
        assert_eq!(set.summary.candidate_classes, 1);
        assert_eq!(set.summary.candidate_physical_objects, 1);
        assert!(set.verdicts["po"].physical_witness.is_some());
        assert!(set.verdicts["neither"].class_witness.is_none());
    }

    #[test]
    fn empty_store_gives_empty_map() {
        let g = graph(&[]);
        let set = seneca_batch(&EntityStore::from_records([]), &g);
        assert!(set.is_empty());
        assert_eq!(set.summary, BatchSummary::default());
    }

    #[test]
    fn verdict_file_round_trip() {
        let g = graph(&[
            ("dbpedia:a", EdgeKind::Aligned, "babelnet:b"),
            ("babelnet:b", EdgeKind::Aligned, "wiktionary:w"),
        ]);
        let store = EntityStore::from_records([EntityRecord::new("a"), EntityRecord::new("z")]);
        let set = seneca_batch(&store, &g);
        let mut buf = Vec::new();
        write_verdicts(&mut buf, &set).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "a\tC\tNPO\nz\tI\tNPO\n");
        let back = read_verdicts(buf.as_slice()).unwrap();
        assert_eq!(back.flag(Task::ClassInstance, "a"), Some(true));
        assert_eq!(back.predict(Task::PhysicalObject, "missing"), Label::Negative);
        assert!(read_verdicts("a\tX\tPO\n".as_bytes()).is_err());
    }
}
