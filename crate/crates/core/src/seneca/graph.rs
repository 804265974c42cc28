use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::rules::PhysicalIndex;
use super::SenecaError;
use crate::ingest::EntityStore;
use crate::Diagnostic;

pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
pub const DUL_PHYSICAL_OBJECT: &str =
    "http://www.ontologydesignpatterns.org/ont/dul/DUL.owl#PhysicalObject";
/// Target of a `HAS_TYPE` edge marking a WordNet synset as a manually
/// annotated instance.
pub const WORDNET_INSTANCE_MARKER: &str = "instance";

/// Source dataset of an alignment-graph node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dataset {
    DBpedia,
    BabelNet,
    WordNet,
    Wiktionary,
    OmegaWiki,
    Yago,
    OntoWordNet,
    Tipalo,
    Dul,
    DBpediaCategory,
}

impl Dataset {
    pub const ALL: [Dataset; 10] = [
        Dataset::DBpedia,
        Dataset::BabelNet,
        Dataset::WordNet,
        Dataset::Wiktionary,
        Dataset::OmegaWiki,
        Dataset::Yago,
        Dataset::OntoWordNet,
        Dataset::Tipalo,
        Dataset::Dul,
        Dataset::DBpediaCategory,
    ];

    /// Tag used in alignment TSV node tokens (`tag:id`).
    pub fn tag(self) -> &'static str {
        match self {
            Dataset::DBpedia => "dbpedia",
            Dataset::BabelNet => "babelnet",
            Dataset::WordNet => "wordnet",
            Dataset::Wiktionary => "wiktionary",
            Dataset::OmegaWiki => "omegawiki",
            Dataset::Yago => "yago",
            Dataset::OntoWordNet => "ontowordnet",
            Dataset::Tipalo => "tipalo",
            Dataset::Dul => "dul",
            Dataset::DBpediaCategory => "category",
        }
    }

    fn from_tag(tag: &str) -> Option<Dataset> {
        Dataset::ALL.into_iter().find(|d| d.tag() == tag)
    }
}

/// A node: dataset tag plus an opaque identifier within that dataset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeKey {
    pub dataset: Dataset,
    pub id: String,
}

impl NodeKey {
    pub fn new(dataset: Dataset, id: impl Into<String>) -> Self {
        NodeKey {
            dataset,
            id: id.into(),
        }
    }

    pub fn dbpedia(iri: impl Into<String>) -> Self {
        Self::new(Dataset::DBpedia, iri)
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dataset.tag(), self.id)
    }
}

impl FromStr for NodeKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (tag, id) = s
            .split_once(':')
            .ok_or_else(|| format!("node `{s}` lacks a dataset tag"))?;
        let dataset =
            Dataset::from_tag(tag).ok_or_else(|| format!("unknown dataset tag `{tag}`"))?;
        if id.is_empty() {
            return Err(format!("node `{s}` has an empty id"));
        }
        Ok(NodeKey::new(dataset, id))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    #[serde(rename = "ALIGNED")]
    Aligned,
    #[serde(rename = "SUBCLASS_OF")]
    SubclassOf,
    #[serde(rename = "HAS_TYPE")]
    HasType,
    #[serde(rename = "MEMBER_OF_CATEGORY")]
    MemberOfCategory,
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 4] = [
        EdgeKind::Aligned,
        EdgeKind::SubclassOf,
        EdgeKind::HasType,
        EdgeKind::MemberOfCategory,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Aligned => "ALIGNED",
            EdgeKind::SubclassOf => "SUBCLASS_OF",
            EdgeKind::HasType => "HAS_TYPE",
            EdgeKind::MemberOfCategory => "MEMBER_OF_CATEGORY",
        }
    }
}

impl FromStr for EdgeKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        EdgeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenecaConfig {
    /// Treat ALIGNED edges as navigable in both directions.
    pub symmetrize_aligned: bool,
    /// An instance marker on a WordNet endpoint blocks the class rule
    /// through that endpoint.
    pub instance_flag_vetoes: bool,
    pub owl_class_marker: NodeKey,
    pub physical_object_root: NodeKey,
    pub wordnet_instance_marker: NodeKey,
}

impl Default for SenecaConfig {
    fn default() -> Self {
        SenecaConfig {
            symmetrize_aligned: true,
            instance_flag_vetoes: true,
            owl_class_marker: NodeKey::new(Dataset::Tipalo, OWL_CLASS),
            physical_object_root: NodeKey::new(Dataset::Dul, DUL_PHYSICAL_OBJECT),
            wordnet_instance_marker: NodeKey::new(Dataset::WordNet, WORDNET_INSTANCE_MARKER),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub rows: u64,
    pub duplicate_rows: u64,
    pub nodes_per_dataset: BTreeMap<String, u64>,
    pub edges_per_kind: BTreeMap<String, u64>,
    /// Strongly connected SUBCLASS_OF components with more than one node
    /// (or a self loop), collapsed during condensation.
    pub subclass_cycles: u64,
}

/// Mutable accumulation of nodes and deduplicated edges.
#[derive(Debug, Default, Clone)]
pub struct AlignmentGraphBuilder {
    nodes: Vec<NodeKey>,
    index: HashMap<NodeKey, u32>,
    edges: HashSet<(u32, EdgeKind, u32)>,
    rows: u64,
    duplicate_rows: u64,
}

impl AlignmentGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, key: NodeKey) -> u32 {
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(key.clone());
        self.index.insert(key, id);
        id
    }

    /// Adds an edge; returns false if it was already present.
    pub fn add_edge(&mut self, src: NodeKey, kind: EdgeKind, dst: NodeKey) -> bool {
        let s = self.add_node(src);
        let d = self.add_node(dst);
        let fresh = self.edges.insert((s, kind, d));
        if !fresh {
            self.duplicate_rows += 1;
        }
        fresh
    }

    /// Reads `src <TAB> edge_type <TAB> dst` rows. Empty lines and lines
    /// starting with `#` are ignored.
    pub fn read_tsv<R: BufRead>(&mut self, reader: R, file: &str) -> Result<(), SenecaError> {
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let row = i as u64 + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 {
                return Err(SenecaError::BadRow {
                    file: file.to_string(),
                    row,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let bad = |message: String| SenecaError::BadRow {
                file: file.to_string(),
                row,
                message,
            };
            let src: NodeKey = cols[0].trim().parse().map_err(bad)?;
            let kind: EdgeKind =
                cols[1]
                    .trim()
                    .parse()
                    .map_err(|_| SenecaError::UnknownEdgeType {
                        file: file.to_string(),
                        row,
                        edge: cols[1].trim().to_string(),
                    })?;
            let dst: NodeKey = cols[2].trim().parse().map_err(bad)?;
            self.rows += 1;
            self.add_edge(src, kind, dst);
        }
        Ok(())
    }

    pub fn read_file(&mut self, path: &Path) -> Result<(), SenecaError> {
        let reader = crate::ingest::open_input(path)?;
        self.read_tsv(reader, &path.display().to_string())
    }

    /// Adds the category memberships recorded in an entity store as
    /// MEMBER_OF_CATEGORY edges.
    pub fn add_category_memberships(&mut self, store: &EntityStore) {
        for rec in store.targets() {
            for cat in &rec.categories {
                self.add_edge(
                    NodeKey::dbpedia(rec.iri.clone()),
                    EdgeKind::MemberOfCategory,
                    NodeKey::new(Dataset::DBpediaCategory, cat.clone()),
                );
            }
        }
    }

    /// Freezes the graph. Node ids are renumbered in key order so the result
    /// does not depend on insertion order.
    pub fn build(self, config: SenecaConfig) -> AlignmentGraph {
        let mut order: Vec<u32> = (0..self.nodes.len() as u32).collect();
        order.sort_by(|&a, &b| self.nodes[a as usize].cmp(&self.nodes[b as usize]));
        let mut remap = vec![0u32; self.nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let nodes: Vec<NodeKey> = order
            .iter()
            .map(|&old| self.nodes[old as usize].clone())
            .collect();
        let index = nodes
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), NodeId(i as u32)))
            .collect();
        let mut edges: Vec<(NodeId, EdgeKind, NodeId)> = self
            .edges
            .into_iter()
            .map(|(s, k, d)| (NodeId(remap[s as usize]), k, NodeId(remap[d as usize])))
            .collect();
        edges.sort();
        AlignmentGraph::assemble(nodes, index, edges, self.rows, self.duplicate_rows, config)
    }
}

/// Immutable alignment graph with adjacency lists sorted by node key.
#[derive(Debug)]
pub struct AlignmentGraph {
    nodes: Vec<NodeKey>,
    index: HashMap<NodeKey, NodeId>,
    edges: Vec<(NodeId, EdgeKind, NodeId)>,
    out: Vec<Vec<(EdgeKind, NodeId)>>,
    inc: Vec<Vec<(EdgeKind, NodeId)>>,
    /// ALIGNED neighbours; the flag marks a neighbour reached against the
    /// direction of the loaded edge.
    aligned: Vec<Vec<(NodeId, bool)>>,
    component: Vec<u32>,
    components: Vec<Vec<NodeId>>,
    config: SenecaConfig,
    stats: GraphStats,
    diagnostics: Vec<Diagnostic>,
    pub(super) physical: OnceLock<PhysicalIndex>,
}

impl AlignmentGraph {
    fn assemble(
        nodes: Vec<NodeKey>,
        index: HashMap<NodeKey, NodeId>,
        edges: Vec<(NodeId, EdgeKind, NodeId)>,
        rows: u64,
        duplicate_rows: u64,
        config: SenecaConfig,
    ) -> Self {
        let n = nodes.len();
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        let mut aligned = vec![Vec::new(); n];
        for &(s, k, d) in &edges {
            out[s.index()].push((k, d));
            inc[d.index()].push((k, s));
            if k == EdgeKind::Aligned {
                aligned[s.index()].push((d, false));
                if config.symmetrize_aligned {
                    aligned[d.index()].push((s, true));
                }
            }
        }
        for list in out.iter_mut().chain(inc.iter_mut()) {
            list.sort();
        }
        for list in aligned.iter_mut() {
            list.sort();
            list.dedup_by_key(|(id, _)| *id);
        }

        let mut stats = GraphStats {
            rows,
            duplicate_rows,
            ..Default::default()
        };
        for key in &nodes {
            *stats
                .nodes_per_dataset
                .entry(key.dataset.tag().to_string())
                .or_insert(0) += 1;
        }
        for &(_, k, _) in &edges {
            *stats.edges_per_kind.entry(k.name().to_string()).or_insert(0) += 1;
        }

        let components = subclass_sccs(&out);
        let mut component = vec![0u32; n];
        for (c, members) in components.iter().enumerate() {
            for m in members {
                component[m.index()] = c as u32;
            }
        }
        let mut diagnostics = Vec::new();
        for members in &components {
            let self_loop = members.len() == 1
                && out[members[0].index()].contains(&(EdgeKind::SubclassOf, members[0]));
            if members.len() > 1 || self_loop {
                stats.subclass_cycles += 1;
                let names: Vec<String> = members
                    .iter()
                    .map(|m| nodes[m.index()].to_string())
                    .collect();
                let d = Diagnostic::new(
                    "SUBCLASS_OF",
                    format!("cycle collapsed into one node: {}", names.join(", ")),
                );
                log::warn!("{d}");
                diagnostics.push(d);
            }
        }

        AlignmentGraph {
            nodes,
            index,
            edges,
            out,
            inc,
            aligned,
            component,
            components,
            config,
            stats,
            diagnostics,
            physical: OnceLock::new(),
        }
    }

    /// Loads and freezes a graph from alignment TSV files.
    pub fn load(paths: &[impl AsRef<Path>], config: SenecaConfig) -> Result<Self, SenecaError> {
        let mut b = AlignmentGraphBuilder::new();
        for p in paths {
            b.read_file(p.as_ref())?;
        }
        Ok(b.build(config))
    }

    pub fn config(&self) -> &SenecaConfig {
        &self.config
    }

    pub fn stats(&self) -> &GraphStats {
        &self.stats
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&NodeKey, EdgeKind, &NodeKey)> {
        self.edges
            .iter()
            .map(|&(s, k, d)| (self.key(s), k, self.key(d)))
    }

    pub fn key(&self, id: NodeId) -> &NodeKey {
        &self.nodes[id.index()]
    }

    pub fn id(&self, key: &NodeKey) -> Option<NodeId> {
        self.index.get(key).copied()
    }

    pub fn has_edge(&self, src: &NodeKey, kind: EdgeKind, dst: &NodeKey) -> bool {
        match (self.id(src), self.id(dst)) {
            (Some(s), Some(d)) => self.out[s.index()].binary_search(&(kind, d)).is_ok(),
            _ => false,
        }
    }

    pub(super) fn out_edges(&self, id: NodeId, kind: EdgeKind) -> impl Iterator<Item = NodeId> + '_ {
        self.out[id.index()]
            .iter()
            .filter(move |(k, _)| *k == kind)
            .map(|&(_, d)| d)
    }

    pub(super) fn in_edges(&self, id: NodeId, kind: EdgeKind) -> impl Iterator<Item = NodeId> + '_ {
        self.inc[id.index()]
            .iter()
            .filter(move |(k, _)| *k == kind)
            .map(|&(_, s)| s)
    }

    pub(super) fn aligned_neighbors(&self, id: NodeId) -> &[(NodeId, bool)] {
        &self.aligned[id.index()]
    }

    pub(super) fn dataset(&self, id: NodeId) -> Dataset {
        self.nodes[id.index()].dataset
    }

    /// SUBCLASS_OF strongly connected components in Tarjan completion order
    /// (sink components first).
    pub fn subclass_components(&self) -> &[Vec<NodeId>] {
        &self.components
    }

    pub fn component_of(&self, id: NodeId) -> usize {
        self.component[id.index()] as usize
    }

    /// SUBCLASS_OF edges between distinct components of the condensation.
    /// The result is acyclic.
    pub fn condensed_subclass_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|(_, k, _)| *k == EdgeKind::SubclassOf)
            .map(|&(s, _, d)| (self.component_of(s), self.component_of(d)))
            .filter(|(a, b)| a != b)
            .collect();
        e.sort();
        e.dedup();
        e
    }
}

/// Iterative Tarjan over SUBCLASS_OF edges.
fn subclass_sccs(out: &[Vec<(EdgeKind, NodeId)>]) -> Vec<Vec<NodeId>> {
    const UNSEEN: u32 = u32::MAX;
    let n = out.len();
    let succ = |v: usize| -> Vec<usize> {
        out[v]
            .iter()
            .filter(|(k, _)| *k == EdgeKind::SubclassOf)
            .map(|(_, d)| d.index())
            .collect()
    };
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0u32;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (node, successors, next successor position)
        let mut call: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some((v, succs, pos)) = call.last_mut() {
            let v = *v;
            if *pos < succs.len() {
                let w = succs[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some((parent, _, _)) = call.last() {
                    low[*parent] = low[*parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(NodeId(w as u32));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
