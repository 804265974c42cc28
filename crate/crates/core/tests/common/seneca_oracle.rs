//! Brute-force reference for the alignment rules, written against a plain
//! edge set with no shared code from the library's traversal.
#![allow(dead_code)]

use std::collections::HashSet;

use fdistinct::seneca::{Dataset, EdgeKind, NodeKey, SenecaConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edge = (NodeKey, EdgeKind, NodeKey);

pub struct Oracle {
    edges: HashSet<Edge>,
    nodes: Vec<NodeKey>,
    cfg: SenecaConfig,
}

impl Oracle {
    pub fn new(edges: &[Edge], cfg: SenecaConfig) -> Self {
        let mut nodes: Vec<NodeKey> = edges
            .iter()
            .flat_map(|(s, _, d)| [s.clone(), d.clone()])
            .collect();
        nodes.sort();
        nodes.dedup();
        Oracle { edges: edges.iter().cloned().collect(), nodes, cfg }
    }

    fn has(&self, s: &NodeKey, k: EdgeKind, d: &NodeKey) -> bool {
        self.edges.contains(&(s.clone(), k, d.clone()))
    }

    fn aligned(&self, a: &NodeKey, b: &NodeKey) -> bool {
        self.has(a, EdgeKind::Aligned, b)
            || (self.cfg.symmetrize_aligned && self.has(b, EdgeKind::Aligned, a))
    }

    /// Every 2-hop ALIGNED path e -> BabelNet -> lexical node, or the
    /// owl:Class typing.
    pub fn is_class(&self, e: &NodeKey) -> bool {
        for b in &self.nodes {
            if b.dataset != Dataset::BabelNet || !self.aligned(e, b) {
                continue;
            }
            for w in &self.nodes {
                let lexical = matches!(w.dataset, Dataset::WordNet | Dataset::OmegaWiki | Dataset::Wiktionary);
                if !lexical || !self.aligned(b, w) {
                    continue;
                }
                let vetoed = self.cfg.instance_flag_vetoes
                    && w.dataset == Dataset::WordNet
                    && self.has(w, EdgeKind::HasType, &self.cfg.wordnet_instance_marker);
                if !vetoed {
                    return true;
                }
            }
        }
        self.has(e, EdgeKind::HasType, &self.cfg.owl_class_marker)
    }

    /// Fixed point of "x SUBCLASS_OF y, y in set", restricted to nodes
    /// accepted by `within`.
    fn closure(&self, seed: Vec<NodeKey>, within: impl Fn(&NodeKey) -> bool) -> HashSet<NodeKey> {
        let mut set: HashSet<NodeKey> = seed.into_iter().collect();
        loop {
            let mut grew = false;
            for (s, k, d) in &self.edges {
                if *k == EdgeKind::SubclassOf && within(s) && set.contains(d) && !set.contains(s) {
                    set.insert(s.clone());
                    grew = true;
                }
            }
            if !grew {
                return set;
            }
        }
    }

    pub fn is_physical(&self, e: &NodeKey) -> bool {
        let root = self.cfg.physical_object_root.clone();
        let to_root = self.closure(vec![root], |_| true);
        let bridges: Vec<NodeKey> = self
            .nodes
            .iter()
            .filter(|y| y.dataset == Dataset::Yago)
            .filter(|y| {
                self.nodes.iter().any(|w| {
                    matches!(w.dataset, Dataset::WordNet | Dataset::OntoWordNet)
                        && to_root.contains(w)
                        && self.aligned(y, w)
                })
            })
            .cloned()
            .collect();
        let yago = self.closure(bridges, |n| n.dataset == Dataset::Yago);
        for c in &self.nodes {
            if c.dataset == Dataset::DBpediaCategory
                && self.has(e, EdgeKind::MemberOfCategory, c)
                && yago.iter().any(|y| self.aligned(c, y))
            {
                return true;
            }
        }
        self.nodes.iter().any(|t| {
            t.dataset == Dataset::Tipalo && self.has(e, EdgeKind::HasType, t) && to_root.contains(t)
        })
    }
}

fn key(d: Dataset, i: usize) -> NodeKey {
    NodeKey::new(d, format!("n{i}"))
}

/// A random alignment graph of at most `max_nodes` distinct nodes, biased
/// toward the shapes both rules look for plus some arbitrary noise edges.
pub fn random_graph(seed: u64, max_nodes: usize) -> Vec<Edge> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = SenecaConfig::default();
    let per = (max_nodes.saturating_sub(3) / 10).max(1);
    let pool = |rng: &mut ChaCha8Rng, d: Dataset| key(d, rng.gen_range(0..per));
    use Dataset::*;
    let templates: [(Dataset, EdgeKind, &[Dataset]); 9] = [
        (DBpedia, EdgeKind::Aligned, &[BabelNet]),
        (BabelNet, EdgeKind::Aligned, &[WordNet, OmegaWiki, Wiktionary]),
        (DBpedia, EdgeKind::MemberOfCategory, &[DBpediaCategory]),
        (DBpediaCategory, EdgeKind::Aligned, &[Yago]),
        (Yago, EdgeKind::SubclassOf, &[Yago, WordNet]),
        (Yago, EdgeKind::Aligned, &[WordNet, OntoWordNet]),
        (OntoWordNet, EdgeKind::SubclassOf, &[OntoWordNet, WordNet]),
        (DBpedia, EdgeKind::HasType, &[Tipalo]),
        (Tipalo, EdgeKind::SubclassOf, &[Tipalo]),
    ];
    let n_edges = rng.gen_range(per..per * 4 + 2);
    let mut edges = Vec::new();
    for _ in 0..n_edges {
        let roll = rng.gen_range(0..100);
        if roll < 70 {
            let (sd, kind, dsts) = templates[rng.gen_range(0..templates.len())];
            let dd = dsts[rng.gen_range(0..dsts.len())];
            let (s, d) = (pool(&mut rng, sd), pool(&mut rng, dd));
            if rng.gen_bool(0.1) {
                edges.push((d, kind, s));
            } else {
                edges.push((s, kind, d));
            }
        } else if roll < 78 {
            let d = [WordNet, OntoWordNet, Tipalo][rng.gen_range(0..3)];
            edges.push((pool(&mut rng, d), EdgeKind::SubclassOf, cfg.physical_object_root.clone()));
        } else if roll < 82 {
            edges.push((pool(&mut rng, DBpedia), EdgeKind::HasType, cfg.owl_class_marker.clone()));
        } else if roll < 86 {
            edges.push((pool(&mut rng, WordNet), EdgeKind::HasType, cfg.wordnet_instance_marker.clone()));
        } else {
            let a = Dataset::ALL[rng.gen_range(0..10)];
            let b = Dataset::ALL[rng.gen_range(0..10)];
            let k = EdgeKind::ALL[rng.gen_range(0..4)];
            edges.push((pool(&mut rng, a), k, pool(&mut rng, b)));
        }
    }
    edges
}

pub fn is_flag_edge(e: &Edge, cfg: &SenecaConfig) -> bool {
    e.1 == EdgeKind::HasType && e.2 == cfg.wordnet_instance_marker
}
