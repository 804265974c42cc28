use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::blocks::{Block, BlockSet};
use super::dictionary::{TokenDictionary, DEFAULT_MAX_TOKENS};
use super::property::{property_features, PropertyKey};
use super::tokenize::tokenize;
use super::uri::uri_features;
use super::vector::{FeatureVector, SpaceId};
use super::FeatureError;
use crate::ingest::EntityRecord;
use crate::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureConfig {
    pub max_tokens: usize,
    /// Case-sensitive matching of URI ID terms against abstract tokens.
    pub case_sensitive_match: bool,
    /// Replace E-block counts with presence flags.
    pub binarize_e: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            max_tokens: DEFAULT_MAX_TOKENS,
            case_sensitive_match: true,
            binarize_e: false,
        }
    }
}

/// Column ranges of each block inside an assembled vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub blocks: BlockSet,
    pub a: Range<usize>,
    pub u: Range<usize>,
    pub e: Range<usize>,
    pub d: Range<usize>,
    pub dim: usize,
}

impl Layout {
    fn new(blocks: BlockSet, dict_len: usize, e_len: usize) -> Self {
        let mut at = 0;
        let mut take = |b: Block, n: usize| {
            let n = if blocks.contains(b) { n } else { 0 };
            let r = at..at + n;
            at += n;
            r
        };
        let a = take(Block::A, dict_len);
        let u = take(Block::U, 3);
        let e = take(Block::E, e_len);
        let d = take(Block::D, 1);
        Layout {
            blocks,
            a,
            u,
            e,
            d,
            dim: at,
        }
    }

    pub fn range(&self, b: Block) -> Range<usize> {
        match b {
            Block::A => self.a.clone(),
            Block::U => self.u.clone(),
            Block::E => self.e.clone(),
            Block::D => self.d.clone(),
        }
    }

    /// Columns of the dense, small-integer blocks (U and D).
    pub fn dense_columns(&self) -> Vec<usize> {
        self.u.clone().chain(self.d.clone()).collect()
    }

    pub fn is_dense_column(&self, col: usize) -> bool {
        self.u.contains(&col) || self.d.contains(&col)
    }
}

#[derive(Serialize, Deserialize)]
struct SpaceFile {
    blocks: BlockSet,
    config: FeatureConfig,
    dictionary: TokenDictionary,
    properties: Vec<PropertyKey>,
}

/// A fitted feature space: the token dictionary and the E-block key set,
/// both frozen from a training corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceFile", into = "SpaceFile")]
pub struct FeatureSpace {
    blocks: BlockSet,
    config: FeatureConfig,
    dictionary: TokenDictionary,
    properties: Vec<PropertyKey>,
    property_index: HashMap<PropertyKey, u32>,
    layout: Layout,
    id: SpaceId,
}

impl TryFrom<SpaceFile> for FeatureSpace {
    type Error = String;

    fn try_from(f: SpaceFile) -> Result<Self, String> {
        if f.properties.windows(2).any(|w| w[0] >= w[1]) {
            return Err("property keys must be sorted and distinct".into());
        }
        Ok(FeatureSpace::from_parts(
            f.blocks,
            f.config,
            f.dictionary,
            f.properties,
        ))
    }
}

impl From<FeatureSpace> for SpaceFile {
    fn from(s: FeatureSpace) -> Self {
        SpaceFile {
            blocks: s.blocks,
            config: s.config,
            dictionary: s.dictionary,
            properties: s.properties,
        }
    }
}

impl FeatureSpace {
    /// Fits the dictionary (if A is requested) and the E-block key set (if
    /// E is requested) on the given training records.
    pub fn fit(
        records: &[&EntityRecord],
        blocks: BlockSet,
        config: FeatureConfig,
    ) -> Result<Self, FeatureError> {
        if blocks.is_empty() {
            return Err(FeatureError::NoBlocks);
        }
        let dictionary = if blocks.contains(Block::A) {
            TokenDictionary::build(
                records.iter().filter_map(|r| r.abstract_text.as_deref()),
                config.max_tokens,
            )?
        } else {
            TokenDictionary::empty()
        };
        let properties = if blocks.contains(Block::E) {
            let keys: BTreeSet<PropertyKey> = records
                .iter()
                .flat_map(|r| property_features(r).into_keys())
                .collect();
            keys.into_iter().collect()
        } else {
            Vec::new()
        };
        Ok(Self::from_parts(blocks, config, dictionary, properties))
    }

    fn from_parts(
        blocks: BlockSet,
        config: FeatureConfig,
        dictionary: TokenDictionary,
        properties: Vec<PropertyKey>,
    ) -> Self {
        let property_index = properties
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), i as u32))
            .collect();
        let layout = Layout::new(blocks, dictionary.len(), properties.len());
        let mut space = FeatureSpace {
            blocks,
            config,
            dictionary,
            properties,
            property_index,
            layout,
            id: SpaceId(0),
        };
        space.id = space.compute_id();
        space
    }

    fn compute_id(&self) -> SpaceId {
        let mut h = Sha256::new();
        h.update(self.blocks.to_string().as_bytes());
        h.update(b"\0");
        h.update(serde_json::to_vec(&self.config).expect("config serializes"));
        h.update(b"\0");
        h.update(self.dictionary.hash().as_bytes());
        for k in &self.properties {
            h.update(b"\0");
            h.update(k.to_string().as_bytes());
        }
        let digest = h.finalize();
        SpaceId(u64::from_be_bytes(digest[..8].try_into().unwrap()))
    }

    pub fn id(&self) -> SpaceId {
        self.id
    }

    pub fn blocks(&self) -> BlockSet {
        self.blocks
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    pub fn dictionary(&self) -> &TokenDictionary {
        &self.dictionary
    }

    pub fn properties(&self) -> &[PropertyKey] {
        &self.properties
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    /// Human-readable name of a column.
    pub fn column_name(&self, col: usize) -> String {
        let l = &self.layout;
        if l.a.contains(&col) {
            format!("A:{}", self.dictionary.tokens()[col - l.a.start])
        } else if l.u.contains(&col) {
            ["U:caps_terms", "U:terms_in_abstract", "U:term_count"][col - l.u.start].to_string()
        } else if l.e.contains(&col) {
            format!("E:{}", self.properties[col - l.e.start])
        } else if l.d.contains(&col) {
            "D:verdict".to_string()
        } else {
            format!("?{col}")
        }
    }

    /// Builds the feature vector of `rec`. `verdict` is the alignment
    /// verdict for the active task; it only matters when D is in the space.
    /// Problems (missing abstract, empty ID) are pushed onto `diagnostics`.
    pub fn assemble(
        &self,
        rec: &EntityRecord,
        verdict: bool,
        diagnostics: &mut Vec<Diagnostic>,
    ) -> FeatureVector {
        let l = &self.layout;
        let mut entries: Vec<(u32, f64)> = Vec::new();
        if self.blocks.contains(Block::A) {
            match rec.abstract_text.as_deref() {
                Some(text) => {
                    let hits: BTreeSet<u32> = tokenize(text)
                        .filter_map(|t| self.dictionary.position(t))
                        .collect();
                    entries.extend(hits.into_iter().map(|i| ((l.a.start as u32) + i, 1.0)));
                }
                None => diagnostics.push(Diagnostic::new(&rec.iri, "no abstract")),
            }
        }
        if self.blocks.contains(Block::U) {
            let (u, diag) = uri_features(
                &rec.iri,
                rec.abstract_text.as_deref(),
                self.config.case_sensitive_match,
            );
            diagnostics.extend(diag);
            for (i, v) in u.as_array().into_iter().enumerate() {
                entries.push(((l.u.start + i) as u32, v));
            }
        }
        if self.blocks.contains(Block::E) {
            for (k, n) in property_features(rec) {
                if let Some(&i) = self.property_index.get(&k) {
                    let v = if self.config.binarize_e { 1.0 } else { n as f64 };
                    entries.push(((l.e.start as u32) + i, v));
                }
            }
        }
        if self.blocks.contains(Block::D) && verdict {
            entries.push((l.d.start as u32, 1.0));
        }
        FeatureVector::new(self.id, l.dim, entries)
    }
}

/// The dense 0/1 abstract vector over `dict`. An absent abstract gives the
/// zero vector and a diagnostic naming `context`.
pub fn abstract_features(
    context: &str,
    abstract_text: Option<&str>,
    dict: &TokenDictionary,
) -> (Vec<u8>, Option<Diagnostic>) {
    let mut v = vec![0u8; dict.len()];
    let Some(text) = abstract_text else {
        return (v, Some(Diagnostic::new(context, "no abstract")));
    };
    for t in tokenize(text) {
        if let Some(i) = dict.position(t) {
            v[i as usize] = 1;
        }
    }
    (v, None)
}
