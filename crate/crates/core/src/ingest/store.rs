use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ntriples::{Node, ParseMode, Term, Triple, TripleReader};
use super::{open_input, IngestError};
use crate::Diagnostic;

pub const DBO_ABSTRACT: &str = "http://dbpedia.org/ontology/abstract";
pub const DCT_SUBJECT: &str = "http://purl.org/dc/terms/subject";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

const STORE_MAGIC: &[u8; 8] = b"FDSTORE\0";
const STORE_VERSION: u32 = 1;
/// Diagnostics beyond this many are counted but not kept in the stats sidecar.
const MAX_KEPT_DIAGNOSTICS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestConfig {
    pub abstract_predicate: String,
    pub category_predicate: String,
    /// Only abstracts with this language tag are kept; `None` keeps all.
    pub language: Option<String>,
    /// Whether triples with a literal object count towards the subject's
    /// out-degree (e.g. `dbo:birthDate`).
    pub count_literal_objects: bool,
    /// IRI prefixes of the datasets whose triples count towards degrees.
    /// Empty means every ingested triple counts.
    pub scope_prefixes: Vec<String>,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            abstract_predicate: DBO_ABSTRACT.to_string(),
            category_predicate: DCT_SUBJECT.to_string(),
            language: Some("en".to_string()),
            count_literal_objects: true,
            scope_prefixes: Vec::new(),
        }
    }
}

impl IngestConfig {
    fn in_scope(&self, node: &Node) -> bool {
        match node {
            Node::Blank(_) => true,
            Node::Iri(iri) => {
                self.scope_prefixes.is_empty()
                    || self.scope_prefixes.iter().any(|p| iri.starts_with(p.as_str()))
            }
        }
    }
}

/// Everything the pipeline needs to know about one knowledge-graph node.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityRecord {
    pub iri: String,
    #[serde(rename = "abstract")]
    pub abstract_text: Option<String>,
    pub out_degree: BTreeMap<String, u64>,
    pub in_degree: BTreeMap<String, u64>,
    pub categories: BTreeSet<String>,
}

impl EntityRecord {
    pub fn new(iri: impl Into<String>) -> Self {
        EntityRecord {
            iri: iri.into(),
            ..Default::default()
        }
    }

    /// Blank nodes carry degree counts but are never classification targets.
    pub fn is_blank(&self) -> bool {
        self.iri.starts_with("_:")
    }

    /// The local ID of the IRI: the text after the final `/`.
    pub fn local_id(&self) -> &str {
        local_id(&self.iri)
    }

    pub fn total_out(&self) -> u64 {
        self.out_degree.values().sum()
    }

    pub fn total_in(&self) -> u64 {
        self.in_degree.values().sum()
    }
}

/// The text after the final `/` of an IRI.
pub fn local_id(iri: &str) -> &str {
    iri.rsplit('/').next().unwrap_or(iri)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub files: u64,
    pub lines: u64,
    pub triples: u64,
    pub literal_triples: u64,
    pub out_of_scope_triples: u64,
    pub records: u64,
    pub blank_records: u64,
    pub abstracts: u64,
    pub abstracts_filtered_by_language: u64,
    pub duplicate_abstracts: u64,
    pub category_links: u64,
    pub malformed_lines: u64,
    pub diagnostic_count: u64,
    pub diagnostics: Vec<Diagnostic>,
}

impl IngestStats {
    fn note(&mut self, d: Diagnostic) {
        self.diagnostic_count += 1;
        if self.diagnostics.len() < MAX_KEPT_DIAGNOSTICS {
            self.diagnostics.push(d);
        }
    }

    fn absorb(&mut self, other: IngestStats) {
        self.files += other.files;
        self.lines += other.lines;
        self.triples += other.triples;
        self.literal_triples += other.literal_triples;
        self.out_of_scope_triples += other.out_of_scope_triples;
        self.abstracts_filtered_by_language += other.abstracts_filtered_by_language;
        self.duplicate_abstracts += other.duplicate_abstracts;
        self.category_links += other.category_links;
        self.malformed_lines += other.malformed_lines;
        let dropped = other.diagnostic_count - other.diagnostics.len() as u64;
        for d in other.diagnostics {
            self.note(d);
        }
        self.diagnostic_count += dropped;
    }
}

/// Accumulates partial tallies. Builders for separate chunks can be merged;
/// merging in input order reproduces a sequential ingest exactly.
#[derive(Debug, Clone)]
pub struct EntityStoreBuilder {
    config: IngestConfig,
    records: BTreeMap<String, EntityRecord>,
    stats: IngestStats,
}

impl EntityStoreBuilder {
    pub fn new(config: IngestConfig) -> Self {
        EntityStoreBuilder {
            config,
            records: BTreeMap::new(),
            stats: IngestStats::default(),
        }
    }

    fn record(&mut self, key: String) -> &mut EntityRecord {
        self.records
            .entry(key)
            .or_insert_with_key(|k| EntityRecord::new(k.clone()))
    }

    pub fn add(&mut self, triple: &Triple) {
        self.stats.triples += 1;
        let subject_key = triple.subject.key();

        if let Term::Literal(lit) = &triple.object {
            self.stats.literal_triples += 1;
            if triple.predicate == self.config.abstract_predicate {
                self.add_abstract(subject_key.clone(), lit.lang.as_deref(), &lit.lexical);
            }
        } else if triple.predicate == self.config.category_predicate {
            if let Term::Iri(cat) = &triple.object {
                self.stats.category_links += 1;
                self.record(subject_key.clone()).categories.insert(cat.clone());
            }
        }

        let object_node = triple.object.as_node();
        let in_scope = self.config.in_scope(&triple.subject)
            && object_node.as_ref().is_none_or(|o| self.config.in_scope(o));
        if !in_scope {
            self.stats.out_of_scope_triples += 1;
            return;
        }
        match object_node {
            Some(object) => {
                *self
                    .record(subject_key)
                    .out_degree
                    .entry(triple.predicate.clone())
                    .or_insert(0) += 1;
                *self
                    .record(object.key())
                    .in_degree
                    .entry(triple.predicate.clone())
                    .or_insert(0) += 1;
            }
            None if self.config.count_literal_objects => {
                *self
                    .record(subject_key)
                    .out_degree
                    .entry(triple.predicate.clone())
                    .or_insert(0) += 1;
            }
            None => {}
        }
    }

    fn add_abstract(&mut self, key: String, lang: Option<&str>, text: &str) {
        if let Some(wanted) = &self.config.language {
            if !lang.is_some_and(|l| l.eq_ignore_ascii_case(wanted)) {
                self.stats.abstracts_filtered_by_language += 1;
                return;
            }
        }
        if text.trim().is_empty() {
            self.stats
                .note(Diagnostic::new(key, "empty abstract literal ignored"));
            return;
        }
        let rec = self.record(key);
        if rec.abstract_text.is_some() {
            let iri = rec.iri.clone();
            self.stats.duplicate_abstracts += 1;
            self.stats
                .note(Diagnostic::new(iri, "duplicate abstract ignored (first kept)"));
        } else {
            rec.abstract_text = Some(text.to_string());
        }
    }

    /// Folds `later` into `self`. `later` is treated as coming after `self`
    /// in input order, so its abstracts lose against existing ones.
    pub fn merge(mut self, later: EntityStoreBuilder) -> Self {
        for (key, rec) in later.records {
            match self.records.get_mut(&key) {
                None => {
                    self.records.insert(key, rec);
                }
                Some(existing) => {
                    for (p, n) in rec.out_degree {
                        *existing.out_degree.entry(p).or_insert(0) += n;
                    }
                    for (p, n) in rec.in_degree {
                        *existing.in_degree.entry(p).or_insert(0) += n;
                    }
                    existing.categories.extend(rec.categories);
                    match (&existing.abstract_text, rec.abstract_text) {
                        (None, Some(text)) => existing.abstract_text = Some(text),
                        (Some(_), Some(_)) => {
                            self.stats.duplicate_abstracts += 1;
                            self.stats.note(Diagnostic::new(
                                key,
                                "duplicate abstract ignored (first kept)",
                            ));
                        }
                        _ => {}
                    }
                }
            }
        }
        self.stats.absorb(later.stats);
        self
    }

    pub fn finish(self) -> EntityStore {
        let mut stats = self.stats;
        stats.records = self.records.len() as u64;
        stats.blank_records = self.records.values().filter(|r| r.is_blank()).count() as u64;
        stats.abstracts = self
            .records
            .values()
            .filter(|r| r.abstract_text.is_some())
            .count() as u64;
        EntityStore {
            config: self.config,
            records: self.records,
            stats,
        }
    }
}

/// Immutable, IRI-sorted collection of entity records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityStore {
    config: IngestConfig,
    records: BTreeMap<String, EntityRecord>,
    stats: IngestStats,
}

impl EntityStore {
    /// Builds a store from in-memory triples.
    pub fn from_triples<'a>(
        triples: impl IntoIterator<Item = &'a Triple>,
        config: IngestConfig,
    ) -> EntityStore {
        let mut b = EntityStoreBuilder::new(config);
        for t in triples {
            b.add(t);
        }
        b.finish()
    }

    /// Builds a store from records directly (fixtures, tests, bindings).
    pub fn from_records(records: impl IntoIterator<Item = EntityRecord>) -> EntityStore {
        let b = EntityStoreBuilder {
            config: IngestConfig::default(),
            records: records.into_iter().map(|r| (r.iri.clone(), r)).collect(),
            stats: IngestStats::default(),
        };
        b.finish()
    }

    /// Streams and ingests dump files. Files are parsed in parallel and their
    /// partial tallies merged in the order given.
    pub fn ingest_files(
        paths: &[PathBuf],
        config: &IngestConfig,
        mode: ParseMode,
    ) -> Result<EntityStore, IngestError> {
        let parts = paths
            .par_iter()
            .map(|path| {
                let input = open_input(path)?;
                let mut reader =
                    TripleReader::with_source(input, mode, path.display().to_string());
                let mut b = EntityStoreBuilder::new(config.clone());
                for t in reader.by_ref() {
                    b.add(&t?);
                }
                b.stats.files += 1;
                b.stats.lines += reader.lines_read();
                let diags = reader.into_diagnostics();
                b.stats.malformed_lines += diags.len() as u64;
                for d in diags {
                    b.stats.note(d);
                }
                Ok(b)
            })
            .collect::<Result<Vec<_>, IngestError>>()?;
        let merged = parts
            .into_iter()
            .reduce(EntityStoreBuilder::merge)
            .unwrap_or_else(|| EntityStoreBuilder::new(config.clone()));
        Ok(merged.finish())
    }

    pub fn config(&self) -> &IngestConfig {
        &self.config
    }

    pub fn stats(&self) -> &IngestStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, iri: &str) -> Option<&EntityRecord> {
        self.records.get(iri)
    }

    /// All records in IRI order, blank nodes included.
    pub fn iter(&self) -> impl Iterator<Item = &EntityRecord> {
        self.records.values()
    }

    /// Records that can be classified (IRIs, not blank nodes).
    pub fn targets(&self) -> impl Iterator<Item = &EntityRecord> {
        self.records.values().filter(|r| !r.is_blank())
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(STORE_MAGIC)?;
        w.write_all(&STORE_VERSION.to_le_bytes())?;
        w.write_all(&(self.records.len() as u64).to_le_bytes())?;
        for rec in self.records.values() {
            write_str(&mut w, &rec.iri)?;
            match &rec.abstract_text {
                Some(text) => {
                    w.write_all(&[1])?;
                    write_str(&mut w, text)?;
                }
                None => w.write_all(&[0])?,
            }
            for map in [&rec.out_degree, &rec.in_degree] {
                w.write_all(&(map.len() as u32).to_le_bytes())?;
                for (p, n) in map {
                    write_str(&mut w, p)?;
                    w.write_all(&n.to_le_bytes())?;
                }
            }
            w.write_all(&(rec.categories.len() as u32).to_le_bytes())?;
            for c in &rec.categories {
                write_str(&mut w, c)?;
            }
        }
        w.flush()
    }

    /// Reads records written by [`EntityStore::write_binary`]. Statistics are
    /// not part of the binary file; see [`EntityStore::load`].
    pub fn read_binary<R: Read>(mut r: R) -> Result<EntityStore, IngestError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != STORE_MAGIC {
            return Err(IngestError::BadStore("bad magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != STORE_VERSION {
            return Err(IngestError::BadStore(format!(
                "unsupported version {version}"
            )));
        }
        let n = read_u64(&mut r)?;
        let mut records = BTreeMap::new();
        let mut prev: Option<String> = None;
        for _ in 0..n {
            let iri = read_str(&mut r)?;
            if prev.as_deref().is_some_and(|p| p >= iri.as_str()) {
                return Err(IngestError::BadStore(format!(
                    "records not sorted at {iri}"
                )));
            }
            let mut rec = EntityRecord::new(iri.clone());
            rec.abstract_text = match read_u8(&mut r)? {
                0 => None,
                1 => Some(read_str(&mut r)?),
                f => return Err(IngestError::BadStore(format!("bad abstract flag {f}"))),
            };
            for which in 0..2 {
                let m = read_u32(&mut r)?;
                for _ in 0..m {
                    let p = read_str(&mut r)?;
                    let c = read_u64(&mut r)?;
                    if c == 0 {
                        return Err(IngestError::BadStore(format!("zero count for {p}")));
                    }
                    if which == 0 {
                        rec.out_degree.insert(p, c);
                    } else {
                        rec.in_degree.insert(p, c);
                    }
                }
            }
            let m = read_u32(&mut r)?;
            for _ in 0..m {
                rec.categories.insert(read_str(&mut r)?);
            }
            prev = Some(iri.clone());
            records.insert(iri, rec);
        }
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(IngestError::BadStore("trailing bytes".into()));
        }
        Ok(EntityStoreBuilder {
            config: IngestConfig::default(),
            records,
            stats: IngestStats::default(),
        }
        .finish())
    }

    /// Path of the JSON statistics sidecar for a store file.
    pub fn stats_path(path: &Path) -> PathBuf {
        let mut s = path.as_os_str().to_owned();
        s.push(".stats.json");
        PathBuf::from(s)
    }

    /// Writes the binary store and its JSON statistics sidecar.
    pub fn save(&self, path: &Path) -> Result<(), IngestError> {
        self.write_binary(BufWriter::new(File::create(path)?))?;
        let sidecar = StatsSidecar {
            config: self.config.clone(),
            stats: self.stats.clone(),
        };
        let mut f = BufWriter::new(File::create(Self::stats_path(path))?);
        serde_json::to_writer_pretty(&mut f, &sidecar)?;
        f.write_all(b"\n")?;
        f.flush()?;
        Ok(())
    }

    /// Loads a store; the sidecar is read when present.
    pub fn load(path: &Path) -> Result<EntityStore, IngestError> {
        let mut store = Self::read_binary(io::BufReader::new(File::open(path)?))?;
        let sidecar = Self::stats_path(path);
        if sidecar.exists() {
            let s: StatsSidecar = serde_json::from_reader(io::BufReader::new(File::open(sidecar)?))?;
            store.config = s.config;
            store.stats = s.stats;
        }
        Ok(store)
    }
}

#[derive(Serialize, Deserialize)]
struct StatsSidecar {
    config: IngestConfig,
    stats: IngestStats,
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_u8<R: Read>(r: &mut R) -> io::Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)?;
    Ok(b[0])
}

fn read_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_str<R: Read>(r: &mut R) -> Result<String, IngestError> {
    let n = read_u32(r)? as usize;
    let mut buf = vec![0u8; n];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|e| IngestError::BadStore(format!("invalid UTF-8: {e}")))
}
