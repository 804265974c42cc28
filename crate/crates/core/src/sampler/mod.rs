//! Seeded nearest-neighbour sampling of entities over dense vectors,
//! followed by cleanup and place enrichment.

mod kg;
mod vectors;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use kg::{SampleKg, DBO_DISAMBIGUATES, DBO_REDIRECTS, RDFS_LABEL};
pub use vectors::VectorStore;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("{0}: not in the vector store")]
    UnknownSeed(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("{context}: {message}")]
    BadVectors { context: String, message: String },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Up to `k` entities most cosine-similar to `seed`, best first, ties by
/// IRI. The seed itself is excluded, as is anything below `min_cos`.
pub fn nearest_neighbors(
    seed: &str,
    store: &VectorStore,
    k: usize,
    min_cos: Option<f64>,
) -> Result<Vec<(String, f64)>, SampleError> {
    if k == 0 {
        return Err(SampleError::ZeroK);
    }
    let q = store
        .index_of(seed)
        .ok_or_else(|| SampleError::UnknownSeed(seed.to_string()))?;
    let mut scored: Vec<(usize, f64)> = (0..store.len())
        .filter(|&i| i != q)
        .map(|i| (i, store.cosine(q, i)))
        .filter(|&(_, c)| min_cos.is_none_or(|m| c >= m))
        .collect();
    // Entries are in IRI order, so a stable sort on score keeps IRI ties ascending.
    scored.sort_by(|a, b| b.1.total_cmp(&a.1));
    scored.truncate(k);
    Ok(scored
        .into_iter()
        .map(|(i, c)| (store.iri(i).to_string(), c))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SampleConfig {
    pub k: usize,
    pub min_cos: Option<f64>,
    /// Category IRI whose members are added as places.
    pub places_category: Option<String>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            k: 100,
            min_cos: Some(0.6),
            places_category: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Sorted, duplicate-free.
    pub entities: Vec<String>,
    pub neighbors: usize,
    pub dropped_redirects: Vec<String>,
    pub dropped_without_abstract: Vec<String>,
    pub dropped_disambiguations: Vec<String>,
    pub places_added: Vec<String>,
    /// Lowest cosine among the unfiltered top-k of any seed.
    pub lowest_top_k_cosine: Option<f64>,
}

/// Union of the seeds' neighbour lists with redirect sources resolved to
/// their targets, cleaned of entities without an abstract and
/// disambiguation pages, plus the KG entities matching a place name or the
/// places category (cleaned the same way).
pub fn build_sample(
    seeds: &[String],
    store: &VectorStore,
    kg: &SampleKg,
    places: &[String],
    cfg: &SampleConfig,
) -> Result<Sample, SampleError> {
    // Per seed: the kept neighbours and the lowest unfiltered top-k cosine.
    type Scored = (Vec<(String, f64)>, Option<f64>);
    let lists: Vec<Scored> = seeds
        .par_iter()
        .map(|s| {
            let raw = nearest_neighbors(s, store, cfg.k, None)?;
            let lowest = raw.last().map(|x| x.1);
            let kept = match cfg.min_cos {
                Some(m) => raw.into_iter().filter(|x| x.1 >= m).collect(),
                None => raw,
            };
            Ok((kept, lowest))
        })
        .collect::<Result<_, SampleError>>()?;
    let lowest = lists.iter().filter_map(|l| l.1).reduce(f64::min);
    if let (Some(lo), Some(m)) = (lowest, cfg.min_cos) {
        if lo < m {
            log::info!("some top-{} neighbours fall below cosine {m} (lowest {lo:.4})", cfg.k);
        } else {
            log::info!("all top-{} neighbours have cosine >= {m} (lowest {lo:.4})", cfg.k);
        }
    }
    let neighbors: BTreeSet<String> = lists
        .into_iter()
        .flat_map(|l| l.0.into_iter().map(|x| x.0))
        .collect();
    let mut sample = Sample {
        neighbors: neighbors.len(),
        lowest_top_k_cosine: lowest,
        ..Default::default()
    };
    let mut kept: BTreeSet<String> = BTreeSet::new();
    for e in neighbors {
        if let Some(e) = clean(e, kg, &mut sample) {
            kept.insert(e);
        }
    }
    for e in kg.place_matches(places, cfg.places_category.as_deref()) {
        if kept.contains(&e) {
            continue;
        }
        if let Some(e) = clean(e, kg, &mut sample) {
            if kept.insert(e.clone()) {
                sample.places_added.push(e);
            }
        }
    }
    sample.entities = kept.into_iter().collect();
    Ok(sample)
}

/// `e` after cleanup: redirect sources are replaced by their target, then
/// disambiguation pages and entities without an abstract are dropped.
fn clean(e: String, kg: &SampleKg, s: &mut Sample) -> Option<String> {
    let e = if kg.is_redirect(&e) {
        let target = kg.resolve_redirect(&e).map(str::to_string);
        s.dropped_redirects.push(e);
        target?
    } else {
        e
    };
    if kg.is_disambiguation(&e) {
        s.dropped_disambiguations.push(e);
    } else if !kg.has_abstract(&e) {
        s.dropped_without_abstract.push(e);
    } else {
        return Some(e);
    }
    None
}
