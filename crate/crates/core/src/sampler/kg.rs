use std::collections::{BTreeMap, BTreeSet};

use crate::ingest::{local_id, Term, Triple, DBO_ABSTRACT, DCT_SUBJECT};

pub const DBO_REDIRECTS: &str = "http://dbpedia.org/ontology/wikiPageRedirects";
pub const DBO_DISAMBIGUATES: &str = "http://dbpedia.org/ontology/wikiPageDisambiguates";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

/// What sampling cleanup needs to know about KG entities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SampleKg {
    /// Redirect source → target.
    pub redirects: BTreeMap<String, String>,
    pub disambiguations: BTreeSet<String>,
    pub abstracts: BTreeSet<String>,
    pub labels: BTreeMap<String, BTreeSet<String>>,
    pub categories: BTreeMap<String, BTreeSet<String>>,
}

impl SampleKg {
    /// Collects redirects, disambiguation pages, abstracts, labels and
    /// categories. Literals with a language tag other than `language` are
    /// ignored.
    pub fn from_triples<'a>(triples: impl IntoIterator<Item = &'a Triple>, language: Option<&str>) -> Self {
        let mut kg = SampleKg::default();
        for t in triples {
            let s = t.subject.key();
            let lang_ok = |lit: &crate::ingest::Literal| match (language, lit.lang.as_deref()) {
                (Some(want), Some(have)) => have.eq_ignore_ascii_case(want),
                _ => true,
            };
            match (t.predicate.as_str(), &t.object) {
                (DBO_REDIRECTS, Term::Iri(o)) => {
                    kg.redirects.insert(s, o.clone());
                }
                (DBO_DISAMBIGUATES, _) => {
                    kg.disambiguations.insert(s);
                }
                (DBO_ABSTRACT, Term::Literal(l)) if lang_ok(l) && !l.lexical.trim().is_empty() => {
                    kg.abstracts.insert(s);
                }
                (RDFS_LABEL, Term::Literal(l)) if lang_ok(l) => {
                    kg.labels.entry(s).or_default().insert(l.lexical.clone());
                }
                (DCT_SUBJECT, Term::Iri(o)) => {
                    kg.categories.entry(s).or_default().insert(o.clone());
                }
                _ => {}
            }
        }
        kg
    }

    pub fn is_redirect(&self, e: &str) -> bool {
        self.redirects.contains_key(e)
    }

    /// Follows redirects from `e` to the first page that is not one.
    /// `None` for redirect loops.
    pub fn resolve_redirect<'a>(&'a self, mut e: &'a str) -> Option<&'a str> {
        let mut seen = BTreeSet::new();
        while let Some(next) = self.redirects.get(e) {
            if !seen.insert(e) {
                return None;
            }
            e = next;
        }
        Some(e)
    }

    /// Pages that disambiguate others, or whose ID ends in `_(disambiguation)`.
    pub fn is_disambiguation(&self, e: &str) -> bool {
        self.disambiguations.contains(e) || local_id(e).ends_with("_(disambiguation)")
    }

    pub fn has_abstract(&self, e: &str) -> bool {
        self.abstracts.contains(e)
    }

    /// Entities whose label, or local ID with `_` read as a space, equals
    /// a place name ignoring case, plus members of `category`.
    pub fn place_matches(&self, places: &[String], category: Option<&str>) -> BTreeSet<String> {
        let wanted: BTreeSet<String> = places
            .iter()
            .map(|p| p.trim().to_lowercase())
            .filter(|p| !p.is_empty())
            .collect();
        let mut out = BTreeSet::new();
        if !wanted.is_empty() {
            let candidates = self
                .abstracts
                .iter()
                .chain(self.labels.keys())
                .collect::<BTreeSet<_>>();
            for e in candidates {
                let id_name = local_id(e).replace('_', " ").to_lowercase();
                let by_label = self
                    .labels
                    .get(e)
                    .is_some_and(|ls| ls.iter().any(|l| wanted.contains(&l.to_lowercase())));
                if by_label || wanted.contains(&id_name) {
                    out.insert(e.clone());
                }
            }
        }
        if let Some(c) = category {
            for (e, cats) in &self.categories {
                if cats.contains(c) {
                    out.insert(e.clone());
                }
            }
        }
        out
    }
}
