use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::tokenize::tokenize;
use crate::ingest::EntityRecord;
use crate::Diagnostic;

/// Shape of the local ID of an entity IRI.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UriFeatures {
    /// Terms starting with an uppercase letter.
    pub caps_terms: u32,
    /// Terms that also occur as tokens of the abstract.
    pub terms_in_abstract: u32,
    pub term_count: u32,
}

impl UriFeatures {
    pub fn as_array(&self) -> [f64; 3] {
        [
            self.caps_terms as f64,
            self.terms_in_abstract as f64,
            self.term_count as f64,
        ]
    }
}

/// Counts the `_`-separated terms of the IRI's local ID (the text after
/// the final `/`). Disambiguators such as `(film)` are terms. A term is
/// found in the abstract when its punctuation-stripped form equals one of
/// the abstract's tokens, case-sensitively unless `case_sensitive` is off.
pub fn uri_features(
    iri: &str,
    abstract_text: Option<&str>,
    case_sensitive: bool,
) -> (UriFeatures, Option<Diagnostic>) {
    let id = crate::ingest::local_id(iri);
    let terms: Vec<&str> = id.split('_').filter(|t| !t.is_empty()).collect();
    if terms.is_empty() {
        return (
            UriFeatures::default(),
            Some(Diagnostic::new(iri, "empty local ID")),
        );
    }
    let fold = |s: &str| {
        if case_sensitive {
            s.to_string()
        } else {
            s.to_lowercase()
        }
    };
    let abstract_tokens: HashSet<String> = abstract_text
        .map(|t| tokenize(t).map(fold).collect())
        .unwrap_or_default();
    let caps_terms = terms
        .iter()
        .filter(|t| t.chars().next().is_some_and(char::is_uppercase))
        .count() as u32;
    let terms_in_abstract = terms
        .iter()
        .filter(|t| {
            tokenize(t)
                .next()
                .is_some_and(|tok| abstract_tokens.contains(&fold(tok)))
        })
        .count() as u32;
    (
        UriFeatures {
            caps_terms,
            terms_in_abstract,
            term_count: terms.len() as u32,
        },
        None,
    )
}

impl EntityRecord {
    pub fn uri_features(&self, case_sensitive: bool) -> (UriFeatures, Option<Diagnostic>) {
        uri_features(&self.iri, self.abstract_text.as_deref(), case_sensitive)
    }
}
