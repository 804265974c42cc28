use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::tokenize::tokenize;
use super::FeatureError;

pub const DEFAULT_MAX_TOKENS: usize = 1000;

/// The most frequent abstract tokens, ordered by corpus frequency
/// (descending) with ties broken by ascending byte order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Vec<String>", into = "Vec<String>")]
pub struct TokenDictionary {
    tokens: Vec<String>,
    index: HashMap<String, u32>,
}

impl From<Vec<String>> for TokenDictionary {
    fn from(tokens: Vec<String>) -> Self {
        let index = tokens
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        TokenDictionary { tokens, index }
    }
}

impl From<TokenDictionary> for Vec<String> {
    fn from(d: TokenDictionary) -> Self {
        d.tokens
    }
}

impl TokenDictionary {
    pub fn build<'a>(
        abstracts: impl IntoIterator<Item = &'a str>,
        max_tokens: usize,
    ) -> Result<Self, FeatureError> {
        let mut counts: HashMap<&str, u64> = HashMap::new();
        let mut docs = 0usize;
        for text in abstracts {
            docs += 1;
            for tok in tokenize(text) {
                *counts.entry(tok).or_insert(0) += 1;
            }
        }
        if docs == 0 {
            return Err(FeatureError::EmptyCorpus);
        }
        let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        ranked.truncate(max_tokens);
        Ok(ranked
            .into_iter()
            .map(|(t, _)| t.to_string())
            .collect::<Vec<_>>()
            .into())
    }

    /// A dictionary with no tokens, used when the A block is not requested.
    pub fn empty() -> Self {
        Vec::new().into()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn position(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    /// SHA-256 over the newline-joined tokens, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for t in &self.tokens {
            h.update(t.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}
