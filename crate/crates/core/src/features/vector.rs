use std::fmt;

use serde::{Deserialize, Serialize};

/// Identity of a fitted feature space. Vectors and models carry it so
/// that mixing incompatible spaces is caught.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpaceId(pub u64);

impl fmt::Display for SpaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.0)
    }
}

impl std::str::FromStr for SpaceId {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        u64::from_str_radix(s, 16).map(SpaceId)
    }
}

impl Serialize for SpaceId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SpaceId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// A sparse vector in a fitted feature space. Entries are sorted by
/// column and never hold zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    space: SpaceId,
    dim: usize,
    entries: Vec<(u32, f64)>,
}

impl FeatureVector {
    /// Builds a vector from unordered entries. Zeros are dropped and
    /// duplicate columns keep the last value.
    ///
    /// # Panics
    /// If a column is out of range.
    pub fn new(space: SpaceId, dim: usize, mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!((c as usize) < dim, "column {c} out of range for dimension {dim}");
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| e.1 != 0.0);
        FeatureVector {
            space,
            dim,
            entries: out,
        }
    }

    pub fn from_dense(space: SpaceId, values: &[f64]) -> Self {
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .collect();
        FeatureVector {
            space,
            dim: values.len(),
            entries,
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, col: usize) -> f64 {
        self.entries
            .binary_search_by_key(&(col as u32), |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        for &(c, x) in &self.entries {
            v[c as usize] = x;
        }
        v
    }

    pub fn dot(&self, w: &[f64]) -> f64 {
        self.entries.iter().map(|&(c, x)| w[c as usize] * x).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.1 * e.1).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.1.is_finite())
    }

    /// Entries whose column lies in `range`, shifted to start at zero.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Vec<(u32, f64)> {
        self.entries
            .iter()
            .filter(|e| range.contains(&(e.0 as usize)))
            .map(|&(c, v)| (c - range.start as u32, v))
            .collect()
    }
}
