use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ingest::EntityRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "in")]
    In,
    #[serde(rename = "out")]
    Out,
}

/// A predicate namespaced by the direction it touches the entity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PropertyKey {
    pub direction: Direction,
    pub predicate: String,
}

impl PropertyKey {
    pub fn new(direction: Direction, predicate: impl Into<String>) -> Self {
        PropertyKey {
            direction,
            predicate: predicate.into(),
        }
    }
}

impl fmt::Display for PropertyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::In => "in",
            Direction::Out => "out",
        };
        write!(f, "{d}:{}", self.predicate)
    }
}

/// Per-predicate degree counts of an entity, keyed by direction.
pub fn property_features(rec: &EntityRecord) -> BTreeMap<PropertyKey, u64> {
    rec.in_degree
        .iter()
        .map(|(p, &n)| (PropertyKey::new(Direction::In, p.clone()), n))
        .chain(
            rec.out_degree
                .iter()
                .map(|(p, &n)| (PropertyKey::new(Direction::Out, p.clone()), n)),
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rome_outgoing() {
        let mut rome = EntityRecord::new("http://dbpedia.org/resource/Rome");
        rome.out_degree.insert(":locatedIn".into(), 1);
        let f = property_features(&rome);
        assert_eq!(f.len(), 1);
        assert_eq!(f[&PropertyKey::new(Direction::Out, ":locatedIn")], 1);
    }

    #[test]
    fn empty_record_gives_empty_vector() {
        assert!(property_features(&EntityRecord::new("x")).is_empty());
    }

    #[test]
    fn same_predicate_both_directions_stays_distinct() {
        let mut r = EntityRecord::new("x");
        r.out_degree.insert("p".into(), 2);
        r.in_degree.insert("p".into(), 5);
        let keys: Vec<_> = property_features(&r).into_iter().collect();
        assert_eq!(
            keys,
            vec![
                (PropertyKey::new(Direction::In, "p"), 5),
                (PropertyKey::new(Direction::Out, "p"), 2)
            ]
        );
    }
}
