use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::FeatureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    /// Abstract bag of words.
    A,
    /// URI ID shape.
    U,
    /// Incoming/outgoing property counts.
    E,
    /// Alignment verdict flag.
    D,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::A, Block::U, Block::E, Block::D];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn letter(self) -> char {
        match self {
            Block::A => 'A',
            Block::U => 'U',
            Block::E => 'E',
            Block::D => 'D',
        }
    }
}

/// A subset of {A, U, E, D}. Iteration and display follow the fixed
/// concatenation order A, U, E, D.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockSet(u8);

impl BlockSet {
    pub const EMPTY: BlockSet = BlockSet(0);
    pub const ALL: BlockSet = BlockSet(0b1111);

    pub fn of(blocks: &[Block]) -> Self {
        BlockSet(blocks.iter().fold(0, |acc, b| acc | b.bit()))
    }

    pub fn contains(self, b: Block) -> bool {
        self.0 & b.bit() != 0
    }

    pub fn with(self, b: Block) -> Self {
        BlockSet(self.0 | b.bit())
    }

    pub fn without(self, b: Block) -> Self {
        BlockSet(self.0 & !b.bit())
    }

    pub fn union(self, other: BlockSet) -> Self {
        BlockSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: BlockSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Block> {
        Block::ALL.into_iter().filter(move |b| self.contains(*b))
    }

    /// Every non-empty subset of `self` except `{D}`, in the row order of
    /// the published SVM table: singles, pairs, triples, then all four,
    /// each group in A, U, E, D lexicographic order.
    pub fn sweep_combinations(self) -> Vec<BlockSet> {
        let members: Vec<Block> = self.iter().collect();
        let mut out = Vec::new();
        for size in 1..=members.len() {
            let mut combo = Vec::new();
            push_combinations(&members, size, 0, &mut combo, &mut out);
        }
        out.retain(|s| *s != BlockSet::of(&[Block::D]));
        out
    }
}

fn push_combinations(
    members: &[Block],
    size: usize,
    start: usize,
    combo: &mut Vec<Block>,
    out: &mut Vec<BlockSet>,
) {
    if combo.len() == size {
        out.push(BlockSet::of(combo));
        return;
    }
    for i in start..members.len() {
        combo.push(members[i]);
        push_combinations(members, size, i + 1, combo, out);
        combo.pop();
    }
}

impl fmt::Display for BlockSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", b.letter())?;
        }
        Ok(())
    }
}

impl FromStr for BlockSet {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, FeatureError> {
        let mut set = BlockSet::EMPTY;
        for c in s.chars().filter(|c| !matches!(c, '+' | ',' | ' ')) {
            let b = match c.to_ascii_uppercase() {
                'A' => Block::A,
                'U' => Block::U,
                'E' => Block::E,
                'D' => Block::D,
                _ => return Err(FeatureError::BadBlocks(s.to_string())),
            };
            set = set.with(b);
        }
        if set.is_empty() {
            return Err(FeatureError::NoBlocks);
        }
        Ok(set)
    }
}

impl Serialize for BlockSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BlockSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.is_empty() {
            return Ok(BlockSet::EMPTY);
        }
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_has_fourteen_rows_in_table_order() {
        let rows: Vec<String> = BlockSet::ALL
            .sweep_combinations()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            rows,
            [
                "A", "U", "E", "AU", "AE", "AD", "UE", "UD", "ED", "AUE", "AUD", "AED", "UED",
                "AUED"
            ]
        );
    }

    #[test]
    fn single_block_universe() {
        assert_eq!(BlockSet::of(&[Block::A]).sweep_combinations().len(), 1);
    }

    #[test]
    fn parse_and_display() {
        let s: BlockSet = "dea".parse().unwrap();
        assert_eq!(s.to_string(), "AED");
        assert!("AX".parse::<BlockSet>().is_err());
        assert!("".parse::<BlockSet>().is_err());
        assert_eq!("A+U".parse::<BlockSet>().unwrap().to_string(), "AU");
    }
}
