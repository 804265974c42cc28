//! Streaming N-Triples ingestion into an entity store.

mod ntriples;
mod store;

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use thiserror::Error;

pub use ntriples::{parse_ntriples, Literal, Node, ParseMode, Parsed, Term, Triple, TripleReader};
pub use store::{
    local_id, EntityRecord, EntityStore, EntityStoreBuilder, IngestConfig, IngestStats, DBO_ABSTRACT,
    DCT_SUBJECT, RDF_TYPE,
};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("invalid store file: {0}")]
    BadStore(String),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Opens a dump file for buffered reading, transparently decompressing gzip
/// input (detected by magic bytes, not by extension).
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead + Send>> {
    let mut file = BufReader::new(File::open(path)?);
    let is_gzip = {
        let head = file.fill_buf()?;
        head.len() >= 2 && head[0] == 0x1f && head[1] == 0x8b
    };
    if is_gzip {
        Ok(Box::new(BufReader::new(MultiGzDecoder::new(file))))
    } else {
        Ok(Box::new(file))
    }
}
