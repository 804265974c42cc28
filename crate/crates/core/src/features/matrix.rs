use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::space::FeatureSpace;
use super::vector::{FeatureVector, SpaceId};
use super::{Block, BlockSet, FeatureError};

pub const MATRIX_FORMAT: &str = "fd-sparse-1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixHeader {
    pub format: String,
    pub space: SpaceId,
    pub blocks: BlockSet,
    pub dim: usize,
    pub rows: usize,
    pub dictionary_hash: String,
    /// `[block, first column, width]` per present block.
    pub layout: Vec<(Block, usize, usize)>,
}

impl MatrixHeader {
    pub fn for_space(space: &FeatureSpace, rows: usize) -> Self {
        let l = space.layout();
        MatrixHeader {
            format: MATRIX_FORMAT.to_string(),
            space: space.id(),
            blocks: space.blocks(),
            dim: space.dim(),
            rows,
            dictionary_hash: space.dictionary().hash(),
            layout: space
                .blocks()
                .iter()
                .map(|b| {
                    let r = l.range(b);
                    (b, r.start, r.len())
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    pub header: MatrixHeader,
    pub rows: Vec<(String, FeatureVector)>,
}

/// Writes `# <json header>` followed by one `row_id<TAB>col:val ...` line
/// per row. Values use the shortest text that round-trips the `f64`.
pub fn write_matrix<W: Write>(
    out: &mut W,
    space: &FeatureSpace,
    rows: &[(String, FeatureVector)],
) -> Result<(), FeatureError> {
    let header = MatrixHeader::for_space(space, rows.len());
    writeln!(out, "# {}", serde_json::to_string(&header)?)?;
    for (id, v) in rows {
        write!(out, "{id}\t")?;
        for (i, (c, x)) in v.entries().iter().enumerate() {
            if i > 0 {
                out.write_all(b" ")?;
            }
            write!(out, "{c}:{x}")?;
        }
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_matrix<R: BufRead>(input: R) -> Result<SparseMatrix, FeatureError> {
    let bad = |line: u64, message: String| FeatureError::BadMatrix { line, message };
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| bad(1, "empty file".into()))??;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| bad(1, "missing `# ` header".into()))?;
    let header: MatrixHeader =
        serde_json::from_str(json).map_err(|e| bad(1, format!("bad header: {e}")))?;
    if header.format != MATRIX_FORMAT {
        return Err(bad(1, format!("unsupported format `{}`", header.format)));
    }
    let mut rows = Vec::with_capacity(header.rows);
    for (n, line) in lines.enumerate() {
        let lineno = n as u64 + 2;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (id, cells) = line
            .split_once('\t')
            .ok_or_else(|| bad(lineno, "missing tab after row id".into()))?;
        let mut entries = Vec::new();
        for cell in cells.split_ascii_whitespace() {
            let (c, v) = cell
                .split_once(':')
                .ok_or_else(|| bad(lineno, format!("bad cell `{cell}`")))?;
            let c: u32 = c
                .parse()
                .map_err(|_| bad(lineno, format!("bad column in `{cell}`")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| bad(lineno, format!("bad value in `{cell}`")))?;
            if c as usize >= header.dim {
                return Err(bad(lineno, format!("column {c} out of range")));
            }
            entries.push((c, v));
        }
        rows.push((id.to_string(), FeatureVector::new(header.space, header.dim, entries)));
    }
    if rows.len() != header.rows {
        return Err(bad(
            0,
            format!("header announces {} rows, found {}", header.rows, rows.len()),
        ));
    }
    Ok(SparseMatrix { header, rows })
}
