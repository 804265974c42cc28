use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{AggregatedLabel, CrowdError, JudgmentSet, Source, Vote};
use crate::Task;

/// A column addressed by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl Column {
    fn resolve(&self, headers: Option<&csv::StringRecord>) -> Result<usize, String> {
        match self {
            Column::Index(i) => Ok(*i),
            Column::Name(n) => headers
                .and_then(|h| h.iter().position(|x| x == n))
                .ok_or_else(|| format!("no column named `{n}`")),
        }
    }
}

/// Where each field of a judgments file lives. The default reads a
/// header-less TSV `entity, worker, label, trust`; exports with named
/// columns can be read by setting `has_headers` and naming the columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct JudgmentColumns {
    pub has_headers: bool,
    pub delimiter: char,
    pub entity: Column,
    pub worker: Column,
    pub label: Column,
    pub trust: Column,
}

impl Default for JudgmentColumns {
    fn default() -> Self {
        JudgmentColumns {
            has_headers: false,
            delimiter: '\t',
            entity: Column::Index(0),
            worker: Column::Index(1),
            label: Column::Index(2),
            trust: Column::Index(3),
        }
    }
}

/// Layout of a labels file. Without an agreement column every label gets
/// agreement 1; without a source column `default_source` is used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LabelColumns {
    pub has_headers: bool,
    pub delimiter: char,
    pub entity: Column,
    pub label: Column,
    pub agreement: Option<Column>,
    pub source: Option<Column>,
    pub default_source: Source,
}

impl Default for LabelColumns {
    fn default() -> Self {
        LabelColumns {
            has_headers: false,
            delimiter: '\t',
            entity: Column::Index(0),
            label: Column::Index(1),
            agreement: Some(Column::Index(2)),
            source: Some(Column::Index(3)),
            default_source: Source::Crowd,
        }
    }
}

fn reader<R: Read>(input: R, has_headers: bool, delimiter: char) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .delimiter(delimiter as u8)
        .flexible(true)
        .quoting(false)
        .comment(Some(b'#'))
        .from_reader(input)
}

fn canonical_label(task: Option<Task>, raw: &str) -> Result<String, String> {
    match task {
        None => Ok(raw.trim().to_string()),
        Some(t) => t
            .parse_label(raw)
            .map(|l| t.label_name(l).to_string())
            .ok_or_else(|| format!("`{raw}` is not a {t} class")),
    }
}

struct Cursor<'a> {
    file: &'a str,
    row: u64,
    rec: &'a csv::StringRecord,
}

impl Cursor<'_> {
    fn err(&self, message: impl Into<String>) -> CrowdError {
        CrowdError::BadRow {
            file: self.file.to_string(),
            row: self.row,
            message: message.into(),
        }
    }

    fn field(&self, i: usize) -> Result<&str, CrowdError> {
        self.rec
            .get(i)
            .map(str::trim)
            .ok_or_else(|| self.err(format!("missing column {}", i + 1)))
    }

    fn number(&self, i: usize) -> Result<f64, CrowdError> {
        let s = self.field(i)?;
        s.parse::<f64>()
            .map_err(|_| self.err(format!("`{s}` is not a number")))
    }
}

/// Reads votes grouped per entity, sorted by entity IRI. With a task,
/// class names are normalized to its short names (`C`/`I`, `PO`/`NPO`).
pub fn read_judgments<R: Read>(
    input: R,
    file: &str,
    cols: &JudgmentColumns,
    task: Option<Task>,
) -> Result<Vec<JudgmentSet>, CrowdError> {
    let mut rdr = reader(input, cols.has_headers, cols.delimiter);
    let headers = if cols.has_headers {
        Some(rdr.headers()?.clone())
    } else {
        None
    };
    let resolve = |c: &Column| {
        c.resolve(headers.as_ref()).map_err(|m| CrowdError::BadRow {
            file: file.to_string(),
            row: 1,
            message: m,
        })
    };
    let (ie, iw, il, it) = (
        resolve(&cols.entity)?,
        resolve(&cols.worker)?,
        resolve(&cols.label)?,
        resolve(&cols.trust)?,
    );
    let mut sets: BTreeMap<String, JudgmentSet> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let cur = Cursor { file, row, rec: &rec };
        let entity = cur.field(ie)?.to_string();
        let trust = cur.number(it)?;
        if !(trust > 0.0 && trust <= 1.0) {
            return Err(cur.err(format!("trust {trust} outside (0, 1]")));
        }
        let label = canonical_label(task, cur.field(il)?).map_err(|m| cur.err(m))?;
        let vote = Vote {
            worker: cur.field(iw)?.to_string(),
            label,
            trust,
        };
        sets.entry(entity.clone())
            .or_insert_with(|| JudgmentSet::new(entity))
            .votes
            .push(vote);
    }
    Ok(sets.into_values().collect())
}

pub fn read_labels<R: Read>(
    input: R,
    file: &str,
    cols: &LabelColumns,
    task: Option<Task>,
) -> Result<Vec<AggregatedLabel>, CrowdError> {
    let mut rdr = reader(input, cols.has_headers, cols.delimiter);
    let headers = if cols.has_headers {
        Some(rdr.headers()?.clone())
    } else {
        None
    };
    let resolve = |c: &Column| {
        c.resolve(headers.as_ref()).map_err(|m| CrowdError::BadRow {
            file: file.to_string(),
            row: 1,
            message: m,
        })
    };
    let ie = resolve(&cols.entity)?;
    let il = resolve(&cols.label)?;
    let ia = cols.agreement.as_ref().map(&resolve).transpose()?;
    let is = cols.source.as_ref().map(&resolve).transpose()?;
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map(|p| p.line()).unwrap_or(0);
        let cur = Cursor { file, row, rec: &rec };
        let entity = cur.field(ie)?.to_string();
        if !seen.insert(entity.clone()) {
            return Err(CrowdError::DuplicateEntity(entity));
        }
        let class = canonical_label(task, cur.field(il)?).map_err(|m| cur.err(m))?;
        // Optional trailing columns may be absent on individual rows.
        let agreement = match ia {
            Some(i) if rec.get(i).is_some_and(|s| !s.trim().is_empty()) => cur.number(i)?,
            _ => 1.0,
        };
        if !(0.0..=1.0).contains(&agreement) {
            return Err(cur.err(format!("agreement {agreement} outside [0, 1]")));
        }
        let source = match is.and_then(|i| rec.get(i)).map(str::trim) {
            Some("crowd") => Source::Crowd,
            Some("expert") => Source::Expert,
            None | Some("") => cols.default_source,
            Some(other) => return Err(cur.err(format!("unknown source `{other}`"))),
        };
        out.push(AggregatedLabel {
            entity,
            class,
            agreement,
            source,
            contested: false,
        });
    }
    Ok(out)
}

/// Writes `entity<TAB>label<TAB>agreement<TAB>source`.
pub fn write_labels<W: Write>(out: &mut W, labels: &[AggregatedLabel]) -> std::io::Result<()> {
    for l in labels {
        writeln!(out, "{}\t{}\t{}\t{}", l.entity, l.class, l.agreement, l.source)?;
    }
    Ok(())
}
