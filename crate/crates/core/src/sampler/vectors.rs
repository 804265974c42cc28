use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::SampleError;

const MAGIC: &[u8; 8] = b"FDVECS\0\0";
const VERSION: u32 = 1;

/// Dense entity vectors of one dimension, kept in IRI order with their
/// norms precomputed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VectorStore {
    dim: usize,
    iris: Vec<String>,
    data: Vec<f32>,
    norms: Vec<f64>,
}

fn bad(context: impl Into<String>, message: impl Into<String>) -> SampleError {
    SampleError::BadVectors {
        context: context.into(),
        message: message.into(),
    }
}

impl VectorStore {
    /// Builds a store from `(iri, vector)` rows. Rejects mixed dimensions,
    /// zero vectors, non-finite values and repeated IRIs.
    pub fn from_rows(rows: impl IntoIterator<Item = (String, Vec<f32>)>) -> Result<Self, SampleError> {
        let mut map: BTreeMap<String, Vec<f32>> = BTreeMap::new();
        let mut dim = None;
        for (iri, v) in rows {
            if *dim.get_or_insert(v.len()) != v.len() {
                return Err(bad(&iri, format!("dimension {} differs from {}", v.len(), dim.unwrap())));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(bad(&iri, "non-finite component"));
            }
            if v.iter().all(|&x| x == 0.0) {
                return Err(bad(&iri, "zero vector"));
            }
            if map.insert(iri.clone(), v).is_some() {
                return Err(bad(&iri, "listed more than once"));
            }
        }
        let dim = dim.unwrap_or(0);
        let mut s = VectorStore {
            dim,
            ..Default::default()
        };
        for (iri, v) in map {
            s.norms.push(v.iter().map(|&x| x as f64 * x as f64).sum::<f64>().sqrt());
            s.iris.push(iri);
            s.data.extend(v);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.iris.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iris.is_empty()
    }

    pub fn iri(&self, i: usize) -> &str {
        &self.iris[i]
    }

    pub fn index_of(&self, iri: &str) -> Option<usize> {
        self.iris.binary_search_by(|x| x.as_str().cmp(iri)).ok()
    }

    pub fn vector(&self, i: usize) -> &[f32] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn get(&self, iri: &str) -> Option<&[f32]> {
        self.index_of(iri).map(|i| self.vector(i))
    }

    pub fn cosine(&self, a: usize, b: usize) -> f64 {
        let dot: f64 = self
            .vector(a)
            .iter()
            .zip(self.vector(b))
            .map(|(&x, &y)| x as f64 * y as f64)
            .sum();
        dot / (self.norms[a] * self.norms[b])
    }

    /// `iri<TAB>v1 v2 ... vd` per line; blank lines and `#` comments skipped.
    pub fn read_text<R: BufRead>(input: R, file: &str) -> Result<Self, SampleError> {
        let mut rows = Vec::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            let t = line.trim_end();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let ctx = || format!("{file}:{}", n + 1);
            let (iri, rest) = t.split_once('\t').ok_or_else(|| bad(ctx(), "missing tab"))?;
            let v = rest
                .split_ascii_whitespace()
                .map(|x| x.parse::<f32>().map_err(|_| bad(ctx(), format!("bad number `{x}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((iri.to_string(), v));
        }
        Self::from_rows(rows)
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for i in 0..self.len() {
            write!(out, "{}\t", self.iris[i])?;
            for (j, x) in self.vector(i).iter().enumerate() {
                if j > 0 {
                    out.write_all(b" ")?;
                }
                write!(out, "{x}")?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Magic, version, dimension, count, then per entry a
    /// length-prefixed IRI and `dim` little-endian `f32`s.
    pub fn write_binary<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&VERSION.to_le_bytes())?;
        out.write_all(&(self.dim as u32).to_le_bytes())?;
        out.write_all(&(self.len() as u64).to_le_bytes())?;
        for i in 0..self.len() {
            out.write_all(&(self.iris[i].len() as u32).to_le_bytes())?;
            out.write_all(self.iris[i].as_bytes())?;
            for x in self.vector(i) {
                out.write_all(&x.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self, SampleError> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("vector file", "bad magic"));
        }
        let mut u32b = [0u8; 4];
        let mut u64b = [0u8; 8];
        input.read_exact(&mut u32b)?;
        if u32::from_le_bytes(u32b) != VERSION {
            return Err(bad("vector file", "unsupported version"));
        }
        input.read_exact(&mut u32b)?;
        let dim = u32::from_le_bytes(u32b) as usize;
        input.read_exact(&mut u64b)?;
        let count = u64::from_le_bytes(u64b);
        let mut rows = Vec::new();
        for _ in 0..count {
            input.read_exact(&mut u32b)?;
            let mut iri = vec![0u8; u32::from_le_bytes(u32b) as usize];
            input.read_exact(&mut iri)?;
            let iri = String::from_utf8(iri).map_err(|_| bad("vector file", "IRI is not UTF-8"))?;
            let mut v = Vec::with_capacity(dim);
            for _ in 0..dim {
                input.read_exact(&mut u32b)?;
                v.push(f32::from_le_bytes(u32b));
            }
            rows.push((iri, v));
        }
        if input.read(&mut [0u8; 1])? != 0 {
            return Err(bad("vector file", "trailing bytes"));
        }
        Self::from_rows(rows)
    }

    /// Reads either format, recognizing the binary one by its magic.
    pub fn load(path: &Path) -> Result<Self, SampleError> {
        let mut r = BufReader::new(File::open(path)?);
        let binary = r.fill_buf()?.starts_with(MAGIC);
        if binary {
            Self::read_binary(r)
        } else {
            Self::read_text(r, &path.display().to_string())
        }
    }

    pub fn save_binary(&self, path: &Path) -> std::io::Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_binary(&mut w)?;
        w.flush()
    }
}
