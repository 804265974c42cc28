use std::fmt;
use std::io::BufRead;

use super::IngestError;
use crate::Diagnostic;

/// Subject position: an IRI or a blank node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Iri(String),
    Blank(String),
}

impl Node {
    /// Key used by the entity store. Blank nodes are kept distinct from IRIs
    /// by their `_:` prefix, which can never start an absolute IRI.
    pub fn key(&self) -> String {
        match self {
            Node::Iri(iri) => iri.clone(),
            Node::Blank(label) => format!("_:{label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub lexical: String,
    pub lang: Option<String>,
    pub datatype: Option<String>,
}

/// Object position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn as_node(&self) -> Option<Node> {
        match self {
            Term::Iri(iri) => Some(Node::Iri(iri.clone())),
            Term::Blank(b) => Some(Node::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub subject: Node,
    pub predicate: String,
    pub object: Term,
}

fn write_iri(f: &mut fmt::Formatter<'_>, iri: &str) -> fmt::Result {
    f.write_str("<")?;
    for c in iri.chars() {
        match c {
            '\u{0}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                write!(f, "\\u{:04X}", c as u32)?
            }
            _ => write!(f, "{c}")?,
        }
    }
    f.write_str(">")
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Iri(iri) => write_iri(f, iri),
            Node::Blank(b) => write!(f, "_:{b}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write_iri(f, iri),
            Term::Blank(b) => write!(f, "_:{b}"),
            Term::Literal(lit) => {
                f.write_str("\"")?;
                for c in lit.lexical.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\r' => f.write_str("\\r")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")?;
                if let Some(lang) = &lit.lang {
                    write!(f, "@{lang}")
                } else if let Some(dt) = &lit.datatype {
                    f.write_str("^^")?;
                    write_iri(f, dt)
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.subject)?;
        write_iri(f, &self.predicate)?;
        write!(f, " {} .", self.object)
    }
}

impl Triple {
    /// Parses a single N-Triples statement. Returns `Ok(None)` for blank and
    /// comment lines.
    pub fn parse_line(line: &str) -> Result<Option<Triple>, String> {
        LineParser::new(line).statement()
    }
}

struct LineParser<'a> {
    src: &'a str,
    pos: usize,
}

fn is_pn_chars_base(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{C0}'..='\u{D6}' | '\u{D8}'..='\u{F6}' | '\u{F8}'..='\u{2FF}'
        | '\u{370}'..='\u{37D}' | '\u{37F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_' || c == ':'
}

fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{B7}'
        || ('\u{300}'..='\u{36F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

fn has_scheme(iri: &str) -> bool {
    let mut chars = iri.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    for c in chars {
        match c {
            ':' => return true,
            c if c.is_ascii_alphanumeric() || c == '+' || c == '-' || c == '.' => {}
            _ => return false,
        }
    }
    false
}

impl<'a> LineParser<'a> {
    fn new(src: &'a str) -> Self {
        LineParser { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ') | Some('\t')) {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, String> {
        Err(format!("column {}: {}", self.pos + 1, msg.into()))
    }

    fn statement(&mut self) -> Result<Option<Triple>, String> {
        self.skip_ws();
        match self.peek() {
            None | Some('#') => return Ok(None),
            _ => {}
        }
        let subject = match self.peek() {
            Some('<') => Node::Iri(self.iri()?),
            Some('_') => Node::Blank(self.blank()?),
            _ => return self.err("expected IRI or blank node as subject"),
        };
        self.skip_ws();
        if self.peek() != Some('<') {
            return self.err("expected IRI as predicate");
        }
        let predicate = self.iri()?;
        self.skip_ws();
        let object = match self.peek() {
            Some('<') => Term::Iri(self.iri()?),
            Some('_') => Term::Blank(self.blank()?),
            Some('"') => Term::Literal(self.literal()?),
            _ => return self.err("expected IRI, blank node or literal as object"),
        };
        self.skip_ws();
        if !self.eat('.') {
            return self.err("expected '.' terminating the statement");
        }
        self.skip_ws();
        match self.peek() {
            None | Some('#') => Ok(Some(Triple {
                subject,
                predicate,
                object,
            })),
            Some(c) => self.err(format!("unexpected trailing character {c:?}")),
        }
    }

    fn hex_escape(&mut self, digits: usize) -> Result<char, String> {
        let start = self.pos;
        for _ in 0..digits {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => {}
                _ => return self.err("malformed \\u escape"),
            }
        }
        let code = u32::from_str_radix(&self.src[start..self.pos], 16).expect("hex digits");
        match char::from_u32(code) {
            Some(c) => Ok(c),
            None => self.err(format!("escape U+{code:X} is not a valid code point")),
        }
    }

    fn uchar(&mut self) -> Result<char, String> {
        match self.bump() {
            Some('u') => self.hex_escape(4),
            Some('U') => self.hex_escape(8),
            _ => self.err("expected \\u or \\U escape"),
        }
    }

    fn iri(&mut self) -> Result<String, String> {
        debug_assert_eq!(self.peek(), Some('<'));
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated IRI"),
                Some('>') => break,
                Some('\\') => out.push(self.uchar()?),
                Some(c @ ('\u{0}'..='\u{20}' | '<' | '"' | '{' | '}' | '|' | '^' | '`')) => {
                    return self.err(format!("character {c:?} not allowed in IRI"))
                }
                Some(c) => out.push(c),
            }
        }
        if !has_scheme(&out) {
            return self.err(format!("IRI <{out}> is not absolute"));
        }
        Ok(out)
    }

    fn blank(&mut self) -> Result<String, String> {
        if !self.src[self.pos..].starts_with("_:") {
            return self.err("expected blank node label '_:'");
        }
        self.pos += 2;
        let start = self.pos;
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                self.pos += c.len_utf8();
            }
            _ => return self.err("malformed blank node label"),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || c == '.' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        // a label may not end with '.'; give trailing dots back to the statement
        while self.src[start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn literal(&mut self) -> Result<Literal, String> {
        debug_assert_eq!(self.peek(), Some('"'));
        self.pos += 1;
        let mut lexical = String::new();
        loop {
            match self.bump() {
                None => return self.err("unterminated literal"),
                Some('"') => break,
                Some('\\') => match self.peek() {
                    Some('u') | Some('U') => lexical.push(self.uchar()?),
                    Some(c) => {
                        self.pos += 1;
                        lexical.push(match c {
                            't' => '\t',
                            'b' => '\u{8}',
                            'n' => '\n',
                            'r' => '\r',
                            'f' => '\u{c}',
                            '"' => '"',
                            '\'' => '\'',
                            '\\' => '\\',
                            _ => return self.err(format!("invalid escape \\{c}")),
                        });
                    }
                    None => return self.err("unterminated escape"),
                },
                Some(c @ ('\n' | '\r')) => {
                    return self.err(format!("raw {c:?} not allowed in literal"))
                }
                Some(c) => lexical.push(c),
            }
        }
        let mut lang = None;
        let mut datatype = None;
        if self.eat('@') {
            let start = self.pos;
            let mut seen_alpha = false;
            while let Some(c) = self.peek() {
                if c.is_ascii_alphabetic() {
                    seen_alpha = true;
                    self.pos += 1;
                } else {
                    break;
                }
            }
            if !seen_alpha {
                return self.err("empty language tag");
            }
            while self.peek() == Some('-') {
                self.pos += 1;
                let seg = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.pos += 1;
                }
                if self.pos == seg {
                    return self.err("empty language subtag");
                }
            }
            lang = Some(self.src[start..self.pos].to_string());
        } else if self.src[self.pos..].starts_with("^^") {
            self.pos += 2;
            if self.peek() != Some('<') {
                return self.err("expected datatype IRI after ^^");
            }
            datatype = Some(self.iri()?);
        }
        Ok(Literal {
            lexical,
            lang,
            datatype,
        })
    }
}

/// How malformed lines are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Report the line as a diagnostic and continue.
    #[default]
    Lenient,
    /// Abort on the first malformed line.
    Strict,
}

/// Streaming reader yielding one triple per statement line.
///
/// In lenient mode malformed lines are collected as diagnostics and skipped;
/// in strict mode the first one is returned as an error and iteration stops.
pub struct TripleReader<R> {
    inner: R,
    mode: ParseMode,
    source: String,
    line_no: u64,
    buf: Vec<u8>,
    diagnostics: Vec<Diagnostic>,
    done: bool,
}

impl<R: BufRead> TripleReader<R> {
    pub fn new(inner: R, mode: ParseMode) -> Self {
        Self::with_source(inner, mode, "<stream>")
    }

    /// `source` names the input in diagnostics (usually the file path).
    pub fn with_source(inner: R, mode: ParseMode, source: impl Into<String>) -> Self {
        TripleReader {
            inner,
            mode,
            source: source.into(),
            line_no: 0,
            buf: Vec::new(),
            diagnostics: Vec::new(),
            done: false,
        }
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub fn into_diagnostics(self) -> Vec<Diagnostic> {
        self.diagnostics
    }

    pub fn lines_read(&self) -> u64 {
        self.line_no
    }
}

impl<R: BufRead> Iterator for TripleReader<R> {
    type Item = Result<Triple, IngestError>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            match self.inner.read_until(b'\n', &mut self.buf) {
                Ok(0) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => {}
                Err(e) => {
                    self.done = true;
                    return Some(Err(e.into()));
                }
            }
            self.line_no += 1;
            let mut bytes = self.buf.as_slice();
            if let [rest @ .., b'\n'] = bytes {
                bytes = rest;
            }
            if let [rest @ .., b'\r'] = bytes {
                bytes = rest;
            }
            let parsed = match std::str::from_utf8(bytes) {
                Ok(line) => Triple::parse_line(line),
                Err(e) => Err(format!("invalid UTF-8: {e}")),
            };
            match parsed {
                Ok(Some(t)) => return Some(Ok(t)),
                Ok(None) => continue,
                Err(message) => match self.mode {
                    ParseMode::Strict => {
                        self.done = true;
                        return Some(Err(IngestError::Malformed {
                            line: self.line_no,
                            message,
                        }));
                    }
                    ParseMode::Lenient => {
                        log::warn!("{}:{}: {}", self.source, self.line_no, message);
                        self.diagnostics.push(Diagnostic::new(
                            format!("{}:{}", self.source, self.line_no),
                            message,
                        ));
                    }
                },
            }
        }
        None
    }
}

/// Result of parsing a whole stream.
#[derive(Debug, Default)]
pub struct Parsed {
    pub triples: Vec<Triple>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a whole stream into memory.
pub fn parse_ntriples<R: BufRead>(stream: R, mode: ParseMode) -> Result<Parsed, IngestError> {
    let mut reader = TripleReader::new(stream, mode);
    let triples = reader.by_ref().collect::<Result<Vec<_>, _>>()?;
    Ok(Parsed {
        triples,
        diagnostics: reader.into_diagnostics(),
    })
}
