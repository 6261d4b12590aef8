//! External knowledge-graph triples and an N-Triples subset reader/writer.
//!
//! Supported: absolute IRIs (`<scheme://...>`), plain, language-tagged and
//! datatyped literals, `#` comment lines. Blank nodes are rejected.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::syntax::{SyntaxError, SyntaxErrorKind};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RdfTerm {
    Iri(String),
    Literal {
        lexical: String,
        datatype: Option<String>,
        language: Option<String>,
    },
}

impl RdfTerm {
    pub fn iri(&self) -> Option<&str> {
        match self {
            RdfTerm::Iri(i) => Some(i),
            RdfTerm::Literal { .. } => None,
        }
    }

    pub fn plain_literal(lexical: impl Into<String>) -> Self {
        RdfTerm::Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: RdfTerm,
}

impl Triple {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: RdfTerm) -> Self {
        Triple {
            subject: subject.into(),
            predicate: predicate.into(),
            object,
        }
    }
}

pub fn is_absolute_iri(s: &str) -> bool {
    match s.find("://") {
        Some(i) => {
            i > 0
                && !s.chars().any(|c| {
                    c.is_whitespace()
                        || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\')
                })
        }
        None => false,
    }
}

/// The part of an IRI after its last `#` or `/`.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/']) {
        Some(i) => &iri[i + 1..],
        None => iri,
    }
}

/// Duplicate-free triple collection with subject, predicate and object indexes.
#[derive(Debug, Clone, Default)]
pub struct TripleSet {
    triples: Vec<Triple>,
    positions: BTreeMap<Triple, usize>,
    by_subject: BTreeMap<String, Vec<usize>>,
    by_predicate: BTreeMap<String, Vec<usize>>,
    by_object: BTreeMap<RdfTerm, Vec<usize>>,
}

impl PartialEq for TripleSet {
    fn eq(&self, other: &Self) -> bool {
        self.positions.len() == other.positions.len()
            && self
                .positions
                .keys()
                .all(|t| other.positions.contains_key(t))
    }
}

impl Eq for TripleSet {}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        if self.positions.contains_key(&t) {
            return false;
        }
        let idx = self.triples.len();
        self.by_subject
            .entry(t.subject.clone())
            .or_default()
            .push(idx);
        self.by_predicate
            .entry(t.predicate.clone())
            .or_default()
            .push(idx);
        self.by_object
            .entry(t.object.clone())
            .or_default()
            .push(idx);
        self.positions.insert(t.clone(), idx);
        self.triples.push(t);
        true
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.positions.contains_key(t)
    }

    /// Triples in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    fn lookup<'a>(&'a self, idx: Option<&'a Vec<usize>>) -> impl Iterator<Item = &'a Triple> + 'a {
        idx.into_iter().flatten().map(move |&i| &self.triples[i])
    }

    pub fn with_subject<'a>(&'a self, s: &str) -> impl Iterator<Item = &'a Triple> + 'a {
        self.lookup(self.by_subject.get(s))
    }

    pub fn with_predicate<'a>(&'a self, p: &str) -> impl Iterator<Item = &'a Triple> + 'a {
        self.lookup(self.by_predicate.get(p))
    }

    pub fn with_object<'a>(&'a self, o: &RdfTerm) -> impl Iterator<Item = &'a Triple> + 'a {
        self.lookup(self.by_object.get(o))
    }

    /// Every IRI used as subject, predicate or object.
    pub fn iris(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            out.insert(t.subject.as_str());
            out.insert(t.predicate.as_str());
            if let RdfTerm::Iri(o) = &t.object {
                out.insert(o.as_str());
            }
        }
        out
    }

    pub fn mentions(&self, iri: &str) -> bool {
        self.by_subject.contains_key(iri)
            || self.by_predicate.contains_key(iri)
            || self.by_object.contains_key(&RdfTerm::Iri(iri.into()))
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> Self {
        let mut s = TripleSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

struct Cursor<'a> {
    line: &'a str,
    pos: usize,
    lineno: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.line[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn err(&self, kind: SyntaxErrorKind) -> SyntaxError {
        let tok = self.rest().split_whitespace().next().unwrap_or(self.line);
        SyntaxError::new(self.lineno, tok, kind)
    }

    fn iri(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with("_:") {
            return Err(self.err(SyntaxErrorKind::UnsupportedBlankNode));
        }
        if !rest.starts_with('<') {
            return Err(self.err(SyntaxErrorKind::MalformedIri));
        }
        let end = rest
            .find('>')
            .ok_or_else(|| self.err(SyntaxErrorKind::MalformedIri))?;
        let iri = &rest[1..end];
        if !is_absolute_iri(iri) {
            return Err(SyntaxError::new(
                self.lineno,
                iri,
                SyntaxErrorKind::MalformedIri,
            ));
        }
        self.pos += end + 1;
        Ok(iri.into())
    }

    fn object(&mut self) -> Result<RdfTerm, SyntaxError> {
        self.skip_ws();
        if !self.rest().starts_with('"') {
            return self.iri().map(RdfTerm::Iri);
        }
        let mut lexical = String::new();
        let mut chars = self.rest().char_indices().skip(1);
        let mut close = None;
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    close = Some(i);
                    break;
                }
                '\\' => {
                    let (_, e) = chars
                        .next()
                        .ok_or_else(|| self.err(SyntaxErrorKind::MalformedLiteral))?;
                    match e {
                        't' => lexical.push('\t'),
                        'b' => lexical.push('\u{8}'),
                        'n' => lexical.push('\n'),
                        'r' => lexical.push('\r'),
                        'f' => lexical.push('\u{c}'),
                        '"' => lexical.push('"'),
                        '\'' => lexical.push('\''),
                        '\\' => lexical.push('\\'),
                        'u' | 'U' => {
                            let width = if e == 'u' { 4 } else { 8 };
                            let mut code = 0u32;
                            for _ in 0..width {
                                let (_, h) = chars
                                    .next()
                                    .ok_or_else(|| self.err(SyntaxErrorKind::MalformedLiteral))?;
                                let d = h
                                    .to_digit(16)
                                    .ok_or_else(|| self.err(SyntaxErrorKind::MalformedLiteral))?;
                                code = code * 16 + d;
                            }
                            lexical.push(
                                char::from_u32(code)
                                    .ok_or_else(|| self.err(SyntaxErrorKind::MalformedLiteral))?,
                            );
                        }
                        _ => return Err(self.err(SyntaxErrorKind::MalformedLiteral)),
                    }
                }
                c => lexical.push(c),
            }
        }
        let close = close.ok_or_else(|| self.err(SyntaxErrorKind::MalformedLiteral))?;
        self.pos += close + 1;
        let mut datatype = None;
        let mut language = None;
        if self.rest().starts_with("^^") {
            self.pos += 2;
            datatype = Some(self.iri()?);
        } else if let Some(tag) = self.rest().strip_prefix('@') {
            let len = tag
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(tag.len());
            if len == 0 {
                return Err(self.err(SyntaxErrorKind::MalformedLiteral));
            }
            language = Some(tag[..len].into());
            self.pos += 1 + len;
        }
        Ok(RdfTerm::Literal {
            lexical,
            datatype,
            language,
        })
    }
}

pub fn parse_ntriples(text: &str) -> Result<TripleSet, SyntaxError> {
    let mut set = TripleSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cur = Cursor {
            line,
            pos: 0,
            lineno: idx + 1,
        };
        let subject = cur.iri()?;
        let predicate = cur.iri()?;
        let object = cur.object()?;
        cur.skip_ws();
        let tail = cur.rest();
        match tail.strip_prefix('.') {
            Some(after) if after.trim().is_empty() || after.trim_start().starts_with('#') => {}
            _ => {
                return Err(SyntaxError::new(
                    idx + 1,
                    if tail.is_empty() { line } else { tail },
                    SyntaxErrorKind::UnterminatedTriple,
                ))
            }
        }
        set.insert(Triple {
            subject,
            predicate,
            object,
        });
    }
    Ok(set)
}

fn write_escaped(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
}

impl fmt::Display for RdfTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdfTerm::Iri(i) => write!(f, "<{i}>"),
            RdfTerm::Literal {
                lexical,
                datatype,
                language,
            } => {
                let mut s = String::new();
                write_escaped(&mut s, lexical);
                write!(f, "\"{s}\"")?;
                if let Some(d) = datatype {
                    write!(f, "^^<{d}>")?;
                } else if let Some(l) = language {
                    write!(f, "@{l}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}> <{}> {} .",
            self.subject, self.predicate, self.object
        )
    }
}

/// Writes the set in insertion order, one triple per line.
pub fn to_ntriples(set: &TripleSet) -> String {
    let mut out = String::new();
    for t in set.iter() {
        let _ = writeln!(out, "{t}");
    }
    out
}
