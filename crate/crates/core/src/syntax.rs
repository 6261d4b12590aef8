//! Line-based concrete syntax for axioms, templates and domain signatures.
//!
//! ```text
//! # comment
//! Airport(LAX)
//! locatedIn(LAX, CA)
//! hasStockPrice(DL, "1.0"^^Float)
//! SUB Airport Place
//! CHAIN hasCarrier hasCarHub -> hasDepHub
//! DEF ListCarrier := Carrier AND SOME hasStockPrice Float
//! ```
//!
//! Template files use the same statements with `?role` in individual
//! positions. Signature files hold one `domain <id> <role>=<individual> ...`
//! line per domain.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::axiom::{Datatype, Literal, Name, Object, Statement, Term};
use crate::ontology::{DomainOntology, DomainSignature, SignatureError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    UnbalancedParenthesis,
    UnknownDatatype,
    BadIdentifier,
    WrongArity,
    UnexpectedPlaceholder,
    MalformedLiteral,
    MalformedStatement,
    UnterminatedTriple,
    MalformedIri,
    UnsupportedBlankNode,
    DuplicateDomain,
    InvalidSignature,
}

impl SyntaxErrorKind {
    pub fn message(&self) -> &'static str {
        match self {
            SyntaxErrorKind::UnbalancedParenthesis => "unbalanced parenthesis",
            SyntaxErrorKind::UnknownDatatype => "unknown datatype tag",
            SyntaxErrorKind::BadIdentifier => "invalid identifier",
            SyntaxErrorKind::WrongArity => "expected one or two arguments",
            SyntaxErrorKind::UnexpectedPlaceholder => "role placeholder outside a template",
            SyntaxErrorKind::MalformedLiteral => "malformed literal",
            SyntaxErrorKind::MalformedStatement => "malformed statement",
            SyntaxErrorKind::UnterminatedTriple => "unterminated triple",
            SyntaxErrorKind::MalformedIri => "malformed IRI",
            SyntaxErrorKind::UnsupportedBlankNode => "blank nodes are not supported",
            SyntaxErrorKind::DuplicateDomain => "domain declared twice",
            SyntaxErrorKind::InvalidSignature => "invalid signature",
        }
    }
}

/// A syntax error with its 1-based line number and the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {} near `{token}`", kind.message())]
pub struct SyntaxError {
    pub line: usize,
    pub token: String,
    pub kind: SyntaxErrorKind,
}

impl SyntaxError {
    pub(crate) fn new(line: usize, token: impl Into<String>, kind: SyntaxErrorKind) -> Self {
        SyntaxError {
            line,
            token: token.into(),
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: usize,
    pub message: String,
}

/// Result of parsing an axiom or template document. Each box keeps first
/// occurrences in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed<I> {
    pub tbox: Vec<Statement<I>>,
    pub abox: Vec<Statement<I>>,
    pub warnings: Vec<Warning>,
}

/// What may stand in an individual position.
pub trait IndividualSyntax: Sized + Ord + Clone {
    fn parse_individual(token: &str) -> Result<Self, SyntaxErrorKind>;
}

impl IndividualSyntax for Name {
    fn parse_individual(token: &str) -> Result<Self, SyntaxErrorKind> {
        if token.starts_with('?') {
            return Err(SyntaxErrorKind::UnexpectedPlaceholder);
        }
        Name::new(token).map_err(|_| SyntaxErrorKind::BadIdentifier)
    }
}

impl IndividualSyntax for Term {
    fn parse_individual(token: &str) -> Result<Self, SyntaxErrorKind> {
        match token.strip_prefix('?') {
            Some(role) => Name::new(role)
                .map(Term::Role)
                .map_err(|_| SyntaxErrorKind::BadIdentifier),
            None => Name::new(token)
                .map(Term::Ind)
                .map_err(|_| SyntaxErrorKind::BadIdentifier),
        }
    }
}

pub fn parse_axiom_file(text: &str) -> Result<Parsed<Name>, SyntaxError> {
    parse_document(text)
}

pub fn parse_template_file(text: &str) -> Result<Parsed<Term>, SyntaxError> {
    parse_document(text)
}

/// Parses a single statement, e.g. a query pattern given on the command line.
pub fn parse_statement<I: IndividualSyntax>(line: &str) -> Result<Statement<I>, SyntaxError> {
    parse_line(line.trim(), 1)
}

fn parse_document<I: IndividualSyntax>(text: &str) -> Result<Parsed<I>, SyntaxError> {
    let mut out = Parsed {
        tbox: Vec::new(),
        abox: Vec::new(),
        warnings: Vec::new(),
    };
    let mut seen: BTreeSet<Statement<I>> = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let stmt = parse_line::<I>(line, idx + 1)?;
        if !seen.insert(stmt.clone()) {
            out.warnings.push(Warning {
                line: idx + 1,
                message: format!("duplicate statement `{line}` ignored"),
            });
            continue;
        }
        if stmt.is_tbox() {
            out.tbox.push(stmt);
        } else {
            out.abox.push(stmt);
        }
    }
    Ok(out)
}

fn ident(token: &str, line: usize) -> Result<Name, SyntaxError> {
    Name::new(token).map_err(|_| SyntaxError::new(line, token, SyntaxErrorKind::BadIdentifier))
}

fn parse_line<I: IndividualSyntax>(line: &str, lineno: usize) -> Result<Statement<I>, SyntaxError> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let malformed = || SyntaxError::new(lineno, line, SyntaxErrorKind::MalformedStatement);
    match words.first().copied() {
        Some("SUB") => {
            if words.len() != 3 {
                return Err(malformed());
            }
            Ok(Statement::SubClassOf {
                sub: ident(words[1], lineno)?,
                sup: ident(words[2], lineno)?,
            })
        }
        Some("CHAIN") => {
            if words.len() != 5 || words[3] != "->" {
                return Err(malformed());
            }
            Ok(Statement::PropertyChain {
                first: ident(words[1], lineno)?,
                second: ident(words[2], lineno)?,
                result: ident(words[4], lineno)?,
            })
        }
        Some("DEF") => {
            if words.len() != 8 || words[2] != ":=" || words[4] != "AND" || words[5] != "SOME" {
                return Err(malformed());
            }
            Ok(Statement::ConceptDefinition {
                defined: ident(words[1], lineno)?,
                base: ident(words[3], lineno)?,
                property: ident(words[6], lineno)?,
                filler: ident(words[7], lineno)?,
            })
        }
        _ => parse_assertion(line, lineno),
    }
}

fn parse_assertion<I: IndividualSyntax>(
    line: &str,
    lineno: usize,
) -> Result<Statement<I>, SyntaxError> {
    let unbalanced = || SyntaxError::new(lineno, line, SyntaxErrorKind::UnbalancedParenthesis);
    let open = match line.find('(') {
        Some(i) => i,
        None if line.contains(')') => return Err(unbalanced()),
        None => {
            return Err(SyntaxError::new(
                lineno,
                line,
                SyntaxErrorKind::MalformedStatement,
            ))
        }
    };
    let head = &line[..open];
    let predicate = ident(head.trim_end(), lineno)?;
    if head.trim_end() != head {
        return Err(SyntaxError::new(
            lineno,
            head,
            SyntaxErrorKind::BadIdentifier,
        ));
    }
    let rest = &line[open + 1..];
    let args = split_args(rest, lineno).ok_or_else(unbalanced)?;

    let individual =
        |tok: &str| I::parse_individual(tok).map_err(|kind| SyntaxError::new(lineno, tok, kind));
    match args.as_slice() {
        [a] => Ok(Statement::ClassAssertion {
            concept: predicate,
            individual: individual(a.trim())?,
        }),
        [s, o] => {
            let o = o.trim();
            let object = if o.starts_with('"') {
                Object::Literal(parse_literal(o, lineno)?)
            } else {
                Object::Node(individual(o)?)
            };
            Ok(Statement::PropertyAssertion {
                property: predicate,
                subject: individual(s.trim())?,
                object,
            })
        }
        _ => Err(SyntaxError::new(lineno, line, SyntaxErrorKind::WrongArity)),
    }
}

/// Splits the text after the opening parenthesis into comma-separated
/// arguments. `None` when the closing parenthesis is missing, doubled, or
/// followed by anything.
fn split_args(rest: &str, _lineno: usize) -> Option<Vec<String>> {
    let mut args = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    let mut escaped = false;
    for (i, c) in rest.char_indices() {
        if in_quotes {
            cur.push(c);
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == '"' {
                in_quotes = false;
            }
            continue;
        }
        match c {
            '"' => {
                in_quotes = true;
                cur.push(c);
            }
            ',' => args.push(core::mem::take(&mut cur)),
            '(' => return None,
            ')' => {
                if !rest[i + 1..].trim().is_empty() {
                    return None;
                }
                args.push(cur);
                return Some(args);
            }
            c => cur.push(c),
        }
    }
    None
}

fn parse_literal(token: &str, lineno: usize) -> Result<Literal, SyntaxError> {
    let bad = || SyntaxError::new(lineno, token, SyntaxErrorKind::MalformedLiteral);
    let mut lexical = String::new();
    let mut chars = token.char_indices().skip(1);
    let mut end = None;
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some((_, '"')) => lexical.push('"'),
                Some((_, '\\')) => lexical.push('\\'),
                Some((_, 'n')) => lexical.push('\n'),
                Some((_, 'r')) => lexical.push('\r'),
                Some((_, 't')) => lexical.push('\t'),
                _ => return Err(bad()),
            },
            '"' => {
                end = Some(i);
                break;
            }
            c => lexical.push(c),
        }
    }
    let end = end.ok_or_else(bad)?;
    let suffix = &token[end + 1..];
    if suffix.is_empty() {
        return Ok(Literal::new(lexical, Datatype::String));
    }
    let tag = suffix.strip_prefix("^^").ok_or_else(bad)?;
    let datatype = Datatype::from_tag(tag)
        .ok_or_else(|| SyntaxError::new(lineno, tag, SyntaxErrorKind::UnknownDatatype))?;
    Ok(Literal::new(lexical, datatype))
}

/// Renders every axiom on its own line, sorted lexicographically. The empty
/// ontology renders as the empty string.
pub fn serialize_ontology(o: &DomainOntology) -> String {
    let mut lines: Vec<String> = o.axioms().map(|a| a.to_string()).collect();
    lines.sort();
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

/// Parses an axiom document into an ontology with the given id.
pub fn parse_ontology(id: Name, text: &str) -> Result<(DomainOntology, Vec<Warning>), SyntaxError> {
    let parsed = parse_axiom_file(text)?;
    let o = DomainOntology::from_axioms(id, parsed.tbox.into_iter().chain(parsed.abox));
    Ok((o, parsed.warnings))
}

pub fn parse_signatures(text: &str) -> Result<Vec<DomainSignature>, SyntaxError> {
    let mut out: Vec<DomainSignature> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        if words.next() != Some("domain") {
            return Err(SyntaxError::new(
                lineno,
                line,
                SyntaxErrorKind::MalformedStatement,
            ));
        }
        let id_tok = words
            .next()
            .ok_or_else(|| SyntaxError::new(lineno, line, SyntaxErrorKind::MalformedStatement))?;
        let id = ident(id_tok, lineno)?;
        let mut bindings = Vec::new();
        for w in words {
            let (role, ind) = w
                .split_once('=')
                .ok_or_else(|| SyntaxError::new(lineno, w, SyntaxErrorKind::MalformedStatement))?;
            bindings.push((ident(role, lineno)?, ident(ind, lineno)?));
        }
        if out.iter().any(|s| *s.domain() == id) {
            return Err(SyntaxError::new(
                lineno,
                id_tok,
                SyntaxErrorKind::DuplicateDomain,
            ));
        }
        let sig = DomainSignature::new(id, bindings).map_err(|e| {
            let token = match &e {
                SignatureError::DuplicateRole { role, .. } => role.to_string(),
                SignatureError::UnknownIndividual { individual, .. } => individual.to_string(),
            };
            SyntaxError::new(lineno, token, SyntaxErrorKind::InvalidSignature)
        })?;
        out.push(sig);
    }
    Ok(out)
}

pub fn serialize_signatures(sigs: &[DomainSignature]) -> String {
    let mut out = String::new();
    for s in sigs {
        out.push_str("domain ");
        out.push_str(s.domain().as_str());
        for (r, i) in s.bindings() {
            out.push(' ');
            out.push_str(r.as_str());
            out.push('=');
            out.push_str(i.as_str());
        }
        out.push('\n');
    }
    out
}
