//! Alignment of domain individuals with entities of an external triple dump
//! and import of the knowledge around them.
//!
//! Import rules, for triples reached within `hops` outgoing steps of a
//! matched entity:
//!
//! * `s rdf:type C` gives `C(s)`, and the subclass chain above every
//!   imported class is followed, each `C rdfs:subClassOf D` giving `SUB C D`;
//! * any other predicate gives a property assertion named by the predicate's
//!   local name; numeric XSD literals become `Float`, other literals `String`.
//!
//! IRIs become identifiers through their local name (`_` kept, other
//! invalid characters replaced), with `_2`, `_3`, ... appended on collision.
//! A matched entity takes the name of the individual it was matched with.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::axiom::{Axiom, Datatype, Literal, Name, Object, Statement};
use crate::ontology::{DomainOntology, DomainSignature};
use crate::rdf::{local_name, RdfTerm, TripleSet, RDFS_SUBCLASS_OF, RDF_TYPE, XSD};

const UNICODE_PUNCTUATION: &[char] = &[
    '\u{2018}', '\u{2019}', '\u{201C}', '\u{201D}', '\u{2013}', '\u{2014}', '\u{2026}', '\u{00AB}',
    '\u{00BB}', '\u{00A1}', '\u{00BF}', '\u{00B7}', '\u{2022}', '\u{2010}', '\u{2011}',
];

/// Lowercase, punctuation removed, whitespace runs collapsed to one space,
/// trimmed.
pub fn normalize_label(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    let mut pending_space = false;
    for c in label.chars().flat_map(char::to_lowercase) {
        if c.is_ascii_punctuation() || UNICODE_PUNCTUATION.contains(&c) {
            continue;
        }
        if c.is_whitespace() {
            pending_space = !out.is_empty();
            continue;
        }
        if pending_space {
            out.push(' ');
            pending_space = false;
        }
        out.push(c);
    }
    out
}

/// Label text for an identifier or IRI local name: underscores separate
/// words.
fn name_label(s: &str) -> String {
    normalize_label(&s.replace('_', " "))
}

/// Normalized label → sorted, duplicate-free entity IRIs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexicalIndex {
    entries: BTreeMap<String, Vec<String>>,
}

impl LexicalIndex {
    fn add(&mut self, label: String, iri: &str) {
        if label.is_empty() {
            return;
        }
        let list = self.entries.entry(label).or_default();
        if let Err(pos) = list.binary_search_by(|e| e.as_str().cmp(iri)) {
            list.insert(pos, iri.to_string());
        }
    }

    pub fn get(&self, normalized: &str) -> &[String] {
        self.entries.get(normalized).map_or(&[], Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Indexes the literal objects of the label predicates and the local name of
/// every subject.
pub fn build_lexical_index(kg: &TripleSet, label_predicates: &[&str]) -> LexicalIndex {
    let mut idx = LexicalIndex::default();
    for t in kg.iter() {
        idx.add(name_label(local_name(&t.subject)), &t.subject);
        if label_predicates.contains(&t.predicate.as_str()) {
            if let RdfTerm::Literal { lexical, .. } = &t.object {
                idx.add(normalize_label(lexical), &t.subject);
            }
        }
    }
    idx
}

pub fn match_label(idx: &LexicalIndex, label: &str) -> Vec<String> {
    idx.get(&normalize_label(label)).to_vec()
}

/// Ranked candidate entities for a label.
pub trait EntityLookup {
    fn lookup(&self, label: &str) -> Vec<String>;
}

impl EntityLookup for LexicalIndex {
    fn lookup(&self, label: &str) -> Vec<String> {
        self.get(&name_label(label)).to_vec()
    }
}

/// Parses the body of a lookup service reply: one IRI per line, best first.
/// Blank lines, `#` lines and anything that is not an absolute IRI are
/// skipped; repeats keep their first rank.
pub fn parse_lookup_response(body: &str) -> Vec<String> {
    let mut seen = BTreeSet::new();
    body.lines()
        .map(|l| l.trim().trim_start_matches('<').trim_end_matches('>'))
        .filter(|l| !l.is_empty() && !l.starts_with('#') && crate::rdf::is_absolute_iri(l))
        .filter(|l| seen.insert(l.to_string()))
        .map(String::from)
        .collect()
}

/// Signature individuals and everything within `radius` property-assertion
/// hops of them, edges taken in both directions.
pub fn select_root_individuals(
    o: &DomainOntology,
    sig: &DomainSignature,
    radius: usize,
) -> BTreeSet<Name> {
    let mut adj: BTreeMap<&Name, BTreeSet<&Name>> = BTreeMap::new();
    for a in o.abox() {
        if let Statement::PropertyAssertion {
            subject,
            object: Object::Node(obj),
            ..
        } = a
        {
            adj.entry(subject).or_default().insert(obj);
            adj.entry(obj).or_default().insert(subject);
        }
    }
    let mut seen: BTreeSet<Name> = sig.individuals().cloned().collect();
    let mut queue: VecDeque<(Name, usize)> = seen.iter().map(|n| (n.clone(), 0)).collect();
    while let Some((n, dist)) = queue.pop_front() {
        if dist == radius {
            continue;
        }
        for &m in adj.get(&n).into_iter().flatten() {
            if seen.insert(m.clone()) {
                queue.push_back((m.clone(), dist + 1));
            }
        }
    }
    seen
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Ambiguity {
    /// Leave roots with several candidates unaligned.
    #[default]
    Skip,
    /// Take the first candidate.
    First,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlignmentStatus {
    Matched,
    Ambiguous,
    Unmatched,
}

impl AlignmentStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AlignmentStatus::Matched => "matched",
            AlignmentStatus::Ambiguous => "ambiguous",
            AlignmentStatus::Unmatched => "unmatched",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pub root: Name,
    pub status: AlignmentStatus,
    /// The imported entity; set for matches and for ambiguous roots resolved
    /// with [`Ambiguity::First`].
    pub entity: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnrichOptions {
    pub hops: usize,
    pub ambiguity: Ambiguity,
}

impl Default for EnrichOptions {
    fn default() -> Self {
        EnrichOptions {
            hops: 1,
            ambiguity: Ambiguity::Skip,
        }
    }
}

/// IRI → identifier assignment, stable for a fixed dump and root alignment.
struct Namer {
    by_iri: BTreeMap<String, Name>,
    taken: BTreeSet<Name>,
}

impl Namer {
    fn name(&mut self, iri: &str) -> Name {
        if let Some(n) = self.by_iri.get(iri) {
            return n.clone();
        }
        let base = Name::sanitize(local_name(iri));
        let mut candidate = base.clone();
        let mut k = 2;
        while self.taken.contains(&candidate) {
            candidate = Name::sanitize(&format!("{base}_{k}"));
            k += 1;
        }
        self.taken.insert(candidate.clone());
        self.by_iri.insert(iri.to_string(), candidate.clone());
        candidate
    }
}

const NUMERIC_XSD: &[&str] = &[
    "float",
    "double",
    "decimal",
    "integer",
    "int",
    "long",
    "short",
    "byte",
    "nonNegativeInteger",
    "positiveInteger",
    "nonPositiveInteger",
    "negativeInteger",
    "unsignedInt",
    "unsignedLong",
    "unsignedShort",
    "unsignedByte",
];

fn literal(lexical: &str, datatype: Option<&str>) -> Literal {
    let numeric = datatype
        .and_then(|d| d.strip_prefix(XSD))
        .is_some_and(|local| NUMERIC_XSD.contains(&local));
    Literal::new(
        lexical,
        if numeric {
            Datatype::Float
        } else {
            Datatype::String
        },
    )
}

/// Aligns each root with the dump and imports the triples around unique
/// (or, with [`Ambiguity::First`], first) matches. Never removes axioms;
/// the report is sorted by root.
pub fn enrich(
    o: &DomainOntology,
    kg: &TripleSet,
    lookup: &dyn EntityLookup,
    roots: &BTreeSet<Name>,
    opts: &EnrichOptions,
) -> (DomainOntology, Vec<Alignment>) {
    let mut report = Vec::new();
    let mut aligned: Vec<(Name, String)> = Vec::new();
    for root in roots {
        let candidates = lookup.lookup(root.as_str());
        let (status, entity) = match candidates.as_slice() {
            [] => (AlignmentStatus::Unmatched, None),
            [one] => (AlignmentStatus::Matched, Some(one.clone())),
            [first, ..] => match opts.ambiguity {
                Ambiguity::Skip => (AlignmentStatus::Ambiguous, None),
                Ambiguity::First => (AlignmentStatus::Ambiguous, Some(first.clone())),
            },
        };
        if let Some(e) = &entity {
            aligned.push((root.clone(), e.clone()));
        }
        report.push(Alignment {
            root: root.clone(),
            status,
            entity,
        });
    }

    let mut namer = Namer {
        by_iri: BTreeMap::new(),
        taken: roots.clone(),
    };
    // two roots matched to one entity share the first root's name
    for (root, iri) in &aligned {
        namer
            .by_iri
            .entry(iri.clone())
            .or_insert_with(|| root.clone());
    }

    let mut out = o.clone();
    let mut imported: Vec<Axiom> = Vec::new();
    let mut classes: BTreeSet<String> = BTreeSet::new();
    for (_, entity) in &aligned {
        let mut frontier: BTreeSet<String> = BTreeSet::from([entity.clone()]);
        let mut visited: BTreeSet<String> = frontier.clone();
        for _ in 0..opts.hops {
            let mut next = BTreeSet::new();
            for s in &frontier {
                for t in kg.with_subject(s) {
                    match (&t.object, t.predicate.as_str()) {
                        (RdfTerm::Iri(c), RDF_TYPE) => {
                            imported.push(Statement::ClassAssertion {
                                concept: namer.name(c),
                                individual: namer.name(s),
                            });
                            classes.insert(c.clone());
                        }
                        (RdfTerm::Iri(_), RDFS_SUBCLASS_OF) => {
                            classes.insert(s.clone());
                        }
                        (RdfTerm::Iri(obj), p) => {
                            imported.push(Statement::PropertyAssertion {
                                property: Name::sanitize(local_name(p)),
                                subject: namer.name(s),
                                object: Object::Node(namer.name(obj)),
                            });
                            if visited.insert(obj.clone()) {
                                next.insert(obj.clone());
                            }
                        }
                        (
                            RdfTerm::Literal {
                                lexical, datatype, ..
                            },
                            p,
                        ) => imported.push(Statement::PropertyAssertion {
                            property: Name::sanitize(local_name(p)),
                            subject: namer.name(s),
                            object: Object::Literal(literal(lexical, datatype.as_deref())),
                        }),
                    }
                }
            }
            frontier = next;
        }
    }
    // subclass chains above imported classes
    let mut pending: Vec<String> = classes.iter().cloned().collect();
    while let Some(c) = pending.pop() {
        for t in kg.with_subject(&c) {
            if t.predicate != RDFS_SUBCLASS_OF {
                continue;
            }
            if let RdfTerm::Iri(sup) = &t.object {
                imported.push(Statement::SubClassOf {
                    sub: namer.name(&c),
                    sup: namer.name(sup),
                });
                if classes.insert(sup.clone()) {
                    pending.push(sup.clone());
                }
            }
        }
    }
    out.extend(imported);
    (out, report)
}
