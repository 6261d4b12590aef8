//! Axioms, axiom templates and the identifiers they are built from.
//!
//! Ground axioms and templates share one shape, [`Statement`], parameterised
//! over what may occupy an individual position: a [`Name`] for ground axioms
//! and a [`Term`] (name or `?role` placeholder) for templates.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier `{0}`")]
pub struct NameError(pub String);

/// A plain identifier. Non-empty, no whitespace, none of `( ) , "`, and no
/// leading `?` (reserved for role placeholders).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(String);

impl Name {
    pub fn new(s: impl Into<String>) -> Result<Self, NameError> {
        let s = s.into();
        if Self::is_valid(&s) {
            Ok(Name(s))
        } else {
            Err(NameError(s))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        !s.is_empty()
            && !s.starts_with('?')
            && !s
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '"'))
    }

    /// Replaces every character that may not appear in an identifier by `_`.
    /// Empty input becomes `_`.
    pub fn sanitize(s: &str) -> Self {
        let mut out: String = s
            .chars()
            .map(|c| {
                if c.is_whitespace() || matches!(c, '(' | ')' | ',' | '"') {
                    '_'
                } else {
                    c
                }
            })
            .collect();
        if out.starts_with('?') {
            out.replace_range(0..1, "_");
        }
        if out.is_empty() {
            out.push('_');
        }
        Name(out)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<&str> for Name {
    type Error = NameError;

    fn try_from(s: &str) -> Result<Self, Self::Error> {
        Name::new(s)
    }
}

impl AsRef<str> for Name {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    Float,
    String,
}

impl Datatype {
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "Float" => Some(Datatype::Float),
            "String" => Some(Datatype::String),
            _ => None,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Datatype::Float => "Float",
            Datatype::String => "String",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub datatype: Datatype,
}

impl Literal {
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.lexical.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\r' => f.write_str("\\r")?,
                '\t' => f.write_str("\\t")?,
                c => fmt::Write::write_char(f, c)?,
            }
        }
        write!(f, "\"^^{}", self.datatype.tag())
    }
}

/// An individual position of a template: a constant or a `?role` placeholder.
/// Query patterns reuse placeholders as variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Ind(Name),
    Role(Name),
}

impl Term {
    pub fn role(&self) -> Option<&Name> {
        match self {
            Term::Role(r) => Some(r),
            Term::Ind(_) => None,
        }
    }
}

impl From<Name> for Term {
    fn from(n: Name) -> Self {
        Term::Ind(n)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Ind(n) => write!(f, "{n}"),
            Term::Role(r) => write!(f, "?{r}"),
        }
    }
}

/// Object of a property assertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Object<I> {
    Node(I),
    Literal(Literal),
}

impl<I> Object<I> {
    pub fn node(&self) -> Option<&I> {
        match self {
            Object::Node(i) => Some(i),
            Object::Literal(_) => None,
        }
    }
}

impl<I: fmt::Display> fmt::Display for Object<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Object::Node(i) => write!(f, "{i}"),
            Object::Literal(l) => write!(f, "{l}"),
        }
    }
}

/// One axiom shape. `I` is the type of individual positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement<I> {
    /// `Concept(individual)`
    ClassAssertion { concept: Name, individual: I },
    /// `property(subject, object)`
    PropertyAssertion {
        property: Name,
        subject: I,
        object: Object<I>,
    },
    /// `SUB sub sup`
    SubClassOf { sub: Name, sup: Name },
    /// `CHAIN first second -> result`, i.e. first ∘ second ⊑ result
    PropertyChain {
        first: Name,
        second: Name,
        result: Name,
    },
    /// `DEF defined := base AND SOME property filler`, i.e.
    /// base ⊓ ∃property.filler ⊑ defined
    ConceptDefinition {
        defined: Name,
        base: Name,
        property: Name,
        filler: Name,
    },
}

pub type Axiom = Statement<Name>;
pub type AxiomTemplate = Statement<Term>;

impl<I> Statement<I> {
    pub fn is_tbox(&self) -> bool {
        matches!(
            self,
            Statement::SubClassOf { .. }
                | Statement::PropertyChain { .. }
                | Statement::ConceptDefinition { .. }
        )
    }

    pub fn is_abox(&self) -> bool {
        !self.is_tbox()
    }

    /// Name of the concept or property an ABox statement is about.
    pub fn predicate(&self) -> Option<&Name> {
        match self {
            Statement::ClassAssertion { concept, .. } => Some(concept),
            Statement::PropertyAssertion { property, .. } => Some(property),
            _ => None,
        }
    }

    pub fn try_map<J, E>(&self, mut f: impl FnMut(&I) -> Result<J, E>) -> Result<Statement<J>, E> {
        Ok(match self {
            Statement::ClassAssertion {
                concept,
                individual,
            } => Statement::ClassAssertion {
                concept: concept.clone(),
                individual: f(individual)?,
            },
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            } => Statement::PropertyAssertion {
                property: property.clone(),
                subject: f(subject)?,
                object: match object {
                    Object::Node(o) => Object::Node(f(o)?),
                    Object::Literal(l) => Object::Literal(l.clone()),
                },
            },
            Statement::SubClassOf { sub, sup } => Statement::SubClassOf {
                sub: sub.clone(),
                sup: sup.clone(),
            },
            Statement::PropertyChain {
                first,
                second,
                result,
            } => Statement::PropertyChain {
                first: first.clone(),
                second: second.clone(),
                result: result.clone(),
            },
            Statement::ConceptDefinition {
                defined,
                base,
                property,
                filler,
            } => Statement::ConceptDefinition {
                defined: defined.clone(),
                base: base.clone(),
                property: property.clone(),
                filler: filler.clone(),
            },
        })
    }

    pub fn map<J>(&self, mut f: impl FnMut(&I) -> J) -> Statement<J> {
        match self.try_map(|i| Ok::<J, core::convert::Infallible>(f(i))) {
            Ok(s) => s,
            Err(never) => match never {},
        }
    }

    /// Individual positions in order (subject before object).
    pub fn individuals(&self) -> Vec<&I> {
        match self {
            Statement::ClassAssertion { individual, .. } => alloc::vec![individual],
            Statement::PropertyAssertion {
                subject, object, ..
            } => match object {
                Object::Node(o) => alloc::vec![subject, o],
                Object::Literal(_) => alloc::vec![subject],
            },
            _ => Vec::new(),
        }
    }
}

impl AxiomTemplate {
    /// Distinct role placeholders, in position order.
    pub fn roles(&self) -> Vec<&Name> {
        let mut out: Vec<&Name> = Vec::new();
        for t in self.individuals() {
            if let Some(r) = t.role() {
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }

    pub fn is_ground(&self) -> bool {
        self.individuals().iter().all(|t| t.role().is_none())
    }
}

impl From<&Axiom> for AxiomTemplate {
    fn from(a: &Axiom) -> Self {
        a.map(|n| Term::Ind(n.clone()))
    }
}

impl<I: fmt::Display> fmt::Display for Statement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::ClassAssertion {
                concept,
                individual,
            } => write!(f, "{concept}({individual})"),
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            } => write!(f, "{property}({subject}, {object})"),
            Statement::SubClassOf { sub, sup } => write!(f, "SUB {sub} {sup}"),
            Statement::PropertyChain {
                first,
                second,
                result,
            } => write!(f, "CHAIN {first} {second} -> {result}"),
            Statement::ConceptDefinition {
                defined,
                base,
                property,
                filler,
            } => write!(f, "DEF {defined} := {base} AND SOME {property} {filler}"),
        }
    }
}

/// Sort key shared by every place that orders templates: the serialized text.
pub fn sort_key<I: fmt::Display>(s: &Statement<I>) -> String {
    s.to_string()
}
