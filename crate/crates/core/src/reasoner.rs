//! Forward-chaining materialization and single-pattern queries.
//!
//! Three rules are applied to a fixed point with semi-naive evaluation:
//!
//! * subclass: `SUB A B`, `A(x)` ⊢ `B(x)`
//! * property chain: `CHAIN p q -> r`, `p(x, y)`, `q(y, z)` ⊢ `r(x, z)`
//! * concept definition: `DEF D := B AND SOME p F`, `B(x)`, `p(x, v)` ⊢ `D(x)`
//!   where `v` is a literal whose datatype tag is `F` or an individual with `F(v)`.
//!
//! Each round only the facts derived in the previous round are joined against
//! the full store, so a derivation is attempted once per new premise.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use thiserror::Error;

use crate::axiom::{Axiom, AxiomTemplate, Name, Object, Statement, Term};
use crate::ontology::DomainOntology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("ontology {0} is not materialized: materialize first")]
    NotMaterialized(Name),
    #[error("entailment checks take ABox axioms, got `{0}`")]
    TboxAxiom(alloc::string::String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MaterializeStats {
    pub rounds: usize,
    /// Facts added beyond the input ABox.
    pub derivations: usize,
}

struct Definition<'a> {
    defined: &'a Name,
    base: &'a Name,
    property: &'a Name,
    filler: &'a Name,
}

#[derive(Default)]
struct Rules<'a> {
    supers: BTreeMap<&'a Name, Vec<&'a Name>>,
    chain_by_first: BTreeMap<&'a Name, Vec<(&'a Name, &'a Name)>>,
    chain_by_second: BTreeMap<&'a Name, Vec<(&'a Name, &'a Name)>>,
    defs: Vec<Definition<'a>>,
    def_by_base: BTreeMap<&'a Name, Vec<usize>>,
    def_by_property: BTreeMap<&'a Name, Vec<usize>>,
    def_by_filler: BTreeMap<&'a Name, Vec<usize>>,
}

impl<'a> Rules<'a> {
    fn compile(tbox: &'a BTreeSet<Axiom>) -> Self {
        let mut r = Rules::default();
        for ax in tbox {
            match ax {
                Statement::SubClassOf { sub, sup } => r.supers.entry(sub).or_default().push(sup),
                Statement::PropertyChain {
                    first,
                    second,
                    result,
                } => {
                    r.chain_by_first
                        .entry(first)
                        .or_default()
                        .push((second, result));
                    r.chain_by_second
                        .entry(second)
                        .or_default()
                        .push((first, result));
                }
                Statement::ConceptDefinition {
                    defined,
                    base,
                    property,
                    filler,
                } => {
                    let i = r.defs.len();
                    r.defs.push(Definition {
                        defined,
                        base,
                        property,
                        filler,
                    });
                    r.def_by_base.entry(base).or_default().push(i);
                    r.def_by_property.entry(property).or_default().push(i);
                    r.def_by_filler.entry(filler).or_default().push(i);
                }
                _ => {}
            }
        }
        r
    }
}

#[derive(Default)]
struct FactStore {
    all: BTreeSet<Axiom>,
    concepts_of: BTreeMap<Name, BTreeSet<Name>>,
    /// (subject, property) → objects
    out: BTreeMap<(Name, Name), BTreeSet<Object<Name>>>,
    /// (object individual, property) → subjects
    incoming: BTreeMap<(Name, Name), BTreeSet<Name>>,
}

impl FactStore {
    fn insert(&mut self, fact: &Axiom) -> bool {
        if !self.all.insert(fact.clone()) {
            return false;
        }
        match fact {
            Statement::ClassAssertion {
                concept,
                individual,
            } => {
                self.concepts_of
                    .entry(individual.clone())
                    .or_default()
                    .insert(concept.clone());
            }
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            } => {
                self.out
                    .entry((subject.clone(), property.clone()))
                    .or_default()
                    .insert(object.clone());
                if let Object::Node(o) = object {
                    self.incoming
                        .entry((o.clone(), property.clone()))
                        .or_default()
                        .insert(subject.clone());
                }
            }
            _ => {}
        }
        true
    }

    fn has_concept(&self, ind: &Name, concept: &Name) -> bool {
        self.concepts_of
            .get(ind)
            .is_some_and(|cs| cs.contains(concept))
    }

    fn fills(&self, value: &Object<Name>, filler: &Name) -> bool {
        match value {
            Object::Literal(l) => l.datatype.tag() == filler.as_str(),
            Object::Node(v) => self.has_concept(v, filler),
        }
    }

    fn objects(&self, subject: &Name, property: &Name) -> impl Iterator<Item = &Object<Name>> {
        // BTreeMap::get needs an owned key; the clone is cheap at this scale.
        self.out
            .get(&(subject.clone(), property.clone()))
            .into_iter()
            .flatten()
    }

    fn subjects(&self, object: &Name, property: &Name) -> impl Iterator<Item = &Name> {
        self.incoming
            .get(&(object.clone(), property.clone()))
            .into_iter()
            .flatten()
    }
}

fn class(concept: &Name, individual: &Name) -> Axiom {
    Statement::ClassAssertion {
        concept: concept.clone(),
        individual: individual.clone(),
    }
}

fn derive(fact: &Axiom, rules: &Rules<'_>, store: &FactStore, out: &mut Vec<Axiom>) {
    match fact {
        Statement::ClassAssertion {
            concept,
            individual,
        } => {
            for sup in rules.supers.get(concept).into_iter().flatten() {
                out.push(class(sup, individual));
            }
            for &i in rules.def_by_base.get(concept).into_iter().flatten() {
                let d = &rules.defs[i];
                if store
                    .objects(individual, d.property)
                    .any(|v| store.fills(v, d.filler))
                {
                    out.push(class(d.defined, individual));
                }
            }
            for &i in rules.def_by_filler.get(concept).into_iter().flatten() {
                let d = &rules.defs[i];
                for subj in store.subjects(individual, d.property) {
                    if store.has_concept(subj, d.base) {
                        out.push(class(d.defined, subj));
                    }
                }
            }
        }
        Statement::PropertyAssertion {
            property,
            subject,
            object,
        } => {
            if let Object::Node(mid) = object {
                for (second, result) in rules.chain_by_first.get(property).into_iter().flatten() {
                    for z in store.objects(mid, second) {
                        out.push(Statement::PropertyAssertion {
                            property: (*result).clone(),
                            subject: subject.clone(),
                            object: z.clone(),
                        });
                    }
                }
            }
            for (first, result) in rules.chain_by_second.get(property).into_iter().flatten() {
                for w in store.subjects(subject, first) {
                    out.push(Statement::PropertyAssertion {
                        property: (*result).clone(),
                        subject: w.clone(),
                        object: object.clone(),
                    });
                }
            }
            for &i in rules.def_by_property.get(property).into_iter().flatten() {
                let d = &rules.defs[i];
                if store.has_concept(subject, d.base) && store.fills(object, d.filler) {
                    out.push(class(d.defined, subject));
                }
            }
        }
        _ => {}
    }
}

/// Least fixed point of the ABox under the TBox rules. The input is not
/// modified; the result carries the materialized flag.
pub fn materialize(o: &DomainOntology) -> DomainOntology {
    materialize_with_stats(o).0
}

pub fn materialize_with_stats(o: &DomainOntology) -> (DomainOntology, MaterializeStats) {
    let rules = Rules::compile(o.tbox());
    let mut store = FactStore::default();
    let mut delta: Vec<Axiom> = Vec::new();
    for f in o.abox() {
        if store.insert(f) {
            delta.push(f.clone());
        }
    }
    let mut stats = MaterializeStats::default();
    let mut derived = Vec::new();
    while !delta.is_empty() {
        stats.rounds += 1;
        derived.clear();
        for f in &delta {
            derive(f, &rules, &store, &mut derived);
        }
        delta.clear();
        for f in derived.drain(..) {
            if store.insert(&f) {
                stats.derivations += 1;
                delta.push(f);
            }
        }
    }
    (o.with_abox(store.all), stats)
}

pub fn entails(o: &DomainOntology, a: &Axiom) -> Result<bool, ReasonerError> {
    if !o.is_materialized() {
        return Err(ReasonerError::NotMaterialized(o.id().clone()));
    }
    if a.is_tbox() {
        return Err(ReasonerError::TboxAxiom(
            alloc::string::ToString::to_string(a),
        ));
    }
    Ok(o.abox().contains(a))
}

/// Variable → value map of one query answer.
pub type Bindings = BTreeMap<Name, Object<Name>>;

fn bind(b: &mut Bindings, pattern: &Term, value: Object<Name>) -> bool {
    match pattern {
        Term::Ind(n) => matches!(&value, Object::Node(v) if v == n),
        Term::Role(var) => match b.get(var) {
            Some(existing) => *existing == value,
            None => {
                b.insert(var.clone(), value);
                true
            }
        },
    }
}

fn match_fact(pattern: &AxiomTemplate, fact: &Axiom) -> Option<Bindings> {
    let mut b = Bindings::new();
    let ok = match (pattern, fact) {
        (
            Statement::ClassAssertion {
                concept: pc,
                individual: pi,
            },
            Statement::ClassAssertion {
                concept,
                individual,
            },
        ) => pc == concept && bind(&mut b, pi, Object::Node(individual.clone())),
        (
            Statement::PropertyAssertion {
                property: pp,
                subject: ps,
                object: po,
            },
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            },
        ) => {
            pp == property
                && bind(&mut b, ps, Object::Node(subject.clone()))
                && match po {
                    Object::Node(t) => bind(&mut b, t, object.clone()),
                    Object::Literal(l) => matches!(object, Object::Literal(v) if v == l),
                }
        }
        _ => false,
    };
    ok.then_some(b)
}

/// Answers a single ABox pattern whose `?x` placeholders act as variables.
/// A variable in object position also binds literals. Answers are distinct
/// and sorted by their bound values.
pub fn query(o: &DomainOntology, pattern: &AxiomTemplate) -> Result<Vec<Bindings>, ReasonerError> {
    if !o.is_materialized() {
        return Err(ReasonerError::NotMaterialized(o.id().clone()));
    }
    let mut answers: BTreeSet<Bindings> = BTreeSet::new();
    if pattern.is_tbox() {
        let ground = pattern.map(|t| match t {
            Term::Ind(n) | Term::Role(n) => n.clone(),
        });
        if o.tbox().contains(&ground) {
            answers.insert(Bindings::new());
        }
    } else {
        for fact in o.abox() {
            if let Some(b) = match_fact(pattern, fact) {
                answers.insert(b);
            }
        }
    }
    Ok(answers.into_iter().collect())
}
