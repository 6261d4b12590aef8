#![allow(dead_code)]

use std::collections::BTreeSet;

use kgexplain_core::{
    Axiom, AxiomTemplate, Datatype, DomainOntology, Literal, Name, Object, Statement, Term,
};
use proptest::prelude::*;

pub fn n(s: &str) -> Name {
    Name::new(s).unwrap()
}

/// Identifiers with the punctuation that shows up in IRIs and CURIEs.
pub fn name() -> impl Strategy<Value = Name> {
    "[A-Za-z][A-Za-z0-9_:#/.-]{0,6}".prop_map(|s| Name::new(s).unwrap())
}

/// Identifiers from a small pool, so rules actually fire.
pub fn pool_name(prefix: &'static str, size: usize) -> impl Strategy<Value = Name> {
    (0..size).prop_map(move |i| n(&format!("{prefix}{i}")))
}

pub fn literal() -> impl Strategy<Value = Literal> {
    (
        prop_oneof![
            "[ -~]{0,8}",
            "\\PC{0,6}",
            Just("a\"b\\c\nd\te".to_string()),
            any::<f64>()
                .prop_filter("finite", |x| x.is_finite())
                .prop_map(|x| x.to_string()),
        ],
        prop_oneof![Just(Datatype::Float), Just(Datatype::String)],
    )
        .prop_map(|(lex, dt)| Literal::new(lex, dt))
}

fn statement<I: Clone + std::fmt::Debug + 'static>(
    concept: BoxedStrategy<Name>,
    property: BoxedStrategy<Name>,
    ind: BoxedStrategy<I>,
) -> impl Strategy<Value = Statement<I>> {
    let object = prop_oneof![
        3 => ind.clone().prop_map(Object::Node),
        1 => literal().prop_map(Object::Literal),
    ];
    prop_oneof![
        (concept.clone(), ind.clone()).prop_map(|(concept, individual)| {
            Statement::ClassAssertion {
                concept,
                individual,
            }
        }),
        (property.clone(), ind, object).prop_map(|(property, subject, object)| {
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            }
        }),
        (concept.clone(), concept.clone())
            .prop_map(|(sub, sup)| Statement::SubClassOf { sub, sup }),
        (property.clone(), property.clone(), property.clone()).prop_map(
            |(first, second, result)| {
                Statement::PropertyChain {
                    first,
                    second,
                    result,
                }
            }
        ),
        (concept.clone(), concept.clone(), property, concept).prop_map(
            |(defined, base, property, filler)| Statement::ConceptDefinition {
                defined,
                base,
                property,
                filler,
            }
        ),
    ]
}

pub fn axiom() -> impl Strategy<Value = Axiom> {
    statement(name().boxed(), name().boxed(), name().boxed())
}

pub fn template() -> impl Strategy<Value = AxiomTemplate> {
    let term = prop_oneof![name().prop_map(Term::Ind), name().prop_map(Term::Role)];
    statement(name().boxed(), name().boxed(), term.boxed())
}

/// Axioms over small vocabularies, with literal fillers able to satisfy
/// `Float` and `String` restrictions.
pub fn dense_axiom() -> impl Strategy<Value = Axiom> {
    let concept = prop_oneof![
        6 => pool_name("C", 5),
        1 => Just(n("Float")),
        1 => Just(n("String")),
    ]
    .boxed();
    let literal = prop_oneof![Just(Datatype::Float), Just(Datatype::String)]
        .prop_map(|dt| Literal::new("1", dt));
    let object = prop_oneof![
        4 => pool_name("x", 5).prop_map(Object::Node),
        1 => literal.prop_map(Object::Literal),
    ];
    let property = pool_name("p", 3).boxed();
    let ind = pool_name("x", 5).boxed();
    prop_oneof![
        4 => (concept.clone(), ind.clone())
            .prop_map(|(concept, individual)| Statement::ClassAssertion { concept, individual }),
        4 => (property.clone(), ind, object).prop_map(|(property, subject, object)| {
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            }
        }),
        2 => (concept.clone(), concept.clone()).prop_map(|(sub, sup)| Statement::SubClassOf { sub, sup }),
        1 => (property.clone(), property.clone(), property.clone()).prop_map(
            |(first, second, result)| Statement::PropertyChain {
                first,
                second,
                result,
            }
        ),
        1 => (concept.clone(), concept.clone(), property, concept).prop_map(
            |(defined, base, property, filler)| Statement::ConceptDefinition {
                defined,
                base,
                property,
                filler,
            }
        ),
    ]
}

pub fn dense_ontology(max: usize) -> impl Strategy<Value = DomainOntology> {
    proptest::collection::vec(dense_axiom(), 0..max)
        .prop_map(|axs| DomainOntology::from_axioms(n("D"), axs))
}

/// The least fixed point computed the slow way: apply every rule to every
/// combination of facts until nothing changes.
pub fn naive_closure(o: &DomainOntology) -> BTreeSet<Axiom> {
    let mut facts: BTreeSet<Axiom> = o.abox().clone();
    loop {
        let mut new = Vec::new();
        for rule in o.tbox() {
            match rule {
                Statement::SubClassOf { sub, sup } => {
                    for f in &facts {
                        if let Statement::ClassAssertion {
                            concept,
                            individual,
                        } = f
                        {
                            if concept == sub {
                                new.push(Statement::ClassAssertion {
                                    concept: sup.clone(),
                                    individual: individual.clone(),
                                });
                            }
                        }
                    }
                }
                Statement::PropertyChain {
                    first,
                    second,
                    result,
                } => {
                    for f in &facts {
                        for g in &facts {
                            if let (
                                Statement::PropertyAssertion {
                                    property: p,
                                    subject: x,
                                    object: Object::Node(y),
                                },
                                Statement::PropertyAssertion {
                                    property: q,
                                    subject: y2,
                                    object: z,
                                },
                            ) = (f, g)
                            {
                                if p == first && q == second && y == y2 {
                                    new.push(Statement::PropertyAssertion {
                                        property: result.clone(),
                                        subject: x.clone(),
                                        object: z.clone(),
                                    });
                                }
                            }
                        }
                    }
                }
                Statement::ConceptDefinition {
                    defined,
                    base,
                    property,
                    filler,
                } => {
                    for f in &facts {
                        let Statement::PropertyAssertion {
                            property: p,
                            subject: x,
                            object,
                        } = f
                        else {
                            continue;
                        };
                        if p != property {
                            continue;
                        }
                        let has_base = facts.contains(&Statement::ClassAssertion {
                            concept: base.clone(),
                            individual: x.clone(),
                        });
                        let filled = match object {
                            Object::Literal(l) => l.datatype.tag() == filler.as_str(),
                            Object::Node(v) => facts.contains(&Statement::ClassAssertion {
                                concept: filler.clone(),
                                individual: v.clone(),
                            }),
                        };
                        if has_base && filled {
                            new.push(Statement::ClassAssertion {
                                concept: defined.clone(),
                                individual: x.clone(),
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        let before = facts.len();
        facts.extend(new);
        if facts.len() == before {
            return facts;
        }
    }
}
pub mod tiny;
