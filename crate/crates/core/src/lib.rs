//! Knowledge-graph backed explanation of transfer learning.
//!
//! Two pipelines share one data model:
//!
//! * feature transferability: domain ontologies are materialized
//!   ([`reasoner`]), optionally enriched from an external triple dump
//!   ([`enrich`]), and mined for axiom combinations whose co-existence in
//!   source and target domains correlates with transferability ([`miner`]);
//! * zero-shot learning justification: a class graph with anonymous property
//!   nodes is built from a triple dump, attention weights pick impressive seen
//!   classes, and shared ancestors/properties justify them ([`zsl`]).
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature enables
//! `std::error::Error` integration and `parallel` enables rayon-backed
//! candidate scoring.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod axiom;
pub mod enrich;
pub mod explain;
pub mod miner;
pub mod ontology;
pub mod rdf;
pub mod reasoner;
pub mod stats;
pub mod syntax;
pub mod synth;
pub mod transfer;
pub mod zsl;

pub use axiom::{Axiom, AxiomTemplate, Datatype, Literal, Name, Object, Statement, Term};
pub use ontology::{ground_template, DomainOntology, DomainSignature};
pub use rdf::{parse_ntriples, RdfTerm, Triple, TripleSet};
pub use reasoner::{entails, materialize, query};
pub use syntax::{parse_axiom_file, parse_template_file, serialize_ontology};
