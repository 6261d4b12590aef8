//! Per-domain ontologies, domain signatures and template grounding.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use thiserror::Error;

use crate::axiom::{Axiom, AxiomTemplate, Name, Term};

/// TBox and ABox of one learning domain. Both are duplicate-free sets and
/// every axiom sits in the box its variant belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainOntology {
    id: Name,
    tbox: BTreeSet<Axiom>,
    abox: BTreeSet<Axiom>,
    materialized: bool,
}

impl DomainOntology {
    pub fn new(id: Name) -> Self {
        DomainOntology {
            id,
            tbox: BTreeSet::new(),
            abox: BTreeSet::new(),
            materialized: false,
        }
    }

    pub fn from_axioms(id: Name, axioms: impl IntoIterator<Item = Axiom>) -> Self {
        let mut o = DomainOntology::new(id);
        o.extend(axioms);
        o
    }

    /// Adds an axiom to the box matching its variant. A new axiom clears the
    /// materialized flag.
    pub fn insert(&mut self, axiom: Axiom) -> bool {
        let added = if axiom.is_tbox() {
            self.tbox.insert(axiom)
        } else {
            self.abox.insert(axiom)
        };
        if added {
            self.materialized = false;
        }
        added
    }

    pub fn extend(&mut self, axioms: impl IntoIterator<Item = Axiom>) {
        for a in axioms {
            self.insert(a);
        }
    }

    pub fn id(&self) -> &Name {
        &self.id
    }

    pub fn tbox(&self) -> &BTreeSet<Axiom> {
        &self.tbox
    }

    pub fn abox(&self) -> &BTreeSet<Axiom> {
        &self.abox
    }

    pub fn is_materialized(&self) -> bool {
        self.materialized
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.tbox.iter().chain(self.abox.iter())
    }

    /// Individuals occurring in ABox individual positions.
    pub fn individuals(&self) -> BTreeSet<&Name> {
        self.abox.iter().flat_map(|a| a.individuals()).collect()
    }

    pub(crate) fn with_abox(&self, abox: BTreeSet<Axiom>) -> Self {
        DomainOntology {
            id: self.id.clone(),
            tbox: self.tbox.clone(),
            abox,
            materialized: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("domain {domain}: role `{role}` bound twice")]
    DuplicateRole { domain: Name, role: Name },
    #[error(
        "domain {domain}: individual `{individual}` (role `{role}`) does not occur in the ABox"
    )]
    UnknownIndividual {
        domain: Name,
        role: Name,
        individual: Name,
    },
}

/// Role → individual bindings identifying a domain, e.g. car=DL ori=ORD des=LAX.
/// Bindings keep their declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSignature {
    domain: Name,
    bindings: Vec<(Name, Name)>,
}

impl DomainSignature {
    pub fn new(
        domain: Name,
        bindings: impl IntoIterator<Item = (Name, Name)>,
    ) -> Result<Self, SignatureError> {
        let mut out: Vec<(Name, Name)> = Vec::new();
        for (role, ind) in bindings {
            if out.iter().any(|(r, _)| *r == role) {
                return Err(SignatureError::DuplicateRole { domain, role });
            }
            out.push((role, ind));
        }
        Ok(DomainSignature {
            domain,
            bindings: out,
        })
    }

    pub fn domain(&self) -> &Name {
        &self.domain
    }

    pub fn bindings(&self) -> &[(Name, Name)] {
        &self.bindings
    }

    pub fn get(&self, role: &Name) -> Option<&Name> {
        self.bindings
            .iter()
            .find(|(r, _)| r == role)
            .map(|(_, i)| i)
    }

    /// Roles bound to `individual`.
    pub fn roles_of<'a>(&'a self, individual: &'a Name) -> impl Iterator<Item = &'a Name> + 'a {
        self.bindings
            .iter()
            .filter(move |(_, i)| i == individual)
            .map(|(r, _)| r)
    }

    pub fn individuals(&self) -> impl Iterator<Item = &Name> {
        self.bindings.iter().map(|(_, i)| i)
    }

    /// Every bound individual must occur in the ontology's ABox.
    pub fn check_against(&self, o: &DomainOntology) -> Result<(), SignatureError> {
        let present = o.individuals();
        for (role, ind) in &self.bindings {
            if !present.contains(ind) {
                return Err(SignatureError::UnknownIndividual {
                    domain: self.domain.clone(),
                    role: role.clone(),
                    individual: ind.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("role `{role}` is not bound in the signature of domain {domain}")]
pub struct GroundError {
    pub role: Name,
    pub domain: Name,
}

/// Replaces each `?role` placeholder by the individual the signature binds it to.
pub fn ground_template(t: &AxiomTemplate, sig: &DomainSignature) -> Result<Axiom, GroundError> {
    t.try_map(|term| match term {
        Term::Ind(n) => Ok(n.clone()),
        Term::Role(r) => sig.get(r).cloned().ok_or_else(|| GroundError {
            role: r.clone(),
            domain: sig.domain.clone(),
        }),
    })
}
