//! Natural-language rendering of an evidence for one transfer.
//!
//! ```text
//! the transfer from D_(DL,ORD,LAX) to D_(AA,ORD,SFO) is positive as
//! the original airport of both is located in the east part of US;
//! the carrier of both is a listed airline company
//! ```
//!
//! Phrases are keyed by predicate (the concept of a class assertion or the
//! property of a property assertion) and may use `{subject}`, `{object}`,
//! `{concept}` and `{property}`. A role placeholder renders as
//! "the <noun> of both"; other individuals and literals render through the
//! label table or verbatim. Axioms without a phrase render as their
//! serialized template.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::axiom::{AxiomTemplate, Name, Object, Statement, Term};
use crate::miner::{DomainCatalog, Evidence, MinerError};
use crate::ontology::{ground_template, DomainSignature};
use crate::transfer::TransferRecord;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplanationTemplates {
    /// Roles whose individuals form a domain's display label, e.g.
    /// `[car, ori, des]` gives `D_(DL,ORD,LAX)`. Empty uses the domain id.
    pub label_roles: Vec<Name>,
    pub role_nouns: BTreeMap<Name, String>,
    pub labels: BTreeMap<Name, String>,
    pub phrases: BTreeMap<Name, String>,
}

impl ExplanationTemplates {
    pub fn domain_label(&self, sig: &DomainSignature) -> String {
        let parts: Option<Vec<&str>> = self
            .label_roles
            .iter()
            .map(|r| sig.get(r).map(Name::as_str))
            .collect();
        match parts {
            Some(p) if !p.is_empty() => format!("D_({})", p.join(",")),
            _ => sig.domain().to_string(),
        }
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Role(r) => {
                let noun = self.role_nouns.get(r).map_or(r.as_str(), String::as_str);
                format!("the {noun} of both")
            }
            Term::Ind(i) => self.name(i),
        }
    }

    fn name(&self, n: &Name) -> String {
        self.labels.get(n).cloned().unwrap_or_else(|| n.to_string())
    }

    /// Clause for one template axiom.
    pub fn clause(&self, a: &AxiomTemplate) -> String {
        let Some(phrase) = a.predicate().and_then(|p| self.phrases.get(p)) else {
            return a.to_string();
        };
        match a {
            Statement::ClassAssertion {
                concept,
                individual,
            } => phrase
                .replace("{subject}", &self.term(individual))
                .replace("{concept}", &self.name(concept)),
            Statement::PropertyAssertion {
                property,
                subject,
                object,
            } => {
                let obj = match object {
                    Object::Node(t) => self.term(t),
                    Object::Literal(l) => l.lexical.clone(),
                };
                phrase
                    .replace("{subject}", &self.term(subject))
                    .replace("{object}", &obj)
                    .replace("{property}", &self.name(property))
            }
            _ => a.to_string(),
        }
    }
}

/// "the transfer from {src} to {tgt} is {polarity} as {clause; ...}"
pub fn render_explanation(
    e: &Evidence,
    t: &TransferRecord,
    catalog: &DomainCatalog,
    templates: &ExplanationTemplates,
) -> Result<String, MinerError> {
    if e.axioms.is_empty() {
        return Err(MinerError::EmptyEvidence);
    }
    let sig = |d: &Name| {
        catalog
            .signature(d)
            .ok_or_else(|| MinerError::UnknownDomain(d.clone()))
    };
    let (src, tgt) = (sig(&t.source)?, sig(&t.target)?);
    for a in &e.axioms {
        ground_template(a, src)?;
        ground_template(a, tgt)?;
    }
    let clauses: Vec<String> = e.axioms.iter().map(|a| templates.clause(a)).collect();
    Ok(format!(
        "the transfer from {} to {} is {} as {}",
        templates.domain_label(src),
        templates.domain_label(tgt),
        e.polarity.as_str(),
        clauses.join("; ")
    ))
}
