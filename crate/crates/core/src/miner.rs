//! Correlative reasoning over transfer experiments.
//!
//! Candidate evidences are ABox facts lifted to templates over signature
//! roles. For a set of templates, its co-existence indicator over the
//! transfers is correlated with the transferability scores; combinations
//! are grown one template at a time from dimension 1 up to
//! `max_dimension`.
//!
//! Pruning:
//! * support below `min_support` removes a combination and all its
//!   extensions (support never grows under conjunction);
//! * only the `beam_width` combinations with largest |r| at a dimension are
//!   extended.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::axiom::{sort_key, Axiom, AxiomTemplate, Name, Object, Statement, Term};
use crate::ontology::{
    ground_template, DomainOntology, DomainSignature, GroundError, SignatureError,
};
use crate::reasoner::{self, ReasonerError};
use crate::stats::{correlate, CorrelationResult, StatsError};
use crate::transfer::TransferRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinerError {
    #[error("no domains given")]
    NoDomains,
    #[error("domain {0} has no signature")]
    MissingSignature(Name),
    #[error("signature for unknown domain {0}")]
    MissingOntology(Name),
    #[error("domain {0} is not materialized")]
    NotMaterialized(Name),
    #[error("transfer references unknown domain {0}")]
    UnknownDomain(Name),
    #[error("transfers mix features {0} and {1}; mine one feature at a time")]
    MixedFeatures(Name, Name),
    #[error("TooFewSamples: need at least 3 transfers, got {0}")]
    TooFewSamples(usize),
    #[error("empty evidence")]
    EmptyEvidence,
    #[error("invalid miner configuration: {0}")]
    InvalidConfig(&'static str),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Reasoner(#[from] ReasonerError),
}

/// Materialized domain ontologies with their signatures, keyed by domain id.
#[derive(Debug, Clone, Default)]
pub struct DomainCatalog {
    entries: BTreeMap<Name, (DomainOntology, DomainSignature)>,
}

impl DomainCatalog {
    /// Pairs ontologies with signatures by domain id. Every ontology must be
    /// materialized and every bound individual must occur in its ABox.
    pub fn new(
        ontologies: impl IntoIterator<Item = DomainOntology>,
        signatures: impl IntoIterator<Item = DomainSignature>,
    ) -> Result<Self, MinerError> {
        let mut sigs: BTreeMap<Name, DomainSignature> = signatures
            .into_iter()
            .map(|s| (s.domain().clone(), s))
            .collect();
        let mut entries = BTreeMap::new();
        for o in ontologies {
            if !o.is_materialized() {
                return Err(MinerError::NotMaterialized(o.id().clone()));
            }
            let sig = sigs
                .remove(o.id())
                .ok_or_else(|| MinerError::MissingSignature(o.id().clone()))?;
            sig.check_against(&o)?;
            entries.insert(o.id().clone(), (o, sig));
        }
        if let Some((id, _)) = sigs.into_iter().next() {
            return Err(MinerError::MissingOntology(id));
        }
        Ok(DomainCatalog { entries })
    }

    /// Materializes each ontology, then pairs as [`DomainCatalog::new`].
    pub fn materialize(
        ontologies: impl IntoIterator<Item = DomainOntology>,
        signatures: impl IntoIterator<Item = DomainSignature>,
    ) -> Result<Self, MinerError> {
        Self::new(
            ontologies.into_iter().map(|o| reasoner::materialize(&o)),
            signatures,
        )
    }

    pub fn get(&self, id: &Name) -> Option<(&DomainOntology, &DomainSignature)> {
        self.entries.get(id).map(|(o, s)| (o, s))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DomainOntology, &DomainSignature)> {
        self.entries.values().map(|(o, s)| (o, s))
    }

    pub fn signature(&self, id: &Name) -> Option<&DomainSignature> {
        self.entries.get(id).map(|(_, s)| s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerConfig {
    pub theta_pos: f64,
    pub theta_neg: f64,
    pub alpha: f64,
    pub min_support: usize,
    pub max_dimension: usize,
    /// `None` extends every surviving combination.
    pub beam_width: Option<usize>,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            theta_pos: 0.6,
            theta_neg: -0.6,
            alpha: 0.05,
            min_support: 2,
            max_dimension: 3,
            beam_width: Some(50),
        }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<(), MinerError> {
        if !(self.theta_neg < 0.0 && 0.0 < self.theta_pos) {
            return Err(MinerError::InvalidConfig("need thetaNeg < 0 < thetaPos"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(MinerError::InvalidConfig("alpha must lie in (0, 1)"));
        }
        if self.max_dimension == 0 {
            return Err(MinerError::InvalidConfig("maxDimension must be positive"));
        }
        if self.beam_width == Some(0) {
            return Err(MinerError::InvalidConfig("beamWidth must be positive"));
        }
        Ok(())
    }

    /// Polarity an evidence with these statistics is accepted with, if any.
    pub fn accept(&self, stats: &CorrelationResult) -> Option<Polarity> {
        if stats.p_value > self.alpha {
            None
        } else if stats.r >= self.theta_pos {
            Some(Polarity::Positive)
        } else if stats.r <= self.theta_neg {
            Some(Polarity::Negative)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    /// Sorted by serialized form.
    pub axioms: Vec<AxiomTemplate>,
    pub polarity: Polarity,
    pub stats: CorrelationResult,
    /// Co-existence per transfer, in input order.
    pub indicator: Vec<bool>,
}

impl Evidence {
    pub fn keys(&self) -> Vec<String> {
        self.axioms.iter().map(sort_key).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceReport {
    pub config: MinerConfig,
    /// Combinations whose support was evaluated, across all dimensions.
    pub candidates_scanned: usize,
    pub skipped_zero_variance: usize,
    pub pruned_support: usize,
    /// Sorted by |r| descending, then by serialized axioms.
    pub evidences: Vec<Evidence>,
}

/// Every role-lifted variant of a fact: each individual position bound in
/// the signature may stay or be replaced by one of its roles.
pub fn lift_fact(fact: &Axiom, sig: &DomainSignature) -> Vec<AxiomTemplate> {
    let options = |ind: &Name| -> Vec<Term> {
        let mut v = vec![Term::Ind(ind.clone())];
        v.extend(sig.roles_of(ind).map(|r| Term::Role(r.clone())));
        v
    };
    match fact {
        Statement::ClassAssertion {
            concept,
            individual,
        } => options(individual)
            .into_iter()
            .map(|t| Statement::ClassAssertion {
                concept: concept.clone(),
                individual: t,
            })
            .collect(),
        Statement::PropertyAssertion {
            property,
            subject,
            object,
        } => {
            let objects: Vec<Object<Term>> = match object {
                Object::Node(o) => options(o).into_iter().map(Object::Node).collect(),
                Object::Literal(l) => vec![Object::Literal(l.clone())],
            };
            let mut out = Vec::new();
            for s in options(subject) {
                for o in &objects {
                    out.push(Statement::PropertyAssertion {
                        property: property.clone(),
                        subject: s.clone(),
                        object: o.clone(),
                    });
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Lifted templates that hold in at least two domains, sorted by serialized
/// form.
pub fn enumerate_candidates(catalog: &DomainCatalog) -> Result<Vec<AxiomTemplate>, MinerError> {
    if catalog.is_empty() {
        return Err(MinerError::NoDomains);
    }
    let mut holders: BTreeMap<AxiomTemplate, usize> = BTreeMap::new();
    for (o, sig) in catalog.iter() {
        let mut here: BTreeSet<AxiomTemplate> = BTreeSet::new();
        for fact in o.abox() {
            here.extend(lift_fact(fact, sig));
        }
        for t in here {
            *holders.entry(t).or_default() += 1;
        }
    }
    let mut out: Vec<(String, AxiomTemplate)> = holders
        .into_iter()
        .filter(|&(_, count)| count >= 2)
        .map(|(t, _)| (sort_key(&t), t))
        .collect();
    out.sort();
    Ok(out.into_iter().map(|(_, t)| t).collect())
}

fn holds_in(
    t: &AxiomTemplate,
    o: &DomainOntology,
    sig: &DomainSignature,
) -> Result<bool, MinerError> {
    let g = ground_template(t, sig)?;
    Ok(reasoner::entails(o, &g)?)
}

/// Whether every template, grounded per domain, is entailed by both the
/// source and the target ontology of the transfer.
pub fn coexists(
    evidence: &[AxiomTemplate],
    t: &TransferRecord,
    catalog: &DomainCatalog,
) -> Result<bool, MinerError> {
    if evidence.is_empty() {
        return Err(MinerError::EmptyEvidence);
    }
    let (so, ss) = catalog
        .get(&t.source)
        .ok_or_else(|| MinerError::UnknownDomain(t.source.clone()))?;
    let (to, ts) = catalog
        .get(&t.target)
        .ok_or_else(|| MinerError::UnknownDomain(t.target.clone()))?;
    for a in evidence {
        if !holds_in(a, so, ss)? || !holds_in(a, to, ts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fixed-length bitset over transfers.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut words = vec![0u64; len.div_ceil(64)];
        for i in 0..len {
            if f(i) {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Bits { words, len }
    }

    fn ones(len: usize) -> Self {
        Self::from_fn(len, |_| true)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

enum Outcome {
    PrunedSupport,
    ZeroVariance,
    Scored(CorrelationResult),
}

struct Search<'a> {
    indicators: Vec<Bits>,
    scores: &'a [f64],
    cfg: &'a MinerConfig,
}

impl Search<'_> {
    fn conjunction(&self, combo: &[usize]) -> Bits {
        let mut acc = Bits::ones(self.scores.len());
        for &c in combo {
            acc = acc.and(&self.indicators[c]);
        }
        acc
    }

    fn evaluate(&self, combo: &[usize]) -> (Bits, Outcome) {
        let bits = self.conjunction(combo);
        let support = bits.count();
        if support < self.cfg.min_support {
            return (bits, Outcome::PrunedSupport);
        }
        let bools = bits.to_bools();
        match correlate(&bools, self.scores) {
            Ok(stats) => (bits, Outcome::Scored(stats)),
            Err(_) => (bits, Outcome::ZeroVariance),
        }
    }
}

struct Scored {
    combo: Vec<usize>,
    stats: CorrelationResult,
}

fn rank_cmp(
    a: &CorrelationResult,
    a_combo: &[usize],
    b: &CorrelationResult,
    b_combo: &[usize],
) -> core::cmp::Ordering {
    // candidate indices follow serialized order, so comparing index vectors
    // compares the serialized axiom lists
    libm::fabs(b.r)
        .total_cmp(&libm::fabs(a.r))
        .then_with(|| a_combo.cmp(b_combo))
}

#[cfg(feature = "parallel")]
fn evaluate_all(search: &Search<'_>, combos: Vec<Vec<usize>>) -> Vec<(Vec<usize>, Bits, Outcome)> {
    use rayon::prelude::*;
    combos
        .into_par_iter()
        .map(|c| {
            let (bits, out) = search.evaluate(&c);
            (c, bits, out)
        })
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate_all(search: &Search<'_>, combos: Vec<Vec<usize>>) -> Vec<(Vec<usize>, Bits, Outcome)> {
    combos
        .into_iter()
        .map(|c| {
            let (bits, out) = search.evaluate(&c);
            (c, bits, out)
        })
        .collect()
}

/// Searches candidate combinations for explanatory evidences.
///
/// All transfers must concern the same feature and reference catalogued
/// domains; fewer than three transfers is an error.
pub fn mine(
    transfers: &[TransferRecord],
    catalog: &DomainCatalog,
    cfg: &MinerConfig,
) -> Result<EvidenceReport, MinerError> {
    cfg.validate()?;
    if transfers.len() < 3 {
        return Err(MinerError::TooFewSamples(transfers.len()));
    }
    if let Some(first) = transfers.first() {
        if let Some(other) = transfers.iter().find(|t| t.feature != first.feature) {
            return Err(MinerError::MixedFeatures(
                first.feature.clone(),
                other.feature.clone(),
            ));
        }
    }
    for t in transfers {
        for d in [&t.source, &t.target] {
            if catalog.get(d).is_none() {
                return Err(MinerError::UnknownDomain(d.clone()));
            }
        }
    }
    let candidates = enumerate_candidates(catalog)?;

    // holds[c][domain]
    let domain_ids: Vec<&Name> = catalog.iter().map(|(o, _)| o.id()).collect();
    let position = |id: &Name| {
        domain_ids
            .iter()
            .position(|d| *d == id)
            .unwrap_or(usize::MAX)
    };
    let endpoints: Vec<(usize, usize)> = transfers
        .iter()
        .map(|t| (position(&t.source), position(&t.target)))
        .collect();
    let mut indicators = Vec::with_capacity(candidates.len());
    for c in &candidates {
        let holds = catalog
            .iter()
            .map(|(o, s)| match ground_template(c, s) {
                Ok(g) => reasoner::entails(o, &g).map_err(MinerError::from),
                Err(_) => Ok(false),
            })
            .collect::<Result<Vec<bool>, _>>()?;
        indicators.push(Bits::from_fn(transfers.len(), |i| {
            let (s, t) = endpoints[i];
            holds[s] && holds[t]
        }));
    }
    let scores: Vec<f64> = transfers.iter().map(|t| t.score).collect();
    let search = Search {
        indicators,
        scores: &scores,
        cfg,
    };

    let mut report = EvidenceReport {
        config: *cfg,
        candidates_scanned: 0,
        skipped_zero_variance: 0,
        pruned_support: 0,
        evidences: Vec::new(),
    };
    let mut pool: Vec<usize> = Vec::new();
    let mut combos: Vec<Vec<usize>> = (0..candidates.len()).map(|c| vec![c]).collect();
    for dimension in 1..=cfg.max_dimension {
        if combos.is_empty() {
            break;
        }
        let mut survivors: Vec<Scored> = Vec::new();
        for (combo, bits, outcome) in evaluate_all(&search, combos) {
            report.candidates_scanned += 1;
            match outcome {
                Outcome::PrunedSupport => report.pruned_support += 1,
                Outcome::ZeroVariance => report.skipped_zero_variance += 1,
                Outcome::Scored(stats) => {
                    if let Some(polarity) = cfg.accept(&stats) {
                        report.evidences.push(Evidence {
                            axioms: combo.iter().map(|&c| candidates[c].clone()).collect(),
                            polarity,
                            stats,
                            indicator: bits.to_bools(),
                        });
                    }
                    survivors.push(Scored { combo, stats });
                }
            }
        }
        if dimension == 1 {
            pool = survivors.iter().map(|s| s.combo[0]).collect();
        }
        if dimension == cfg.max_dimension {
            break;
        }
        survivors.sort_by(|a, b| rank_cmp(&a.stats, &a.combo, &b.stats, &b.combo));
        if let Some(w) = cfg.beam_width {
            survivors.truncate(w);
        }
        let mut next: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in &survivors {
            for &c in &pool {
                if s.combo.contains(&c) {
                    continue;
                }
                let mut combo = s.combo.clone();
                combo.push(c);
                combo.sort_unstable();
                next.insert(combo);
            }
        }
        combos = next.into_iter().collect();
    }

    let keyed: Vec<(Vec<usize>, Evidence)> = report
        .evidences
        .drain(..)
        .map(|e| {
            let idx = e
                .axioms
                .iter()
                .map(|a| candidates.iter().position(|c| c == a).unwrap_or(usize::MAX))
                .collect();
            (idx, e)
        })
        .collect();
    let mut keyed = keyed;
    keyed.sort_by(|(ia, a), (ib, b)| rank_cmp(&a.stats, ia, &b.stats, ib));
    report.evidences = keyed.into_iter().map(|(_, e)| e).collect();
    Ok(report)
}

impl From<StatsError> for MinerError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::TooFewSamples(n) => MinerError::TooFewSamples(n),
            StatsError::ZeroVariance | StatsError::LengthMismatch { .. } => {
                MinerError::InvalidConfig("degenerate score vector")
            }
        }
    }
}
