//! Planted-evidence scenarios with known ground truth.
//!
//! Each domain gets one fresh individual per role (`car03`, `ori03`, ...),
//! random background facts over a background vocabulary and a shared
//! subclass hierarchy. Every planted evidence owns a host set of domains in
//! which all of its axioms hold; it co-exists on a transfer exactly when both
//! endpoints are hosts. Transfers are drawn so that each one carries at most
//! one planted evidence, in group sizes given by the evidence fractions.
//! Axioms of multi-axiom evidences also hold alone on a few domains outside
//! the hosts, adding transfers of the opposite effect sign, so no single
//! axiom shares the indicator of the whole evidence.
//!
//! Background facts are then thinned: no background template may hold on
//! every endpoint of a planted group, nor correlate with the noise-free
//! planted signal at |r| >= 0.5 on its own. Coincidental combinations of
//! background templates remain possible.
//!
//! Scores are `base + Σ effect + σ·z`, summed over the planted evidences
//! co-existing on the transfer in planted order. `z` is one Box–Muller draw
//! per transfer, in transfer order:
//!
//! ```text
//! u  = (next_u64 >> 11) · 2^-53        uniform on [0, 1)
//! u1 = 1 - u                           first uniform, on (0, 1]
//! u2 = (next_u64 >> 11) · 2^-53
//! z  = sqrt(-2 ln u1) · cos(2π u2)
//! ```
//!
//! from a ChaCha8 generator seeded with `seed_from_u64(seed)` on stream 1.
//! Structure is drawn from the same seed on stream 0, so the noise level
//! does not change the generated ontologies.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

use crate::axiom::{sort_key, Axiom, AxiomTemplate, Name, Object, Statement, Term};
use crate::miner::Polarity;
use crate::ontology::{ground_template, DomainOntology, DomainSignature};
use crate::stats::correlate;
use crate::transfer::TransferRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("infeasible scenario: {0}")]
    Infeasible(String),
}

fn infeasible(msg: impl Into<String>) -> SynthError {
    SynthError::Infeasible(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedSpec {
    /// Score shift on transfers where the evidence co-exists; its sign is
    /// the polarity.
    pub effect: f64,
    /// Number of axioms in the evidence.
    pub axioms: usize,
    /// Share of transfers carrying the evidence; `None` uses the default
    /// allocation of [`default_fractions`].
    pub fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub domains: usize,
    pub transfers: usize,
    pub roles: Vec<Name>,
    pub concepts: usize,
    pub properties: usize,
    pub values: usize,
    /// Probability of each background fact per role individual.
    pub density: f64,
    pub planted: Vec<PlantedSpec>,
    pub noise_sigma: f64,
    pub base_score: f64,
    pub feature: Name,
}

fn name(s: &str) -> Name {
    Name::sanitize(s)
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            domains: 12,
            transfers: 40,
            roles: vec![name("car"), name("ori"), name("des")],
            concepts: 10,
            properties: 4,
            values: 4,
            density: 0.3,
            planted: vec![
                PlantedSpec {
                    effect: 0.5,
                    axioms: 2,
                    fraction: None,
                },
                PlantedSpec {
                    effect: 0.5,
                    axioms: 1,
                    fraction: None,
                },
                PlantedSpec {
                    effect: -0.5,
                    axioms: 1,
                    fraction: None,
                },
            ],
            noise_sigma: 0.05,
            base_score: 0.0,
            feature: name("conv3"),
        }
    }
}

/// Evidences of the more numerous polarity get 0.1 of the transfers each
/// and the others split the rest; with equally many of both, every evidence
/// gets `1 / (count + 1)` and the remainder carries none.
///
/// Scores are then close to a function of the group, which keeps every
/// planted correlation far from zero: for two positives and one negative at
/// ±e, the positives reach r = 2/3 and the negative r = −1 without noise.
pub fn default_fractions(planted: &[PlantedSpec]) -> Vec<f64> {
    let pos = planted.iter().filter(|p| p.effect > 0.0).count();
    let neg = planted.len() - pos;
    if pos == neg {
        let f = 1.0 / (planted.len() + 1) as f64;
        return vec![f; planted.len()];
    }
    let major_positive = pos > neg;
    let (major, minor) = if major_positive {
        (pos, neg)
    } else {
        (neg, pos)
    };
    let minor_share = if minor == 0 {
        0.0
    } else {
        (1.0 - 0.1 * major as f64) / minor as f64
    };
    planted
        .iter()
        .map(|p| {
            if (p.effect > 0.0) == major_positive {
                0.1
            } else {
                minor_share
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedEvidence {
    /// Sorted by serialized form.
    pub axioms: Vec<AxiomTemplate>,
    pub polarity: Polarity,
    pub effect: f64,
    /// Domains where every axiom of the evidence holds.
    pub hosts: Vec<Name>,
    /// Co-existence per transfer.
    pub indicator: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthScenario {
    pub domains: Vec<(DomainOntology, DomainSignature)>,
    pub transfers: Vec<TransferRecord>,
    pub planted: Vec<PlantedEvidence>,
    pub noise_sigma: f64,
    pub seed: u64,
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn new(seed: u64, stream: u64) -> Self {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(stream);
        Rng(r)
    }

    fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn below(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    fn shuffle<T>(&mut self, v: &mut [T]) {
        for i in (1..v.len()).rev() {
            let j = self.below(i + 1);
            v.swap(i, j);
        }
    }

    fn sample(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..n).collect();
        self.shuffle(&mut idx);
        idx.truncate(k);
        idx.sort_unstable();
        idx
    }

    fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
    }
}

fn concept(i: usize) -> Name {
    name(&format!("C{i:02}"))
}

fn property(i: usize) -> Name {
    name(&format!("p{i:02}"))
}

fn value(i: usize) -> Name {
    name(&format!("V{i:02}"))
}

/// Planted axiom `i`: a class assertion on a fresh concept while concepts
/// last, then a property assertion on a fresh property.
fn planted_axiom(cfg: &ScenarioConfig, i: usize) -> AxiomTemplate {
    let role = Term::Role(cfg.roles[i % cfg.roles.len()].clone());
    if i < cfg.concepts {
        Statement::ClassAssertion {
            concept: concept(i),
            individual: role,
        }
    } else {
        Statement::PropertyAssertion {
            property: property(i - cfg.concepts),
            subject: role,
            object: Object::Node(Term::Ind(value(0))),
        }
    }
}

fn validate(cfg: &ScenarioConfig) -> Result<Vec<usize>, SynthError> {
    if cfg.domains < 2 {
        return Err(infeasible("need at least 2 domains"));
    }
    if cfg.transfers == 0 {
        return Err(infeasible("need at least 1 transfer"));
    }
    if cfg.roles.is_empty() {
        return Err(infeasible("need at least 1 role"));
    }
    if !(0.0..=1.0).contains(&cfg.density) {
        return Err(infeasible("density must lie in [0, 1]"));
    }
    if !(cfg.noise_sigma >= 0.0 && cfg.noise_sigma.is_finite()) {
        return Err(infeasible("noise sigma must be finite and non-negative"));
    }
    let roles: BTreeSet<&Name> = cfg.roles.iter().collect();
    if roles.len() != cfg.roles.len() {
        return Err(infeasible("duplicate role"));
    }
    let planted_axioms: usize = cfg.planted.iter().map(|p| p.axioms).sum();
    if planted_axioms > cfg.concepts + cfg.properties {
        return Err(infeasible(format!(
            "{planted_axioms} planted axioms but only {} concepts and properties",
            cfg.concepts + cfg.properties
        )));
    }
    if planted_axioms > cfg.concepts && cfg.values == 0 {
        return Err(infeasible(
            "planted property assertions need at least 1 value",
        ));
    }
    let defaults = default_fractions(&cfg.planted);
    let mut sizes = Vec::new();
    for (p, d) in cfg.planted.iter().zip(defaults) {
        if p.effect == 0.0 || !p.effect.is_finite() {
            return Err(infeasible("planted effects must be finite and nonzero"));
        }
        if p.axioms == 0 {
            return Err(infeasible("planted evidences need at least 1 axiom"));
        }
        let f = p.fraction.unwrap_or(d);
        let g = libm::round(f * cfg.transfers as f64) as usize;
        if !(f > 0.0 && f <= 1.0) || g == 0 {
            return Err(infeasible(format!("fraction {f} gives no transfers")));
        }
        sizes.push(g);
    }
    if sizes.iter().sum::<usize>() > cfg.transfers {
        return Err(infeasible("planted fractions exceed the transfer count"));
    }
    Ok(sizes)
}

const MAX_ATTEMPTS: usize = 2000;
const BACKGROUND_CORRELATION_CAP: f64 = 0.5;

/// Host sets and transfer pairs: `groups[k]` holds the ordered domain pairs
/// carrying evidence `k`, the last entry the pairs carrying none.
struct Layout {
    hosts: Vec<Vec<usize>>,
    groups: Vec<Vec<(usize, usize)>>,
}

fn layout(cfg: &ScenarioConfig, sizes: &[usize], rng: &mut Rng) -> Result<Layout, SynthError> {
    let d = cfg.domains;
    let rest = cfg.transfers - sizes.iter().sum::<usize>();
    let host_size = |g: usize| {
        let mut h = 2;
        while h < d && h * (h - 1) * 2 < g * 3 {
            h += 1;
        }
        h
    };
    for _ in 0..MAX_ATTEMPTS {
        let hosts: Vec<Vec<usize>> = sizes.iter().map(|&g| rng.sample(d, host_size(g))).collect();
        let mut pools: Vec<Vec<(usize, usize)>> = vec![Vec::new(); sizes.len() + 1];
        for a in 0..d {
            for b in 0..d {
                if a == b {
                    continue;
                }
                let carrying: Vec<usize> = (0..hosts.len())
                    .filter(|&k| hosts[k].contains(&a) && hosts[k].contains(&b))
                    .collect();
                match carrying.as_slice() {
                    [] => pools[sizes.len()].push((a, b)),
                    [k] => pools[*k].push((a, b)),
                    _ => {}
                }
            }
        }
        let wanted: Vec<usize> = sizes.iter().copied().chain([rest]).collect();
        if pools.iter().zip(&wanted).any(|(p, &w)| p.len() < w) {
            continue;
        }
        let groups = pools
            .iter()
            .zip(&wanted)
            .map(|(p, &w)| rng.sample(p.len(), w).into_iter().map(|i| p[i]).collect())
            .collect();
        return Ok(Layout { hosts, groups });
    }
    Err(infeasible(
        "no host layout gives every evidence its transfers; use more domains or smaller fractions",
    ))
}

/// Type of a role's individuals, e.g. `Car` for `car`.
fn role_concept(role: &Name) -> Name {
    let mut chars = role.as_str().chars();
    let first = chars.next().map(|c| c.to_ascii_uppercase()).unwrap_or('T');
    name(&format!("{first}{}", chars.as_str()))
}

fn individual(role: &Name, domain: usize) -> Name {
    name(&format!("{role}{domain:02}"))
}

/// Planted axioms per domain for a layout, or `None` when some decoy finds
/// no room.
fn plant(
    cfg: &ScenarioConfig,
    evidences: &[Vec<AxiomTemplate>],
    lay: &Layout,
    rng: &mut Rng,
) -> Option<Vec<BTreeSet<AxiomTemplate>>> {
    let d = cfg.domains;
    let effect_of = |a: usize, b: usize| -> f64 {
        (0..cfg.planted.len())
            .filter(|&k| lay.hosts[k].contains(&a) && lay.hosts[k].contains(&b))
            .map(|k| cfg.planted[k].effect)
            .sum()
    };
    let all_pairs: Vec<(usize, usize)> = lay.groups.iter().flatten().copied().collect();

    // holds[d] = planted axioms asserted in domain d
    let mut holds: Vec<BTreeSet<AxiomTemplate>> = vec![BTreeSet::new(); d];
    for (k, axioms) in evidences.iter().enumerate() {
        for &h in &lay.hosts[k] {
            holds[h].extend(axioms.iter().cloned());
        }
    }
    // decoys: each axiom of a multi-axiom evidence also holds alone on
    // domains outside the hosts, adding at least two transfers whose effect
    // differs in sign and none whose effect agrees
    for (k, axioms) in evidences.iter().enumerate() {
        if axioms.len() < 2 {
            continue;
        }
        let sign = cfg.planted[k].effect > 0.0;
        let mut used: BTreeSet<usize> = lay.hosts[k].iter().copied().collect();
        for a in axioms {
            let mut placed: BTreeSet<usize> = lay.hosts[k].iter().copied().collect();
            let mut added = 0;
            let mut candidates: Vec<(usize, usize)> = all_pairs.clone();
            rng.shuffle(&mut candidates);
            for (x, y) in candidates {
                if added >= 2 {
                    break;
                }
                if used.contains(&x) || used.contains(&y) {
                    continue;
                }
                let mut trial = placed.clone();
                trial.insert(x);
                trial.insert(y);
                let gained: Vec<f64> = all_pairs
                    .iter()
                    .filter(|(s, t)| {
                        trial.contains(s)
                            && trial.contains(t)
                            && !(placed.contains(s) && placed.contains(t))
                    })
                    .map(|&(s, t)| effect_of(s, t))
                    .collect();
                if gained.iter().any(|&e| e != 0.0 && (e > 0.0) == sign) {
                    continue;
                }
                added += gained.len();
                placed = trial;
            }
            if added < 2 {
                return None;
            }
            for &x in placed.difference(&lay.hosts[k].iter().copied().collect()) {
                used.insert(x);
                holds[x].insert(a.clone());
            }
        }
    }

    Some(holds)
}

/// Builds a scenario; a pure function of `cfg` and `seed`.
pub fn generate_scenario(cfg: &ScenarioConfig, seed: u64) -> Result<SynthScenario, SynthError> {
    let sizes = validate(cfg)?;
    let mut rng = Rng::new(seed, 0);
    let d = cfg.domains;

    let ids: Vec<Name> = (0..d).map(|i| name(&format!("D{i:02}"))).collect();
    let sigs: Vec<DomainSignature> = (0..d)
        .map(|i| {
            DomainSignature::new(
                ids[i].clone(),
                cfg.roles.iter().map(|r| (r.clone(), individual(r, i))),
            )
            .map_err(|e| infeasible(format!("{e}")))
        })
        .collect::<Result<_, _>>()?;

    let mut next_axiom = 0;
    let evidences: Vec<Vec<AxiomTemplate>> = cfg
        .planted
        .iter()
        .map(|p| {
            let axioms = (next_axiom..next_axiom + p.axioms)
                .map(|i| planted_axiom(cfg, i))
                .collect();
            next_axiom += p.axioms;
            axioms
        })
        .collect();
    let planted_concepts = next_axiom.min(cfg.concepts);
    let planted_properties = next_axiom.saturating_sub(cfg.concepts);

    let mut attempt = 0;
    let (lay, holds) = loop {
        let lay = layout(cfg, &sizes, &mut rng)?;
        if let Some(holds) = plant(cfg, &evidences, &lay, &mut rng) {
            break (lay, holds);
        }
        attempt += 1;
        if attempt == MAX_ATTEMPTS {
            return Err(infeasible("no room for decoys of a multi-axiom evidence"));
        }
    };
    let effect_of = |a: usize, b: usize| -> f64 {
        (0..cfg.planted.len())
            .filter(|&k| lay.hosts[k].contains(&a) && lay.hosts[k].contains(&b))
            .map(|k| cfg.planted[k].effect)
            .sum()
    };
    let all_pairs: Vec<(usize, usize)> = lay.groups.iter().flatten().copied().collect();

    // background: role type facts, random class and property facts, and
    // disjoint subclass pairs so no superclass becomes near-universal
    let bg_concepts: Vec<usize> = (planted_concepts..cfg.concepts).collect();
    let bg_properties: Vec<usize> = (planted_properties..cfg.properties).collect();
    let mut parent: Vec<Option<usize>> = vec![None; cfg.concepts];
    for pair in bg_concepts.chunks(2) {
        if let [sub, sup] = *pair {
            if rng.uniform() < 0.5 {
                parent[sub] = Some(sup);
            }
        }
    }
    let tbox: Vec<Axiom> = parent
        .iter()
        .enumerate()
        .filter_map(|(sub, sup)| {
            sup.map(|sup| Statement::SubClassOf {
                sub: concept(sub),
                sup: concept(sup),
            })
        })
        .collect();
    let nr = cfg.roles.len();
    // classes[d][r], props[d][r][p]
    let mut classes: Vec<Vec<BTreeSet<usize>>> = vec![vec![BTreeSet::new(); nr]; d];
    let mut props: Vec<Vec<Vec<Option<usize>>>> = vec![vec![vec![None; cfg.properties]; nr]; d];
    for i in 0..d {
        for r in 0..nr {
            for &c in &bg_concepts {
                if rng.uniform() < cfg.density {
                    classes[i][r].insert(c);
                }
            }
            for &p in &bg_properties {
                if cfg.values > 0 && rng.uniform() < cfg.density {
                    props[i][r][p] = Some(rng.below(cfg.values));
                }
            }
        }
    }
    // guard: no background template may hold on every endpoint of a planted
    // group, or it would co-exist wherever the evidence does
    let holds_class = |cls: &BTreeSet<usize>, c: usize| {
        cls.contains(&c) || cls.iter().any(|&s| parent[s] == Some(c))
    };
    for group in lay.groups.iter().take(evidences.len()) {
        let ends: Vec<usize> = group
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for r in 0..nr {
            for &c in &bg_concepts {
                if ends.iter().all(|&e| holds_class(&classes[e][r], c)) {
                    let g = ends[rng.below(ends.len())];
                    classes[g][r].retain(|&s| s != c && parent[s] != Some(c));
                }
            }
            for &p in &bg_properties {
                let first = props[ends[0]][r][p];
                if first.is_some() && ends.iter().all(|&e| props[e][r][p] == first) {
                    let g = ends[rng.below(ends.len())];
                    props[g][r][p] = None;
                }
            }
        }
    }

    // and no background template may correlate with the noise-free planted
    // signal on its own
    let signal: Vec<f64> = all_pairs.iter().map(|&(a, b)| effect_of(a, b)).collect();
    let correlated = |on: &dyn Fn(usize) -> bool| -> bool {
        let ind: Vec<bool> = all_pairs.iter().map(|&(a, b)| on(a) && on(b)).collect();
        correlate(&ind, &signal).is_ok_and(|r| libm::fabs(r.r) >= BACKGROUND_CORRELATION_CAP)
    };
    for r in 0..nr {
        for &c in &bg_concepts {
            while correlated(&|dom| holds_class(&classes[dom][r], c)) {
                let holders: Vec<usize> =
                    (0..d).filter(|&x| holds_class(&classes[x][r], c)).collect();
                let g = holders[rng.below(holders.len())];
                classes[g][r].retain(|&s| s != c && parent[s] != Some(c));
            }
        }
        for &p in &bg_properties {
            for v in 0..cfg.values {
                while correlated(&|dom| props[dom][r][p] == Some(v)) {
                    let holders: Vec<usize> =
                        (0..d).filter(|&x| props[x][r][p] == Some(v)).collect();
                    let g = holders[rng.below(holders.len())];
                    props[g][r][p] = None;
                }
            }
        }
    }

    let mut domains = Vec::with_capacity(d);
    for i in 0..d {
        let mut o = DomainOntology::new(ids[i].clone());
        o.extend(tbox.iter().cloned());
        for a in &holds[i] {
            o.insert(ground_template(a, &sigs[i]).map_err(|e| infeasible(format!("{e}")))?);
        }
        for (r, role) in cfg.roles.iter().enumerate() {
            let ind = individual(role, i);
            o.insert(Statement::ClassAssertion {
                concept: role_concept(role),
                individual: ind.clone(),
            });
            for &c in &classes[i][r] {
                o.insert(Statement::ClassAssertion {
                    concept: concept(c),
                    individual: ind.clone(),
                });
            }
            for (p, v) in props[i][r].iter().enumerate() {
                if let Some(v) = v {
                    o.insert(Statement::PropertyAssertion {
                        property: property(p),
                        subject: ind.clone(),
                        object: Object::Node(value(*v)),
                    });
                }
            }
        }
        domains.push((o, sigs[i].clone()));
    }

    let mut pairs: Vec<(usize, usize)> = lay.groups.into_iter().flatten().collect();
    rng.shuffle(&mut pairs);

    let mut noise = Rng::new(seed, 1);
    let mut transfers = Vec::with_capacity(pairs.len());
    let mut indicators: Vec<Vec<bool>> = vec![Vec::with_capacity(pairs.len()); evidences.len()];
    for &(a, b) in &pairs {
        let mut score = cfg.base_score;
        for (k, p) in cfg.planted.iter().enumerate() {
            let on = lay.hosts[k].contains(&a) && lay.hosts[k].contains(&b);
            if on {
                score += p.effect;
            }
            indicators[k].push(on);
        }
        score += cfg.noise_sigma * noise.gaussian();
        transfers.push(
            TransferRecord::new(ids[a].clone(), ids[b].clone(), cfg.feature.clone(), score)
                .map_err(|e| infeasible(format!("{e}")))?,
        );
    }

    let planted = evidences
        .into_iter()
        .zip(indicators)
        .enumerate()
        .map(|(k, (mut axioms, indicator))| {
            axioms.sort_by_key(sort_key);
            PlantedEvidence {
                axioms,
                polarity: if cfg.planted[k].effect > 0.0 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                },
                effect: cfg.planted[k].effect,
                hosts: lay.hosts[k].iter().map(|&h| ids[h].clone()).collect(),
                indicator,
            }
        })
        .collect();

    Ok(SynthScenario {
        domains,
        transfers,
        planted,
        noise_sigma: cfg.noise_sigma,
        seed,
    })
}
