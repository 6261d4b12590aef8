use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::ZslError;
use crate::enrich::EntityLookup;
use crate::rdf::{is_absolute_iri, local_name, RdfTerm, TripleSet, RDFS_SUBCLASS_OF};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeKind {
    Class,
    Anonymous { property: String, value: String },
}

/// Class hierarchy with anonymous property nodes.
///
/// Nodes are kept in id order; indices are positions in that order and
/// change when nodes are added.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClassGraph {
    nodes: BTreeMap<String, NodeKind>,
    /// child → parents
    parents: BTreeMap<String, BTreeSet<String>>,
    /// class → anonymous nodes
    properties: BTreeMap<String, BTreeSet<String>>,
    seen: BTreeSet<String>,
    unseen: BTreeSet<String>,
    features: BTreeMap<String, Vec<f64>>,
    dim: Option<usize>,
}

/// Id of the anonymous node for a property/value pair.
pub fn anonymous_id(property: &str, value: &str) -> String {
    format!("[{property}={value}]")
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureSource {
    Table(BTreeMap<String, Vec<f64>>),
    /// Uniform on [-1, 1), drawn per node in id order.
    Random {
        dim: usize,
        seed: u64,
    },
}

impl ClassGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn add_node(&mut self, id: &str, kind: NodeKind) -> Result<(), ZslError> {
        match self.nodes.get(id) {
            Some(k) if *k != kind => Err(ZslError::NodeIdClash(id.to_string())),
            Some(_) => Ok(()),
            None => {
                self.nodes.insert(id.to_string(), kind);
                self.features.clear();
                self.dim = None;
                Ok(())
            }
        }
    }

    pub fn add_class(&mut self, id: &str) -> Result<(), ZslError> {
        self.add_node(id, NodeKind::Class)
    }

    pub fn add_subclass(&mut self, child: &str, parent: &str) -> Result<(), ZslError> {
        self.add_class(child)?;
        self.add_class(parent)?;
        if child != parent {
            self.parents
                .entry(child.to_string())
                .or_default()
                .insert(parent.to_string());
        }
        Ok(())
    }

    /// Links a class to the anonymous node of `(property, value)`, creating
    /// either as needed.
    pub fn add_property(
        &mut self,
        class: &str,
        property: &str,
        value: &str,
    ) -> Result<(), ZslError> {
        self.add_class(class)?;
        let anon = anonymous_id(property, value);
        self.add_node(
            &anon,
            NodeKind::Anonymous {
                property: property.to_string(),
                value: value.to_string(),
            },
        )?;
        self.properties
            .entry(class.to_string())
            .or_default()
            .insert(anon);
        Ok(())
    }

    fn require_class(&self, id: &str) -> Result<(), ZslError> {
        match self.nodes.get(id) {
            Some(NodeKind::Class) => Ok(()),
            _ => Err(ZslError::UnknownNode(id.to_string())),
        }
    }

    pub fn mark_seen(&mut self, id: &str) -> Result<(), ZslError> {
        self.require_class(id)?;
        if self.unseen.contains(id) {
            return Err(ZslError::SeenUnseenOverlap(id.to_string()));
        }
        self.seen.insert(id.to_string());
        Ok(())
    }

    pub fn mark_unseen(&mut self, id: &str) -> Result<(), ZslError> {
        self.require_class(id)?;
        if self.seen.contains(id) {
            return Err(ZslError::SeenUnseenOverlap(id.to_string()));
        }
        self.unseen.insert(id.to_string());
        Ok(())
    }

    pub fn set_features(&mut self, src: &FeatureSource) -> Result<(), ZslError> {
        let mut features = BTreeMap::new();
        let dim = match src {
            FeatureSource::Table(table) => {
                let mut dim = None;
                for id in self.nodes.keys() {
                    let v = table
                        .get(id)
                        .ok_or_else(|| ZslError::MissingFeatures(id.clone()))?;
                    let d = *dim.get_or_insert(v.len());
                    if v.len() != d {
                        return Err(ZslError::DimensionMismatch {
                            what: id.clone(),
                            expected: d,
                            got: v.len(),
                        });
                    }
                    features.insert(id.clone(), v.clone());
                }
                dim.unwrap_or(0)
            }
            FeatureSource::Random { dim, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for id in self.nodes.keys() {
                    let v = (0..*dim)
                        .map(|_| {
                            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                            2.0 * u - 1.0
                        })
                        .collect();
                    features.insert(id.clone(), v);
                }
                *dim
            }
        };
        self.features = features;
        self.dim = Some(dim);
        Ok(())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn kind(&self, id: &str) -> Option<&NodeKind> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &NodeKind)> {
        self.nodes.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn seen(&self) -> &BTreeSet<String> {
        &self.seen
    }

    pub fn unseen(&self) -> &BTreeSet<String> {
        &self.unseen
    }

    pub fn parents(&self, id: &str) -> impl Iterator<Item = &str> {
        self.parents
            .get(id)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    /// Anonymous nodes linked to a class.
    pub fn anonymous_of(&self, id: &str) -> impl Iterator<Item = &str> {
        self.properties
            .get(id)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    pub fn subclass_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.parents
            .iter()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (c.as_str(), p.as_str())))
    }

    pub fn property_edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.properties
            .iter()
            .flat_map(|(c, ps)| ps.iter().map(move |p| (c.as_str(), p.as_str())))
    }

    pub fn anonymous_count(&self) -> usize {
        self.nodes
            .values()
            .filter(|k| matches!(k, NodeKind::Anonymous { .. }))
            .count()
    }

    /// Undirected neighbors, self excluded.
    pub fn neighbors(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = self
            .nodes
            .keys()
            .map(|k| (k.as_str(), BTreeSet::new()))
            .collect();
        for (a, b) in self.subclass_edges().chain(self.property_edges()) {
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        adj
    }

    pub fn features(&self) -> Option<(&BTreeMap<String, Vec<f64>>, usize)> {
        self.dim.map(|d| (&self.features, d))
    }

    /// Copy with every node id passed through a bijection. Fails when the
    /// map is not injective on the node ids.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<ClassGraph, ZslError> {
        let mut out = ClassGraph::new();
        let mut images = BTreeSet::new();
        for (id, kind) in &self.nodes {
            let new = f(id);
            if !images.insert(new.clone()) {
                return Err(ZslError::NodeIdClash(new));
            }
            out.nodes.insert(new, kind.clone());
        }
        let map_set = |s: &BTreeSet<String>| s.iter().map(|x| f(x)).collect::<BTreeSet<_>>();
        out.parents = self
            .parents
            .iter()
            .map(|(k, v)| (f(k), map_set(v)))
            .collect();
        out.properties = self
            .properties
            .iter()
            .map(|(k, v)| (f(k), map_set(v)))
            .collect();
        out.seen = map_set(&self.seen);
        out.unseen = map_set(&self.unseen);
        out.features = self
            .features
            .iter()
            .map(|(k, v)| (f(k), v.clone()))
            .collect();
        out.dim = self.dim;
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphConfig {
    pub subclass_predicate: String,
    pub property_predicates: Vec<String>,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            subclass_predicate: RDFS_SUBCLASS_OF.to_string(),
            property_predicates: Vec::new(),
        }
    }
}

fn term_label(t: &RdfTerm) -> String {
    match t {
        RdfTerm::Iri(i) => local_name(i).to_string(),
        RdfTerm::Literal { lexical, .. } => lexical.clone(),
    }
}

/// Graph node ids for entity IRIs: the local name, or the full IRI when two
/// entities share a local name.
struct Ids<'a> {
    by_iri: BTreeMap<&'a str, String>,
    owner: BTreeMap<String, &'a str>,
}

impl<'a> Ids<'a> {
    fn id(&mut self, iri: &'a str) -> String {
        if let Some(id) = self.by_iri.get(iri) {
            return id.clone();
        }
        let local = local_name(iri);
        let id = match self.owner.get(local) {
            Some(other) if *other != iri => iri.to_string(),
            _ => local.to_string(),
        };
        self.owner.insert(id.clone(), iri);
        self.by_iri.insert(iri, id.clone());
        id
    }
}

/// Resolves a class given as an absolute IRI or as a label.
fn resolve(spec: &str, lookup: &dyn EntityLookup) -> Option<String> {
    if is_absolute_iri(spec) {
        Some(spec.to_string())
    } else {
        lookup.lookup(spec).into_iter().next()
    }
}

/// Builds the class graph of the seen and unseen classes and all their
/// ancestors. Seen classes that match nothing are dropped with a warning;
/// an unmatched unseen class is an error.
pub fn build_class_graph(
    kg: &TripleSet,
    cfg: &GraphConfig,
    seen: &[String],
    unseen: &[String],
    lookup: &dyn EntityLookup,
    features: &FeatureSource,
) -> Result<(ClassGraph, Vec<String>), ZslError> {
    let mut warnings = Vec::new();
    let mut ids = Ids {
        by_iri: BTreeMap::new(),
        owner: BTreeMap::new(),
    };
    let mut resolved_unseen = Vec::new();
    for u in unseen {
        let iri = resolve(u, lookup).ok_or_else(|| ZslError::UnmatchedUnseen(u.clone()))?;
        resolved_unseen.push(iri);
    }
    let mut resolved_seen = Vec::new();
    for s in seen {
        match resolve(s, lookup) {
            Some(iri) => resolved_seen.push(iri),
            None => warnings.push(format!("seen class `{s}` matches no entity; dropped")),
        }
    }
    // resolve ids in a fixed order so naming does not depend on list order
    let mut all: BTreeSet<String> = resolved_seen
        .iter()
        .chain(&resolved_unseen)
        .cloned()
        .collect();
    let mut pending: Vec<String> = all.iter().cloned().collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    while let Some(c) = pending.pop() {
        for t in kg.with_subject(&c) {
            if t.predicate != cfg.subclass_predicate {
                continue;
            }
            if let RdfTerm::Iri(p) = &t.object {
                edges.push((c.clone(), p.clone()));
                if all.insert(p.clone()) {
                    pending.push(p.clone());
                }
            }
        }
    }
    let mut g = ClassGraph::new();
    let id_of: BTreeMap<String, String> = {
        let iris: Vec<&String> = all.iter().collect();
        iris.into_iter().map(|i| (i.clone(), ids.id(i))).collect()
    };
    for iri in &all {
        g.add_class(&id_of[iri])?;
    }
    for (c, p) in &edges {
        g.add_subclass(&id_of[c], &id_of[p])?;
    }
    for iri in &all {
        for t in kg.with_subject(iri) {
            if cfg.property_predicates.contains(&t.predicate) {
                g.add_property(
                    &id_of[iri],
                    local_name(&t.predicate),
                    &term_label(&t.object),
                )?;
            }
        }
    }
    for iri in &resolved_unseen {
        g.mark_unseen(&id_of[iri])?;
    }
    for iri in &resolved_seen {
        g.mark_seen(&id_of[iri])?;
    }
    g.set_features(features)?;
    Ok((g, warnings))
}

/// Parses a feature table: one `node v1 v2 ...` line per node.
pub fn parse_feature_table(text: &str) -> Result<BTreeMap<String, Vec<f64>>, ZslError> {
    let mut out = BTreeMap::new();
    let mut dim = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut words = line.split_whitespace();
        let id = words.next().unwrap_or_default();
        let v: Vec<f64> = words
            .map(|w| w.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ZslError::Parse {
                line: i + 1,
                message: format!("bad number in features of `{id}`"),
            })?;
        let d = *dim.get_or_insert(v.len());
        if v.len() != d {
            return Err(ZslError::DimensionMismatch {
                what: id.to_string(),
                expected: d,
                got: v.len(),
            });
        }
        out.insert(id.to_string(), v);
    }
    Ok(out)
}
