use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{AttentionMap, ClassGraph, NodeKind, ZslError};

/// Top `k` seen classes of the unseen node's attention row, by weight
/// descending and id ascending on ties.
pub fn select_impressive(
    att: &AttentionMap,
    unseen: &str,
    seen: &BTreeSet<String>,
    k: usize,
) -> Result<Vec<(String, f64)>, ZslError> {
    let row = att
        .row(unseen)
        .ok_or_else(|| ZslError::NoAttentionRow(unseen.to_string()))?;
    let mut ranked: Vec<(String, f64)> = row
        .iter()
        .filter(|(j, _)| seen.contains(*j))
        .map(|(j, w)| (j.clone(), *w))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    Ok(ranked)
}

/// Hop distance to every ancestor, the node itself at 0.
fn ancestor_distances<'a>(g: &'a ClassGraph, start: &'a str) -> BTreeMap<&'a str, usize> {
    let mut dist = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let d = dist[c];
        for p in g.parents(c) {
            if !dist.contains_key(p) {
                dist.insert(p, d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Shared ancestors (each node counting as its own ancestor) minimizing the
/// larger of the two hop distances; all ties.
pub fn common_ancestors(g: &ClassGraph, a: &str, b: &str) -> BTreeSet<String> {
    let da = ancestor_distances(g, a);
    let db = ancestor_distances(g, b);
    let shared: Vec<(&str, usize)> = da
        .iter()
        .filter_map(|(n, x)| db.get(n).map(|y| (*n, (*x).max(*y))))
        .collect();
    let Some(best) = shared.iter().map(|(_, d)| *d).min() else {
        return BTreeSet::new();
    };
    shared
        .into_iter()
        .filter(|(_, d)| *d == best)
        .map(|(n, _)| n.to_string())
        .collect()
}

/// `(property, value)` pairs of the anonymous nodes linked to both classes,
/// sorted.
pub fn shared_properties(g: &ClassGraph, a: &str, b: &str) -> Vec<(String, String)> {
    let of_b: BTreeSet<&str> = g.anonymous_of(b).collect();
    let mut out: Vec<(String, String)> = g
        .anonymous_of(a)
        .filter(|n| of_b.contains(n))
        .filter_map(|n| match g.kind(n) {
            Some(NodeKind::Anonymous { property, value }) => {
                Some((property.clone(), value.clone()))
            }
            _ => None,
        })
        .collect();
    out.sort();
    out
}

/// Sentence templates. Placeholders: `{seen}`, `{unseen}`, `{anc}`,
/// `{property}`, `{value}`, `{weight}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JustificationTemplates {
    pub ancestor: String,
    pub property: String,
    pub attention_only: String,
}

impl Default for JustificationTemplates {
    fn default() -> Self {
        JustificationTemplates {
            ancestor: "{seen} and {unseen} share the same ancestor {anc}.".into(),
            property: "{unseen} has the same {property} ({value}) as {seen}.".into(),
            attention_only: "{seen} contributes to {unseen} with attention weight {weight}.".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Justification {
    pub unseen: String,
    pub impressive: Vec<(String, f64)>,
    /// Impressive classes with at least one common ancestor.
    pub hierarchy_evidence: Vec<(String, Vec<String>)>,
    /// Impressive classes with at least one shared property.
    pub property_evidence: Vec<(String, Vec<(String, String)>)>,
    pub rendered: Vec<String>,
}

/// Justifies an unseen class from attention weights: picks the `k`
/// impressive seen classes and explains each through common ancestors and
/// shared properties. One sentence per ancestor set, per shared property,
/// and per impressive class with neither.
pub fn justify(
    g: &ClassGraph,
    att: &AttentionMap,
    unseen: &str,
    k: usize,
    templates: &JustificationTemplates,
) -> Result<Justification, ZslError> {
    if !g.unseen().contains(unseen) {
        return Err(ZslError::NotUnseen(unseen.to_string()));
    }
    att.check_nodes(g)?;
    let impressive = select_impressive(att, unseen, g.seen(), k)?;
    let mut out = Justification {
        unseen: unseen.to_string(),
        impressive: impressive.clone(),
        hierarchy_evidence: Vec::new(),
        property_evidence: Vec::new(),
        rendered: Vec::new(),
    };
    for (seen, weight) in &impressive {
        let base = |t: &str| t.replace("{seen}", seen).replace("{unseen}", unseen);
        let anc: Vec<String> = common_ancestors(g, seen, unseen).into_iter().collect();
        let props = shared_properties(g, seen, unseen);
        if !anc.is_empty() {
            out.rendered
                .push(base(&templates.ancestor).replace("{anc}", &anc.join(", ")));
            out.hierarchy_evidence.push((seen.clone(), anc.clone()));
        }
        for (p, v) in &props {
            out.rendered.push(
                base(&templates.property)
                    .replace("{property}", p)
                    .replace("{value}", v),
            );
        }
        if !props.is_empty() {
            out.property_evidence.push((seen.clone(), props.clone()));
        }
        if anc.is_empty() && props.is_empty() {
            out.rendered
                .push(base(&templates.attention_only).replace("{weight}", &format!("{weight:.4}")));
        }
    }
    Ok(out)
}
