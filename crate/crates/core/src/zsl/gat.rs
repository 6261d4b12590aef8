//! Single-head graph attention.
//!
//! For node `i` with closed neighborhood `N(i)` (graph neighbors and `i`):
//!
//! ```text
//! z_i  = W h_i
//! e_ij = LeakyReLU(a[..F'] · z_i + a[F'..] · z_j)
//! α_ij = exp(e_ij - max_k e_ik) / Σ_k exp(e_ik - max_k e_ik)
//! h'_i = Σ_j α_ij z_j
//! ```
//!
//! Sums over neighbors add their terms in ascending value order, so results
//! do not depend on how nodes are named or ordered.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{ClassGraph, ZslError};

/// Node id → feature vector.
pub type Features = BTreeMap<String, Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct GatParams {
    /// `F' × F`, row-major.
    pub weight: Vec<Vec<f64>>,
    /// Length `2F'`.
    pub attention: Vec<f64>,
    pub slope: f64,
}

impl GatParams {
    /// Entries uniform on `[-1/sqrt(F), 1/sqrt(F))`, weight first in row-major
    /// order, then the attention vector.
    pub fn random(f_in: usize, f_out: usize, slope: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bound = if f_in == 0 {
            0.0
        } else {
            1.0 / libm::sqrt(f_in as f64)
        };
        let mut draw = || {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            (2.0 * u - 1.0) * bound
        };
        let weight = (0..f_out)
            .map(|_| (0..f_in).map(|_| draw()).collect())
            .collect();
        let attention = (0..2 * f_out).map(|_| draw()).collect();
        GatParams {
            weight,
            attention,
            slope,
        }
    }

    pub fn identity(dim: usize, slope: f64) -> Self {
        let weight = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        GatParams {
            weight,
            attention: vec![1.0; 2 * dim],
            slope,
        }
    }

    pub fn f_in(&self) -> usize {
        self.weight.first().map_or(0, Vec::len)
    }

    pub fn f_out(&self) -> usize {
        self.weight.len()
    }

    fn check(&self, f_in: usize) -> Result<(), ZslError> {
        let f_out = self.f_out();
        if let Some(row) = self.weight.iter().find(|r| r.len() != f_in) {
            return Err(ZslError::DimensionMismatch {
                what: "weight row".into(),
                expected: f_in,
                got: row.len(),
            });
        }
        if self.attention.len() != 2 * f_out {
            return Err(ZslError::DimensionMismatch {
                what: "attention vector".into(),
                expected: 2 * f_out,
                got: self.attention.len(),
            });
        }
        Ok(())
    }
}

/// Per node, attention over its closed neighborhood.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AttentionMap {
    rows: BTreeMap<String, BTreeMap<String, f64>>,
}

impl AttentionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, node: &str, neighbor: &str, weight: f64) {
        self.rows
            .entry(node.to_string())
            .or_default()
            .insert(neighbor.to_string(), weight);
    }

    pub fn row(&self, node: &str) -> Option<&BTreeMap<String, f64>> {
        self.rows.get(node)
    }

    pub fn get(&self, node: &str, neighbor: &str) -> Option<f64> {
        self.rows.get(node)?.get(neighbor).copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &BTreeMap<String, f64>)> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Errors on the first node not in the graph.
    pub fn check_nodes(&self, g: &ClassGraph) -> Result<(), ZslError> {
        for (i, row) in &self.rows {
            for id in core::iter::once(i).chain(row.keys()) {
                if !g.contains(id) {
                    return Err(ZslError::UnknownNode(id.clone()));
                }
            }
        }
        Ok(())
    }
}

fn sorted_sum(mut terms: Vec<f64>) -> f64 {
    terms.sort_by(f64::total_cmp);
    terms.into_iter().sum()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn leaky_relu(x: f64, slope: f64) -> f64 {
    if x >= 0.0 {
        x
    } else {
        slope * x
    }
}

/// Max-subtracted softmax, in the order given.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|e| libm::exp(e - max)).collect();
    let total = sorted_sum(exps.clone());
    exps.into_iter().map(|x| x / total).collect()
}

/// One attention layer over the graph's features.
pub fn gat_attention(
    g: &ClassGraph,
    params: &GatParams,
) -> Result<(AttentionMap, Features), ZslError> {
    let (features, dim) = g.features().ok_or(ZslError::NoFeatures)?;
    gat_layer(g, features, dim, params)
}

fn gat_layer(
    g: &ClassGraph,
    features: &Features,
    dim: usize,
    params: &GatParams,
) -> Result<(AttentionMap, Features), ZslError> {
    params.check(dim)?;
    let f_out = params.f_out();
    let (a_src, a_dst) = params.attention.split_at(f_out);
    let z: BTreeMap<&str, Vec<f64>> = features
        .iter()
        .map(|(id, h)| {
            (
                id.as_str(),
                params.weight.iter().map(|row| dot(row, h)).collect(),
            )
        })
        .collect();
    let src: BTreeMap<&str, f64> = z.iter().map(|(&id, zi)| (id, dot(a_src, zi))).collect();
    let dst: BTreeMap<&str, f64> = z.iter().map(|(&id, zi)| (id, dot(a_dst, zi))).collect();

    let mut att = AttentionMap::new();
    let mut updated = BTreeMap::new();
    for (i, mut nbrs) in g.neighbors() {
        nbrs.insert(i);
        let ids: Vec<&str> = nbrs.into_iter().collect();
        let logits: Vec<f64> = ids
            .iter()
            .map(|j| leaky_relu(src[i] + dst[j], params.slope))
            .collect();
        let alpha = softmax(&logits);
        let h: Vec<f64> = (0..f_out)
            .map(|d| sorted_sum(ids.iter().zip(&alpha).map(|(j, a)| a * z[j][d]).collect()))
            .collect();
        for (j, a) in ids.iter().zip(&alpha) {
            att.insert(i, j, *a);
        }
        updated.insert(i.to_string(), h);
    }
    Ok((att, updated))
}

/// Applies the layers in turn, each on the previous layer's output, and
/// returns every layer's attention with the final features.
pub fn gat_stack(
    g: &ClassGraph,
    layers: &[GatParams],
) -> Result<(Vec<AttentionMap>, Features), ZslError> {
    let (features, dim) = g.features().ok_or(ZslError::NoFeatures)?;
    let mut h = features.clone();
    let mut dim = dim;
    let mut maps = Vec::with_capacity(layers.len());
    for p in layers {
        let (att, next) = gat_layer(g, &h, dim, p)?;
        maps.push(att);
        h = next;
        dim = p.f_out();
    }
    Ok((maps, h))
}

/// `hops`-step attention: the weight of `j` for `i` is the sum over walks
/// of length `hops` of the product of attentions along the walk.
pub fn multi_hop(att: &AttentionMap, hops: usize) -> AttentionMap {
    if hops <= 1 {
        return att.clone();
    }
    let mut current = att.clone();
    for _ in 1..hops {
        let mut next = AttentionMap::new();
        for (i, row) in current.rows() {
            let mut terms: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for (k, a_ik) in row {
                for (j, a_kj) in att.row(k).into_iter().flatten() {
                    terms.entry(j.as_str()).or_default().push(a_ik * a_kj);
                }
            }
            for (j, t) in terms {
                next.insert(i, j, sorted_sum(t));
            }
        }
        current = next;
    }
    current
}

/// Parses `unseen seen weight` lines. Weights are kept as given.
pub fn parse_attention_file(text: &str) -> Result<AttentionMap, ZslError> {
    let mut att = AttentionMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: String| ZslError::Parse {
            line: i + 1,
            message,
        };
        let [u, s, w] = words.as_slice() else {
            return Err(bad("expected `unseen seen weight`".into()));
        };
        let w: f64 = w.parse().map_err(|_| bad(format!("bad weight `{w}`")))?;
        if !w.is_finite() || w < 0.0 {
            return Err(bad(format!("weight `{w}` must be finite and non-negative")));
        }
        att.insert(u, s, w);
    }
    Ok(att)
}

/// Parameter file:
///
/// ```text
/// # comment
/// slope 0.2
/// W <rows> <cols>
/// <row 1 values>
/// ...
/// a <length>
/// <values>
/// ```
pub fn parse_params(text: &str) -> Result<GatParams, ZslError> {
    let mut tokens: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        tokens.extend(line.split_whitespace().map(|w| (i + 1, w)));
    }
    let mut it = tokens.into_iter().peekable();
    let mut slope = 0.2;
    let mut weight = None;
    let mut attention = None;
    let number = |(line, w): (usize, &str)| -> Result<f64, ZslError> {
        w.parse::<f64>().map_err(|_| ZslError::Parse {
            line,
            message: format!("expected a number, found `{w}`"),
        })
    };
    let count = |(line, w): (usize, &str)| -> Result<usize, ZslError> {
        w.parse::<usize>().map_err(|_| ZslError::Parse {
            line,
            message: format!("expected a count, found `{w}`"),
        })
    };
    let eof = || ZslError::Parse {
        line: 0,
        message: "unexpected end of parameter file".into(),
    };
    while let Some((line, key)) = it.next() {
        match key {
            "slope" => slope = number(it.next().ok_or_else(eof)?)?,
            "W" => {
                let rows = count(it.next().ok_or_else(eof)?)?;
                let cols = count(it.next().ok_or_else(eof)?)?;
                let mut w = Vec::with_capacity(rows);
                for _ in 0..rows {
                    let mut row = Vec::with_capacity(cols);
                    for _ in 0..cols {
                        row.push(number(it.next().ok_or_else(eof)?)?);
                    }
                    w.push(row);
                }
                weight = Some(w);
            }
            "a" => {
                let len = count(it.next().ok_or_else(eof)?)?;
                let mut a = Vec::with_capacity(len);
                for _ in 0..len {
                    a.push(number(it.next().ok_or_else(eof)?)?);
                }
                attention = Some(a);
            }
            other => {
                return Err(ZslError::Parse {
                    line,
                    message: format!("unknown section `{other}`"),
                })
            }
        }
    }
    let weight = weight.ok_or_else(|| ZslError::Parse {
        line: 0,
        message: "missing W section".into(),
    })?;
    let attention = attention.ok_or_else(|| ZslError::Parse {
        line: 0,
        message: "missing a section".into(),
    })?;
    let p = GatParams {
        weight,
        attention,
        slope,
    };
    p.check(p.f_in())?;
    Ok(p)
}

pub fn serialize_params(p: &GatParams) -> String {
    let mut out = format!("slope {}\nW {} {}\n", p.slope, p.f_out(), p.f_in());
    for row in &p.weight {
        let cells: Vec<String> = row.iter().map(|x| format!("{x}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out.push_str(&format!("a {}\n", p.attention.len()));
    let cells: Vec<String> = p.attention.iter().map(|x| format!("{x}")).collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
    out
}
