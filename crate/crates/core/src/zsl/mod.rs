//! Zero-shot learning justification.
//!
//! Seen and unseen classes sit in a class graph built from a triple dump:
//! subclass edges up to every ancestor, plus one anonymous node per
//! `(property, value)` pair linked to each class carrying it. Attention
//! weights toward an unseen class, computed by a graph attention layer or
//! supplied directly, pick its impressive seen classes; common ancestors and
//! shared properties then justify each pick.

use alloc::string::String;

use thiserror::Error;

mod gat;
mod graph;
mod justify;

pub use gat::{
    gat_attention, gat_stack, multi_hop, parse_attention_file, parse_params, serialize_params,
    softmax, AttentionMap, Features, GatParams,
};
pub use graph::{
    anonymous_id, build_class_graph, parse_feature_table, ClassGraph, FeatureSource, GraphConfig,
    NodeKind,
};
pub use justify::{
    common_ancestors, justify, select_impressive, shared_properties, Justification,
    JustificationTemplates,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZslError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unseen class `{0}` matches no entity")]
    UnmatchedUnseen(String),
    #[error("class `{0}` is both seen and unseen")]
    SeenUnseenOverlap(String),
    #[error("`{0}` is not an unseen class of the graph")]
    NotUnseen(String),
    #[error("no attention row for `{0}`")]
    NoAttentionRow(String),
    #[error("node id `{0}` names two different nodes")]
    NodeIdClash(String),
    #[error("no features for node `{0}`")]
    MissingFeatures(String),
    #[error("graph has no features")]
    NoFeatures,
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// How impressive classes read attention: straight from the unseen node's
/// own row, or from `hops`-step products along paths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AttentionMode {
    #[default]
    Direct,
    MultiHop {
        hops: usize,
    },
}

impl AttentionMode {
    pub fn apply(self, att: &AttentionMap) -> AttentionMap {
        match self {
            AttentionMode::Direct => att.clone(),
            AttentionMode::MultiHop { hops } => multi_hop(att, hops),
        }
    }
}
