//! Per-node trace dumps in the pinned JSON layout.
//!
//! Key names are reproduced exactly: "index", "depth", "content",
//! "log p(S|q)", "log p(S)", "PMI" — values rounded to two decimals in the
//! standard dump. A parallel precise dump keeps full float precision.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{ReasoningChain, SearchTree};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceNode {
    pub index: usize,
    pub depth: usize,
    pub content: String,
    #[serde(rename = "log p(S|q)")]
    pub logp_conditional: f64,
    #[serde(rename = "log p(S)")]
    pub logp_marginal: f64,
    #[serde(rename = "PMI")]
    pub pmi: f64,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("trace parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("trace I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Trace records for a tree: path order when a chain is given, otherwise
/// global creation order.
pub fn trace_from_tree(tree: &SearchTree, chain: Option<&ReasoningChain>) -> Vec<TraceNode> {
    let indices: Vec<usize> = match chain {
        Some(c) => c.node_indices.clone(),
        None => (0..tree.nodes.len()).collect(),
    };
    indices
        .into_iter()
        .map(|i| {
            let n = &tree.nodes[i];
            TraceNode {
                index: n.index,
                depth: n.depth,
                content: n.step.text.clone(),
                logp_conditional: n.score.logp_conditional,
                logp_marginal: n.score.logp_marginal,
                pmi: n.score.pmi_delta,
            }
        })
        .collect()
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization is infallible")
}

/// Render the standard dump: two-decimal values, stable field order.
pub fn render_trace(nodes: &[TraceNode]) -> String {
    if nodes.is_empty() {
        return "[]\n".to_string();
    }
    let mut out = String::from("[\n");
    for (i, n) in nodes.iter().enumerate() {
        out.push_str("  {\n");
        out.push_str(&format!("    \"index\": {},\n", n.index));
        out.push_str(&format!("    \"depth\": {},\n", n.depth));
        out.push_str(&format!("    \"content\": {},\n", json_string(&n.content)));
        out.push_str(&format!("    \"log p(S|q)\": {:.2},\n", n.logp_conditional));
        out.push_str(&format!("    \"log p(S)\": {:.2},\n", n.logp_marginal));
        out.push_str(&format!("    \"PMI\": {:.2}\n", n.pmi));
        out.push_str(if i + 1 == nodes.len() { "  }\n" } else { "  },\n" });
    }
    out.push_str("]\n");
    out
}

/// Full-precision dump (same keys, serde formatting).
pub fn render_trace_precise(nodes: &[TraceNode]) -> Result<String, TraceError> {
    let mut s = serde_json::to_string_pretty(nodes)?;
    s.push('\n');
    Ok(s)
}

pub fn parse_trace(content: &str) -> Result<Vec<TraceNode>, TraceError> {
    Ok(serde_json::from_str(content)?)
}

pub fn dump_trace(
    tree: &SearchTree,
    chain: Option<&ReasoningChain>,
    path: &Path,
) -> Result<(), TraceError> {
    let nodes = trace_from_tree(tree, chain);
    std::fs::write(path, render_trace(&nodes))?;
    Ok(())
}
