//! Whitespace-separated text edge lists: one `src dst [weight]` per line.
//! Blank lines and lines starting with `#` or `%` are skipped.

use std::path::Path;

use super::{Csr, Graph, NodeId, Weight};
use crate::error::{Error, Result};

pub fn ingest_edge_list(path: impl AsRef<Path>, symmetrize: bool, dedupe: bool) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    parse_edge_list(&text, symmetrize, dedupe)
}

fn parse_field<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    if field.starts_with('-') {
        return Err(Error::Parse {
            line,
            reason: format!("negative {what} {field:?}"),
        });
    }
    field.parse().map_err(|_| Error::Parse {
        line,
        reason: format!("invalid {what} {field:?}"),
    })
}

pub fn parse_edge_list(text: &str, symmetrize: bool, dedupe: bool) -> Result<Graph> {
    let mut edges: Vec<(NodeId, NodeId, Weight)> = Vec::new();
    let mut weighted = None;
    let mut max_id = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse {
                line,
                reason: format!("expected `src dst [weight]`, found {} fields", fields.len()),
            });
        }
        let has_weight = fields.len() == 3;
        match weighted {
            None => weighted = Some(has_weight),
            Some(w) if w != has_weight => {
                return Err(Error::Parse {
                    line,
                    reason: "mixed weighted and unweighted lines".into(),
                })
            }
            _ => {}
        }
        let src: NodeId = parse_field(fields[0], line, "source id")?;
        let dst: NodeId = parse_field(fields[1], line, "destination id")?;
        let weight: Weight = if has_weight { parse_field(fields[2], line, "weight")? } else { 0 };
        max_id = Some(max_id.unwrap_or(0).max(src).max(dst));
        edges.push((src, dst, weight));
        if symmetrize && src != dst {
            edges.push((dst, src, weight));
        }
    }
    let num_nodes = max_id.map_or(0, |m| m + 1);
    let csr = Csr::from_edges(num_nodes, &edges, weighted.unwrap_or(false), dedupe)?;
    Ok(Graph::from_csr(csr))
}
