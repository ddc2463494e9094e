//! Plain-text edge lists: one `source target weight` record per line,
//! separated by commas when the line has any, otherwise by whitespace.
//! Lines starting with `#` or `%` are comments. Columns past the third
//! (timestamps, for instance) are ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use pole_core::graph::Ingested;
use pole_core::{ingest_edge_list, EdgeRecord, IngestOptions, SignedGraph};

use crate::error::{Error, Result};
use crate::fmt_f64;

/// Splits a data line into fields; `None` for blank and comment lines.
pub(crate) fn fields(line: &str) -> Option<Vec<&str>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
        return None;
    }
    Some(if trimmed.contains(',') {
        trimmed.split(',').map(str::trim).collect()
    } else {
        trimmed.split_whitespace().collect()
    })
}

/// Parses edge-list text. `path` only labels error messages.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<Vec<EdgeRecord>> {
    let bad = |line: usize, reason: String| Error::Parse { path: path.into(), line, reason };
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some(f) = fields(line) else { continue };
        if f.len() < 3 {
            return Err(bad(i + 1, format!("expected `source target weight`, got {} field(s)", f.len())));
        }
        let weight: f64 = f[2].trim_start_matches('+').parse().map_err(|_| bad(i + 1, format!("non-numeric weight {:?}", f[2])))?;
        if !weight.is_finite() {
            return Err(bad(i + 1, format!("non-finite weight {:?}", f[2])));
        }
        if weight == 0.0 {
            return Err(bad(i + 1, "zero weight".into()));
        }
        if f[0].is_empty() || f[1].is_empty() {
            return Err(bad(i + 1, "empty node label".into()));
        }
        out.push(EdgeRecord::new(f[0], f[1], weight));
    }
    Ok(out)
}

pub fn read_edge_list(path: &Path) -> Result<Vec<EdgeRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Reads and ingests a graph file.
pub fn load_graph(path: &Path, largest_component: bool) -> Result<Ingested> {
    let records = read_edge_list(path)?;
    Ok(ingest_edge_list(&records, IngestOptions { largest_component })?)
}

/// Edge lines in an order whose first appearances reproduce the node
/// indices. Each line has its endpoints in index order. Node `k` is
/// introduced by an edge to an earlier node when it has one, or together
/// with `k + 1`; otherwise by a self-loop line, which ingestion drops.
fn serialization_order(g: &SignedGraph) -> Vec<(usize, usize, f64)> {
    let n = g.node_count();
    let mut lines = Vec::with_capacity(g.edge_count());
    let mut used = std::collections::BTreeSet::new();
    let mut seen = 0;
    while seen < n {
        let k = seen;
        if k == 0 {
            // The very first line always introduces 0 and possibly 1.
            if g.has_edge(0, 1) {
                lines.push((0, 1, g.weight(0, 1)));
                used.insert((0, 1));
                seen = 2;
            } else {
                lines.push((0, 0, f64::NAN));
                seen = 1;
            }
            continue;
        }
        if let Some(&j) = g.neighbor_indices(k).first().filter(|&&j| j < k) {
            lines.push((j, k, g.weight(j, k)));
            used.insert((j, k));
            seen += 1;
        } else if k + 1 < n && g.has_edge(k, k + 1) {
            lines.push((k, k + 1, g.weight(k, k + 1)));
            used.insert((k, k + 1));
            seen += 2;
        } else {
            lines.push((k, k, f64::NAN));
            seen += 1;
        }
    }
    lines.extend(g.edges().filter(|&(u, v, _)| !used.contains(&(u, v))));
    lines
}

/// Writes `g` so that [`load_graph`] without component extraction
/// reproduces it exactly. Weights carry 17 significant digits.
pub fn write_edge_list<W: Write>(g: &SignedGraph, out: &mut W, provenance: Option<&str>) -> Result<()> {
    let labels = g.labels();
    if let Some(l) = labels.iter().find(|l| l.contains(',')) {
        return Err(Error::Config(format!("label {l:?} contains a comma, which the edge-list format cannot encode")));
    }
    let has_space = labels.iter().any(|l| l.chars().any(char::is_whitespace));
    if labels.iter().any(|l| l.starts_with('#') || l.starts_with('%')) {
        return Err(Error::Config("a label starting with '#' or '%' would read back as a comment".into()));
    }
    let sep = if has_space { "," } else { " " };
    let mut buf = String::new();
    if let Some(p) = provenance {
        buf.push_str(p);
        buf.push('\n');
    }
    for (u, v, w) in serialization_order(g) {
        let w = if w.is_nan() { "1".to_string() } else { fmt_f64(w) };
        buf.push_str(&format!("{}{sep}{}{sep}{w}\n", labels[u], labels[v]));
    }
    out.write_all(buf.as_bytes()).map_err(|e| Error::io("<edge list>", e))
}

pub fn save_edge_list(g: &SignedGraph, path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf, provenance)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}
