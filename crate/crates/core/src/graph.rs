//! Undirected signed weighted graphs and edge-list ingestion.

use alloc::collections::BTreeMap;
use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// One `source target weight` line of an edge list.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl EdgeRecord {
    pub fn new(source: impl Into<String>, target: impl Into<String>, weight: f64) -> Self {
        EdgeRecord { source: source.into(), target: target.into(), weight }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Keep only the largest connected component of the ingested graph.
    pub largest_component: bool,
}

/// What ingestion had to discard or merge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub records: usize,
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    pub zero_sum_dropped: usize,
    pub isolated_removed: usize,
    pub outside_component_removed: usize,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub graph: SignedGraph,
    pub report: IngestReport,
}

/// Immutable undirected signed graph in compressed sparse row form.
///
/// Every node has positive absolute degree, the adjacency is symmetric and
/// has no self-loops. Neighbor lists are sorted by node index.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    labels: Vec<String>,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    volume: f64,
    edge_count: usize,
    negative_count: usize,
}

impl SignedGraph {
    /// Builds a graph from labels and canonical edges `(u, v, w)`.
    ///
    /// Each unordered pair may occur at most once, `u != v`, `w != 0`, and
    /// every node must be incident to at least one edge.
    pub fn from_edges(labels: Vec<String>, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), len: n });
            }
            if u == v {
                return Err(Error::param("edges", format!("self-loop on node {u}")));
            }
            if w == 0.0 || !w.is_finite() {
                return Err(Error::param("edges", format!("invalid weight {w} on ({u}, {v})")));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(2 * edges.len());
        let mut weights = Vec::with_capacity(2 * edges.len());
        let mut degrees = Vec::with_capacity(n);
        offsets.push(0);
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|&(v, _)| v);
            if list.windows(2).any(|p| p[0].0 == p[1].0) {
                return Err(Error::param("edges", format!("duplicate edge at node {u}")));
            }
            if list.is_empty() {
                return Err(Error::IsolatedNode(u));
            }
            let mut d = 0.0;
            for &(v, w) in list.iter() {
                neighbors.push(v);
                weights.push(w);
                d += w.abs();
            }
            degrees.push(d);
            offsets.push(neighbors.len());
        }
        let volume = degrees.iter().sum();
        let negative_count = edges.iter().filter(|e| e.2 < 0.0).count();
        Ok(SignedGraph {
            labels,
            offsets,
            neighbors,
            weights,
            degrees,
            volume,
            edge_count: edges.len(),
            negative_count,
        })
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn negative_edge_count(&self) -> usize {
        self.negative_count
    }

    pub fn negative_ratio(&self) -> f64 {
        self.negative_count as f64 / self.edge_count as f64
    }

    #[inline]
    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// `vol(G)`, the sum of absolute degrees.
    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index of the node labeled `label`, by linear scan.
    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Sorted neighbor indices of `u`.
    #[inline]
    pub fn neighbor_indices(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Signed weights aligned with [`neighbor_indices`](Self::neighbor_indices).
    #[inline]
    pub fn neighbor_weights(&self, u: usize) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_indices(u).iter().copied().zip(self.neighbor_weights(u).iter().copied())
    }

    /// Signed weight `A_uv`, zero when there is no link.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        match self.neighbor_indices(u).binary_search(&v) {
            Ok(i) => self.neighbor_weights(u)[i],
            Err(_) => 0.0,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbor_indices(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v, w)` with `u < v`, ordered by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).filter(move |&(v, _)| v > u).map(move |(v, w)| (u, v, w)))
    }

    pub fn is_all_positive(&self) -> bool {
        self.negative_count == 0
    }

    /// The graph with every weight replaced by its absolute value.
    pub fn to_unsigned(&self) -> SignedGraph {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w = w.abs());
        g.negative_count = 0;
        g
    }

    /// Same node set without the listed undirected pairs.
    ///
    /// Fails if a node would be left without neighbors.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Result<SignedGraph> {
        let mut drop: Vec<(usize, usize)> =
            removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        drop.sort_unstable();
        let kept: Vec<(usize, usize, f64)> =
            self.edges().filter(|&(u, v, _)| drop.binary_search(&(u, v)).is_err()).collect();
        SignedGraph::from_edges(self.labels.clone(), &kept)
    }

    /// Subgraph induced by `nodes` (sorted, distinct), reindexed in order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<SignedGraph> {
        let mut index = vec![usize::MAX; self.node_count()];
        for (i, &u) in nodes.iter().enumerate() {
            index[u] = i;
        }
        let edges: Vec<(usize, usize, f64)> = self
            .edges()
            .filter(|&(u, v, _)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v, w)| (index[u], index[v], w))
            .collect();
        let labels = nodes.iter().map(|&u| self.labels[u].clone()).collect();
        SignedGraph::from_edges(labels, &edges)
    }

    /// Connected components under `|A|`; component id per node, ids
    /// assigned in order of smallest contained node.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbor_indices(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 == 1
    }
}

/// Induced subgraph on the largest component; ties go to the component
/// holding the smallest node index.
pub fn largest_connected_component(g: &SignedGraph) -> SignedGraph {
    let (comp, count) = g.components();
    if count == 1 {
        return g.clone();
    }
    let mut sizes = vec![0usize; count];
    for &c in &comp {
        sizes[c] += 1;
    }
    // Component ids follow smallest contained node, so the first maximum wins ties.
    let mut best = 0;
    for c in 1..count {
        if sizes[c] > sizes[best] {
            best = c;
        }
    }
    let nodes: Vec<usize> = (0..g.node_count()).filter(|&u| comp[u] == best).collect();
    g.induced_subgraph(&nodes).expect("a component of a valid graph is a valid graph")
}

/// Builds a graph from raw records.
///
/// Records are symmetrized: `(a, b)` and `(b, a)` and repeats of either
/// are merged by summing weights; a merged weight of exactly zero drops
/// the pair. Self-loops are dropped. Labels get dense indices in order of
/// first appearance, then nodes left without edges are removed.
pub fn ingest_edge_list(records: &[EdgeRecord], options: IngestOptions) -> Result<Ingested> {
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut report = IngestReport { records: records.len(), ..IngestReport::default() };
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut labels: Vec<&str> = Vec::new();
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (line, rec) in records.iter().enumerate() {
        if !rec.weight.is_finite() {
            return Err(Error::BadRecord { line: line + 1, reason: format!("non-finite weight {}", rec.weight) });
        }
        if rec.weight == 0.0 {
            return Err(Error::BadRecord { line: line + 1, reason: String::from("zero weight") });
        }
        let u = *index.entry(rec.source.as_str()).or_insert_with(|| {
            labels.push(rec.source.as_str());
            labels.len() - 1
        });
        let v = *index.entry(rec.target.as_str()).or_insert_with(|| {
            labels.push(rec.target.as_str());
            labels.len() - 1
        });
        if u == v {
            report.self_loops_dropped += 1;
            continue;
        }
        let key = (u.min(v), u.max(v));
        match merged.get_mut(&key) {
            Some(w) => {
                *w += rec.weight;
                report.duplicates_merged += 1;
            }
            None => {
                merged.insert(key, rec.weight);
            }
        }
    }
    let mut has_edge = vec![false; labels.len()];
    let mut edges = Vec::with_capacity(merged.len());
    for (&(u, v), &w) in &merged {
        if w == 0.0 {
            report.zero_sum_dropped += 1;
            continue;
        }
        has_edge[u] = true;
        has_edge[v] = true;
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let mut remap = vec![usize::MAX; labels.len()];
    let mut kept_labels = Vec::new();
    for (u, &present) in has_edge.iter().enumerate() {
        if present {
            remap[u] = kept_labels.len();
            kept_labels.push(String::from(labels[u]));
        } else {
            report.isolated_removed += 1;
        }
    }
    for e in edges.iter_mut() {
        e.0 = remap[e.0];
        e.1 = remap[e.1];
    }
    // Remapping is monotone, so canonical order survives.
    let mut graph = SignedGraph::from_edges(kept_labels, &edges)?;
    if options.largest_component {
        let before = graph.node_count();
        graph = largest_connected_component(&graph);
        report.outside_component_removed = before - graph.node_count();
    }
    Ok(Ingested { graph, report })
}
