//! Two-community reference graphs: a planted-partition topology signed
//! either by its own communities (polarized) or by a random partition with
//! the same cut size (unpolarized).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::SignedGraph;
use crate::rng;
use crate::{Error, Result};

/// Connectivity retries before giving up.
pub const TOPOLOGY_ATTEMPTS: u64 = 100;
/// Random partitions tried while matching the structural cut.
pub const PARTITION_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Polarized,
    Unpolarized,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub nodes_per_community: usize,
    pub mean_degree: f64,
    /// Expected share of edges between the two communities.
    pub inter_community_ratio: f64,
    pub seed: u64,
    pub scheme: Scheme,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            nodes_per_community: 50,
            mean_degree: 12.0,
            inter_community_ratio: 0.15,
            seed: 0,
            scheme: Scheme::Polarized,
        }
    }
}

impl SyntheticSpec {
    pub fn node_count(&self) -> usize {
        2 * self.nodes_per_community
    }

    /// Intra- and inter-community edge probabilities.
    fn probabilities(&self) -> Result<(f64, f64)> {
        let c = self.nodes_per_community;
        let n = self.node_count();
        if c == 0 {
            return Err(Error::param("nodes_per_community", "must be at least 1"));
        }
        if !(self.inter_community_ratio > 0.0 && self.inter_community_ratio < 1.0) {
            return Err(Error::param("inter_community_ratio", "must lie strictly between 0 and 1"));
        }
        if !(self.mean_degree > 0.0 && self.mean_degree < n as f64) {
            return Err(Error::param("mean_degree", format!("must lie strictly between 0 and {n}")));
        }
        let edges = self.mean_degree * n as f64 / 2.0;
        let mut inside = (1.0 - self.inter_community_ratio) * edges;
        let mut across = self.inter_community_ratio * edges;
        let cap_in = (c * (c - 1)) as f64;
        let cap_out = (c * c) as f64;
        // Blocks too small for their share push the rest across.
        if inside > cap_in {
            across += inside - cap_in;
            inside = cap_in;
        }
        if across > cap_out + 1e-9 {
            return Err(Error::Infeasible(format!(
                "{edges} expected edges do not fit in two blocks of {c} nodes"
            )));
        }
        let p_in = if cap_in > 0.0 { inside / cap_in } else { 0.0 };
        Ok((p_in.min(1.0), (across / cap_out).min(1.0)))
    }
}

/// A connected unit-weight graph and its community of each node.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub graph: SignedGraph,
    /// 0 or 1 per node.
    pub communities: Vec<usize>,
    /// Draws needed to obtain a connected graph.
    pub attempts: u64,
}

/// Visit order from node 0, neighbors in index order.
fn breadth_first_order(g: &SignedGraph) -> Vec<usize> {
    let n = g.node_count();
    let mut seen = alloc::vec![false; n];
    let mut order = Vec::with_capacity(n);
    seen[0] = true;
    order.push(0);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in g.neighbor_indices(u) {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    order
}

/// Planted partition with two equal blocks, redrawn until connected.
/// Nodes are numbered in breadth-first order, so every node after the
/// first has a lower-numbered neighbor; node 0 is in community 0.
pub fn generate_topology(spec: &SyntheticSpec) -> Result<Topology> {
    let (p_in, p_out) = spec.probabilities()?;
    let c = spec.nodes_per_community;
    let n = spec.node_count();
    let communities: Vec<usize> = (0..n).map(|u| usize::from(u >= c)).collect();
    let labels: Vec<String> = (0..n).map(|u| format!("{u}")).collect();
    for attempt in 0..TOPOLOGY_ATTEMPTS {
        let mut rng = rng::salted_stream(spec.seed, rng::SYNTH_TOPOLOGY, attempt);
        let mut edges = Vec::new();
        let mut degree = alloc::vec![0usize; n];
        for u in 0..n {
            for v in u + 1..n {
                let p = if communities[u] == communities[v] { p_in } else { p_out };
                if rng.random::<f64>() < p {
                    edges.push((u, v, 1.0));
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
        }
        if degree.contains(&0) {
            continue;
        }
        let graph = SignedGraph::from_edges(labels.clone(), &edges)?;
        if graph.is_connected() {
            let order = breadth_first_order(&graph);
            let mut rank = alloc::vec![0; n];
            for (i, &u) in order.iter().enumerate() {
                rank[u] = i;
            }
            let renumbered: Vec<(usize, usize, f64)> = edges
                .iter()
                .map(|&(u, v, w)| (rank[u].min(rank[v]), rank[u].max(rank[v]), w))
                .collect();
            return Ok(Topology {
                graph: SignedGraph::from_edges(labels, &renumbered)?,
                communities: order.iter().map(|&u| communities[u]).collect(),
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::Infeasible(format!("no connected graph in {TOPOLOGY_ATTEMPTS} attempts")))
}

fn check_partition(g: &SignedGraph, partition: &[usize]) -> Result<()> {
    if partition.len() != g.node_count() {
        return Err(Error::param("communities", "need one community per node"));
    }
    if partition.iter().any(|&c| c > 1) {
        return Err(Error::param("communities", "communities must be 0 or 1"));
    }
    Ok(())
}

/// Negative across the partition, positive within, magnitudes kept.
pub fn sign_by_partition(g: &SignedGraph, partition: &[usize]) -> Result<SignedGraph> {
    check_partition(g, partition)?;
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .map(|(u, v, w)| (u, v, if partition[u] == partition[v] { w.abs() } else { -w.abs() }))
        .collect();
    SignedGraph::from_edges(g.labels().to_vec(), &edges)
}

/// Number of edges crossing the partition.
pub fn cut_size(g: &SignedGraph, partition: &[usize]) -> usize {
    g.edges().filter(|&(u, v, _)| partition[u] != partition[v]).count()
}

/// Signs from the structural communities.
pub fn assign_signs_polarized(topology: &SignedGraph, communities: &[usize]) -> Result<SignedGraph> {
    sign_by_partition(topology, communities)
}

/// Result of the random-partition signing.
#[derive(Debug, Clone, PartialEq)]
pub struct UnpolarizedAssignment {
    pub graph: SignedGraph,
    pub partition: Vec<usize>,
    pub cut: usize,
    pub target_cut: usize,
    /// Whether `cut == target_cut`.
    pub exact: bool,
    pub attempts: usize,
}

/// Signs from a random bipartition whose cut matches the structural one.
///
/// Each attempt adds nodes to one side in a fresh random order and takes
/// the first prefix whose cut equals the target. The sides are generally
/// unequal in size. If no attempt matches, the closest cut seen is used.
pub fn assign_signs_unpolarized(topology: &SignedGraph, communities: &[usize], seed: u64) -> Result<UnpolarizedAssignment> {
    check_partition(topology, communities)?;
    let n = topology.node_count();
    let target = cut_size(topology, communities);
    let mut rng = rng::stream(seed, rng::SYNTH_PARTITION);
    let mut order: Vec<usize> = (0..n).collect();
    // (distance, attempt, prefix length, order)
    let mut closest: Option<(usize, usize, usize, Vec<usize>)> = None;
    let mut inside = alloc::vec![false; n];
    for attempt in 1..=PARTITION_ATTEMPTS {
        order.shuffle(&mut rng);
        inside.iter_mut().for_each(|x| *x = false);
        let mut cut = 0isize;
        for (len, &x) in order.iter().enumerate().take(n.saturating_sub(1)) {
            let mut to_inside = 0isize;
            let mut total = 0isize;
            for y in topology.neighbor_indices(x) {
                total += 1;
                if inside[*y] {
                    to_inside += 1;
                }
            }
            inside[x] = true;
            cut += total - 2 * to_inside;
            let dist = (cut - target as isize).unsigned_abs();
            if closest.as_ref().is_none_or(|c| dist < c.0) {
                closest = Some((dist, attempt, len + 1, order.clone()));
            }
            if dist == 0 {
                break;
            }
        }
        if closest.as_ref().is_some_and(|c| c.0 == 0) {
            break;
        }
    }
    let (dist, attempts, len, order) = closest.ok_or_else(|| Error::param("topology", "needs at least two nodes"))?;
    let mut partition = alloc::vec![0usize; n];
    for &x in &order[..len] {
        partition[x] = 1;
    }
    let graph = sign_by_partition(topology, &partition)?;
    let cut = cut_size(topology, &partition);
    Ok(UnpolarizedAssignment { graph, partition, cut, target_cut: target, exact: dist == 0, attempts })
}

/// Labeled output of [`synthesize`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticGraph {
    pub graph: SignedGraph,
    /// Structural communities of the topology.
    pub communities: Vec<usize>,
    /// Partition that decided the signs.
    pub sign_partition: Vec<usize>,
    pub topology_attempts: u64,
    /// Present for the unpolarized scheme.
    pub unpolarized: Option<UnpolarizedAssignment>,
}

/// Topology plus the spec's sign scheme.
pub fn synthesize(spec: &SyntheticSpec) -> Result<SyntheticGraph> {
    let topo = generate_topology(spec)?;
    match spec.scheme {
        Scheme::Polarized => Ok(SyntheticGraph {
            graph: assign_signs_polarized(&topo.graph, &topo.communities)?,
            sign_partition: topo.communities.clone(),
            communities: topo.communities,
            topology_attempts: topo.attempts,
            unpolarized: None,
        }),
        Scheme::Unpolarized => {
            let a = assign_signs_unpolarized(&topo.graph, &topo.communities, spec.seed)?;
            Ok(SyntheticGraph {
                graph: a.graph.clone(),
                sign_partition: a.partition.clone(),
                communities: topo.communities,
                topology_attempts: topo.attempts,
                unpolarized: Some(a),
            })
        }
    }
}
