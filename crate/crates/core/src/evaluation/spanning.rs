use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::graph::SignedGraph;

/// Uniformly random spanning tree of a connected graph by Wilson's
/// loop-erased random walks (neighbors chosen uniformly, weights ignored).
///
/// Returns the tree edges as `(min, max)` pairs in ascending order.
pub fn uniform_spanning_tree<R: Rng + ?Sized>(g: &SignedGraph, rng: &mut R) -> Vec<(usize, usize)> {
    let n = g.node_count();
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    let root = rng.random_range(0..n);
    in_tree[root] = true;
    for start in 0..n {
        let mut u = start;
        while !in_tree[u] {
            let nb = g.neighbor_indices(u);
            // Overwriting `next` erases loops implicitly.
            next[u] = nb[rng.random_range(0..nb.len())];
            u = next[u];
        }
        u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u];
        }
    }
    let mut edges: Vec<(usize, usize)> =
        (0..n).filter(|&u| u != root).map(|u| (u.min(next[u]), u.max(next[u]))).collect();
    edges.sort_unstable();
    edges
}
