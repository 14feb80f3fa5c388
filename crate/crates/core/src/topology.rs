//! Interaction networks.
//!
//! Graphs are stored in compressed adjacency form and are immutable once
//! built, so one instance can back any number of concurrent replicas.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Undirected simple graph over dense node ids `0..node_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Builds a graph from per-node adjacency lists. The caller guarantees
    /// symmetry; self-loops and duplicates are rejected.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Result<Self> {
        if adjacency.is_empty() {
            return Err(Error::invalid("node_count", "graph must have at least one node"));
        }
        let n = adjacency.len();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for (u, adj) in adjacency.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &v in adj {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, node_count: n });
                }
                if v == u {
                    return Err(Error::invalid("adjacency", format!("self-loop at node {u}")));
                }
                if !seen.insert(v) {
                    return Err(Error::invalid("adjacency", format!("duplicate edge {u}-{v}")));
                }
                neighbors.push(v);
            }
            offsets.push(neighbors.len());
        }
        let graph = Graph { offsets, neighbors };
        for u in 0..n {
            for &v in graph.neighbors(u) {
                if !graph.neighbors(v).contains(&u) {
                    return Err(Error::invalid("adjacency", format!("edge {u}-{v} is not symmetric")));
                }
            }
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> Result<usize> {
        self.check_node(node)?;
        Ok(self.offsets[node + 1] - self.offsets[node])
    }

    pub fn check_node(&self, node: usize) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
        }
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            let mut higher: Vec<usize> = self.neighbors(u).iter().copied().filter(|&v| v > u).collect();
            higher.sort_unstable();
            higher.into_iter().map(move |v| (u, v))
        })
    }

    /// Debug dump: one `u v` pair per line, ascending `u`.
    pub fn write_edge_list(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").map_err(|e| Error::io(path, e))?;
        }
        out.flush().map_err(|e| Error::io(path, e))
    }
}

/// Watts–Strogatz small-world graph.
///
/// Starts from a ring where every node links to its `k/2` nearest neighbors
/// on each side. Then, for each offset `1..=k/2` and each node `u`, the ring
/// edge `(u, u+offset)` is rewired with probability `p` to `(u, w)`, where `w`
/// is drawn uniformly and redrawn while it would create a self-loop or a
/// duplicate edge. Edge count is preserved.
pub fn make_watts_strogatz(n: usize, k: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::invalid("n", "must be positive"));
    }
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Error::invalid("k", format!("must be even and positive, got {k}")));
    }
    if k >= n {
        return Err(Error::invalid("k", format!("must be smaller than n={n}, got {k}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    let mut rng = crate::rng::stream(seed, 0, crate::rng::Stream::Topology);
    Ok(watts_strogatz_with(n, k, p, &mut rng))
}

fn watts_strogatz_with(n: usize, k: usize, p: f64, rng: &mut SimRng) -> Graph {
    let half = k / 2;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for u in 0..n {
        for offset in 1..=half {
            let v = (u + offset) % n;
            adj[u].insert(v);
            adj[v].insert(u);
        }
    }
    for offset in 1..=half {
        for u in 0..n {
            if p == 0.0 || rng.random::<f64>() >= p {
                continue;
            }
            let v = (u + offset) % n;
            // already rewired away by an earlier step, or u is saturated
            if !adj[u].contains(&v) || adj[u].len() >= n - 1 {
                continue;
            }
            let mut w = rng.random_range(0..n);
            while w == u || adj[u].contains(&w) {
                w = rng.random_range(0..n);
            }
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let adjacency = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    Graph::from_adjacency(adjacency).expect("rewiring keeps the graph simple and symmetric")
}

/// Periodic `side × side` square lattice with von Neumann neighborhoods.
/// Node `(i, j)` has id `i * side + j`; neighbors are listed up, down,
/// left, right.
pub fn make_square_lattice(side: usize) -> Result<Graph> {
    if side < 3 {
        return Err(Error::invalid("side", format!("must be at least 3, got {side}")));
    }
    let id = |i: usize, j: usize| i * side + j;
    let mut adjacency = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            adjacency.push(vec![
                id((i + side - 1) % side, j),
                id((i + 1) % side, j),
                id(i, (j + side - 1) % side),
                id(i, (j + 1) % side),
            ]);
        }
    }
    Graph::from_adjacency(adjacency)
}
