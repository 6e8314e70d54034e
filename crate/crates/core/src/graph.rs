//! Undirected simple graphs in compressed sparse row form.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Symmetric 0/1 adjacency with zero diagonal. Row `i` lists the sorted
/// neighbors of node `i`; every edge is stored in both rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Adjacency {
    /// Build from undirected edges, each listed once in either orientation.
    /// Self-loops, repeated pairs and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > u32::MAX as usize {
            return Err(Error::InvalidAdjacency("too many nodes"));
        }
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidAdjacency("edge endpoint out of range"));
            }
            if i == j {
                return Err(Error::InvalidAdjacency("self-loop"));
            }
            pairs.push((i as u32, j as u32));
            pairs.push((j as u32, i as u32));
        }
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAdjacency("duplicate edge"));
        }
        Ok(Self::from_sorted(n, &pairs))
    }

    fn from_sorted(n: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = alloc::vec![0usize; n + 1];
        for &(i, _) in pairs {
            offsets[i as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self { offsets, neighbors: pairs.iter().map(|&(_, j)| j).collect() }
    }

    /// Build from a row-major dense `n × n` 0/1 matrix.
    pub fn from_dense(n: usize, entries: &[u8]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidAdjacency("dense matrix is not square"));
        }
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = entries[i * n + j];
                if v > 1 {
                    return Err(Error::InvalidAdjacency("entries must be 0 or 1"));
                }
                if v != entries[j * n + i] {
                    return Err(Error::InvalidAdjacency("matrix is not symmetric"));
                }
                if v == 1 {
                    if i == j {
                        return Err(Error::InvalidAdjacency("self-loop"));
                    }
                    pairs.push((i as u32, j as u32));
                }
            }
        }
        Ok(Self::from_sorted(n, &pairs))
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    /// Each undirected edge once, as `(i, j)` with `i < j`, in row order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            self.neighbors(i).iter().filter(move |&&j| (j as usize) > i).map(move |&j| (i, j as usize))
        })
    }

    /// Edge density over all `n(n−1)/2` unordered pairs.
    pub fn density(&self) -> f64 {
        let n = self.n() as f64;
        if n < 2.0 {
            0.0
        } else {
            self.edge_count() as f64 / (n * (n - 1.0) / 2.0)
        }
    }

    /// Subgraph on `nodes` (distinct, any order); local index `t` is
    /// `nodes[t]`.
    pub fn induced(&self, nodes: &[usize]) -> Adjacency {
        let mut local = alloc::vec![u32::MAX; self.n()];
        for (t, &v) in nodes.iter().enumerate() {
            local[v] = t as u32;
        }
        let mut offsets = Vec::with_capacity(nodes.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in nodes {
            let start = neighbors.len();
            neighbors.extend(self.neighbors(v).iter().map(|&u| local[u as usize]).filter(|&u| u != u32::MAX));
            neighbors[start..].sort_unstable();
            offsets.push(neighbors.len());
        }
        Adjacency { offsets, neighbors }
    }

    /// Row-major dense copy; for small graphs and tests.
    pub fn to_dense(&self) -> Vec<u8> {
        let n = self.n();
        let mut out = alloc::vec![0u8; n * n];
        for i in 0..n {
            for &j in self.neighbors(i) {
                out[i * n + j as usize] = 1;
            }
        }
        out
    }
}
