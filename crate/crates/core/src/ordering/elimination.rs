use std::collections::HashSet;

use crate::error::Result;
use crate::sparse::{Permutation, SparseMatrix};

/// Workspace for greedy minimum degree: the adjacency structure of the
/// uneliminated vertices, updated with explicit fill edges as vertices
/// are eliminated.
#[derive(Debug, Clone)]
pub struct EliminationGraph {
    adjacency: Vec<HashSet<usize>>,
    degree: Vec<usize>,
    eliminated: Vec<bool>,
    remaining: usize,
}

impl EliminationGraph {
    /// Builds the graph of a symmetric pattern. Diagonal entries are
    /// ignored (a vertex is not its own neighbor); asymmetric patterns
    /// are rejected.
    pub fn from_pattern(pattern: &SparseMatrix) -> Result<Self> {
        let n = pattern.require_square()?;
        pattern.check_symmetric_pattern()?;
        let mut adjacency = vec![HashSet::new(); n];
        for (j, adj) in adjacency.iter_mut().enumerate() {
            let (rows, _) = pattern.col(j);
            for &i in rows {
                if i != j {
                    adj.insert(i);
                }
            }
        }
        let degree = adjacency.iter().map(HashSet::len).collect();
        Ok(EliminationGraph {
            adjacency,
            degree,
            eliminated: vec![false; n],
            remaining: n,
        })
    }

    pub fn n(&self) -> usize {
        self.eliminated.len()
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn is_eliminated(&self, v: usize) -> bool {
        self.eliminated[v]
    }

    /// Uneliminated vertex of minimum current degree, smallest index on
    /// ties.
    pub fn min_degree_vertex(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.n() {
            if self.eliminated[v] {
                continue;
            }
            match best {
                Some((_, d)) if d <= self.degree[v] => {}
                _ => best = Some((v, self.degree[v])),
            }
        }
        best.map(|(v, _)| v)
    }

    /// Eliminates `v`: removes it from the graph and clique-connects its
    /// uneliminated neighbors. Returns the number of fill edges added
    /// (unordered vertex pairs).
    pub fn eliminate(&mut self, v: usize) -> u64 {
        assert!(!self.eliminated[v], "vertex {v} already eliminated");
        self.eliminated[v] = true;
        self.remaining -= 1;

        let mut neighbors: Vec<usize> = self.adjacency[v].iter().copied().collect();
        neighbors.sort_unstable();
        for &u in &neighbors {
            self.adjacency[u].remove(&v);
            self.degree[u] -= 1;
        }
        self.adjacency[v].clear();

        let mut fill = 0u64;
        for (i, &u) in neighbors.iter().enumerate() {
            for &w in &neighbors[i + 1..] {
                if self.adjacency[u].insert(w) {
                    self.adjacency[w].insert(u);
                    self.degree[u] += 1;
                    self.degree[w] += 1;
                    fill += 1;
                }
            }
        }
        fill
    }
}

/// Greedy minimum degree ordering of a symmetric pattern.
///
/// Repeatedly eliminates the uneliminated vertex of minimum current
/// degree (smallest index on ties) and adds fill edges among its
/// neighbors. Depends only on the pattern, never on the values.
pub fn min_degree_order(pattern: &SparseMatrix) -> Result<Permutation> {
    let mut graph = EliminationGraph::from_pattern(pattern)?;
    let mut order = Vec::with_capacity(graph.n());
    while let Some(v) = graph.min_degree_vertex() {
        graph.eliminate(v);
        order.push(v);
    }
    Permutation::new(order)
}
