//! Commutation graph and greedy clique cover.
//!
//! A clique cover of the commutation graph is a proper coloring of its
//! complement, so the cover is found by greedy sequential coloring of the
//! anticommutation graph. Vertices are visited by descending anticommutation
//! degree (ties by lower index) and each joins the first clique whose members
//! all commute with it.

use serde::Serialize;

use crate::error::{HsimError, Result};
use crate::hamiltonian::Hamiltonian;
use crate::pauli::PauliString;

/// Undirected graph on term indices with an edge for every commuting pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationGraph {
    n: usize,
    adj: Vec<bool>,
}

impl CommutationGraph {
    pub fn empty(n: usize) -> CommutationGraph {
        CommutationGraph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn from_strings(strings: &[PauliString]) -> CommutationGraph {
        let mut g = CommutationGraph::empty(strings.len());
        for i in 0..strings.len() {
            for j in i + 1..strings.len() {
                if strings[i].commutes_unchecked(&strings[j]) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.n && j < self.n, "node out of range");
        if i != j {
            self.adj[i * self.n + j] = true;
            self.adj[j * self.n + i] = true;
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i * self.n + j]
    }

    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.has_edge(i, j)).count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&e| e).count() / 2
    }
}

pub fn build_commutation_graph(h: &Hamiltonian) -> CommutationGraph {
    CommutationGraph::from_strings(&h.strings())
}

/// Partition of node indices into cliques. Each clique lists its nodes in
/// ascending order; cliques are sorted by descending size, then by their
/// smallest node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    cliques: Vec<Vec<usize>>,
}

impl CliqueCover {
    /// Checks that `cliques` partitions `0..g.n_nodes()` into cliques of `g`.
    pub fn new(cliques: Vec<Vec<usize>>, g: &CommutationGraph) -> Result<CliqueCover> {
        let mut seen = vec![false; g.n_nodes()];
        for clique in &cliques {
            if clique.is_empty() {
                return Err(HsimError::input("empty clique"));
            }
            for (k, &i) in clique.iter().enumerate() {
                if i >= g.n_nodes() || seen[i] {
                    return Err(HsimError::input(format!(
                        "node {i} is out of range or covered twice"
                    )));
                }
                seen[i] = true;
                if let Some(&j) = clique[..k].iter().find(|&&j| !g.has_edge(i, j)) {
                    return Err(HsimError::input(format!(
                        "nodes {j} and {i} share a clique but do not commute"
                    )));
                }
            }
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(HsimError::input(format!("node {i} is not covered")));
        }
        Ok(CliqueCover { cliques })
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

pub fn min_clique_cover(g: &CommutationGraph) -> CliqueCover {
    let n = g.n_nodes();
    let anti_degree: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && !g.has_edge(i, j)).count())
        .collect();
    let mut visit: Vec<usize> = (0..n).collect();
    visit.sort_by(|&a, &b| anti_degree[b].cmp(&anti_degree[a]).then(a.cmp(&b)));

    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for v in visit {
        match cliques
            .iter_mut()
            .find(|c| c.iter().all(|&u| g.has_edge(u, v)))
        {
            Some(c) => c.push(v),
            None => cliques.push(vec![v]),
        }
    }
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    CliqueCover { cliques }
}
