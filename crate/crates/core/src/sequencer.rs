//! Clique ordering by greedy tree growth over inter-clique edge counts.
//!
//! Candidates are grown from every ordered (root, second) clique pair by
//! repeatedly appending the unused clique sharing the most commutation-graph
//! edges with the last appended one. Each candidate is scored by the sum,
//! over consecutive clique pairs, of `|a_i b_j|` across their
//! non-commuting term pairs; the lowest score wins, ties going to the
//! lexicographically smallest permutation.

use serde::Serialize;

use crate::grouping::{CliqueCover, CommutationGraph};
use crate::hamiltonian::Hamiltonian;

/// Symmetric table of `Σ |a_i b_j|` over non-commuting cross pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliquePairCost {
    m: usize,
    table: Vec<f64>,
}

impl CliquePairCost {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.m + j]
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Score of visiting cliques in `perm` order.
    pub fn score(&self, perm: &[usize]) -> f64 {
        perm.windows(2).map(|w| self.get(w[0], w[1])).sum()
    }
}

/// Symmetric table of commutation-graph edge counts between cliques.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueEdgeCount {
    m: usize,
    table: Vec<usize>,
}

impl CliqueEdgeCount {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.table[i * self.m + j]
    }
}

pub fn pair_cost_table(h: &Hamiltonian, cover: &CliqueCover) -> CliquePairCost {
    let m = cover.len();
    let terms = h.terms();
    let mut table = vec![0.0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let mut total = 0.0;
            for &a in &cover.cliques()[i] {
                for &b in &cover.cliques()[j] {
                    if !terms[a].string.commutes_unchecked(&terms[b].string) {
                        total += (terms[a].coefficient * terms[b].coefficient).abs();
                    }
                }
            }
            table[i * m + j] = total;
            table[j * m + i] = total;
        }
    }
    CliquePairCost { m, table }
}

pub fn edge_count_table(cover: &CliqueCover, g: &CommutationGraph) -> CliqueEdgeCount {
    let m = cover.len();
    let mut table = vec![0; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let count = cover.cliques()[i]
                .iter()
                .map(|&a| {
                    cover.cliques()[j]
                        .iter()
                        .filter(|&&b| g.has_edge(a, b))
                        .count()
                })
                .sum();
            table[i * m + j] = count;
            table[j * m + i] = count;
        }
    }
    CliqueEdgeCount { m, table }
}

/// Every permutation the heuristic considers, in generation order: one per
/// ordered (root, second) pair, then the identity if not already present.
pub fn candidate_permutations(edges: &CliqueEdgeCount) -> Vec<Vec<usize>> {
    let m = edges.m;
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) + 1);
    for root in 0..m {
        for second in (0..m).filter(|&s| s != root) {
            let mut used = vec![false; m];
            let mut perm = vec![root, second];
            used[root] = true;
            used[second] = true;
            while perm.len() < m {
                let last = *perm.last().expect("non-empty");
                let mut next = usize::MAX;
                for c in (0..m).filter(|&c| !used[c]) {
                    if next == usize::MAX || edges.get(last, c) > edges.get(last, next) {
                        next = c;
                    }
                }
                used[next] = true;
                perm.push(next);
            }
            out.push(perm);
        }
    }
    let identity: Vec<usize> = (0..m).collect();
    if !out.contains(&identity) {
        out.push(identity);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequencerResult {
    pub permutation: Vec<usize>,
    pub score: f64,
    pub candidate_count: usize,
}

pub fn sequence_cliques(
    h: &Hamiltonian,
    cover: &CliqueCover,
    g: &CommutationGraph,
) -> SequencerResult {
    let costs = pair_cost_table(h, cover);
    let edges = edge_count_table(cover, g);
    select_candidate(&costs, candidate_permutations(&edges))
}

pub(crate) fn select_candidate(
    costs: &CliquePairCost,
    candidates: Vec<Vec<usize>>,
) -> SequencerResult {
    let candidate_count = candidates.len();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in candidates {
        let s = costs.score(&perm);
        let better = match &best {
            None => true,
            Some((bs, bp)) => s < *bs || (s == *bs && perm < *bp),
        };
        if better {
            best = Some((s, perm));
        }
    }
    let (score, permutation) = best.expect("at least the identity candidate");
    SequencerResult {
        permutation,
        score,
        candidate_count,
    }
}
