//! Term-ordering strategies.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HsimError, Result};
use crate::grouping::{build_commutation_graph, min_clique_cover};
use crate::hamiltonian::Hamiltonian;
use crate::pauli::{sequence_cnot_cost, PauliString};
use crate::sequencer::sequence_cliques;
use crate::tsp::{check_permutation, tsp_path, TspInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "name", content = "seed", rename_all = "kebab-case")]
pub enum Strategy {
    Lexicographic,
    Magnitude,
    Random(u64),
    DepleteGroups,
    MaxCommuteTsp,
}

impl Strategy {
    /// Short name used on the command line.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Strategy::Lexicographic => "lex",
            Strategy::Magnitude => "mag",
            Strategy::Random(_) => "random",
            Strategy::DepleteGroups => "deplete",
            Strategy::MaxCommuteTsp => "mctsp",
        }
    }

    /// Parses a CLI name; `random` takes the supplied seed.
    pub fn from_cli_name(name: &str, seed: u64) -> Result<Strategy> {
        match name {
            "lex" => Ok(Strategy::Lexicographic),
            "mag" => Ok(Strategy::Magnitude),
            "random" => Ok(Strategy::Random(seed)),
            "deplete" => Ok(Strategy::DepleteGroups),
            "mctsp" => Ok(Strategy::MaxCommuteTsp),
            other => Err(HsimError::input(format!(
                "unknown strategy {other:?} (expected lex, mag, random, deplete or mctsp)"
            ))),
        }
    }

    pub fn all(seed: u64) -> [Strategy; 5] {
        [
            Strategy::Lexicographic,
            Strategy::Magnitude,
            Strategy::Random(seed),
            Strategy::DepleteGroups,
            Strategy::MaxCommuteTsp,
        ]
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

impl FromStr for Strategy {
    type Err = HsimError;

    fn from_str(s: &str) -> Result<Strategy> {
        Strategy::from_cli_name(s, 0)
    }
}

/// A permutation of a Hamiltonian's term indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ordering {
    pub strategy: Strategy,
    pub permutation: Vec<usize>,
    /// Start offset of each mutually commuting block, when the strategy
    /// produces blocks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clique_boundaries: Option<Vec<usize>>,
}

impl Ordering {
    /// Wraps an explicit permutation, checking it covers `h`'s terms.
    pub fn new(strategy: Strategy, permutation: Vec<usize>, h: &Hamiltonian) -> Result<Ordering> {
        check_permutation(&permutation, h.len())?;
        Ok(Ordering {
            strategy,
            permutation,
            clique_boundaries: None,
        })
    }

    pub fn ordered_strings(&self, h: &Hamiltonian) -> Vec<PauliString> {
        self.permutation
            .iter()
            .map(|&i| h.terms()[i].string.clone())
            .collect()
    }

    /// CNOT count of one cancelled Trotter step in this order.
    pub fn cnot_cost(&self, h: &Hamiltonian) -> usize {
        sequence_cnot_cost(&self.ordered_strings(h)).expect("orderings are non-empty")
    }

    /// Permutation split into its commuting blocks, if any.
    pub fn blocks(&self) -> Option<Vec<&[usize]>> {
        let bounds = self.clique_boundaries.as_ref()?;
        let mut out = Vec::with_capacity(bounds.len());
        for (k, &start) in bounds.iter().enumerate() {
            let end = bounds.get(k + 1).copied().unwrap_or(self.permutation.len());
            out.push(&self.permutation[start..end]);
        }
        Some(out)
    }
}

pub fn order(h: &Hamiltonian, strategy: Strategy) -> Ordering {
    match strategy {
        Strategy::Lexicographic => order_lexicographic(h),
        Strategy::Magnitude => order_magnitude(h),
        Strategy::Random(seed) => order_random(h, seed),
        Strategy::DepleteGroups => order_deplete_groups(h),
        Strategy::MaxCommuteTsp => order_max_commute_tsp(h),
    }
}

fn plain(strategy: Strategy, permutation: Vec<usize>) -> Ordering {
    Ordering {
        strategy,
        permutation,
        clique_boundaries: None,
    }
}

pub fn order_lexicographic(h: &Hamiltonian) -> Ordering {
    let t = h.terms();
    let mut perm: Vec<usize> = (0..t.len()).collect();
    perm.sort_by(|&a, &b| t[a].string.cmp(&t[b].string));
    plain(Strategy::Lexicographic, perm)
}

/// Descending `|coefficient|`, ties in lexicographic order.
pub fn order_magnitude(h: &Hamiltonian) -> Ordering {
    let t = h.terms();
    let mut perm: Vec<usize> = (0..t.len()).collect();
    perm.sort_by(|&a, &b| by_magnitude(h, a, b));
    plain(Strategy::Magnitude, perm)
}

fn by_magnitude(h: &Hamiltonian, a: usize, b: usize) -> std::cmp::Ordering {
    let t = h.terms();
    t[b].coefficient
        .abs()
        .total_cmp(&t[a].coefficient.abs())
        .then_with(|| t[a].string.cmp(&t[b].string))
}

/// Seeded Fisher-Yates shuffle of the term indices.
pub fn order_random(h: &Hamiltonian, seed: u64) -> Ordering {
    let mut perm: Vec<usize> = (0..h.len()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    plain(Strategy::Random(seed), perm)
}

/// Round-robin over the cliques in cover order, taking the largest remaining
/// term of each clique per visit.
pub fn order_deplete_groups(h: &Hamiltonian) -> Ordering {
    let cover = min_clique_cover(&build_commutation_graph(h));
    let mut queues: Vec<std::collections::VecDeque<usize>> = cover
        .cliques()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_by(|&a, &b| by_magnitude(h, a, b));
            c.into()
        })
        .collect();
    let mut perm = Vec::with_capacity(h.len());
    while perm.len() < h.len() {
        for q in &mut queues {
            if let Some(i) = q.pop_front() {
                perm.push(i);
            }
        }
    }
    plain(Strategy::DepleteGroups, perm)
}

/// Clique cover, then an intra-clique TSP path, then clique sequencing.
pub fn order_max_commute_tsp(h: &Hamiltonian) -> Ordering {
    let g = build_commutation_graph(h);
    let cover = min_clique_cover(&g);
    let seq = sequence_cliques(h, &cover, &g);
    let mut perm = Vec::with_capacity(h.len());
    let mut bounds = Vec::with_capacity(cover.len());
    for &c in &seq.permutation {
        let clique = &cover.cliques()[c];
        let nodes = clique
            .iter()
            .map(|&i| h.terms()[i].string.clone())
            .collect();
        let inst = TspInstance::new(nodes).expect("clique terms share a width");
        bounds.push(perm.len());
        perm.extend(tsp_path(&inst).into_iter().map(|k| clique[k]));
    }
    Ordering {
        strategy: Strategy::MaxCommuteTsp,
        permutation: perm,
        clique_boundaries: Some(bounds),
    }
}
