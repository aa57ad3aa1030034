//! Shortest Hamiltonian path through a clique under the CNOT distance.
//!
//! Small instances (up to [`EXACT_LIMIT`] nodes) are solved exactly with the
//! Held-Karp dynamic program over open paths. Larger instances use a
//! Christofides-style tour (minimum spanning tree, greedy matching on the
//! odd-degree vertices, Euler tour, shortcutting), improved with 2-opt and
//! opened into a path by dropping its heaviest edge. The lexicographic order
//! is always kept as a fallback candidate, so the result is never worse than
//! sorting the strings.

use crate::error::{HsimError, Result};
use crate::pauli::PauliString;

/// Instances at or below this size are solved to optimality.
pub const EXACT_LIMIT: usize = 10;

#[derive(Debug, Clone)]
pub struct TspInstance {
    nodes: Vec<PauliString>,
    dist: Vec<usize>,
}

impl TspInstance {
    pub fn new(nodes: Vec<PauliString>) -> Result<TspInstance> {
        if nodes.is_empty() {
            return Err(HsimError::input("TSP instance needs at least one node"));
        }
        let n = nodes.len();
        let mut dist = vec![0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = nodes[i].cnot_distance(&nodes[j])?;
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Ok(TspInstance { nodes, dist })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[PauliString] {
        &self.nodes
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> usize {
        self.dist[i * self.nodes.len() + j]
    }

    fn cost_unchecked(&self, order: &[usize]) -> usize {
        order.windows(2).map(|w| self.distance(w[0], w[1])).sum()
    }

    /// Node indices sorted by their canonical string.
    pub fn lexicographic_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.nodes[a].cmp(&self.nodes[b]).then(a.cmp(&b)));
        order
    }
}

/// Sum of distances between consecutive nodes of `order`.
pub fn path_cost(instance: &TspInstance, order: &[usize]) -> Result<usize> {
    check_permutation(order, instance.len())?;
    Ok(instance.cost_unchecked(order))
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(HsimError::input(format!(
            "order has {} entries, expected {n}",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return Err(HsimError::input(format!(
                "order is not a permutation of 0..{n}"
            )));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Deterministic open-path ordering of the instance's nodes.
pub fn tsp_path(instance: &TspInstance) -> Vec<usize> {
    let n = instance.len();
    if n <= 2 {
        return (0..n).collect();
    }
    if n <= EXACT_LIMIT {
        return held_karp_path(instance);
    }
    let lex = instance.lexicographic_order();
    let mut lex_improved = lex.clone();
    two_opt_path(instance, &mut lex_improved);
    let candidates = [christofides_path(instance), lex_improved, lex];
    candidates
        .into_iter()
        .min_by_key(|c| instance.cost_unchecked(c))
        .expect("non-empty candidate set")
}

fn held_karp_path(inst: &TspInstance) -> Vec<usize> {
    const INF: usize = usize::MAX;
    let n = inst.len();
    let full = 1usize << n;
    let mut best = vec![INF; full * n];
    let mut parent = vec![usize::MAX; full * n];
    for v in 0..n {
        best[(1 << v) * n + v] = 0;
    }
    for mask in 1..full {
        for last in 0..n {
            let cur = best[mask * n + last];
            if cur == INF {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let nm = mask | (1 << next);
                let cand = cur + inst.distance(last, next);
                if cand < best[nm * n + next] {
                    best[nm * n + next] = cand;
                    parent[nm * n + next] = last;
                }
            }
        }
    }
    let mask = full - 1;
    let mut end = 0;
    for v in 1..n {
        if best[mask * n + v] < best[mask * n + end] {
            end = v;
        }
    }
    let mut path = Vec::with_capacity(n);
    let (mut m, mut v) = (mask, end);
    while v != usize::MAX {
        path.push(v);
        let p = parent[m * n + v];
        m &= !(1 << v);
        v = p;
    }
    path.reverse();
    path
}

fn christofides_path(inst: &TspInstance) -> Vec<usize> {
    let n = inst.len();

    // Prim's MST rooted at 0; ties go to the lower index.
    let mut in_tree = vec![false; n];
    let mut key = vec![usize::MAX; n];
    let mut link = vec![usize::MAX; n];
    key[0] = 0;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by_key(|&v| (key[v], v))
            .expect("vertex left");
        in_tree[u] = true;
        if link[u] != usize::MAX {
            adj[u].push(link[u]);
            adj[link[u]].push(u);
        }
        for v in 0..n {
            if !in_tree[v] && inst.distance(u, v) < key[v] {
                key[v] = inst.distance(u, v);
                link[v] = u;
            }
        }
    }

    // Greedy matching on odd-degree vertices.
    let odd: Vec<usize> = (0..n).filter(|&v| adj[v].len() % 2 == 1).collect();
    let mut pairs = Vec::new();
    for (a, &u) in odd.iter().enumerate() {
        for &v in &odd[a + 1..] {
            pairs.push((inst.distance(u, v), u, v));
        }
    }
    pairs.sort_unstable();
    let mut matched = vec![false; n];
    for (_, u, v) in pairs {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            adj[u].push(v);
            adj[v].push(u);
        }
    }

    let mut tour = shortcut(euler_circuit(adj), n);
    two_opt_cycle(inst, &mut tour);

    // Open the cycle at its heaviest edge (first one on ties).
    let heaviest = (0..n)
        .max_by_key(|&i| {
            (
                inst.distance(tour[i], tour[(i + 1) % n]),
                std::cmp::Reverse(i),
            )
        })
        .expect("non-empty tour");
    tour.rotate_left((heaviest + 1) % n);
    two_opt_path(inst, &mut tour);
    tour
}

/// Hierholzer's algorithm from vertex 0, always taking the smallest neighbour.
fn euler_circuit(mut adj: Vec<Vec<usize>>) -> Vec<usize> {
    for list in &mut adj {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut stack = vec![0usize];
    let mut circuit = Vec::new();
    while let Some(&u) = stack.last() {
        match adj[u].pop() {
            Some(v) => {
                let pos = adj[v]
                    .iter()
                    .rposition(|&w| w == u)
                    .expect("undirected edge");
                adj[v].remove(pos);
                stack.push(v);
            }
            None => {
                circuit.push(u);
                stack.pop();
            }
        }
    }
    circuit.reverse();
    circuit
}

fn shortcut(walk: Vec<usize>, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    walk.into_iter()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect()
}

fn two_opt_cycle(inst: &TspInstance, tour: &mut [usize]) {
    let n = tour.len();
    if n < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = (tour[i], tour[i + 1]);
                let (c, d) = (tour[j], tour[(j + 1) % n]);
                if inst.distance(a, c) + inst.distance(b, d)
                    < inst.distance(a, b) + inst.distance(c, d)
                {
                    tour[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// 2-opt over an open path, including moves that reverse a prefix or suffix.
fn two_opt_path(inst: &TspInstance, path: &mut [usize]) {
    let n = path.len();
    if n < 3 {
        return;
    }
    let edge = |p: &[usize], i: usize, j: usize| inst.distance(p[i], p[j]);
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                // Reverse path[i..=j].
                let mut before = 0;
                let mut after = 0;
                if i > 0 {
                    before += edge(path, i - 1, i);
                    after += edge(path, i - 1, j);
                }
                if j + 1 < n {
                    before += edge(path, j, j + 1);
                    after += edge(path, i, j + 1);
                }
                if after < before {
                    path[i..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eight() -> TspInstance {
        let strs = [
            "XXXX", "XXYY", "XYXY", "XYYX", "YXXY", "YXYX", "YYXX", "YYYY",
        ];
        TspInstance::new(strs.iter().map(|s| s.parse().unwrap()).collect()).unwrap()
    }

    #[test]
    fn eight_string_costs() {
        let inst = eight();
        let lex: Vec<usize> = (0..8).collect();
        assert_eq!(path_cost(&inst, &lex).unwrap(), 32);
        assert_eq!(path_cost(&inst, &[0, 1, 2, 3, 5, 4, 6, 7]).unwrap(), 28);
        let order = tsp_path(&inst);
        assert_eq!(path_cost(&inst, &order).unwrap(), 28);
    }

    #[test]
    fn tiny_instances() {
        let one = TspInstance::new(vec!["XZ".parse().unwrap()]).unwrap();
        assert_eq!(tsp_path(&one), vec![0]);
        assert_eq!(path_cost(&one, &[0]).unwrap(), 0);
        let two = TspInstance::new(vec!["XZ".parse().unwrap(), "ZX".parse().unwrap()]).unwrap();
        assert_eq!(tsp_path(&two), vec![0, 1]);
        assert_eq!(path_cost(&two, &[1, 0]).unwrap(), 4);
    }

    #[test]
    fn rejects_non_permutations() {
        let inst = eight();
        assert!(path_cost(&inst, &[0, 1]).is_err());
        assert!(path_cost(&inst, &[0, 0, 1, 2, 3, 4, 5, 6]).is_err());
        assert!(path_cost(&inst, &[0, 1, 2, 3, 4, 5, 6, 8]).is_err());
        assert!(TspInstance::new(vec![]).is_err());
        assert!(TspInstance::new(vec!["X".parse().unwrap(), "XX".parse().unwrap()]).is_err());
    }

    #[test]
    fn euler_and_shortcut() {
        // Triangle 0-1-2 doubled edge 0-1.
        let adj = vec![vec![1, 2], vec![0, 2], vec![1, 0]];
        let c = euler_circuit(adj);
        assert_eq!(c.first(), c.last());
        assert_eq!(c.len(), 4);
        assert_eq!(shortcut(vec![0, 1, 0, 2, 0], 3), vec![0, 1, 2]);
    }
}
