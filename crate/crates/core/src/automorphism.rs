//! Automorphism group orders of small undirected graphs.
//!
//! The order is computed along a stabilizer chain: individualize a base
//! vertex `v` of the first non-trivial cell, count the orbit of `v` under
//! the pointwise stabilizer of the previous base points, multiply, and
//! descend. Orbit membership of each candidate `w` is decided by an
//! individualization-refinement search for an automorphism sending the base
//! sequence `(.., v)` to `(.., w)`. Automorphisms found along the way are
//! kept as generators so that most orbit members never need a search.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on search-tree nodes across one group-order computation.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<bool>>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidArgument(format!("bad edge ({a},{b}) on {n} vertices")));
            }
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Ok(Graph::from_adjacency(adj))
    }

    fn from_adjacency(adj: Vec<Vec<bool>>) -> Graph {
        let neighbors = adj
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j).collect())
            .collect();
        Graph { adj, neighbors }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn is_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        (0..n)
            .flat_map(|a| (a + 1..n).filter(move |&b| self.adj[a][b]).map(move |b| (a, b)))
            .collect()
    }

    fn is_automorphism(&self, perm: &[usize]) -> bool {
        let n = self.order();
        (0..n).all(|a| self.neighbors[a].iter().all(|&b| self.adj[perm[a]][perm[b]]))
            && (0..n).all(|a| self.degree(a) == self.degree(perm[a]))
    }
}

/// Result of [`automorphism_group`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismSummary {
    /// Exact group order.
    pub order: BigUint,
    /// Base points of the stabilizer chain.
    pub base: Vec<usize>,
    /// Orbit length of each base point under the stabilizer of the previous ones.
    pub orbit_sizes: Vec<usize>,
    /// Orbits of the full group on vertices, each sorted, ordered by least element.
    pub orbits: Vec<Vec<usize>>,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

type Coloring = Vec<usize>;
type Trace = Vec<Vec<(usize, Vec<usize>)>>;

/// Equitable refinement. Color labels are assigned by sorting signatures,
/// so two isomorphic (graph, coloring) pairs refine identically and yield
/// identical traces.
fn refine(g: &Graph, colors: &Coloring) -> (Coloring, Trace) {
    let n = g.order();
    let mut colors = colors.clone();
    let mut trace = Vec::new();
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| colors[u]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        colors = sigs
            .iter()
            .map(|s| uniq.binary_search(s).expect("signature present"))
            .collect();
        let new_count = uniq.len();
        trace.push(uniq);
        if new_count == count {
            break;
        }
        count = new_count;
    }
    (colors, trace)
}

fn distinct(c: &Coloring) -> usize {
    let mut v = c.clone();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Gives `v` a color of its own, placed just before the rest of its cell.
fn individualize(colors: &Coloring, v: usize) -> Coloring {
    colors
        .iter()
        .enumerate()
        .map(|(u, &c)| 2 * c + usize::from(u != v))
        .collect()
}

/// First cell (by color) with more than one vertex, smallest such cell
/// color wins ties by color order.
fn target_cell(colors: &Coloring) -> Option<Vec<usize>> {
    let k = colors.iter().max().map_or(0, |m| m + 1);
    let mut cells = vec![Vec::new(); k];
    for (v, &c) in colors.iter().enumerate() {
        cells[c].push(v);
    }
    cells.into_iter().find(|c| c.len() > 1)
}

struct Search<'a> {
    g: &'a Graph,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                needed: self.nodes as u128,
                budget: self.budget as u128,
            });
        }
        Ok(())
    }

    /// Looks for an automorphism mapping the left coloring onto the right.
    fn find_iso(&mut self, left: &Coloring, right: &Coloring) -> Result<Option<Vec<usize>>> {
        self.tick()?;
        let (lc, lt) = refine(self.g, left);
        let (rc, rt) = refine(self.g, right);
        if lt != rt {
            return Ok(None);
        }
        match target_cell(&lc) {
            None => {
                let n = self.g.order();
                let mut by_color = vec![0; n];
                for (v, &c) in rc.iter().enumerate() {
                    by_color[c] = v;
                }
                let perm: Vec<usize> = (0..n).map(|v| by_color[lc[v]]).collect();
                Ok(self.g.is_automorphism(&perm).then_some(perm))
            }
            Some(cell) => {
                let x = cell[0];
                let color = lc[x];
                let candidates: Vec<usize> = (0..self.g.order()).filter(|&y| rc[y] == color).collect();
                for y in candidates {
                    if let Some(p) = self.find_iso(&individualize(&lc, x), &individualize(&rc, y))? {
                        return Ok(Some(p));
                    }
                }
                Ok(None)
            }
        }
    }
}

/// Orbit of `v` under the group generated by `gens`.
fn orbit(v: usize, gens: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![v];
    let mut i = 0;
    while i < seen.len() {
        let x = seen[i];
        for g in gens {
            if !seen.contains(&g[x]) {
                seen.push(g[x]);
            }
        }
        i += 1;
    }
    seen.sort_unstable();
    seen
}

/// Order of the automorphism group of `g`, with the stabilizer chain data.
pub fn automorphism_group(g: &Graph, node_budget: u64) -> Result<AutomorphismSummary> {
    let n = g.order();
    let mut search = Search {
        g,
        nodes: 0,
        budget: node_budget,
    };
    let mut order = BigUint::one();
    let mut base = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut all_gens: Vec<Vec<usize>> = Vec::new();
    let (mut colors, _) = refine(g, &vec![0; n]);
    while let Some(cell) = target_cell(&colors) {
        let v = cell[0];
        // Generators found at this level fix every earlier base point.
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut orb = vec![v];
        for &w in &cell[1..] {
            if orb.contains(&w) {
                continue;
            }
            if let Some(p) = search.find_iso(&individualize(&colors, v), &individualize(&colors, w))? {
                gens.push(p);
                orb = orbit(v, &gens);
            }
        }
        order *= BigUint::from(orb.len());
        base.push(v);
        orbit_sizes.push(orb.len());
        all_gens.extend(gens);
        colors = refine(g, &individualize(&colors, v)).0;
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if !orbits.iter().any(|o| o.contains(&v)) {
            orbits.push(orbit(v, &all_gens));
        }
    }
    Ok(AutomorphismSummary {
        order,
        base,
        orbit_sizes,
        orbits,
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order_of(n: usize, edges: &[(usize, usize)]) -> u64 {
        let g = Graph::new(n, edges).unwrap();
        let s = automorphism_group(&g, DEFAULT_NODE_BUDGET).unwrap();
        s.order.try_into().unwrap()
    }

    #[test]
    fn trivial_graphs() {
        assert_eq!(order_of(1, &[]), 1);
        assert_eq!(order_of(3, &[]), 6);
        assert_eq!(order_of(4, &[(0, 1), (1, 2), (2, 3)]), 2);
    }

    #[test]
    fn cycles_and_complete_graphs() {
        for n in 3..9 {
            let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            assert_eq!(order_of(n, &edges), 2 * n as u64);
        }
        let k5: Vec<_> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        assert_eq!(order_of(5, &k5), 120);
    }

    #[test]
    fn petersen() {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        assert_eq!(order_of(10, &e), 120);
    }

    #[test]
    fn rigid_graph() {
        // Smallest asymmetric tree has 7 vertices.
        let e = [(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)];
        assert_eq!(order_of(7, &e), 1);
        // Three arms of length 2 instead: S3 permutes them.
        let e = [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)];
        assert_eq!(order_of(7, &e), 6);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::new(6, &[]).unwrap();
        assert!(matches!(
            automorphism_group(&g, 1),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
