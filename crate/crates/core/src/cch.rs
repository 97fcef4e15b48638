//! Customizable contraction hierarchies over an elimination order, plus a
//! plain Dijkstra used as reference.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::elimination::{contract_all, EliminationOrder};
use crate::graph::Graph;

/// Undirected graph with a nonnegative integer weight per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    graph: Graph,
    /// Parallel to `graph.neighbors(v)`.
    weights: Vec<Vec<u64>>,
}

impl WeightedGraph {
    /// Self-loops are dropped; of parallel edges the lightest is kept.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Self {
        let mut best: std::collections::BTreeMap<(usize, usize), u64> = Default::default();
        for (u, v, w) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                continue;
            }
            let e = best.entry((u.min(v), u.max(v))).or_insert(w);
            *e = (*e).min(w);
        }
        let graph = Graph::from_edges(n, best.keys().copied());
        let weights = (0..n)
            .map(|v| graph.neighbors(v).iter().map(|&u| best[&(u.min(v), u.max(v))]).collect())
            .collect();
        WeightedGraph { graph, weights }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        let i = self.graph.neighbors(u).binary_search(&v).ok()?;
        Some(self.weights[u][i])
    }

    /// Neighbors of `v` with edge weights.
    pub fn arcs(&self, v: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.graph.neighbors(v).iter().copied().zip(self.weights[v].iter().copied())
    }

    pub fn total_weight(&self) -> u64 {
        self.graph.edges().map(|(u, v)| self.weight(u, v).unwrap()).sum()
    }
}

/// Distances from `s`; `None` for unreachable nodes.
pub fn dijkstra(g: &WeightedGraph, s: usize) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist[v] != Some(d) {
            continue;
        }
        for (w, len) in g.arcs(v) {
            let nd = d + len;
            if dist[w].is_none_or(|old| nd < old) {
                dist[w] = Some(nd);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    dist
}

/// Nodes settled by the two upward searches of one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchSpace {
    pub forward: usize,
    pub backward: usize,
}

/// The input graph plus all shortcuts of an elimination order, with
/// upward adjacency and one weight per edge.
#[derive(Clone, Debug)]
pub struct Cch {
    order: EliminationOrder,
    /// Higher neighbors of each node, ascending by position.
    up: Vec<Vec<usize>>,
    up_weight: Vec<Vec<u64>>,
    infinity: u64,
}

impl Cch {
    /// Input edges get their weight, shortcuts get the infinity sentinel
    /// (total input weight plus one).
    ///
    /// # Panics
    /// If the order does not fit the graph.
    pub fn new(g: &WeightedGraph, order: EliminationOrder) -> Self {
        let chordal = contract_all(g.graph(), &order);
        let infinity = g.total_weight() + 1;
        let n = g.node_count();
        let up: Vec<Vec<usize>> = (0..n).map(|v| chordal.higher_neighbors(v).to_vec()).collect();
        let up_weight = (0..n)
            .map(|v| up[v].iter().map(|&w| g.weight(v, w).unwrap_or(infinity)).collect())
            .collect();
        Cch { order, up, up_weight, infinity }
    }

    /// Builds and customizes in one go.
    pub fn customized(g: &WeightedGraph, order: EliminationOrder) -> Self {
        let mut cch = Cch::new(g, order);
        cch.customize();
        cch
    }

    pub fn order(&self) -> &EliminationOrder {
        &self.order
    }

    pub fn infinity(&self) -> u64 {
        self.infinity
    }

    pub fn node_count(&self) -> usize {
        self.up.len()
    }

    pub fn edge_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    pub fn up_neighbors(&self, v: usize) -> &[usize] {
        &self.up[v]
    }

    fn slot(&self, lower: usize, upper: usize) -> Option<usize> {
        let pos = self.order.positions();
        self.up[lower].binary_search_by_key(&pos[upper], |&w| pos[w]).ok()
    }

    /// Weight of the hierarchy edge `{u, v}`, if it exists.
    pub fn weight(&self, u: usize, v: usize) -> Option<u64> {
        let (lo, hi) = if self.order.position(u) < self.order.position(v) { (u, v) } else { (v, u) };
        self.slot(lo, hi).map(|i| self.up_weight[lo][i])
    }

    /// Every lower triangle `{x, y, z}`, `z` lowest, is relaxed once, in
    /// ascending order of `z`. Returns how many weights dropped.
    pub fn customize(&mut self) -> usize {
        let mut changed = 0;
        for zi in 0..self.order.len() {
            let z = self.order.order()[zi];
            for i in 0..self.up[z].len() {
                for j in i + 1..self.up[z].len() {
                    let (x, y) = (self.up[z][i], self.up[z][j]);
                    let via = self.up_weight[z][i].saturating_add(self.up_weight[z][j]);
                    let k = self.slot(x, y).expect("neighbors of a contracted node form a clique");
                    if via < self.up_weight[x][k] {
                        self.up_weight[x][k] = via;
                        changed += 1;
                    }
                }
            }
        }
        changed
    }

    /// Whether `w(x, z) + w(z, y) >= w(x, y)` holds on every triangle with
    /// `z` lowest.
    pub fn satisfies_lower_triangle_inequality(&self) -> bool {
        (0..self.node_count()).all(|z| {
            let h = &self.up[z];
            (0..h.len()).all(|i| {
                (i + 1..h.len()).all(|j| {
                    let k = self.slot(h[i], h[j]).expect("clique");
                    self.up_weight[z][i].saturating_add(self.up_weight[z][j]) >= self.up_weight[h[i]][k]
                })
            })
        })
    }

    fn upward(&self, s: usize) -> (Vec<u64>, Vec<usize>) {
        let mut dist = vec![u64::MAX; self.node_count()];
        let mut settled = Vec::new();
        let mut heap = BinaryHeap::new();
        dist[s] = 0;
        heap.push(Reverse((0u64, s)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d != dist[v] {
                continue;
            }
            settled.push(v);
            for (&w, &len) in self.up[v].iter().zip(&self.up_weight[v]) {
                let nd = d.saturating_add(len);
                if nd < dist[w] {
                    dist[w] = nd;
                    heap.push(Reverse((nd, w)));
                }
            }
        }
        (dist, settled)
    }

    /// Shortest `s`-`t` distance, or `None` if `t` is unreachable.
    pub fn query(&self, s: usize, t: usize) -> Option<u64> {
        self.query_with_stats(s, t).0
    }

    pub fn query_with_stats(&self, s: usize, t: usize) -> (Option<u64>, SearchSpace) {
        let (fwd, fs) = self.upward(s);
        let (bwd, bs) = self.upward(t);
        let best = fs
            .iter()
            .filter(|&&v| bwd[v] != u64::MAX)
            .map(|&v| fwd[v].saturating_add(bwd[v]))
            .min()
            .filter(|&d| d < self.infinity);
        (best, SearchSpace { forward: fs.len(), backward: bs.len() })
    }
}
