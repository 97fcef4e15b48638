//! Tree decompositions and their validity check.

use thiserror::Error;

use crate::graph::{Graph, NodeSet};

/// Bags plus a backbone tree over bag indices, optionally rooted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<NodeSet>,
    pub edges: Vec<(usize, usize)>,
    pub root: Option<usize>,
}

/// First violated condition found by [`validate_td`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TdViolation {
    #[error("decomposition has no bags")]
    NoBags,
    #[error("backbone edge {0:?} refers to a missing bag")]
    EdgeOutOfRange((usize, usize)),
    #[error("root bag {0} does not exist")]
    RootOutOfRange(usize),
    #[error("backbone edge {0:?} closes a cycle")]
    BackboneCycle((usize, usize)),
    #[error("backbone is disconnected: bag {0} is unreachable from bag 0")]
    BackboneDisconnected(usize),
    #[error("bag {bag} contains node {node}, which is not in the graph")]
    NodeOutOfRange { bag: usize, node: usize },
    #[error("node {0} is in no bag")]
    UncoveredNode(usize),
    #[error("edge {0:?} is in no bag")]
    UncoveredEdge((usize, usize)),
    #[error("bags containing node {0} do not form a subtree")]
    DisconnectedOccurrence(usize),
}

impl TreeDecomposition {
    pub fn new(bags: Vec<NodeSet>, edges: Vec<(usize, usize)>, root: Option<usize>) -> Self {
        TreeDecomposition { bags, edges, root }
    }

    /// One bag holding every node: valid for any graph on `n` nodes.
    pub fn single_bag(n: usize) -> Self {
        TreeDecomposition { bags: vec![NodeSet::range(n)], edges: Vec::new(), root: Some(0) }
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(NodeSet::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one (zero for empty bags).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    /// Backbone edges as `(smaller, larger)`, ascending.
    pub fn normalized_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }

    /// Same bags in the same order and the same undirected backbone; the
    /// root is ignored.
    pub fn same_structure(&self, other: &TreeDecomposition) -> bool {
        self.bags == other.bags && self.normalized_edges() == other.normalized_edges()
    }

    /// Checks that the backbone is a tree over the bags.
    pub fn check_backbone(&self) -> Result<(), TdViolation> {
        let b = self.bags.len();
        if b == 0 {
            return Err(TdViolation::NoBags);
        }
        if let Some(r) = self.root.filter(|&r| r >= b) {
            return Err(TdViolation::RootOutOfRange(r));
        }
        let mut uf = UnionFind::new(b);
        for &(i, j) in &self.edges {
            if i >= b || j >= b {
                return Err(TdViolation::EdgeOutOfRange((i, j)));
            }
            if !uf.union(i, j) {
                return Err(TdViolation::BackboneCycle((i, j)));
            }
        }
        if let Some(v) = (1..b).find(|&v| uf.find(v) != uf.find(0)) {
            return Err(TdViolation::BackboneDisconnected(v));
        }
        Ok(())
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Parent of every bag when the backbone is rooted at `root`, plus the
    /// bags in BFS order from the root. Requires a valid backbone.
    pub fn rooted_at(&self, root: usize) -> Result<(Vec<Option<usize>>, Vec<usize>), TdViolation> {
        self.check_backbone()?;
        if root >= self.bags.len() {
            return Err(TdViolation::RootOutOfRange(root));
        }
        let adj = self.adjacency();
        let mut parent = vec![None; self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut order = vec![root];
        seen[root] = true;
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        Ok((parent, order))
    }
}

/// Checks the backbone, node coverage, edge coverage and connectivity of
/// every node's occurrence subtree, returning the first violation.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<(), TdViolation> {
    td.check_backbone()?;
    let n = g.node_count();
    let mut occurrences = vec![0usize; n];
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for v in bag {
            if v >= n {
                return Err(TdViolation::NodeOutOfRange { bag: i, node: v });
            }
            occurrences[v] += 1;
            containing[v].push(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| occurrences[v] == 0) {
        return Err(TdViolation::UncoveredNode(v));
    }
    for (u, v) in g.edges() {
        let (few, other) =
            if containing[u].len() <= containing[v].len() { (u, v) } else { (v, u) };
        if !containing[few].iter().any(|&b| td.bags[b].contains(other)) {
            return Err(TdViolation::UncoveredEdge((u, v)));
        }
    }
    // in a tree, a vertex subset induces a subtree iff it spans |subset| - 1 edges
    let mut shared_edges = vec![0usize; n];
    for &(i, j) in &td.edges {
        for v in td.bags[i].intersection(&td.bags[j]).iter() {
            shared_edges[v] += 1;
        }
    }
    if let Some(v) = (0..n).find(|&v| shared_edges[v] + 1 != occurrences[v]) {
        return Err(TdViolation::DisconnectedOccurrence(v));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
