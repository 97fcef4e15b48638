//! Undirected simple graphs and the traversal primitives shared by every
//! other module.
//!
//! Nodes are dense `usize` indices `0..node_count`. The PACE readers and
//! writers in [`crate::io`] translate to and from the 1-based ids used on
//! disk.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

/// Distance reported by [`Graph::bfs_distances`] for nodes no source reaches.
pub const UNREACHABLE: usize = usize::MAX;

/// A set of nodes, stored as a strictly ascending list.
///
/// Iteration is always in ascending id order, which keeps every consumer
/// deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    /// Builds a set from arbitrary ids; duplicates are removed.
    pub fn from_unsorted(mut nodes: Vec<usize>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        NodeSet(nodes)
    }

    /// Builds a set from ids that are already strictly ascending.
    pub fn from_sorted(nodes: Vec<usize>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        NodeSet(nodes)
    }

    pub fn range(n: usize) -> Self {
        NodeSet((0..n).collect())
    }

    pub fn singleton(v: usize) -> Self {
        NodeSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        NodeSet(out)
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        NodeSet(out)
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        NodeSet(self.0.iter().copied().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.len() <= other.len() && self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.intersection(other).is_empty()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        NodeSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a NodeSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adjacency: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Builds a graph on `n` nodes. Self-loops and repeated edges are dropped.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges_counting(n, edges).0
    }

    /// Like [`Graph::from_edges`], additionally returning how many input
    /// edges were dropped as self-loops or duplicates.
    pub fn from_edges_counting<I>(n: usize, edges: I) -> (Self, usize)
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        let mut dropped = 0;
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for {n} nodes");
            if u == v {
                dropped += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        let before = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        dropped += before - pairs.len();

        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &pairs {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        (Graph { adjacency, edge_count: pairs.len() }, dropped)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `nodes`. The returned vector maps each local id
    /// to its id in `self`; local ids follow the ascending order of `nodes`.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> (Graph, Vec<usize>) {
        let mut scratch = vec![usize::MAX; self.node_count()];
        self.induced_subgraph_with(nodes, &mut scratch)
    }

    /// [`Graph::induced_subgraph`] with a caller-owned global-to-local table.
    /// `scratch` must have `node_count` entries all equal to `usize::MAX`;
    /// it is restored before returning.
    pub(crate) fn induced_subgraph_with(
        &self,
        nodes: &NodeSet,
        scratch: &mut [usize],
    ) -> (Graph, Vec<usize>) {
        let to_global: Vec<usize> = nodes.iter().collect();
        for (local, &global) in to_global.iter().enumerate() {
            scratch[global] = local;
        }
        let mut edge_count = 0;
        let adjacency: Vec<Vec<usize>> = to_global
            .iter()
            .map(|&g| {
                // global ids ascend with local ids, so the list stays sorted
                let list: Vec<usize> = self.adjacency[g]
                    .iter()
                    .filter_map(|&w| (scratch[w] != usize::MAX).then_some(scratch[w]))
                    .collect();
                edge_count += list.len();
                list
            })
            .collect();
        for &global in &to_global {
            scratch[global] = usize::MAX;
        }
        (Graph { adjacency, edge_count: edge_count / 2 }, to_global)
    }

    /// Connected components, listed by their smallest node.
    pub fn connected_components(&self) -> Vec<NodeSet> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            components.push(NodeSet::from_unsorted(members));
        }
        components
    }

    /// Components of the graph after deleting `removed`. Nodes of `removed`
    /// appear in no component.
    pub fn components_without(&self, removed: &NodeSet) -> Vec<NodeSet> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        for v in removed {
            seen[v] = true;
        }
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            stack.push(start);
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            components.push(NodeSet::from_unsorted(members));
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Hop distances from the nearest node of `sources`; [`UNREACHABLE`]
    /// for nodes in other components.
    pub fn bfs_distances(&self, sources: &NodeSet) -> Vec<usize> {
        let mut dist = vec![UNREACHABLE; self.node_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            dist[s] = 0;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest minimum degree over all subgraphs, a lower bound on treewidth.
    pub fn degeneracy(&self) -> usize {
        let mut deg: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut removed = vec![false; self.node_count()];
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = deg.iter().enumerate().map(|(v, &d)| Reverse((d, v))).collect();
        let mut best = 0;
        while let Some(Reverse((d, v))) = heap.pop() {
            if removed[v] || d != deg[v] {
                continue;
            }
            removed[v] = true;
            best = best.max(d);
            for &w in &self.adjacency[v] {
                if !removed[w] {
                    deg[w] -= 1;
                    heap.push(Reverse((deg[w], w)));
                }
            }
        }
        best
    }
}
