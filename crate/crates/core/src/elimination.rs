//! Elimination orders, node contraction, and order-based tree decompositions.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, NodeSet};

/// How many eliminations happen between two checks of an abort callback.
const ABORT_CHECK_INTERVAL: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("order has {got} entries but the graph has {expected} nodes")]
    WrongLength { expected: usize, got: usize },
    #[error("node {0} appears twice or is out of range")]
    NotAPermutation(usize),
}

/// A node order from bottom (contracted first) to top.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl EliminationOrder {
    pub fn new(order: Vec<usize>) -> Result<Self, OrderError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(OrderError::NotAPermutation(v));
            }
            position[v] = i;
        }
        Ok(EliminationOrder { order, position })
    }

    pub fn identity(n: usize) -> Self {
        EliminationOrder { order: (0..n).collect(), position: (0..n).collect() }
    }

    /// Checks that this order fits a graph on `n` nodes.
    pub fn check_len(&self, n: usize) -> Result<(), OrderError> {
        if self.order.len() != n {
            return Err(OrderError::WrongLength { expected: n, got: self.order.len() });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }
}

/// Input graph plus fill edges, stored as the higher neighbors of each node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChordalSupergraph {
    /// `higher[v]` sorted by position in the order.
    higher: Vec<Vec<usize>>,
    fill_edges: usize,
}

impl ChordalSupergraph {
    pub fn node_count(&self) -> usize {
        self.higher.len()
    }

    /// Neighbors of `v` that come later in the order, lowest first.
    pub fn higher_neighbors(&self, v: usize) -> &[usize] {
        &self.higher[v]
    }

    pub fn fill_edge_count(&self) -> usize {
        self.fill_edges
    }

    pub fn edge_count(&self) -> usize {
        self.higher.iter().map(Vec::len).sum()
    }

    /// Largest higher-neighbor count, i.e. the width of [`order_to_td`].
    pub fn max_higher_degree(&self) -> usize {
        self.higher.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn to_graph(&self) -> Graph {
        let edges = self.higher.iter().enumerate().flat_map(|(v, h)| h.iter().map(move |&w| (v, w)));
        Graph::from_edges(self.higher.len(), edges)
    }
}

/// Contracts the nodes of `g` in order and records the resulting fill.
///
/// Symbolic elimination: the higher neighbors of `v`, minus the lowest one
/// `u`, all become higher neighbors of `u`.
///
/// # Panics
/// If the order does not fit the graph.
pub fn contract_all(g: &Graph, o: &EliminationOrder) -> ChordalSupergraph {
    o.check_len(g.node_count()).expect("order must cover the graph");
    let pos = o.positions();
    let mut higher: Vec<Vec<usize>> = (0..g.node_count())
        .map(|v| {
            let mut h: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
            h.sort_unstable_by_key(|&w| pos[w]);
            h
        })
        .collect();
    for &v in o.order() {
        if higher[v].len() < 2 {
            continue;
        }
        let u = higher[v][0];
        let merged = merge_by_position(&higher[u], &higher[v][1..], pos);
        higher[u] = merged;
    }
    let total: usize = higher.iter().map(Vec::len).sum();
    ChordalSupergraph { higher, fill_edges: total - g.edge_count() }
}

fn merge_by_position(a: &[usize], b: &[usize], pos: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match pos[a[i]].cmp(&pos[b[j]]) {
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
    out
}

/// Bag `v` is `{v}` plus the higher neighbors of `v` in the chordal
/// supergraph; its parent is the bag of the lowest higher neighbor. Bags of
/// nodes without higher neighbors are chained in order, so the bag of the
/// last node is the root. Bag `i` belongs to node `i`.
pub fn order_to_td(g: &Graph, o: &EliminationOrder) -> TreeDecomposition {
    let n = g.node_count();
    if n == 0 {
        return TreeDecomposition::new(vec![NodeSet::new()], Vec::new(), Some(0));
    }
    let chordal = contract_all(g, o);
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n - 1);
    let mut pending_root: Option<usize> = None;
    for &v in o.order() {
        let h = chordal.higher_neighbors(v);
        if let Some(&u) = h.first() {
            edges.push((v, u));
        } else {
            if let Some(r) = pending_root {
                edges.push((r, v));
            }
            pending_root = Some(v);
        }
    }
    for v in 0..n {
        let mut bag = chordal.higher_neighbors(v).to_vec();
        bag.push(v);
        bags.push(NodeSet::from_unsorted(bag));
    }
    TreeDecomposition::new(bags, edges, pending_root)
}

/// Contraction state shared by the greedy orders.
struct Contraction {
    adj: Vec<BTreeSet<usize>>,
}

impl Contraction {
    fn new(g: &Graph) -> Self {
        Contraction { adj: (0..g.node_count()).map(|v| g.neighbors(v).iter().copied().collect()).collect() }
    }

    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    fn fill(&self, v: usize) -> usize {
        let nb: Vec<usize> = self.adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            missing += nb[i + 1..].iter().filter(|&&b| !self.adj[a].contains(&b)).count();
        }
        missing
    }

    /// Removes `v` and cliques its neighbors; returns the former neighbors.
    fn eliminate(&mut self, v: usize) -> Vec<usize> {
        let nb: Vec<usize> = std::mem::take(&mut self.adj[v]).into_iter().collect();
        for &a in &nb {
            self.adj[a].remove(&v);
        }
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                self.adj[a].insert(b);
                self.adj[b].insert(a);
            }
        }
        nb
    }
}

#[derive(Clone, Copy)]
enum Greedy {
    MinDegree,
    MinFill,
}

/// Greedy order on one connected graph, or `None` if aborted.
fn greedy_component(g: &Graph, rule: Greedy, abort: &dyn Fn() -> bool) -> Option<Vec<usize>> {
    let n = g.node_count();
    let mut state = Contraction::new(g);
    let key = |s: &Contraction, v: usize| match rule {
        Greedy::MinDegree => (0, s.degree(v)),
        Greedy::MinFill => (s.fill(v), s.degree(v)),
    };
    let mut current: Vec<(usize, usize)> = (0..n).map(|v| key(&state, v)).collect();
    let mut heap: BinaryHeap<Reverse<((usize, usize), usize)>> =
        (0..n).map(|v| Reverse((current[v], v))).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut touched = vec![false; n];
    while let Some(Reverse((k, v))) = heap.pop() {
        if done[v] || current[v] != k {
            continue;
        }
        if order.len() % ABORT_CHECK_INTERVAL == 0 && abort() {
            return None;
        }
        done[v] = true;
        order.push(v);
        let nb = state.eliminate(v);
        let mut affected = nb.clone();
        if let Greedy::MinFill = rule {
            for &a in &nb {
                affected.extend(state.adj[a].iter().copied());
            }
        }
        for &w in &affected {
            if done[w] || touched[w] {
                continue;
            }
            touched[w] = true;
            let nk = key(&state, w);
            if nk != current[w] {
                current[w] = nk;
                heap.push(Reverse((nk, w)));
            }
        }
        for &w in &affected {
            touched[w] = false;
        }
    }
    Some(order)
}

fn greedy_order(g: &Graph, rule: Greedy, abort: &dyn Fn() -> bool) -> Option<EliminationOrder> {
    let mut order = Vec::with_capacity(g.node_count());
    for comp in g.connected_components() {
        let (sub, to_global) = g.induced_subgraph(&comp);
        let local = greedy_component(&sub, rule, abort)?;
        order.extend(local.into_iter().map(|v| to_global[v]));
    }
    Some(EliminationOrder::new(order).expect("components partition the nodes"))
}

/// Repeatedly contracts a node of minimum current degree, smaller id first
/// on ties. Components are ordered one after another.
pub fn min_degree_order(g: &Graph) -> EliminationOrder {
    greedy_order(g, Greedy::MinDegree, &|| false).expect("never aborted")
}

/// Repeatedly contracts a node whose contraction adds the fewest edges;
/// ties go to smaller current degree, then smaller id.
pub fn min_fill_order(g: &Graph) -> EliminationOrder {
    greedy_order(g, Greedy::MinFill, &|| false).expect("never aborted")
}

/// Like [`min_degree_order`], but gives up with `None` once `abort` returns
/// true. The callback is polled periodically.
pub fn min_degree_order_until(g: &Graph, abort: &dyn Fn() -> bool) -> Option<EliminationOrder> {
    greedy_order(g, Greedy::MinDegree, abort)
}

/// Like [`min_fill_order`], but gives up with `None` once `abort` returns
/// true.
pub fn min_fill_order_until(g: &Graph, abort: &dyn Fn() -> bool) -> Option<EliminationOrder> {
    greedy_order(g, Greedy::MinFill, abort)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_td;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    fn ord(v: &[usize]) -> EliminationOrder {
        EliminationOrder::new(v.to_vec()).unwrap()
    }

    fn set(v: &[usize]) -> NodeSet {
        NodeSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn rejects_non_permutations() {
        assert_eq!(EliminationOrder::new(vec![0, 0]), Err(OrderError::NotAPermutation(0)));
        assert_eq!(EliminationOrder::new(vec![2, 0]), Err(OrderError::NotAPermutation(2)));
        let o = ord(&[2, 0, 1]);
        assert_eq!(o.positions(), &[1, 2, 0]);
    }

    #[test]
    fn leaves_first_needs_no_fill() {
        assert_eq!(contract_all(&path(3), &ord(&[0, 2, 1])).fill_edge_count(), 0);
    }

    #[test]
    fn four_cycle_gets_one_chord() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let ch = contract_all(&c4, &ord(&[0, 1, 2, 3]));
        assert_eq!(ch.fill_edge_count(), 1);
        assert!(ch.to_graph().has_edge(1, 3));
    }

    #[test]
    fn cliques_need_no_fill() {
        assert_eq!(contract_all(&clique(5), &ord(&[3, 1, 4, 0, 2])).fill_edge_count(), 0);
    }

    #[test]
    fn min_degree_examples() {
        let star = Graph::from_edges(4, [(3, 0), (3, 1), (3, 2)]);
        assert_eq!(min_degree_order(&star).order(), &[0, 1, 2, 3]);
        assert_eq!(contract_all(&star, &min_degree_order(&star)).fill_edge_count(), 0);
        assert_eq!(min_degree_order(&path(3)).order(), &[0, 1, 2]);
        assert_eq!(min_degree_order(&clique(4)).order(), &[0, 1, 2, 3]);
    }

    #[test]
    fn min_fill_on_four_cycle_starts_with_node_zero() {
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]);
        let o = min_fill_order(&c4);
        assert_eq!(o.order()[0], 0);
        assert_eq!(contract_all(&c4, &o).fill_edge_count(), 1);
    }

    #[test]
    fn order_to_td_on_a_path() {
        let td = order_to_td(&path(3), &ord(&[0, 2, 1]));
        assert_eq!(td.bags, vec![set(&[0, 1]), set(&[1]), set(&[1, 2])]);
        assert_eq!(td.root, Some(1));
        assert_eq!(td.width(), 1);
        validate_td(&path(3), &td).unwrap();
    }

    #[test]
    fn order_to_td_on_triangle_and_edgeless() {
        let td = order_to_td(&clique(3), &ord(&[1, 2, 0]));
        assert_eq!(td.width(), 2);
        let empty = Graph::empty(4);
        let td = order_to_td(&empty, &ord(&[2, 0, 3, 1]));
        assert_eq!(td.width(), 0);
        assert_eq!(td.root, Some(1));
        validate_td(&empty, &td).unwrap();
    }

    #[test]
    fn disconnected_components_are_concatenated() {
        let g = Graph::from_edges(5, [(3, 4), (0, 2)]);
        let o = min_degree_order(&g);
        assert_eq!(o.order(), &[0, 2, 1, 3, 4]);
        validate_td(&g, &order_to_td(&g, &o)).unwrap();
    }

    #[test]
    fn abort_stops_the_greedy_orders() {
        let g = path(10);
        assert!(min_degree_order_until(&g, &|| true).is_none());
        assert!(min_fill_order_until(&g, &|| false).is_some());
    }
}
