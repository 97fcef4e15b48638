//! Incremental multi-source multi-target unit max-flow.
//!
//! [`FlowNet`] is the generic residual network. [`EdgeNet`] interprets an
//! undirected graph as a symmetric unit network and yields edge cuts;
//! [`ExpandedNet`] splits every node into an in/out pair joined by a unit
//! arc, so that minimum cuts are node separators.
//!
//! Terminal sets only ever grow. Flow is kept across calls to
//! `add_sources`/`add_targets`, so each round of refinement resumes from the
//! previous maximum flow instead of starting over.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, NodeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("flow is not maximum: an augmenting path still exists")]
    NotMaximal,
    #[error("node {0} is already a terminal of the opposite kind")]
    TerminalConflict(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    None,
    Source,
    Target,
}

/// Residual network with skew-symmetric integer flow.
///
/// Every arc `a` has a paired reverse arc; `flow[a] == -flow[reverse[a]]`
/// and the residual capacity of `a` is `capacity[a] - flow[a]`.
#[derive(Clone, Debug)]
pub struct FlowNet {
    first_out: Vec<usize>,
    head: Vec<usize>,
    reverse: Vec<usize>,
    capacity: Vec<i64>,
    flow: Vec<i64>,
    terminal: Vec<Terminal>,
    flow_value: usize,
}

impl FlowNet {
    /// Builds a network from `(tail, head, capacity, reverse_capacity)` arc
    /// pairs over `node_count` flow nodes.
    pub fn from_arc_pairs(node_count: usize, pairs: &[(usize, usize, i64, i64)]) -> Self {
        let mut degree = vec![0usize; node_count + 1];
        for &(u, v, _, _) in pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut first_out = vec![0usize; node_count + 1];
        for v in 0..node_count {
            first_out[v + 1] = first_out[v] + degree[v];
        }
        let arc_count = first_out[node_count];
        let mut next = first_out.clone();
        let mut head = vec![0; arc_count];
        let mut reverse = vec![0; arc_count];
        let mut capacity = vec![0; arc_count];
        for &(u, v, cap, rev_cap) in pairs {
            let a = next[u];
            next[u] += 1;
            let b = next[v];
            next[v] += 1;
            head[a] = v;
            head[b] = u;
            reverse[a] = b;
            reverse[b] = a;
            capacity[a] = cap;
            capacity[b] = rev_cap;
        }
        FlowNet {
            first_out,
            head,
            reverse,
            capacity,
            flow: vec![0; arc_count],
            terminal: vec![Terminal::None; node_count],
            flow_value: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.terminal.len()
    }

    pub fn flow_value(&self) -> usize {
        self.flow_value
    }

    pub fn terminal(&self, v: usize) -> Terminal {
        self.terminal[v]
    }

    fn arcs(&self, v: usize) -> std::ops::Range<usize> {
        self.first_out[v]..self.first_out[v + 1]
    }

    fn residual(&self, a: usize) -> i64 {
        self.capacity[a] - self.flow[a]
    }

    fn set_terminals(&mut self, nodes: &[usize], kind: Terminal) -> Result<(), FlowError> {
        let opposite = match kind {
            Terminal::Source => Terminal::Target,
            Terminal::Target => Terminal::Source,
            Terminal::None => unreachable!(),
        };
        if let Some(&v) = nodes.iter().find(|&&v| self.terminal[v] == opposite) {
            return Err(FlowError::TerminalConflict(v));
        }
        for &v in nodes {
            self.terminal[v] = kind;
        }
        Ok(())
    }

    pub fn add_sources(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.set_terminals(nodes, Terminal::Source)
    }

    pub fn add_targets(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.set_terminals(nodes, Terminal::Target)
    }

    /// Pushes one unit along a shortest residual path from any source to any
    /// target. Returns `false` when no such path exists, i.e. the flow is
    /// maximum.
    pub fn augment(&mut self) -> bool {
        let n = self.node_count();
        let mut pred_arc = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        let mut queue = VecDeque::new();
        for (v, t) in self.terminal.iter().enumerate() {
            if *t == Terminal::Source {
                visited[v] = true;
                queue.push_back(v);
            }
        }
        let mut reached = None;
        'search: while let Some(v) = queue.pop_front() {
            for a in self.arcs(v) {
                let w = self.head[a];
                if visited[w] || self.residual(a) <= 0 {
                    continue;
                }
                visited[w] = true;
                pred_arc[w] = a;
                if self.terminal[w] == Terminal::Target {
                    reached = Some(w);
                    break 'search;
                }
                queue.push_back(w);
            }
        }
        let Some(mut v) = reached else {
            return false;
        };
        while self.terminal[v] != Terminal::Source {
            let a = pred_arc[v];
            self.flow[a] += 1;
            self.flow[self.reverse[a]] -= 1;
            v = self.head[self.reverse[a]];
        }
        self.flow_value += 1;
        true
    }

    /// Augments until the flow is maximum; returns the flow value.
    pub fn saturate(&mut self) -> usize {
        while self.augment() {}
        self.flow_value
    }

    /// Flow nodes reachable from the sources in the residual network.
    pub fn source_reachable(&self) -> Vec<bool> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&v| self.terminal[v] == Terminal::Source).collect();
        for &v in &queue {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for a in self.arcs(v) {
                let w = self.head[a];
                if !seen[w] && self.residual(a) > 0 {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Flow nodes from which a target is reachable in the residual network.
    pub fn target_reachable(&self) -> Vec<bool> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> =
            (0..n).filter(|&v| self.terminal[v] == Terminal::Target).collect();
        for &v in &queue {
            seen[v] = true;
        }
        while let Some(v) = queue.pop_front() {
            for a in self.arcs(v) {
                // arc a is v -> w; w reaches v if w -> v has residual capacity
                let w = self.head[a];
                if !seen[w] && self.residual(self.reverse[a]) > 0 {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Both residual reachability sets, failing if they meet (the flow is
    /// then not maximum).
    pub fn reachability(&self) -> Result<Reachability, FlowError> {
        let source = self.source_reachable();
        let target = self.target_reachable();
        if source.iter().zip(&target).any(|(&s, &t)| s && t) {
            return Err(FlowError::NotMaximal);
        }
        Ok(Reachability { source, target })
    }

    /// Checks capacity bounds, skew symmetry, conservation away from
    /// terminals, and that the net outflow of the sources equals the flow
    /// value.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut excess = vec![0i64; self.node_count()];
        for (v, ex) in excess.iter_mut().enumerate() {
            for a in self.arcs(v) {
                if self.flow[a] > self.capacity[a] {
                    return Err(format!("arc {a} exceeds its capacity"));
                }
                if self.flow[a] != -self.flow[self.reverse[a]] {
                    return Err(format!("arc {a} is not skew-symmetric"));
                }
                *ex -= self.flow[a];
            }
        }
        let mut source_out = 0;
        for (v, &e) in excess.iter().enumerate() {
            match self.terminal[v] {
                Terminal::None if e != 0 => return Err(format!("conservation violated at {v}")),
                Terminal::Source => source_out -= e,
                _ => {}
            }
        }
        if source_out != self.flow_value as i64 {
            return Err(format!("source outflow {source_out} != flow value {}", self.flow_value));
        }
        Ok(())
    }
}

/// Residual reachability of a maximum flow, indexed by flow node.
#[derive(Clone, Debug)]
pub struct Reachability {
    pub source: Vec<bool>,
    pub target: Vec<bool>,
}

/// What a cut removes: edges of an [`EdgeNet`] or nodes of an
/// [`ExpandedNet`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutBoundary {
    Edges(Vec<(usize, usize)>),
    Nodes(NodeSet),
}

/// A source/target cut of a graph.
///
/// For edge cuts the two sides cover every node. For node cuts the
/// separator nodes lie on neither side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub source_side: NodeSet,
    pub target_side: NodeSet,
    pub boundary: CutBoundary,
}

impl Cut {
    pub fn size(&self) -> usize {
        match &self.boundary {
            CutBoundary::Edges(e) => e.len(),
            CutBoundary::Nodes(s) => s.len(),
        }
    }

    pub fn smaller_side_size(&self) -> usize {
        self.source_side.len().min(self.target_side.len())
    }

    pub fn larger_side_size(&self) -> usize {
        self.source_side.len().max(self.target_side.len())
    }

    /// Cut size over smaller side size; infinite for an empty side.
    pub fn expansion(&self) -> f64 {
        match self.smaller_side_size() {
            0 => f64::INFINITY,
            s => self.size() as f64 / s as f64,
        }
    }
}

/// Which minimum cut of a maximum flow to read off.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutSide {
    /// Source side = residual-reachable from the sources.
    Source,
    /// Target side = residual-reaching the targets.
    Target,
}

/// Symmetric unit flow network over an undirected graph: every edge carries
/// at most one unit, in either direction.
#[derive(Clone, Debug)]
pub struct EdgeNet {
    net: FlowNet,
}

impl EdgeNet {
    pub fn new(g: &Graph) -> Self {
        let pairs: Vec<_> = g.edges().map(|(u, v)| (u, v, 1, 1)).collect();
        EdgeNet { net: FlowNet::from_arc_pairs(g.node_count(), &pairs) }
    }

    pub fn node_count(&self) -> usize {
        self.net.node_count()
    }

    pub fn augment(&mut self) -> bool {
        self.net.augment()
    }

    pub fn saturate(&mut self) -> usize {
        self.net.saturate()
    }

    pub fn flow_value(&self) -> usize {
        self.net.flow_value()
    }

    pub fn flow_net(&self) -> &FlowNet {
        &self.net
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.net.terminal(v) == Terminal::Source
    }

    pub fn is_target(&self, v: usize) -> bool {
        self.net.terminal(v) == Terminal::Target
    }

    pub fn add_sources(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.net.add_sources(nodes)
    }

    pub fn add_targets(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.net.add_targets(nodes)
    }

    /// Residual reachability, indexed by graph node.
    pub fn reachability(&self) -> Result<Reachability, FlowError> {
        self.net.reachability()
    }

    pub fn cut(&self, g: &Graph, side: CutSide) -> Result<Cut, FlowError> {
        let reach = self.reachability()?;
        Ok(self.cut_from(g, &reach, side))
    }

    pub fn source_side_cut(&self, g: &Graph) -> Result<Cut, FlowError> {
        self.cut(g, CutSide::Source)
    }

    pub fn target_side_cut(&self, g: &Graph) -> Result<Cut, FlowError> {
        self.cut(g, CutSide::Target)
    }

    pub fn cut_from(&self, g: &Graph, reach: &Reachability, side: CutSide) -> Cut {
        let on_source: Vec<bool> = match side {
            CutSide::Source => reach.source.clone(),
            CutSide::Target => reach.target.iter().map(|&t| !t).collect(),
        };
        let n = g.node_count();
        let source_side = NodeSet::from_sorted((0..n).filter(|&v| on_source[v]).collect());
        let target_side = NodeSet::from_sorted((0..n).filter(|&v| !on_source[v]).collect());
        let edges = g.edges().filter(|&(u, v)| on_source[u] != on_source[v]).collect();
        Cut { source_side, target_side, boundary: CutBoundary::Edges(edges) }
    }
}

/// Node-split network: node `v` becomes `in(v) = 2v` and `out(v) = 2v + 1`
/// joined by a unit arc; edge `{u, v}` becomes `out(u) -> in(v)` and
/// `out(v) -> in(u)` with capacity `node_count`, which no flow saturates.
///
/// Terminal graph nodes mark both halves, so terminals never appear in a
/// separator.
#[derive(Clone, Debug)]
pub struct ExpandedNet {
    net: FlowNet,
    node_count: usize,
}

impl ExpandedNet {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let unbounded = n.max(1) as i64;
        let mut pairs: Vec<(usize, usize, i64, i64)> = (0..n).map(|v| (2 * v, 2 * v + 1, 1, 0)).collect();
        for (u, v) in g.edges() {
            pairs.push((2 * u + 1, 2 * v, unbounded, 0));
            pairs.push((2 * v + 1, 2 * u, unbounded, 0));
        }
        ExpandedNet { net: FlowNet::from_arc_pairs(2 * n, &pairs), node_count: n }
    }

    /// Expanded network with initial terminal sets.
    pub fn expand(g: &Graph, sources: &NodeSet, targets: &NodeSet) -> Result<Self, FlowError> {
        let mut net = Self::new(g);
        net.add_sources(sources.as_slice())?;
        net.add_targets(targets.as_slice())?;
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn augment(&mut self) -> bool {
        self.net.augment()
    }

    pub fn saturate(&mut self) -> usize {
        self.net.saturate()
    }

    pub fn flow_value(&self) -> usize {
        self.net.flow_value()
    }

    pub fn flow_net(&self) -> &FlowNet {
        &self.net
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.net.terminal(2 * v) == Terminal::Source
    }

    pub fn is_target(&self, v: usize) -> bool {
        self.net.terminal(2 * v) == Terminal::Target
    }

    fn halves(nodes: &[usize]) -> Vec<usize> {
        nodes.iter().flat_map(|&v| [2 * v, 2 * v + 1]).collect()
    }

    pub fn add_sources(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.net.add_sources(&Self::halves(nodes)).map_err(|e| match e {
            FlowError::TerminalConflict(x) => FlowError::TerminalConflict(x / 2),
            e => e,
        })
    }

    pub fn add_targets(&mut self, nodes: &[usize]) -> Result<(), FlowError> {
        self.net.add_targets(&Self::halves(nodes)).map_err(|e| match e {
            FlowError::TerminalConflict(x) => FlowError::TerminalConflict(x / 2),
            e => e,
        })
    }

    /// Residual reachability, indexed by flow node (`2v` / `2v + 1`).
    pub fn reachability(&self) -> Result<Reachability, FlowError> {
        self.net.reachability()
    }

    pub fn cut(&self, side: CutSide) -> Result<Cut, FlowError> {
        let reach = self.reachability()?;
        Ok(self.cut_from(&reach, side))
    }

    pub fn source_side_cut(&self) -> Result<Cut, FlowError> {
        self.cut(CutSide::Source)
    }

    pub fn target_side_cut(&self) -> Result<Cut, FlowError> {
        self.cut(CutSide::Target)
    }

    pub fn cut_from(&self, reach: &Reachability, side: CutSide) -> Cut {
        let n = self.node_count;
        let (mut source, mut separator, mut target) = (Vec::new(), Vec::new(), Vec::new());
        for v in 0..n {
            let (vin, vout) = (2 * v, 2 * v + 1);
            match side {
                CutSide::Source => {
                    if reach.source[vout] {
                        source.push(v);
                    } else if reach.source[vin] {
                        separator.push(v);
                    } else {
                        target.push(v);
                    }
                }
                CutSide::Target => {
                    if reach.target[vin] {
                        target.push(v);
                    } else if reach.target[vout] {
                        separator.push(v);
                    } else {
                        source.push(v);
                    }
                }
            }
        }
        Cut {
            source_side: NodeSet::from_sorted(source),
            target_side: NodeSet::from_sorted(target),
            boundary: CutBoundary::Nodes(NodeSet::from_sorted(separator)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    #[test]
    fn single_path_carries_one_unit() {
        let g = path(3);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[2]).unwrap();
        assert!(net.augment());
        assert_eq!(net.flow_value(), 1);
        assert!(!net.augment());
        net.flow_net().check_invariants().unwrap();
    }

    #[test]
    fn two_disjoint_paths_carry_two_units() {
        // 0 - 1 - 3 and 0 - 2 - 3
        let g = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[3]).unwrap();
        assert!(net.augment());
        assert!(net.augment());
        assert!(!net.augment());
        assert_eq!(net.flow_value(), 2);
    }

    #[test]
    fn path_cuts_sit_next_to_the_terminals() {
        let g = path(4);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[3]).unwrap();
        net.saturate();
        let s = net.source_side_cut(&g).unwrap();
        assert_eq!(s.source_side, NodeSet::singleton(0));
        assert_eq!(s.target_side, NodeSet::from_sorted(vec![1, 2, 3]));
        assert_eq!(s.boundary, CutBoundary::Edges(vec![(0, 1)]));
        let t = net.target_side_cut(&g).unwrap();
        assert_eq!(t.source_side, NodeSet::from_sorted(vec![0, 1, 2]));
        assert_eq!(t.target_side, NodeSet::singleton(3));
        assert_eq!(t.size(), 1);
    }

    #[test]
    fn single_edge_cut_is_the_edge() {
        let g = path(2);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[1]).unwrap();
        net.saturate();
        for cut in [net.source_side_cut(&g).unwrap(), net.target_side_cut(&g).unwrap()] {
            assert_eq!(cut.boundary, CutBoundary::Edges(vec![(0, 1)]));
            assert_eq!(cut.source_side, NodeSet::singleton(0));
            assert_eq!(cut.target_side, NodeSet::singleton(1));
        }
    }

    #[test]
    fn disconnected_terminals_give_empty_cut() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[3]).unwrap();
        assert_eq!(net.saturate(), 0);
        let cut = net.source_side_cut(&g).unwrap();
        assert_eq!(cut.size(), 0);
        assert_eq!(cut.source_side, NodeSet::from_sorted(vec![0, 1]));
    }

    #[test]
    fn cut_before_max_flow_is_an_error() {
        let g = path(3);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[2]).unwrap();
        assert_eq!(net.source_side_cut(&g), Err(FlowError::NotMaximal));
    }

    #[test]
    fn terminal_conflicts_are_rejected() {
        let g = path(3);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[2]).unwrap();
        assert_eq!(net.add_sources(&[2]), Err(FlowError::TerminalConflict(2)));
        assert_eq!(net.add_targets(&[0]), Err(FlowError::TerminalConflict(0)));
        // re-adding an existing source is a no-op
        net.add_sources(&[0]).unwrap();
        assert_eq!(net.saturate(), 1);
    }

    #[test]
    fn promoting_the_source_side_resumes_beyond_the_old_cut() {
        // 0 - 1 - 2 - 3 with an extra branch 1 - 4 - 3: the cut at 0 has size 1;
        // once {0} plus piercing node 1 are sources, the cut moves to size 2.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 3)]);
        let mut net = EdgeNet::new(&g);
        net.add_sources(&[0]).unwrap();
        net.add_targets(&[3]).unwrap();
        assert_eq!(net.saturate(), 1);
        let cut = net.source_side_cut(&g).unwrap();
        assert_eq!(cut.source_side, NodeSet::singleton(0));
        net.add_sources(cut.source_side.as_slice()).unwrap();
        net.add_sources(&[1]).unwrap();
        // the old cut no longer separates the sources from the targets
        assert!(net.augment());
        assert_eq!(net.saturate(), 2);
        let cut = net.source_side_cut(&g).unwrap();
        assert_eq!(cut.source_side, NodeSet::from_sorted(vec![0, 1]));
        assert_eq!(cut.size(), 2);
        net.flow_net().check_invariants().unwrap();
    }

    #[test]
    fn star_center_is_the_node_separator() {
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]);
        let mut net = ExpandedNet::expand(&g, &NodeSet::singleton(1), &NodeSet::singleton(2)).unwrap();
        assert_eq!(net.saturate(), 1);
        let cut = net.source_side_cut().unwrap();
        assert_eq!(cut.boundary, CutBoundary::Nodes(NodeSet::singleton(0)));
        assert_eq!(cut.source_side, NodeSet::singleton(1));
        assert_eq!(cut.target_side, NodeSet::singleton(2));
    }

    #[test]
    fn two_internally_disjoint_paths_need_two_separator_nodes() {
        // s=0, t=5, paths 0-1-2-5 and 0-3-4-5
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]);
        let mut net = ExpandedNet::expand(&g, &NodeSet::singleton(0), &NodeSet::singleton(5)).unwrap();
        assert_eq!(net.saturate(), 2);
        let s = net.source_side_cut().unwrap();
        let t = net.target_side_cut().unwrap();
        assert_eq!(s.boundary, CutBoundary::Nodes(NodeSet::from_sorted(vec![1, 3])));
        assert_eq!(t.boundary, CutBoundary::Nodes(NodeSet::from_sorted(vec![2, 4])));
        net.flow_net().check_invariants().unwrap();
    }

    #[test]
    fn adjacent_terminals_saturate_every_terminal_arc() {
        // no node separator exists; the flow equals the unbounded edge capacity
        let g = path(2);
        let mut net = ExpandedNet::expand(&g, &NodeSet::singleton(0), &NodeSet::singleton(1)).unwrap();
        assert_eq!(net.saturate(), 2);
        let cut = net.source_side_cut().unwrap();
        assert_eq!(cut.size(), 0);
    }
}
