//! Multilevel partitions, their correspondence with rooted tree
//! decompositions, and the nested-dissection driver that builds them.
//!
//! A multilevel partition is a tree of cells. Each [`PartitionCell`] stores
//! its full interior (every node inside the cell, including those of its
//! descendants) and its boundary. Touching cells must be nested.
//!
//! The driver works on [`Cell`]s instead, whose `interior` holds only the
//! nodes not yet handed to a child. Splitting an open cell moves its
//! separator into a final cell and opens one child cell per remaining
//! component. The bag of a driver cell is `boundary ∪ interior`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use thiserror::Error;

use crate::decomposition::{TdViolation, TreeDecomposition};
use crate::flowcutter::{best_separator, CutterConfig, CutterError};
use crate::graph::{Graph, NodeSet};

/// Cells with at most this many interior nodes are finalized without
/// searching for a separator.
pub const FINALIZE_THRESHOLD: usize = 1;

/// A cell of a multilevel partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCell {
    pub interior: NodeSet,
    pub boundary: NodeSet,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilevelPartition {
    pub cells: Vec<PartitionCell>,
    /// Index of the toplevel cell.
    pub root: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    #[error("partition has no cells")]
    NoCells,
    #[error("toplevel cell {0} does not exist or has a parent")]
    BadRoot(usize),
    #[error("cell {0} has a parent index that does not exist")]
    ParentOutOfRange(usize),
    #[error("cell {0} has no parent but is not the toplevel cell")]
    ExtraRoot(usize),
    #[error("parent links of cell {0} never reach the toplevel cell")]
    ParentCycle(usize),
    #[error("toplevel boundary is not empty")]
    ToplevelBoundary,
    #[error("toplevel cell misses node {0}")]
    ToplevelIncomplete(usize),
    #[error("cell {cell} mentions node {node}, which is not in the graph")]
    NodeOutOfRange { cell: usize, node: usize },
    #[error("node {node} is both interior and boundary of cell {cell}")]
    InteriorBoundaryOverlap { cell: usize, node: usize },
    #[error("interior node {node} of cell {child} is not interior to its parent {parent}")]
    ChildNotNested { child: usize, parent: usize, node: usize },
    #[error("boundary node {node} of cell {child} is outside its parent {parent}")]
    BoundaryOutsideParent { child: usize, parent: usize, node: usize },
    #[error("node {node} is adjacent to cell {cell} but missing from its boundary")]
    BoundaryIncomplete { cell: usize, node: usize },
    #[error("cells {0} and {1} touch but are not nested")]
    TouchWithoutNesting(usize, usize),
}

impl MultilevelPartition {
    /// Graph-independent checks: a single toplevel cell with empty boundary,
    /// parent links forming a tree, children nested in their parents, and
    /// disjoint interior and boundary in every cell.
    pub fn check_structure(&self) -> Result<(), PartitionViolation> {
        let k = self.cells.len();
        if k == 0 {
            return Err(PartitionViolation::NoCells);
        }
        if self.root >= k || self.cells[self.root].parent.is_some() {
            return Err(PartitionViolation::BadRoot(self.root));
        }
        if !self.cells[self.root].boundary.is_empty() {
            return Err(PartitionViolation::ToplevelBoundary);
        }
        for (i, c) in self.cells.iter().enumerate() {
            match c.parent {
                None if i != self.root => return Err(PartitionViolation::ExtraRoot(i)),
                Some(p) if p >= k => return Err(PartitionViolation::ParentOutOfRange(i)),
                _ => {}
            }
        }
        for i in 0..k {
            let mut v = i;
            let mut steps = 0;
            while let Some(p) = self.cells[v].parent {
                v = p;
                steps += 1;
                if steps > k {
                    return Err(PartitionViolation::ParentCycle(i));
                }
            }
        }
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(node) = c.interior.intersection(&c.boundary).first() {
                return Err(PartitionViolation::InteriorBoundaryOverlap { cell: i, node });
            }
            if let Some(p) = c.parent {
                let parent = &self.cells[p];
                if let Some(node) = c.interior.iter().find(|&v| !parent.interior.contains(v)) {
                    return Err(PartitionViolation::ChildNotNested { child: i, parent: p, node });
                }
                if let Some(node) = c
                    .boundary
                    .iter()
                    .find(|&v| !parent.interior.contains(v) && !parent.boundary.contains(v))
                {
                    return Err(PartitionViolation::BoundaryOutsideParent { child: i, parent: p, node });
                }
            }
        }
        Ok(())
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.cells.len()];
        for (i, c) in self.cells.iter().enumerate() {
            if let Some(p) = c.parent {
                children[p].push(i);
            }
        }
        children
    }

    fn depths(&self) -> Vec<usize> {
        let mut depth = vec![usize::MAX; self.cells.len()];
        depth[self.root] = 0;
        let children = self.children();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        depth
    }

    /// Equality of cell contents and parent relation, ignoring cell indices.
    pub fn same_cells(&self, other: &MultilevelPartition) -> bool {
        type Key = (NodeSet, NodeSet, Option<(NodeSet, NodeSet)>);
        fn canonical(p: &MultilevelPartition) -> Vec<Key> {
            let mut out: Vec<_> = p
                .cells
                .iter()
                .map(|c| {
                    let parent = c.parent.map(|q| (p.cells[q].interior.clone(), p.cells[q].boundary.clone()));
                    (c.interior.clone(), c.boundary.clone(), parent)
                })
                .collect();
            out.sort();
            out
        }
        canonical(self) == canonical(other)
    }
}

/// Checks that `p` is a valid multilevel partition of `g`: the structural
/// conditions of [`MultilevelPartition::check_structure`], the toplevel
/// cell is the whole node set, boundaries contain every outside neighbor of
/// the interior, and any two touching cells are nested.
pub fn validate_partition(g: &Graph, p: &MultilevelPartition) -> Result<(), PartitionViolation> {
    p.check_structure()?;
    let n = g.node_count();
    for (i, c) in p.cells.iter().enumerate() {
        if let Some(node) = c.interior.iter().chain(c.boundary.iter()).find(|&v| v >= n) {
            return Err(PartitionViolation::NodeOutOfRange { cell: i, node });
        }
    }
    let top = &p.cells[p.root];
    if let Some(v) = (0..n).find(|&v| !top.interior.contains(v)) {
        return Err(PartitionViolation::ToplevelIncomplete(v));
    }
    for (i, c) in p.cells.iter().enumerate() {
        for v in &c.interior {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| !c.interior.contains(w) && !c.boundary.contains(w)) {
                return Err(PartitionViolation::BoundaryIncomplete { cell: i, node: w });
            }
        }
    }

    // Children lie inside their parents, so ancestors are supersets. Cells
    // sharing a node are nested iff they sit on one root path; cells joined
    // by an edge {x, y} are nested iff the deepest cells holding x and y are.
    let depth = p.depths();
    let is_ancestor = |a: usize, mut b: usize| -> bool {
        while depth[b] > depth[a] {
            b = p.cells[b].parent.expect("non-root cell has a parent");
        }
        a == b
    };
    let nested = |a: usize, b: usize| -> bool {
        is_ancestor(a, b)
            || is_ancestor(b, a)
            || p.cells[a].interior.is_subset(&p.cells[b].interior)
            || p.cells[b].interior.is_subset(&p.cells[a].interior)
    };
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in p.cells.iter().enumerate() {
        for v in &c.interior {
            holders[v].push(i);
        }
    }
    let mut deepest = vec![usize::MAX; n];
    for v in 0..n {
        let mut cells = holders[v].clone();
        cells.sort_by_key(|&c| (depth[c], c));
        for w in cells.windows(2) {
            if !nested(w[0], w[1]) {
                return Err(PartitionViolation::TouchWithoutNesting(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        if let Some(&d) = cells.last() {
            deepest[v] = d;
        }
    }
    for (x, y) in g.edges() {
        let (a, b) = (deepest[x], deepest[y]);
        if a != b && !nested(a, b) {
            return Err(PartitionViolation::TouchWithoutNesting(a.min(b), a.max(b)));
        }
    }
    Ok(())
}

/// One bag per cell: boundary and interior minus the interiors of the
/// children. The backbone is the parent relation, rooted at the toplevel
/// cell; bag `i` belongs to cell `i`.
pub fn partition_to_td(p: &MultilevelPartition) -> Result<TreeDecomposition, PartitionViolation> {
    p.check_structure()?;
    let children = p.children();
    let mut bags = Vec::with_capacity(p.cells.len());
    let mut edges = Vec::new();
    for (i, c) in p.cells.iter().enumerate() {
        let mut bag = c.boundary.union(&c.interior);
        for &ch in &children[i] {
            bag = bag.difference(&p.cells[ch].interior);
        }
        bags.push(bag);
        if let Some(parent) = c.parent {
            edges.push((parent, i));
        }
    }
    Ok(TreeDecomposition::new(bags, edges, Some(p.root)))
}

/// Roots the backbone at `root`. Every other bag `b` with parent `q` becomes
/// a cell with boundary `b ∩ q` and interior the union of `b`'s subtree
/// minus that boundary; the root becomes the toplevel cell holding every
/// node. Cell `i` belongs to bag `i`.
pub fn td_to_partition(td: &TreeDecomposition, root: usize) -> Result<MultilevelPartition, TdViolation> {
    let (parent, order) = td.rooted_at(root)?;
    let mut subtree: Vec<NodeSet> = td.bags.clone();
    for &b in order.iter().rev() {
        if let Some(q) = parent[b] {
            let merged = subtree[q].union(&subtree[b]);
            subtree[q] = merged;
        }
    }
    let cells = (0..td.bags.len())
        .map(|b| match parent[b] {
            None => PartitionCell { interior: subtree[b].clone(), boundary: NodeSet::new(), parent: None },
            Some(q) => {
                let boundary = td.bags[b].intersection(&td.bags[q]);
                PartitionCell { interior: subtree[b].difference(&boundary), boundary, parent: Some(q) }
            }
        })
        .collect();
    Ok(MultilevelPartition { cells, root })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Open,
    Final,
}

/// A cell as handled by the nested-dissection driver.
///
/// `interior` holds only the nodes not delegated to child cells: all
/// interior nodes while open, the separator once split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    pub parent: Option<usize>,
    pub interior: NodeSet,
    pub boundary: NodeSet,
    pub status: CellStatus,
}

impl Cell {
    /// The toplevel cell of a graph on `n` nodes.
    pub fn toplevel(n: usize) -> Self {
        Cell { id: 0, parent: None, interior: NodeSet::range(n), boundary: NodeSet::new(), status: CellStatus::Open }
    }

    pub fn bag_size(&self) -> usize {
        self.interior.len() + self.boundary.len()
    }

    pub fn bag(&self) -> NodeSet {
        self.interior.union(&self.boundary)
    }
}

/// Result of [`split_cell`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub final_cell: Cell,
    pub open_cells: Vec<Cell>,
}

/// Reusable per-driver buffers, each sized to the graph and kept clean
/// between calls.
struct SplitScratch {
    local_index: Vec<usize>,
    in_component: Vec<bool>,
}

impl SplitScratch {
    fn new(n: usize) -> Self {
        SplitScratch { local_index: vec![usize::MAX; n], in_component: vec![false; n] }
    }
}

fn cell_seed(seed: u64, id: usize) -> u64 {
    seed ^ (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Splits an open cell along a balanced separator of the subgraph induced
/// by its interior. Children receive consecutive ids starting at `next_id`,
/// which is advanced past them.
pub fn split_cell(g: &Graph, cell: &Cell, cfg: &CutterConfig, next_id: &mut usize) -> Result<Split, CutterError> {
    let mut scratch = SplitScratch::new(g.node_count());
    split_cell_with(g, cell, cfg, next_id, &mut scratch)
}

fn split_cell_with(
    g: &Graph,
    cell: &Cell,
    cfg: &CutterConfig,
    next_id: &mut usize,
    scratch: &mut SplitScratch,
) -> Result<Split, CutterError> {
    if cell.interior.len() <= FINALIZE_THRESHOLD {
        let final_cell = Cell { status: CellStatus::Final, ..cell.clone() };
        return Ok(Split { final_cell, open_cells: Vec::new() });
    }
    let (sub, to_global) = g.induced_subgraph_with(&cell.interior, &mut scratch.local_index);
    let local_components = sub.connected_components();
    let (separator, components) = if local_components.len() > 1 {
        (NodeSet::new(), local_components)
    } else {
        let best = best_separator(&sub, &cfg.with_seed(cell_seed(cfg.seed, cell.id)))?;
        let comps = sub.components_without(&best.separator);
        (best.separator, comps)
    };
    let to_global_set = |s: &NodeSet| NodeSet::from_sorted(s.iter().map(|v| to_global[v]).collect());
    let separator = to_global_set(&separator);

    let candidates = cell.boundary.union(&separator);
    let mut open_cells = Vec::with_capacity(components.len());
    for comp in &components {
        let interior = to_global_set(comp);
        for v in &interior {
            scratch.in_component[v] = true;
        }
        let boundary: NodeSet = NodeSet::from_sorted(
            candidates
                .iter()
                .filter(|&x| g.neighbors(x).iter().any(|&w| scratch.in_component[w]))
                .collect(),
        );
        for v in &interior {
            scratch.in_component[v] = false;
        }
        open_cells.push(Cell { id: *next_id, parent: Some(cell.id), interior, boundary, status: CellStatus::Open });
        *next_id += 1;
    }
    let final_cell = Cell {
        id: cell.id,
        parent: cell.parent,
        interior: separator,
        boundary: cell.boundary.clone(),
        status: CellStatus::Final,
    };
    Ok(Split { final_cell, open_cells })
}

/// Heap entry: largest bag first, then larger interior, then smaller id.
#[derive(Debug)]
struct Queued(Cell);

impl Queued {
    fn key(&self) -> (usize, usize, Reverse<usize>) {
        (self.0.bag_size(), self.0.interior.len(), Reverse(self.0.id))
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

/// Open cells in a max-priority queue keyed by bag size, final cells in a
/// list, and the largest final bag (0 while there is none).
#[derive(Debug, Default)]
pub struct CellQueue {
    open: BinaryHeap<Queued>,
    finals: Vec<Cell>,
    max_final_bag: usize,
}

impl CellQueue {
    pub fn push_open(&mut self, cell: Cell) {
        debug_assert_eq!(cell.status, CellStatus::Open);
        self.open.push(Queued(cell));
    }

    pub fn push_final(&mut self, cell: Cell) {
        self.max_final_bag = self.max_final_bag.max(cell.bag_size());
        self.finals.push(Cell { status: CellStatus::Final, ..cell });
    }

    pub fn peek_open(&self) -> Option<&Cell> {
        self.open.peek().map(|q| &q.0)
    }

    pub fn pop_open(&mut self) -> Option<Cell> {
        self.open.pop().map(|q| q.0)
    }

    pub fn max_final_bag(&self) -> usize {
        self.max_final_bag
    }

    pub fn open_len(&self) -> usize {
        self.open.len()
    }

    pub fn finals(&self) -> &[Cell] {
        &self.finals
    }

    pub fn open_cells(&self) -> impl Iterator<Item = &Cell> {
        self.open.iter().map(|q| &q.0)
    }

    /// Largest bag over open and final cells.
    pub fn max_bag(&self) -> usize {
        self.max_final_bag.max(self.peek_open().map_or(0, Cell::bag_size))
    }
}

/// Incremental nested dissection. Each [`step`](Self::step) splits the open
/// cell with the largest bag; the run stops once that bag is no larger than
/// the largest final bag, since no further split can lower the width.
///
/// At any point [`decomposition`](Self::decomposition) is a valid tree
/// decomposition, with open cells contributing `boundary ∪ interior` as
/// leaf bags, and its width never increases from one step to the next.
pub struct NestedDissection<'g> {
    graph: &'g Graph,
    cfg: CutterConfig,
    queue: CellQueue,
    /// Full interior of every cell ever created, by id.
    full_interior: Vec<NodeSet>,
    next_id: usize,
    finished: bool,
    scratch: SplitScratch,
}

impl<'g> NestedDissection<'g> {
    pub fn new(graph: &'g Graph, cfg: CutterConfig) -> Result<Self, CutterError> {
        cfg.validate()?;
        let top = Cell::toplevel(graph.node_count());
        let mut queue = CellQueue::default();
        let full_interior = vec![top.interior.clone()];
        queue.push_open(top);
        Ok(NestedDissection {
            graph,
            cfg,
            queue,
            full_interior,
            next_id: 1,
            finished: false,
            scratch: SplitScratch::new(graph.node_count()),
        })
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn queue(&self) -> &CellQueue {
        &self.queue
    }

    /// Width of the current decomposition.
    pub fn width(&self) -> usize {
        self.queue.max_bag().saturating_sub(1)
    }

    /// Performs one split. Returns `false` once the run has terminated.
    pub fn step(&mut self) -> bool {
        if self.finished {
            return false;
        }
        let Some(cell) = self.queue.pop_open() else {
            self.finished = true;
            return false;
        };
        if cell.bag_size() <= self.queue.max_final_bag() {
            self.queue.push_open(cell);
            self.finish();
            return false;
        }
        let split = split_cell_with(self.graph, &cell, &self.cfg, &mut self.next_id, &mut self.scratch)
            .expect("open cells induce connected subgraphs with at least two nodes");
        self.queue.push_final(split.final_cell);
        for c in split.open_cells {
            self.full_interior.push(c.interior.clone());
            self.queue.push_open(c);
        }
        true
    }

    fn finish(&mut self) {
        while let Some(c) = self.queue.pop_open() {
            self.queue.push_final(c);
        }
        self.finished = true;
    }

    /// Runs to termination.
    pub fn run(&mut self) {
        while self.step() {}
    }

    fn all_cells(&self) -> Vec<&Cell> {
        let mut by_id: Vec<Option<&Cell>> = vec![None; self.next_id];
        for c in self.queue.finals().iter().chain(self.queue.open_cells()) {
            by_id[c.id] = Some(c);
        }
        by_id.into_iter().map(|c| c.expect("every cell is open or final")).collect()
    }

    /// Current tree decomposition; bag `i` belongs to cell `i`, rooted at
    /// the toplevel cell.
    pub fn decomposition(&self) -> TreeDecomposition {
        let cells = self.all_cells();
        let bags = cells.iter().map(|c| c.bag()).collect();
        let edges = cells.iter().filter_map(|c| c.parent.map(|p| (p, c.id))).collect();
        TreeDecomposition::new(bags, edges, Some(0))
    }

    /// Current state as a multilevel partition; cell `i` has id `i`.
    pub fn partition(&self) -> MultilevelPartition {
        let cells = self
            .all_cells()
            .into_iter()
            .map(|c| PartitionCell {
                interior: self.full_interior[c.id].clone(),
                boundary: c.boundary.clone(),
                parent: c.parent,
            })
            .collect();
        MultilevelPartition { cells, root: 0 }
    }
}

/// Runs nested dissection to termination and returns the partition.
pub fn nested_dissection(g: &Graph, cfg: &CutterConfig) -> Result<MultilevelPartition, CutterError> {
    let mut nd = NestedDissection::new(g, *cfg)?;
    nd.run();
    Ok(nd.partition())
}

/// Cell counts per depth, a rough shape summary of a partition.
pub fn level_histogram(p: &MultilevelPartition) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for d in p.depths() {
        *hist.entry(d).or_insert(0) += 1;
    }
    hist
}
