//! FlowCutter: balanced bisection by repeatedly piercing minimum cuts.
//!
//! A [`Cutter`] starts from one random source and one random target,
//! computes a maximum flow and reads off the least balanced minimum cut.
//! Each further round turns the whole smaller side plus one piercing node
//! into terminals and resumes the flow, which yields a sequence of cuts
//! that grow in size and in balance. [`best_separator`] runs several
//! cutters, keeps the Pareto front of (cut size, smaller side) and returns
//! the cut of minimum expansion that satisfies the balance bound.

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;
use rayon::prelude::*;
use thiserror::Error;

use crate::flow::{Cut, CutBoundary, CutSide, EdgeNet, ExpandedNet, FlowError, Reachability};
use crate::graph::{Graph, NodeSet, UNREACHABLE};

/// Random draws of an initial terminal pair before falling back to picking
/// the target among the non-neighbors of the source.
const TERMINAL_RETRIES: usize = 16;

/// Graphs at least this large run their cutters on the rayon pool.
const PARALLEL_MIN_NODES: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutterError {
    #[error("graph needs at least two nodes, got {0}")]
    TooSmall(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid cutter configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// How node separators are obtained from flows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeparatorMode {
    /// Flow on the node-split network; cuts are node separators directly.
    NodeCapacities,
    /// Flow on the edge network; every cut edge contributes one endpoint.
    EdgeCutEndpoints,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutterConfig {
    pub cutter_count: usize,
    /// Required share of the smaller side, in `(0, 0.5]`.
    pub min_balance: f64,
    pub seed: u64,
    pub separator_mode: SeparatorMode,
}

impl CutterConfig {
    pub fn new(
        cutter_count: usize,
        min_balance: f64,
        seed: u64,
        separator_mode: SeparatorMode,
    ) -> Result<Self, CutterError> {
        let cfg = CutterConfig { cutter_count, min_balance, seed, separator_mode };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CutterError> {
        if self.cutter_count == 0 {
            return Err(CutterError::InvalidConfig("cutter_count must be at least 1".into()));
        }
        if !(self.min_balance > 0.0 && self.min_balance <= 0.5) {
            return Err(CutterError::InvalidConfig(format!(
                "min_balance {} outside (0, 0.5]",
                self.min_balance
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        CutterConfig { seed, ..self }
    }
}

impl Default for CutterConfig {
    fn default() -> Self {
        CutterConfig {
            cutter_count: 1,
            min_balance: 0.2,
            seed: 0,
            separator_mode: SeparatorMode::NodeCapacities,
        }
    }
}

enum Network {
    Edge(EdgeNet),
    Node(ExpandedNet),
}

impl Network {
    fn saturate(&mut self) -> usize {
        match self {
            Network::Edge(n) => n.saturate(),
            Network::Node(n) => n.saturate(),
        }
    }

    fn reachability(&self) -> Result<Reachability, FlowError> {
        match self {
            Network::Edge(n) => n.reachability(),
            Network::Node(n) => n.reachability(),
        }
    }

    fn cut_from(&self, g: &Graph, reach: &Reachability, side: CutSide) -> Cut {
        match self {
            Network::Edge(n) => n.cut_from(g, reach, side),
            Network::Node(n) => n.cut_from(reach, side),
        }
    }

    fn is_source(&self, v: usize) -> bool {
        match self {
            Network::Edge(n) => n.is_source(v),
            Network::Node(n) => n.is_source(v),
        }
    }

    fn is_target(&self, v: usize) -> bool {
        match self {
            Network::Edge(n) => n.is_target(v),
            Network::Node(n) => n.is_target(v),
        }
    }

    fn add(&mut self, side: CutSide, nodes: &[usize]) -> Result<(), FlowError> {
        match (self, side) {
            (Network::Edge(n), CutSide::Source) => n.add_sources(nodes),
            (Network::Edge(n), CutSide::Target) => n.add_targets(nodes),
            (Network::Node(n), CutSide::Source) => n.add_sources(nodes),
            (Network::Node(n), CutSide::Target) => n.add_targets(nodes),
        }
    }

    /// Whether promoting `v` to the terminal kind of `side` opens an
    /// augmenting path, i.e. `v` is residual-connected to the other side.
    fn would_augment(&self, reach: &Reachability, side: CutSide, v: usize) -> bool {
        let other = match side {
            CutSide::Source => &reach.target,
            CutSide::Target => &reach.source,
        };
        match self {
            Network::Edge(_) => other[v],
            Network::Node(_) => other[2 * v] || other[2 * v + 1],
        }
    }
}

/// A node that may be promoted to a terminal on the growing side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiercingCandidate {
    pub node: usize,
    /// Promoting the node opens an augmenting path and so grows the cut.
    pub augmenting: bool,
}

/// Picks the piercing node: a non-augmenting candidate if one exists,
/// otherwise (and among equals) the candidate maximizing
/// `dist_opposite - dist_own`, ties to the smaller id.
///
/// Distances are hop counts from the original terminals of the growing
/// side (`dist_own`) and of the other side (`dist_opposite`).
pub fn pierce(
    candidates: &[PiercingCandidate],
    dist_own: &[usize],
    dist_opposite: &[usize],
) -> Option<usize> {
    let finite = |d: usize| if d == UNREACHABLE { dist_own.len() as i64 } else { d as i64 };
    candidates
        .iter()
        .max_by_key(|c| {
            let score = finite(dist_opposite[c.node]) - finite(dist_own[c.node]);
            (!c.augmenting, score, std::cmp::Reverse(c.node))
        })
        .map(|c| c.node)
}

/// One FlowCutter instance, yielding one cut per round.
///
/// Cut sizes and smaller-side sizes never decrease along the stream. The
/// stream ends after a cut whose sides differ by at most one node, or when
/// no piercing node is left.
pub struct Cutter<'g> {
    graph: &'g Graph,
    net: Network,
    mode: SeparatorMode,
    terminals: (usize, usize),
    dist_source: Vec<usize>,
    dist_target: Vec<usize>,
    /// Smaller side of the last emitted cut.
    emitted_balance: usize,
    done: bool,
}

impl<'g> Cutter<'g> {
    /// Creates a cutter with a random terminal pair drawn from `seed`.
    ///
    /// In node mode adjacent pairs have no node separator; they are redrawn,
    /// and if the graph is complete the cutter falls back to edge mode.
    pub fn new(graph: &'g Graph, seed: u64, mode: SeparatorMode) -> Result<Self, CutterError> {
        let n = graph.node_count();
        if n < 2 {
            return Err(CutterError::TooSmall(n));
        }
        if !graph.is_connected() {
            return Err(CutterError::Disconnected);
        }
        let mut rng = XorShiftRng::seed_from_u64(seed);
        let draw = |rng: &mut XorShiftRng| {
            let s = rng.random_range(0..n);
            let t = rng.random_range(0..n - 1);
            (s, if t >= s { t + 1 } else { t })
        };
        let mut pair = draw(&mut rng);
        let mut mode = mode;
        if mode == SeparatorMode::NodeCapacities {
            let mut tries = 1;
            while graph.has_edge(pair.0, pair.1) && tries < TERMINAL_RETRIES {
                pair = draw(&mut rng);
                tries += 1;
            }
            if graph.has_edge(pair.0, pair.1) {
                match non_adjacent_pair(graph, &mut rng) {
                    Some(p) => pair = p,
                    None => mode = SeparatorMode::EdgeCutEndpoints,
                }
            }
        }
        Self::with_terminals(graph, pair.0, pair.1, mode)
    }

    /// Creates a cutter with explicit initial terminals.
    pub fn with_terminals(
        graph: &'g Graph,
        source: usize,
        target: usize,
        mode: SeparatorMode,
    ) -> Result<Self, CutterError> {
        let n = graph.node_count();
        if n < 2 {
            return Err(CutterError::TooSmall(n));
        }
        if source == target {
            return Err(FlowError::TerminalConflict(source).into());
        }
        let mut net = match mode {
            SeparatorMode::NodeCapacities => {
                if graph.has_edge(source, target) {
                    return Err(CutterError::InvalidConfig(format!(
                        "terminals {source} and {target} are adjacent"
                    )));
                }
                Network::Node(ExpandedNet::new(graph))
            }
            SeparatorMode::EdgeCutEndpoints => Network::Edge(EdgeNet::new(graph)),
        };
        net.add(CutSide::Source, &[source])?;
        net.add(CutSide::Target, &[target])?;
        Ok(Cutter {
            graph,
            net,
            mode,
            terminals: (source, target),
            dist_source: graph.bfs_distances(&NodeSet::singleton(source)),
            dist_target: graph.bfs_distances(&NodeSet::singleton(target)),
            emitted_balance: 0,
            done: false,
        })
    }

    /// The mode actually in use (node mode may have fallen back to edges).
    pub fn mode(&self) -> SeparatorMode {
        self.mode
    }

    pub fn terminals(&self) -> (usize, usize) {
        self.terminals
    }

    fn candidates(&self, cut: &Cut, reach: &Reachability, side: CutSide) -> Vec<PiercingCandidate> {
        let g = self.graph;
        let mut nodes: Vec<usize> = match &cut.boundary {
            CutBoundary::Edges(edges) => {
                let growing = match side {
                    CutSide::Source => &cut.source_side,
                    CutSide::Target => &cut.target_side,
                };
                edges
                    .iter()
                    .map(|&(u, v)| if growing.contains(u) { v } else { u })
                    .collect()
            }
            CutBoundary::Nodes(sep) => sep
                .iter()
                .filter(|&v| {
                    // a terminal adjacent to the other terminal set admits no node cut
                    !g.neighbors(v).iter().any(|&w| match side {
                        CutSide::Source => self.net.is_target(w),
                        CutSide::Target => self.net.is_source(w),
                    })
                })
                .collect(),
        };
        nodes.sort_unstable();
        nodes.dedup();
        nodes
            .into_iter()
            .filter(|&v| !self.net.is_source(v) && !self.net.is_target(v))
            .map(|node| PiercingCandidate {
                node,
                augmenting: self.net.would_augment(reach, side, node),
            })
            .collect()
    }

    fn round(&mut self) -> Result<Cut, CutterError> {
        self.net.saturate();
        let reach = self.net.reachability()?;
        let source_cut = self.net.cut_from(self.graph, &reach, CutSide::Source);
        let target_cut = self.net.cut_from(self.graph, &reach, CutSide::Target);
        // grow the smaller side; ties go to the source side
        let (side, cut) = if source_cut.source_side.len() <= target_cut.target_side.len() {
            (CutSide::Source, source_cut)
        } else {
            (CutSide::Target, target_cut)
        };
        if cut.larger_side_size() - cut.smaller_side_size() <= 1 {
            self.done = true;
            return Ok(cut);
        }
        let candidates = self.candidates(&cut, &reach, side);
        let (own, opposite) = match side {
            CutSide::Source => (&self.dist_source, &self.dist_target),
            CutSide::Target => (&self.dist_target, &self.dist_source),
        };
        let Some(piercing) = pierce(&candidates, own, opposite) else {
            self.done = true;
            return Ok(cut);
        };
        let grown = match side {
            CutSide::Source => &cut.source_side,
            CutSide::Target => &cut.target_side,
        };
        let mut promoted = grown.as_slice().to_vec();
        promoted.push(piercing);
        self.net.add(side, &promoted)?;
        Ok(cut)
    }
}

impl Iterator for Cutter<'_> {
    type Item = Cut;

    fn next(&mut self) -> Option<Cut> {
        // the unpierced side may shrink after re-augmenting; such less
        // balanced cuts are skipped
        while !self.done {
            match self.round() {
                Ok(cut) if cut.smaller_side_size() >= self.emitted_balance => {
                    self.emitted_balance = cut.smaller_side_size();
                    return Some(cut);
                }
                Ok(_) => {}
                Err(_) => self.done = true,
            }
        }
        None
    }
}

fn non_adjacent_pair(g: &Graph, rng: &mut XorShiftRng) -> Option<(usize, usize)> {
    let n = g.node_count();
    let open: Vec<usize> = (0..n).filter(|&v| g.degree(v) + 1 < n).collect();
    if open.is_empty() {
        return None;
    }
    let s = open[rng.random_range(0..open.len())];
    let others: Vec<usize> = (0..n).filter(|&v| v != s && !g.has_edge(s, v)).collect();
    Some((s, others[rng.random_range(0..others.len())]))
}

/// Runs a single cutter to exhaustion.
pub fn run_cutter(g: &Graph, seed: u64, mode: SeparatorMode) -> Result<Vec<Cut>, CutterError> {
    Ok(Cutter::new(g, seed, mode)?.collect())
}

/// Turns an edge cut into a node separator by taking, for every cut edge,
/// the endpoint on the larger side (the source side on ties).
pub fn edge_cut_to_separator(cut: &Cut) -> NodeSet {
    let CutBoundary::Edges(edges) = &cut.boundary else {
        panic!("edge_cut_to_separator needs an edge cut");
    };
    let take_source = cut.source_side.len() >= cut.target_side.len();
    edges
        .iter()
        .map(|&(u, v)| {
            let u_on_source = cut.source_side.contains(u);
            if u_on_source == take_source {
                u
            } else {
                v
            }
        })
        .collect()
}

/// A node separator with the sizes of the two sides it leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorCandidate {
    pub separator: NodeSet,
    pub smaller_side: usize,
    pub larger_side: usize,
}

impl SeparatorCandidate {
    pub fn from_cut(cut: &Cut) -> Self {
        match &cut.boundary {
            CutBoundary::Nodes(sep) => SeparatorCandidate {
                separator: sep.clone(),
                smaller_side: cut.smaller_side_size(),
                larger_side: cut.larger_side_size(),
            },
            CutBoundary::Edges(_) => {
                let sep = edge_cut_to_separator(cut);
                let a = cut.source_side.difference(&sep).len();
                let b = cut.target_side.difference(&sep).len();
                SeparatorCandidate { separator: sep, smaller_side: a.min(b), larger_side: a.max(b) }
            }
        }
    }

    pub fn size(&self) -> usize {
        self.separator.len()
    }

    /// `size / smaller_side` compared exactly: is `self` strictly better?
    fn lower_expansion_than(&self, other: &Self) -> bool {
        (self.size() as u128) * (other.smaller_side as u128)
            < (other.size() as u128) * (self.smaller_side as u128)
    }
}

/// Nondominated separators: strictly increasing in both size and smaller
/// side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParetoCutSet {
    entries: Vec<SeparatorCandidate>,
}

impl ParetoCutSet {
    /// Builds the front; the result does not depend on input order.
    pub fn from_candidates(mut candidates: Vec<SeparatorCandidate>) -> Self {
        candidates.sort_by(|a, b| {
            a.size()
                .cmp(&b.size())
                .then(b.smaller_side.cmp(&a.smaller_side))
                .then_with(|| a.separator.cmp(&b.separator))
        });
        let mut entries: Vec<SeparatorCandidate> = Vec::new();
        for c in candidates {
            if entries.last().is_none_or(|last| c.smaller_side > last.smaller_side) {
                entries.push(c);
            }
        }
        ParetoCutSet { entries }
    }

    pub fn entries(&self) -> &[SeparatorCandidate] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Minimum expansion among entries whose smaller side makes up at least
    /// `min_balance` of `node_count` nodes.
    pub fn min_expansion(&self, node_count: usize, min_balance: f64) -> Option<&SeparatorCandidate> {
        let mut best: Option<&SeparatorCandidate> = None;
        for c in &self.entries {
            if c.smaller_side == 0 || (c.smaller_side as f64) < min_balance * node_count as f64 {
                continue;
            }
            // entries ascend in size, so ties keep the smaller separator
            if best.is_none_or(|b| c.lower_expansion_than(b)) {
                best = Some(c);
            }
        }
        best
    }

    /// The entry with the largest smaller side.
    pub fn most_balanced(&self) -> Option<&SeparatorCandidate> {
        self.entries.last()
    }
}

/// The separator chosen by [`best_separator`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestSeparator {
    pub separator: NodeSet,
    pub smaller_side: usize,
    pub node_count: usize,
    /// Initial terminals of the cutter that produced the separator.
    pub terminals: (usize, usize),
}

impl BestSeparator {
    pub fn smaller_side_share(&self) -> f64 {
        self.smaller_side as f64 / self.node_count as f64
    }
}

/// Runs `cfg.cutter_count` cutters with seeds `cfg.seed + i` and returns
/// the minimum-expansion separator meeting `cfg.min_balance`, or the most
/// balanced one if none does.
pub fn best_separator(g: &Graph, cfg: &CutterConfig) -> Result<BestSeparator, CutterError> {
    cfg.validate()?;
    let n = g.node_count();
    if n < 2 {
        return Err(CutterError::TooSmall(n));
    }
    if !g.is_connected() {
        return Err(CutterError::Disconnected);
    }
    type Found = Vec<(SeparatorCandidate, (usize, usize))>;
    let run = |i: usize| -> Result<Found, CutterError> {
        let cutter = Cutter::new(g, cfg.seed.wrapping_add(i as u64), cfg.separator_mode)?;
        let terminals = cutter.terminals();
        Ok(cutter.map(|cut| (SeparatorCandidate::from_cut(&cut), terminals)).collect())
    };
    let per_cutter: Vec<_> = if cfg.cutter_count > 1 && n >= PARALLEL_MIN_NODES {
        (0..cfg.cutter_count).into_par_iter().map(run).collect::<Result<_, _>>()?
    } else {
        (0..cfg.cutter_count).map(run).collect::<Result<_, _>>()?
    };
    let all: Vec<_> = per_cutter.into_iter().flatten().collect();
    let front = ParetoCutSet::from_candidates(all.iter().map(|(c, _)| c.clone()).collect());
    let chosen = front
        .min_expansion(n, cfg.min_balance)
        .or_else(|| front.most_balanced())
        .expect("every cutter emits at least one cut");
    let terminals = all
        .iter()
        .find(|(c, _)| c == chosen)
        .map(|(_, t)| *t)
        .expect("chosen entry comes from some cutter");
    Ok(BestSeparator {
        separator: chosen.separator.clone(),
        smaller_side: chosen.smaller_side,
        node_count: n,
        terminals,
    })
}
