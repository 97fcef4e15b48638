//! Exhaustive reference solvers for small graphs.

use thiserror::Error;

use crate::elimination::{contract_all, EliminationOrder};
use crate::graph::{Graph, NodeSet};

pub const TREEWIDTH_NODE_LIMIT: usize = 16;
pub const PERMUTATION_NODE_LIMIT: usize = 8;
pub const SEPARATOR_NODE_LIMIT: usize = 16;
pub const CUT_NODE_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, more than the oracle limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("node {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("terminal sets overlap at node {0}")]
    Overlap(usize),
}

fn guard(g: &Graph, limit: usize) -> Result<(), OracleError> {
    if g.node_count() > limit {
        return Err(OracleError::TooLarge { nodes: g.node_count(), limit });
    }
    Ok(())
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.node_count()).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect()
}

/// Nodes reachable from `start` using only nodes of `through` as inner
/// nodes, restricted to `allowed`.
fn reach(adj: &[u32], start: u32, through: u32, allowed: u32) -> u32 {
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let mut next = 0;
        let mut f = frontier & (through | start);
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v];
        }
        next &= allowed & !seen;
        seen |= next;
        frontier = next;
    }
    seen
}

/// Treewidth by dynamic programming over node subsets: the best order that
/// eliminates exactly `S` first has cost `TW(S)`, and appending `v` costs
/// the number of uneliminated nodes reachable from `v` through `S`.
pub fn exact_treewidth(g: &Graph) -> Result<usize, OracleError> {
    guard(g, TREEWIDTH_NODE_LIMIT)?;
    let n = g.node_count();
    if n == 0 {
        return Ok(0);
    }
    let adj = masks(g);
    let full: u32 = (1 << n) - 1;
    let mut tw = vec![u8::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            let before = s & !(1 << v);
            let prev = tw[before as usize];
            if prev >= best {
                continue;
            }
            let r = reach(&adj, 1 << v, before, full);
            let q = (r & !before & !(1 << v)).count_ones() as u8;
            best = best.min(prev.max(q));
        }
        tw[s as usize] = best;
    }
    Ok(tw[full as usize] as usize)
}

/// Treewidth as the minimum over all `n!` orders of the largest
/// higher-neighbor count after contraction.
pub fn exact_treewidth_by_permutations(g: &Graph) -> Result<usize, OracleError> {
    guard(g, PERMUTATION_NODE_LIMIT)?;
    let n = g.node_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&mut perm, 0, &mut |p| {
        let o = EliminationOrder::new(p.to_vec()).expect("permutation");
        best = best.min(contract_all(g, &o).max_higher_degree());
    });
    Ok(if n == 0 { 0 } else { best })
}

fn permute(p: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Size of a smallest node set avoiding `s` and `t` whose removal
/// disconnects them; `None` if they are adjacent (no such set exists).
pub fn exact_min_node_separator(g: &Graph, s: usize, t: usize) -> Result<Option<usize>, OracleError> {
    guard(g, SEPARATOR_NODE_LIMIT)?;
    let n = g.node_count();
    for v in [s, t] {
        if v >= n {
            return Err(OracleError::NodeOutOfRange(v));
        }
    }
    if s == t {
        return Err(OracleError::Overlap(s));
    }
    if g.has_edge(s, t) {
        return Ok(None);
    }
    let adj = masks(g);
    let full: u32 = (1 << n) - 1;
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = others.len();
    for sub in 0u32..1 << others.len() {
        let size = sub.count_ones() as usize;
        if size >= best {
            continue;
        }
        let removed = others.iter().enumerate().filter(|&(i, _)| sub >> i & 1 == 1).fold(0u32, |m, (_, &v)| m | 1 << v);
        let allowed = full & !removed;
        if reach(&adj, 1 << s, allowed, allowed) >> t & 1 == 0 {
            best = size;
        }
    }
    Ok(Some(best))
}

/// Fewest edges whose removal separates every source from every target,
/// found by enumerating all node bipartitions.
pub fn exact_min_edge_cut(g: &Graph, sources: &NodeSet, targets: &NodeSet) -> Result<usize, OracleError> {
    guard(g, CUT_NODE_LIMIT)?;
    let n = g.node_count();
    if let Some(v) = sources.iter().chain(targets.iter()).find(|&v| v >= n) {
        return Err(OracleError::NodeOutOfRange(v));
    }
    if let Some(v) = sources.intersection(targets).first() {
        return Err(OracleError::Overlap(v));
    }
    let free: Vec<usize> = (0..n).filter(|&v| !sources.contains(v) && !targets.contains(v)).collect();
    let base = sources.iter().fold(0u32, |m, v| m | 1 << v);
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut best = usize::MAX;
    for sub in 0u32..1 << free.len() {
        let side = free.iter().enumerate().filter(|&(i, _)| sub >> i & 1 == 1).fold(base, |m, (_, &v)| m | 1 << v);
        let cut = edges.iter().filter(|&&(u, v)| (side >> u & 1) != (side >> v & 1)).count();
        best = best.min(cut);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn clique(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
    }

    #[test]
    fn treewidth_examples() {
        let tree = Graph::from_edges(5, [(0, 1), (0, 2), (2, 3), (2, 4)]);
        assert_eq!(exact_treewidth(&tree), Ok(1));
        assert_eq!(exact_treewidth(&cycle(5)), Ok(2));
        assert_eq!(exact_treewidth_by_permutations(&cycle(5)), Ok(2));
        assert_eq!(exact_treewidth(&clique(5)), Ok(4));
        assert_eq!(exact_treewidth(&Graph::empty(3)), Ok(0));
        assert_eq!(exact_treewidth(&Graph::empty(0)), Ok(0));
    }

    #[test]
    fn grid_treewidth() {
        // 3x3 grid
        let id = |r: usize, c: usize| r * 3 + c;
        let mut e = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c + 1 < 3 {
                    e.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < 3 {
                    e.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        assert_eq!(exact_treewidth(&Graph::from_edges(9, e)), Ok(3));
    }

    #[test]
    fn guards() {
        assert!(matches!(exact_treewidth(&Graph::empty(17)), Err(OracleError::TooLarge { .. })));
        assert!(matches!(exact_treewidth_by_permutations(&Graph::empty(9)), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn node_separator_examples() {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert_eq!(exact_min_node_separator(&p, 0, 2), Ok(Some(1)));
        assert_eq!(exact_min_node_separator(&p, 0, 1), Ok(None));
        let two = Graph::from_edges(4, [(0, 1), (1, 3), (0, 2), (2, 3)]);
        assert_eq!(exact_min_node_separator(&two, 0, 3), Ok(Some(2)));
        assert_eq!(exact_min_node_separator(&Graph::empty(2), 0, 1), Ok(Some(0)));
    }

    #[test]
    fn edge_cut_examples() {
        let s = NodeSet::singleton(0);
        assert_eq!(exact_min_edge_cut(&cycle(6), &s, &NodeSet::singleton(3)), Ok(2));
        assert_eq!(exact_min_edge_cut(&clique(4), &s, &NodeSet::singleton(1)), Ok(3));
        assert_eq!(exact_min_edge_cut(&Graph::empty(2), &s, &NodeSet::singleton(1)), Ok(0));
    }
}
