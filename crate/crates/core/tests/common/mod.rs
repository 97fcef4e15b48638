#![allow(dead_code)]

use proptest::test_runner::Config as PropConfig;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

use flowtd::multilevel::{MultilevelPartition, PartitionCell};
use flowtd::{Graph, NodeSet, TreeDecomposition};

pub fn prop_config(cases: u32) -> PropConfig {
    PropConfig { cases, failure_persistence: None, ..PropConfig::default() }
}

pub fn rng(seed: u64) -> XorShiftRng {
    XorShiftRng::seed_from_u64(seed)
}

pub fn set(v: &[usize]) -> NodeSet {
    NodeSet::from_unsorted(v.to_vec())
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn clique(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
}

pub fn random_tree(r: &mut impl Rng, n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (r.random_range(0..v), v)))
}

/// Random graph with each pair present with probability `p`.
pub fn random_graph(r: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut e = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.random_bool(p) {
                e.push((u, v));
            }
        }
    }
    Graph::from_edges(n, e)
}

/// Random spanning tree plus up to `extra` random edges, nodes shuffled.
pub fn random_connected(r: &mut impl Rng, n: usize, extra: usize) -> Graph {
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(r);
    let mut e: Vec<(usize, usize)> = (1..n).map(|v| (label[r.random_range(0..v)], label[v])).collect();
    if n >= 2 {
        for _ in 0..extra {
            let u = r.random_range(0..n);
            let v = r.random_range(0..n);
            if u != v {
                e.push((u, v));
            }
        }
    }
    Graph::from_edges(n, e)
}

/// Grid with random diagonals and a few deleted edges: sparse, almost
/// planar, connected with high probability.
pub fn planar_ish(r: &mut impl Rng, width: usize, height: usize) -> Graph {
    let id = |x: usize, y: usize| y * width + x;
    let mut e = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width && r.random_bool(0.95) {
                e.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height && r.random_bool(0.95) {
                e.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < width && y + 1 < height && r.random_bool(0.4) {
                if r.random_bool(0.5) {
                    e.push((id(x, y), id(x + 1, y + 1)));
                } else {
                    e.push((id(x + 1, y), id(x, y + 1)));
                }
            }
        }
    }
    Graph::from_edges(width * height, e)
}

/// Random valid decomposition: random backbone tree, every node occupying a
/// random connected set of bags, and a graph whose edges all lie inside
/// some bag. Returns the graph, the decomposition and a root bag.
pub fn random_td(r: &mut impl Rng, max_nodes: usize) -> (Graph, TreeDecomposition, usize) {
    let n = r.random_range(1..=max_nodes);
    let k = r.random_range(1..=n + 2);
    let edges: Vec<(usize, usize)> = (1..k).map(|b| (r.random_range(0..b), b)).collect();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut bags = vec![Vec::new(); k];
    for v in 0..n {
        let size = r.random_range(1..=k.min(4));
        let start = r.random_range(0..k);
        let mut taken = vec![start];
        let mut frontier: Vec<usize> = adj[start].clone();
        while taken.len() < size && !frontier.is_empty() {
            let i = r.random_range(0..frontier.len());
            let b = frontier.swap_remove(i);
            if taken.contains(&b) {
                continue;
            }
            taken.push(b);
            frontier.extend(adj[b].iter().copied().filter(|c| !taken.contains(c)));
        }
        for b in taken {
            bags[b].push(v);
        }
    }
    let bags: Vec<NodeSet> = bags.into_iter().map(NodeSet::from_unsorted).collect();
    let mut gedges = Vec::new();
    for bag in &bags {
        let nodes = bag.as_slice();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                if r.random_bool(0.5) {
                    gedges.push((u, v));
                }
            }
        }
    }
    let root = r.random_range(0..k);
    (Graph::from_edges(n, gedges), TreeDecomposition::new(bags, edges, Some(root)), root)
}

/// Graph whose edges are all node pairs sharing a bag.
pub fn bag_graph(n: usize, bags: &[NodeSet]) -> Graph {
    let mut e = Vec::new();
    for bag in bags {
        let nodes = bag.as_slice();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                e.push((u, v));
            }
        }
    }
    Graph::from_edges(n, e)
}

fn letters(s: &str) -> NodeSet {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| (t.as_bytes()[0] - b'a') as usize)
        .collect()
}

/// The 16-cell partition on nodes a..r (ids 0..17): (interior, boundary,
/// expected bag, parent row), rows numbered from 1.
pub const SAMPLE_CELLS: [(&str, &str, &str, usize); 16] = [
    ("a", "b, f", "a, b, f", 2),
    ("a, b", "f, c", "b, f, c", 7),
    ("n", "m, o", "n, o, m", 4),
    ("n, o", "m, p", "o, m, p", 5),
    ("m, o, n", "f, p", "f, m, p", 7),
    ("g", "f, c, p", "f, g, p, c", 7),
    ("a, b, f, g, m, n, o", "p, c", "f, p, c", 16),
    ("j, k, l", "r, i", "j, r, i", 14),
    ("k, l", "j", "k, l, j", 8),
    ("q", "p, i, r", "q, r, p, i", 14),
    ("d", "c, e", "d, e, c", 13),
    ("h", "c, e, p", "h, e, p, c", 13),
    ("d, e, h", "c, p, i", "e, i, p, c", 15),
    ("q, r, j, k, l", "p, i", "p, r, i", 15),
    ("d, e, h, i, q, r, j, k, l", "p, c", "p, c, i", 16),
    ("a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r", "", "p, c", 0),
];

pub fn sample_partition() -> MultilevelPartition {
    let cells = SAMPLE_CELLS
        .iter()
        .map(|&(i, b, _, parent)| PartitionCell {
            interior: letters(i),
            boundary: letters(b),
            parent: (parent > 0).then(|| parent - 1),
        })
        .collect();
    MultilevelPartition { cells, root: 15 }
}

pub fn sample_bags() -> Vec<NodeSet> {
    SAMPLE_CELLS.iter().map(|&(_, _, bag, _)| letters(bag)).collect()
}
