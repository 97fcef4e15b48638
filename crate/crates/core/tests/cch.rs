mod common;

use proptest::prelude::*;
use rand::Rng;

use common::*;
use flowtd::cch::{dijkstra, Cch, WeightedGraph};
use flowtd::elimination::{min_degree_order, EliminationOrder};

fn weighted(seed: u64, n: usize, extra: usize, connected: bool) -> WeightedGraph {
    let mut r = rng(seed);
    let g = if connected { random_connected(&mut r, n, extra) } else { random_graph(&mut r, n, 0.2) };
    let edges: Vec<_> = g.edges().map(|(u, v)| (u, v, r.random_range(0..=20))).collect();
    WeightedGraph::from_edges(n, edges)
}

/// Relaxes every lower triangle in arbitrary order until nothing changes.
fn iterated_fixed_point(cch: &Cch) -> Vec<Option<u64>> {
    let n = cch.node_count();
    let mut w = std::collections::BTreeMap::new();
    for v in 0..n {
        for &u in cch.up_neighbors(v) {
            w.insert((v.min(u), v.max(u)), cch.weight(v, u).unwrap());
        }
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    loop {
        let mut changed = false;
        for z in (0..n).rev() {
            let h = cch.up_neighbors(z);
            for i in 0..h.len() {
                for j in i + 1..h.len() {
                    let via = w[&key(z, h[i])] + w[&key(z, h[j])];
                    let e = w.get_mut(&key(h[i], h[j])).unwrap();
                    if via < *e {
                        *e = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .flat_map(|v| (0..n).map(move |u| (v, u)))
        .map(|(v, u)| w.get(&key(v, u)).copied())
        .collect()
}

proptest! {
    #![proptest_config(prop_config(100))]

    #[test]
    fn queries_match_dijkstra(seed in any::<u64>(), n in 1usize..=12, connected in any::<bool>()) {
        let g = weighted(seed, n, 6, connected);
        let cch = Cch::customized(&g, min_degree_order(g.graph()));
        prop_assert!(cch.satisfies_lower_triangle_inequality());
        for s in 0..n {
            let d = dijkstra(&g, s);
            for (t, &dt) in d.iter().enumerate() {
                prop_assert_eq!(cch.query(s, t), dt);
            }
        }
    }

    #[test]
    fn any_order_works(seed in any::<u64>(), n in 1usize..=10) {
        use rand::seq::SliceRandom;
        let g = weighted(seed, n, 5, true);
        let mut o: Vec<usize> = (0..n).collect();
        o.shuffle(&mut rng(seed ^ 7));
        let initial = Cch::new(&g, EliminationOrder::new(o).unwrap());
        let fixed = iterated_fixed_point(&initial);
        let mut cch = initial.clone();
        cch.customize();
        prop_assert_eq!(cch.clone().customize(), 0);
        for v in 0..n {
            for u in 0..n {
                prop_assert_eq!(cch.weight(v, u), fixed[v * n + u]);
            }
        }
        let d = dijkstra(&g, 0);
        for (t, &dt) in d.iter().enumerate() {
            prop_assert_eq!(cch.query(0, t), dt);
            prop_assert_eq!(cch.query(t, 0), dt);
        }
    }
}

#[test]
fn search_spaces_stay_small_on_paths() {
    let n = 64;
    let g = WeightedGraph::from_edges(n, (1..n).map(|i| (i - 1, i, 1)));
    let cch = Cch::customized(&g, min_degree_order(g.graph()));
    let (d, space) = cch.query_with_stats(0, n - 1);
    assert_eq!(d, Some(n as u64 - 1));
    assert!(space.forward >= 1 && space.backward >= 1);
}
