//! Seeded generators for graphs and signings. Everything here is
//! deterministic in the seed.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeId, Graph, Sign, SignedGraph};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform simple graph with `n` vertices and `min(m, n choose 2)` edges,
/// ids `0..m` in order of the vertex pair.
pub fn random_simple_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Graph {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let m = m.min(all.len());
    let mut picked: Vec<usize> = sample(rng, all.len(), m).into_vec();
    picked.sort_unstable();
    let pairs: Vec<(usize, usize)> = picked.into_iter().map(|i| all[i]).collect();
    Graph::from_pairs(n, &pairs).expect("pairs are in range")
}

/// Multigraph with `m` edges whose endpoints are uniform; an edge is a loop
/// with probability `p_loop`, otherwise its endpoints are distinct when
/// `n >= 2`.
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, p_loop: f64) -> Graph {
    assert!(n > 0 || m == 0, "edges need a vertex");
    let pairs: Vec<(usize, usize)> = (0..m)
        .map(|_| {
            let a = rng.gen_range(0..n);
            if n == 1 || rng.gen_bool(p_loop) {
                (a, a)
            } else {
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                (a, b)
            }
        })
        .collect();
    Graph::from_pairs(n, &pairs).expect("pairs are in range")
}

/// Each edge negative independently with probability `p_neg`.
pub fn random_signing<R: Rng + ?Sized>(rng: &mut R, g: Graph, p_neg: f64) -> SignedGraph {
    let signs: Vec<Sign> =
        (0..g.edge_count()).map(|_| if rng.gen_bool(p_neg) { Sign::Negative } else { Sign::Positive }).collect();
    SignedGraph::new(g, signs).expect("one sign per edge")
}

/// Simple 2-connected graph on exactly `n >= 3` vertices: a random circle
/// grown by open ears until all vertices are used, then up to `chords`
/// extra edges between non-adjacent vertices. Vertices are shuffled so the
/// initial circle is not always `0..k`.
pub fn random_two_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, chords: usize) -> Graph {
    assert!(n >= 3, "a simple 2-connected graph needs three vertices");
    let mut adj = vec![vec![false; n]; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    fn add(adj: &mut [Vec<bool>], pairs: &mut Vec<(usize, usize)>, a: usize, b: usize) {
        adj[a][b] = true;
        adj[b][a] = true;
        pairs.push((a, b));
    }
    let first = rng.gen_range(3..=n);
    for i in 0..first {
        add(&mut adj, &mut pairs, i, (i + 1) % first);
    }
    let mut used = first;
    while used < n {
        let internal = rng.gen_range(1..=n - used);
        let a = rng.gen_range(0..used);
        let mut b = rng.gen_range(0..used - 1);
        if b >= a {
            b += 1;
        }
        let mut prev = a;
        for v in used..used + internal {
            add(&mut adj, &mut pairs, prev, v);
            prev = v;
        }
        add(&mut adj, &mut pairs, prev, b);
        used += internal;
    }
    for _ in 0..chords {
        let free: Vec<(usize, usize)> =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| !adj[a][b]).collect();
        if free.is_empty() {
            break;
        }
        let (a, b) = free[rng.gen_range(0..free.len())];
        add(&mut adj, &mut pairs, a, b);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut relabelled: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    relabelled.iter_mut().for_each(|p| *p = (p.0.min(p.1), p.0.max(p.1)));
    relabelled.sort_unstable();
    Graph::from_pairs(n, &relabelled).expect("pairs are in range")
}

/// Same graph with edge ids renumbered `0..m` in their current order.
pub fn dense_edge_ids(g: &Graph) -> Graph {
    Graph::new(g.vertex_count(), g.edges().iter().enumerate().map(|(i, e)| (EdgeId(i), e.u, e.v)))
        .expect("renumbering keeps edges valid")
}
