//! Seeded random instances with guaranteed structure.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::instance::{DigraphInstance, Element, GraphInstance, SetFamilyInstance, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Edges of the tree with Prüfer sequence `seq` on `seq.len() + 2` vertices.
pub fn prufer_edges(seq: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let n = seq.len() + 2;
    let mut deg = vec![1usize; n + 1];
    for &a in seq {
        deg[a as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // smallest leaf, found by a forward scan that only backs up when a new
    // leaf appears below it
    let mut ptr = (1..=n).find(|&b| deg[b] == 1).expect("a leaf always exists");
    let mut leaf = ptr;
    for &a in seq {
        edges.push((leaf as Vertex, a));
        deg[leaf] -= 1;
        deg[a as usize] -= 1;
        if deg[a as usize] == 1 && (a as usize) < ptr {
            leaf = a as usize;
        } else {
            ptr = (ptr..=n).find(|&b| deg[b] == 1).expect("a leaf always exists");
            leaf = ptr;
        }
    }
    let last = (1..=n).find(|&b| deg[b] == 1 && b != leaf).expect("two vertices remain");
    edges.push((leaf.min(last) as Vertex, leaf.max(last) as Vertex));
    edges
}

/// Every labelled tree on `n` vertices, once each.
pub fn all_trees(n: usize) -> impl Iterator<Item = GraphInstance> {
    let len = n.saturating_sub(2);
    let mut seq: Option<Vec<Vertex>> = Some(vec![1; len]);
    std::iter::from_fn(move || {
        let cur = seq.take()?;
        let tree = match n {
            0 | 1 => GraphInstance::empty(n),
            _ => GraphInstance::from_edges(n, prufer_edges(&cur)).expect("valid tree"),
        };
        if n >= 2 {
            let mut next = cur;
            if let Some(i) = next.iter().rposition(|&x| (x as usize) < n) {
                next[i] += 1;
                next[i + 1..].iter_mut().for_each(|x| *x = 1);
                seq = Some(next);
            }
        }
        Some(tree)
    })
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> GraphInstance {
    if n < 2 {
        return GraphInstance::empty(n);
    }
    let seq: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(1..=n as Vertex)).collect();
    GraphInstance::from_edges(n, prufer_edges(&seq)).expect("valid tree")
}

fn shuffled_pairs(n: usize, rng: &mut impl Rng) -> Vec<(Vertex, Vertex)> {
    let mut pairs: Vec<(Vertex, Vertex)> =
        (1..=n as Vertex).flat_map(|u| (u + 1..=n as Vertex).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    pairs
}

/// Each pair becomes an edge with probability `p` unless an endpoint
/// already has `max_degree` neighbours.
pub fn random_graph(n: usize, max_degree: usize, p: f64, rng: &mut impl Rng) -> GraphInstance {
    let mut deg = vec![0usize; n + 1];
    let mut edges = Vec::new();
    for (u, v) in shuffled_pairs(n, rng) {
        if deg[u as usize] < max_degree && deg[v as usize] < max_degree && rng.gen_bool(p) {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            edges.push((u, v));
        }
    }
    GraphInstance::from_edges(n, edges).expect("simple by construction")
}

/// Random `d`-regular graph: a circulant start scrambled by degree-preserving swaps.
pub fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<GraphInstance> {
    if d >= n.max(1) && !(n == 1 && d == 0) || n * d % 2 == 1 {
        return Err(domain(format!("no {d}-regular graph on {n} vertices")));
    }
    let mut adj = vec![vec![false; n + 1]; n + 1];
    let mut edges = Vec::new();
    let add = |adj: &mut Vec<Vec<bool>>, u: usize, v: usize, edges: &mut Vec<(usize, usize)>| {
        adj[u][v] = true;
        adj[v][u] = true;
        edges.push((u, v));
    };
    for i in 0..n {
        for s in 1..=d / 2 {
            add(&mut adj, i + 1, (i + s) % n + 1, &mut edges);
        }
        if d % 2 == 1 && i < n / 2 {
            add(&mut adj, i + 1, i + n / 2 + 1, &mut edges);
        }
    }
    for _ in 0..10 * edges.len() {
        let (i, j) = (rng.gen_range(0..edges.len()), rng.gen_range(0..edges.len()));
        let ((a, b), (c, e)) = (edges[i], edges[j]);
        let (c, e) = if rng.gen_bool(0.5) { (c, e) } else { (e, c) };
        // a-b, c-e  ->  a-c, b-e
        if i == j || a == c || b == e || a == e || b == c || adj[a][c] || adj[b][e] {
            continue;
        }
        adj[a][b] = false;
        adj[b][a] = false;
        adj[c][e] = false;
        adj[e][c] = false;
        adj[a][c] = true;
        adj[c][a] = true;
        adj[b][e] = true;
        adj[e][b] = true;
        edges[i] = (a, c);
        edges[j] = (b, e);
    }
    GraphInstance::from_edges(n, edges.into_iter().map(|(u, v)| (u as Vertex, v as Vertex)))
}

/// Greedy random graph without a 4-cycle subgraph.
pub fn random_c4free(n: usize, p: f64, rng: &mut impl Rng) -> GraphInstance {
    let mut adj = vec![vec![false; n + 1]; n + 1];
    let mut edges = Vec::new();
    for (u, v) in shuffled_pairs(n, rng) {
        if !rng.gen_bool(p) {
            continue;
        }
        let (u, v) = (u as usize, v as usize);
        // u-v closes a C4 iff some a ~ u and b ~ v are adjacent, with a, b, u, v distinct
        let closes = (1..=n).any(|a| {
            a != v && adj[u][a] && (1..=n).any(|b| b != u && b != a && adj[v][b] && adj[a][b])
        });
        if !closes {
            adj[u][v] = true;
            adj[v][u] = true;
            edges.push((u as Vertex, v as Vertex));
        }
    }
    GraphInstance::from_edges(n, edges).expect("simple by construction")
}

/// Each vertex links to at most `d` random earlier vertices, under a random relabelling.
pub fn random_degenerate(n: usize, d: usize, rng: &mut impl Rng) -> GraphInstance {
    let mut label: Vec<Vertex> = (1..=n as Vertex).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let want = rng.gen_range(0..=d.min(i));
        for j in rand::seq::index::sample(rng, i, want) {
            edges.push((label[i], label[j]));
        }
    }
    GraphInstance::from_edges(n, edges).expect("simple by construction")
}

/// Out-degree at most one; each vertex gets an arc with probability 3/4.
pub fn random_functional(n: usize, rng: &mut impl Rng) -> DigraphInstance {
    let arcs: Vec<_> = (1..=n as Vertex)
        .filter_map(|u| {
            if n < 2 || !rng.gen_bool(0.75) {
                return None;
            }
            let mut v = rng.gen_range(1..n as Vertex);
            if v >= u {
                v += 1;
            }
            Some((u, v))
        })
        .collect();
    DigraphInstance::from_arcs(n, arcs).expect("valid functional digraph")
}

pub fn random_tournament(n: usize, rng: &mut impl Rng) -> DigraphInstance {
    let arcs: Vec<_> = (1..=n as Vertex)
        .flat_map(|u| (u + 1..=n as Vertex).map(move |v| (u, v)))
        .map(|(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) })
        .collect();
    DigraphInstance::from_arcs(n, arcs).expect("valid tournament")
}

/// Up to `m` distinct sets of sizes `1..=d` over `1..=n`.
pub fn random_family(n: usize, m: usize, d: usize, rng: &mut impl Rng) -> SetFamilyInstance {
    let d = d.clamp(1, n.max(1));
    let mut sets: Vec<Vec<Element>> = Vec::new();
    let mut tries = 0;
    while sets.len() < m && tries < 20 * m + 20 && n > 0 {
        tries += 1;
        let size = rng.gen_range(1..=d);
        let mut s: Vec<Element> = rand::seq::index::sample(rng, n, size).iter().map(|e| e as Element + 1).collect();
        s.sort_unstable();
        if !sets.contains(&s) {
            sets.push(s);
        }
    }
    SetFamilyInstance::new(n, d, sets).expect("distinct by construction")
}

/// Small connected pieces of maximum degree 3, each on at most six vertices.
const GADGETS: [(usize, &[(Vertex, Vertex)]); 6] = [
    (2, &[(1, 2)]),
    (3, &[(1, 2), (2, 3), (1, 3)]),
    (4, &[(1, 2), (1, 3), (1, 4)]),
    (4, &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]),
    (5, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
    (6, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4), (2, 5), (3, 6)]),
];

/// Disjoint union of random gadgets filling exactly `n` vertices.
pub fn gadget_union(n: usize, rng: &mut impl Rng) -> GraphInstance {
    let mut edges = Vec::new();
    let mut base = 0;
    while base < n {
        let fits: Vec<_> = GADGETS.iter().filter(|(k, _)| base + k <= n).collect();
        if fits.is_empty() {
            break;
        }
        let (k, es) = fits[rng.gen_range(0..fits.len())];
        edges.extend(es.iter().map(|&(u, v)| (u + base as Vertex, v + base as Vertex)));
        base += k;
    }
    GraphInstance::from_edges(n, edges).expect("disjoint gadgets")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{degeneracy, has_c4, validate_structure, Instance, StructureKind};

    #[test]
    fn cayley_counts() {
        for (n, count) in [(1, 1), (2, 1), (3, 3), (4, 16), (5, 125), (6, 1296)] {
            assert_eq!(all_trees(n).count(), count);
            assert!(all_trees(n).all(|t| validate_structure(StructureKind::Tree, Instance::Graph(&t)).ok));
        }
    }

    #[test]
    fn known_prufer_sequence() {
        assert_eq!(prufer_edges(&[4, 4, 4, 5]), vec![(1, 4), (2, 4), (3, 4), (4, 5), (5, 6)]);
    }

    #[test]
    fn generators_respect_structure() {
        let mut r = rng(7);
        for n in 1..=14 {
            let t = random_tree(n, &mut r);
            assert!(validate_structure(StructureKind::Tree, Instance::Graph(&t)).ok);
            assert!(random_graph(n, 3, 0.5, &mut r).max_degree() <= 3);
            assert!(!has_c4(&random_c4free(n, 0.6, &mut r)));
            assert!(degeneracy(&random_degenerate(n, 2, &mut r)).0 <= 2);
            assert!(random_functional(n, &mut r).is_functional());
            assert!(random_tournament(n, &mut r).is_tournament());
            assert_eq!(gadget_union(n, &mut r).n(), n);
            assert!(gadget_union(n, &mut r).max_degree() <= 3);
            let f = random_family(n, 10, 3, &mut r);
            assert!(f.m() <= 10 && f.d() <= 3);
        }
        for (n, d) in [(8, 3), (6, 2), (10, 3), (16, 4), (4, 3), (1, 0), (7, 4)] {
            let g = random_regular(n, d, &mut r).unwrap();
            assert!(validate_structure(StructureKind::Regular(d), Instance::Graph(&g)).ok);
        }
        assert!(random_regular(7, 3, &mut r).is_err());
        assert!(random_regular(3, 3, &mut r).is_err());
    }

    #[test]
    fn seeded_is_deterministic() {
        assert_eq!(random_graph(10, 4, 0.5, &mut rng(3)), random_graph(10, 4, 0.5, &mut rng(3)));
    }
}
