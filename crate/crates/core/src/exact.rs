//! Brute-force optima and structural validators for desk-scale checking.
//!
//! Everything here works by definition unfolding with unrestricted memory.
//! None of it is metered, and none of it shares code with the algorithms
//! it is used to check.


use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{DigraphInstance, GraphInstance, SetFamilyInstance, Vertex};
use crate::staggered::DeletionProblem;

/// Largest graph `exact_opt` accepts by default.
pub const GRAPH_CAP: usize = 16;
/// Largest ground set `exact_opt` accepts for hitting set by default.
pub const FAMILY_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    VertexCover,
    IndependentSet,
    /// Validated as maximal; optimized as maximum.
    MaximalIndependentSet,
    DominatingSet,
    HittingSet,
}

impl ProblemKind {
    pub fn is_maximization(self) -> bool {
        matches!(self, ProblemKind::IndependentSet | ProblemKind::MaximalIndependentSet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Tree,
    C4Free,
    Degenerate(usize),
    Regular(usize),
    Tournament,
    Functional,
}

#[derive(Debug, Clone, Copy)]
pub enum Instance<'a> {
    Graph(&'a GraphInstance),
    Digraph(&'a DigraphInstance),
    Family(&'a SetFamilyInstance),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: usize,
    /// Lexicographically least optimal solution.
    pub solution: Vec<u32>,
}

/// Why a candidate or an instance failed validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    OutOfRange(u32),
    Repeated(u32),
    UncoveredEdge(Vertex, Vertex),
    InternalEdge(Vertex, Vertex),
    Addable(Vertex),
    Undominated(Vertex),
    UnhitSet(u32),
    /// Two vertices in different components.
    Disconnected(Vertex, Vertex),
    /// An edge closing a cycle.
    CycleEdge(Vertex, Vertex),
    FourCycle([Vertex; 4]),
    /// A nonempty vertex set whose induced subgraph has minimum degree above the bound.
    DenseCore(Vec<Vertex>),
    Degree(Vertex, usize),
    MissingPair(Vertex, Vertex),
    BothArcs(Vertex, Vertex),
    OutDegree(Vertex, usize),
    WrongInstance,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict { ok: true, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Verdict { ok: false, witness: Some(w) }
    }

    fn from(w: Option<Witness>) -> Self {
        w.map_or_else(Verdict::pass, Verdict::fail)
    }
}

fn masks(g: &GraphInstance) -> Vec<u64> {
    let mut nb = vec![0u64; g.n() + 1];
    for &(u, v) in g.edges() {
        nb[u as usize] |= 1 << v;
        nb[v as usize] |= 1 << u;
    }
    nb
}

fn to_mask(ids: &[u32]) -> u64 {
    ids.iter().fold(0, |m, &v| m | 1 << v)
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap || size > 63 {
        return Err(Error::Refused { size, cap });
    }
    Ok(())
}

/// Smallest (or largest) subset satisfying `ok`, lexicographically least at that size.
fn search(n: usize, maximize: bool, ok: impl Fn(u64) -> bool) -> Optimum {
    let sizes: Vec<usize> = if maximize { (0..=n).rev().collect() } else { (0..=n).collect() };
    for s in sizes {
        for combo in (1..=n as u32).combinations(s) {
            if ok(to_mask(&combo)) {
                return Optimum { value: s, solution: combo };
            }
        }
    }
    unreachable!("the full or empty set is always feasible")
}

pub fn exact_opt(kind: ProblemKind, instance: Instance<'_>, cap: usize) -> Result<Optimum> {
    match (kind, instance) {
        (ProblemKind::HittingSet, Instance::Family(f)) => {
            check_cap(f.n(), cap)?;
            let sets: Vec<u64> = f.sets().map(to_mask).collect();
            Ok(search(f.n(), false, |s| sets.iter().all(|&a| a & s != 0)))
        }
        (ProblemKind::HittingSet, _) | (_, Instance::Family(_)) | (_, Instance::Digraph(_)) => {
            Err(Error::Domain(format!("{kind:?} does not apply to this instance")))
        }
        (kind, Instance::Graph(g)) => {
            check_cap(g.n(), cap)?;
            let nb = masks(g);
            let n = g.n();
            Ok(match kind {
                ProblemKind::VertexCover => search(n, false, |s| {
                    g.edges().iter().all(|&(u, v)| s & (1 << u | 1 << v) != 0)
                }),
                ProblemKind::IndependentSet | ProblemKind::MaximalIndependentSet => {
                    search(n, true, |s| (1..=n).all(|v| s & 1 << v == 0 || s & nb[v] == 0))
                }
                ProblemKind::DominatingSet => {
                    search(n, false, |s| (1..=n).all(|v| s & (nb[v] | 1 << v) != 0))
                }
                ProblemKind::HittingSet => unreachable!(),
            })
        }
    }
}

/// Vertex cover number by subset enumeration, for graphs with at most 20 vertices.
pub fn tau(g: &GraphInstance) -> usize {
    assert!(g.n() <= 20);
    let edges: Vec<u32> = g.edges().iter().map(|&(u, v)| 1 << (u - 1) | 1 << (v - 1)).collect();
    let mut best = g.n();
    for s in 0u32..1 << g.n() {
        let c = s.count_ones() as usize;
        if c < best && edges.iter().all(|&e| s & e != 0) {
            best = c;
        }
    }
    best
}

/// Membership bitmap of a candidate, or the first bad id.
fn membership(ids: &[u32], n: usize) -> std::result::Result<Vec<bool>, Witness> {
    let mut seen = vec![false; n + 1];
    for &v in ids {
        if v == 0 || v as usize > n {
            return Err(Witness::OutOfRange(v));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(Witness::Repeated(v));
        }
    }
    Ok(seen)
}

/// Check a candidate solution against the problem definition.
pub fn validate(kind: ProblemKind, instance: Instance<'_>, candidate: &[u32]) -> Verdict {
    match (kind, instance) {
        (ProblemKind::HittingSet, Instance::Family(f)) => {
            let inn = match membership(candidate, f.n()) {
                Ok(inn) => inn,
                Err(w) => return Verdict::fail(w),
            };
            Verdict::from(
                f.sets()
                    .position(|s| !s.iter().any(|&e| inn[e as usize]))
                    .map(|j| Witness::UnhitSet(j as u32 + 1)),
            )
        }
        (ProblemKind::HittingSet, _) | (_, Instance::Family(_)) | (_, Instance::Digraph(_)) => {
            Verdict::fail(Witness::WrongInstance)
        }
        (kind, Instance::Graph(g)) => {
            let inn = match membership(candidate, g.n()) {
                Ok(inn) => inn,
                Err(w) => return Verdict::fail(w),
            };
            let is = |v: Vertex| inn[v as usize];
            let w = match kind {
                ProblemKind::VertexCover => g
                    .edges()
                    .iter()
                    .find(|&&(u, v)| !is(u) && !is(v))
                    .map(|&(u, v)| Witness::UncoveredEdge(u, v)),
                ProblemKind::IndependentSet => internal_edge(g, &is),
                ProblemKind::MaximalIndependentSet => internal_edge(g, &is).or_else(|| {
                    g.vertices()
                        .find(|&v| !is(v) && !g.neighbors(v).iter().any(|&w| is(w)))
                        .map(Witness::Addable)
                }),
                ProblemKind::DominatingSet => g
                    .vertices()
                    .find(|&v| !is(v) && !g.neighbors(v).iter().any(|&w| is(w)))
                    .map(Witness::Undominated),
                ProblemKind::HittingSet => unreachable!(),
            };
            Verdict::from(w)
        }
    }
}

fn internal_edge(g: &GraphInstance, is: &impl Fn(Vertex) -> bool) -> Option<Witness> {
    g.edges()
        .iter()
        .find(|&&(u, v)| is(u) && is(v))
        .map(|&(u, v)| Witness::InternalEdge(u, v))
}

/// Check a structural precondition.
pub fn validate_structure(kind: StructureKind, instance: Instance<'_>) -> Verdict {
    match (kind, instance) {
        (StructureKind::Tournament, Instance::Digraph(d)) => Verdict::from(tournament_witness(d)),
        (StructureKind::Functional, Instance::Digraph(d)) => Verdict::from(
            d.vertices()
                .find(|&v| d.out_neighbors(v).len() > 1)
                .map(|v| Witness::OutDegree(v, d.out_neighbors(v).len())),
        ),
        (StructureKind::Tournament | StructureKind::Functional, _) => {
            Verdict::fail(Witness::WrongInstance)
        }
        (kind, Instance::Graph(g)) => Verdict::from(match kind {
            StructureKind::Tree => tree_witness(g),
            StructureKind::C4Free => find_c4(g).map(Witness::FourCycle),
            StructureKind::Degenerate(d) => {
                let (deg, order) = degeneracy(g);
                (deg > d).then(|| Witness::DenseCore(core_above(g, d, &order)))
            }
            StructureKind::Regular(d) => g
                .vertices()
                .find(|&v| g.degree(v) != d)
                .map(|v| Witness::Degree(v, g.degree(v))),
            _ => unreachable!(),
        }),
        _ => Verdict::fail(Witness::WrongInstance),
    }
}

fn tournament_witness(d: &DigraphInstance) -> Option<Witness> {
    for u in d.vertices() {
        for v in u + 1..=d.n() as Vertex {
            match (d.has_arc(u, v), d.has_arc(v, u)) {
                (true, true) => return Some(Witness::BothArcs(u, v)),
                (false, false) => return Some(Witness::MissingPair(u, v)),
                _ => {}
            }
        }
    }
    None
}

fn tree_witness(g: &GraphInstance) -> Option<Witness> {
    let n = g.n();
    if n == 0 {
        return None;
    }
    // breadth-first from 1; the root is its own parent, 0 marks unseen
    let mut small = [0 as Vertex; 65];
    let mut large = Vec::new();
    let buf = if 2 * n < small.len() {
        &mut small[..2 * n + 1]
    } else {
        large.resize(2 * n + 1, 0);
        &mut large[..]
    };
    let (parent, queue) = buf.split_at_mut(n + 1);
    parent[1] = 1;
    queue[0] = 1;
    let (mut head, mut tail) = (0, 1);
    while head < tail {
        let u = queue[head];
        head += 1;
        for &w in g.neighbors(u) {
            if parent[w as usize] == 0 {
                parent[w as usize] = u;
                queue[tail] = w;
                tail += 1;
            } else if parent[u as usize] != w {
                return Some(Witness::CycleEdge(u, w));
            }
        }
    }
    (1..=n as Vertex).find(|&v| parent[v as usize] == 0).map(|v| Witness::Disconnected(1, v))
}

/// A 4-cycle subgraph `[a, b, c, d]` (edges ab, bc, cd, da), if any.
pub fn find_c4(g: &GraphInstance) -> Option<[Vertex; 4]> {
    let n = g.n();
    let mut first = vec![0 as Vertex; n + 1];
    for a in g.vertices() {
        first.iter_mut().for_each(|x| *x = 0);
        for &b in g.neighbors(a) {
            for &c in g.neighbors(b) {
                if c == a {
                    continue;
                }
                match first[c as usize] {
                    0 => first[c as usize] = b,
                    d if d != b => return Some([a, d, c, b]),
                    _ => {}
                }
            }
        }
    }
    None
}

pub fn has_c4(g: &GraphInstance) -> bool {
    find_c4(g).is_some()
}

/// Degeneracy and the peel order realizing it (repeatedly remove a
/// minimum-degree vertex, smallest id first).
pub fn degeneracy(g: &GraphInstance) -> (usize, Vec<Vertex>) {
    let n = g.n();
    let mut deg: Vec<usize> = (0..=n).map(|v| if v == 0 { 0 } else { g.degree(v as Vertex) }).collect();
    let mut gone = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut best = 0;
    for _ in 0..n {
        let v = (1..=n).filter(|&v| !gone[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        best = best.max(deg[v]);
        gone[v] = true;
        order.push(v as Vertex);
        for &w in g.neighbors(v as Vertex) {
            if !gone[w as usize] {
                deg[w as usize] -= 1;
            }
        }
    }
    (best, order)
}

fn core_above(g: &GraphInstance, d: usize, order: &[Vertex]) -> Vec<Vertex> {
    // Peel vertices of degree <= d until none is left to peel; the rest is the core.
    let n = g.n();
    let mut alive = vec![true; n + 1];
    loop {
        let deg = |v: Vertex, alive: &Vec<bool>| {
            g.neighbors(v).iter().filter(|&&w| alive[w as usize]).count()
        };
        match order.iter().find(|&&v| alive[v as usize] && deg(v, &alive) <= d) {
            Some(&v) => alive[v as usize] = false,
            None => break,
        }
    }
    let mut core: Vec<Vertex> = g.vertices().filter(|&v| alive[v as usize]).collect();
    core.sort_unstable();
    core
}

/// Whether the graph (or digraph) minus `deleted` still violates the
/// target class of `problem`, checked by the class definition rather than
/// by forbidden patterns. Returns the offending vertex set.
pub fn residual_violation(
    problem: DeletionProblem,
    instance: Instance<'_>,
    deleted: &[Vertex],
) -> Result<Option<Vec<Vertex>>> {
    match (problem, instance) {
        (DeletionProblem::TournamentFvs, Instance::Digraph(d)) => Ok(directed_cycle(d, deleted)),
        (DeletionProblem::TournamentFvs, _) | (_, Instance::Digraph(_)) | (_, Instance::Family(_)) => {
            Err(Error::Domain(format!("{problem:?} does not apply to this instance")))
        }
        (problem, Instance::Graph(g)) => {
            let mut keep = vec![true; g.n() + 1];
            keep[0] = false;
            for &v in deleted {
                keep[v as usize] = false;
            }
            let verts: Vec<Vertex> = g.vertices().filter(|&v| keep[v as usize]).collect();
            Ok(match problem {
                DeletionProblem::VertexCover => g
                    .edges()
                    .iter()
                    .find(|&&(u, v)| keep[u as usize] && keep[v as usize])
                    .map(|&(u, v)| vec![u, v]),
                DeletionProblem::TriangleVd => verts
                    .iter()
                    .copied()
                    .tuple_combinations()
                    .find(|&(a, b, c)| g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c))
                    .map(|(a, b, c)| vec![a, b, c]),
                DeletionProblem::ClusterVd => components(g, &verts)
                    .into_iter()
                    .find(|c| c.iter().tuple_combinations().any(|(&a, &b)| !g.has_edge(a, b))),
                DeletionProblem::CographVd => non_cograph_part(g, &verts),
                DeletionProblem::ThresholdVd => threshold_stuck(g, &verts),
                DeletionProblem::SplitVd => (!is_split(g, &verts)).then_some(verts),
                DeletionProblem::TournamentFvs => unreachable!(),
            })
        }
    }
}

fn components(g: &GraphInstance, verts: &[Vertex]) -> Vec<Vec<Vertex>> {
    components_by(verts, |a, b| g.has_edge(a, b))
}

fn components_by(verts: &[Vertex], adj: impl Fn(Vertex, Vertex) -> bool) -> Vec<Vec<Vertex>> {
    let mut left: Vec<Vertex> = verts.to_vec();
    let mut out = Vec::new();
    while let Some(s) = left.pop() {
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            let (near, far): (Vec<_>, Vec<_>) = left.iter().partition(|&&w| adj(u, w));
            comp.extend(near);
            left = far;
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn non_cograph_part(g: &GraphInstance, verts: &[Vertex]) -> Option<Vec<Vertex>> {
    if verts.len() < 2 {
        return None;
    }
    let parts = components(g, verts);
    if parts.len() > 1 {
        return parts.iter().find_map(|p| non_cograph_part(g, p));
    }
    let co = components_by(verts, |a, b| a != b && !g.has_edge(a, b));
    if co.len() > 1 {
        return co.iter().find_map(|p| non_cograph_part(g, p));
    }
    Some(verts.to_vec())
}

fn threshold_stuck(g: &GraphInstance, verts: &[Vertex]) -> Option<Vec<Vertex>> {
    let mut left = verts.to_vec();
    while !left.is_empty() {
        let deg = |v: Vertex| left.iter().filter(|&&w| g.has_edge(v, w)).count();
        match left.iter().position(|&v| deg(v) == 0 || deg(v) == left.len() - 1) {
            Some(i) => {
                left.remove(i);
            }
            None => return Some(left),
        }
    }
    None
}

/// Degree-sequence test for split graphs.
fn is_split(g: &GraphInstance, verts: &[Vertex]) -> bool {
    let mut deg: Vec<usize> = verts
        .iter()
        .map(|&v| verts.iter().filter(|&&w| g.has_edge(v, w)).count())
        .collect();
    deg.sort_unstable_by(|a, b| b.cmp(a));
    let m = (1..=deg.len()).filter(|&i| deg[i - 1] + 1 >= i).max().unwrap_or(0);
    let head: usize = deg[..m].iter().sum();
    let tail: usize = deg[m..].iter().sum();
    head == m * m.saturating_sub(1) + tail
}

fn directed_cycle(d: &DigraphInstance, deleted: &[Vertex]) -> Option<Vec<Vertex>> {
    let n = d.n();
    let mut keep = vec![true; n + 1];
    for &v in deleted {
        keep[v as usize] = false;
    }
    let mut indeg = vec![0usize; n + 1];
    for &(u, v) in d.arcs() {
        if keep[u as usize] && keep[v as usize] {
            indeg[v as usize] += 1;
        }
    }
    let mut stack: Vec<Vertex> = d.vertices().filter(|&v| keep[v as usize] && indeg[v as usize] == 0).collect();
    let mut removed = vec![false; n + 1];
    while let Some(u) = stack.pop() {
        removed[u as usize] = true;
        for &w in d.out_neighbors(u) {
            if keep[w as usize] {
                indeg[w as usize] -= 1;
                if indeg[w as usize] == 0 {
                    stack.push(w);
                }
            }
        }
    }
    let rest: Vec<Vertex> = d.vertices().filter(|&v| keep[v as usize] && !removed[v as usize]).collect();
    (!rest.is_empty()).then_some(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(u32, u32)]) -> GraphInstance {
        GraphInstance::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn small_optima() {
        let tri = g(3, &[(1, 2), (2, 3), (1, 3)]);
        let vc = exact_opt(ProblemKind::VertexCover, Instance::Graph(&tri), GRAPH_CAP).unwrap();
        assert_eq!(vc, Optimum { value: 2, solution: vec![1, 2] });
        let p5 = g(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]);
        let ds = exact_opt(ProblemKind::DominatingSet, Instance::Graph(&p5), GRAPH_CAP).unwrap();
        assert_eq!(ds.value, 2);
        let f = SetFamilyInstance::new(4, 2, vec![vec![1, 2], vec![2, 3], vec![3, 4]]).unwrap();
        let hs = exact_opt(ProblemKind::HittingSet, Instance::Family(&f), FAMILY_CAP).unwrap();
        assert_eq!(hs.value, 2);
        assert_eq!(tau(&p5), 2);
    }

    #[test]
    fn refuses_large() {
        let big = GraphInstance::empty(17);
        assert_eq!(
            exact_opt(ProblemKind::VertexCover, Instance::Graph(&big), GRAPH_CAP),
            Err(Error::Refused { size: 17, cap: 16 })
        );
    }

    #[test]
    fn witnesses() {
        let tri = g(3, &[(1, 2), (2, 3), (1, 3)]);
        assert_eq!(
            validate(ProblemKind::VertexCover, Instance::Graph(&tri), &[1]).witness,
            Some(Witness::UncoveredEdge(2, 3))
        );
        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        assert!(validate(ProblemKind::DominatingSet, Instance::Graph(&star), &[1]).ok);
        assert_eq!(
            validate(ProblemKind::MaximalIndependentSet, Instance::Graph(&star), &[2, 3]).witness,
            Some(Witness::Addable(4))
        );
        let c4 = g(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let v = validate_structure(StructureKind::C4Free, Instance::Graph(&c4));
        match v.witness {
            Some(Witness::FourCycle(mut q)) => {
                q.sort_unstable();
                assert_eq!(q, [1, 2, 3, 4]);
            }
            other => panic!("{other:?}"),
        }
        assert!(!validate_structure(StructureKind::Tree, Instance::Graph(&c4)).ok);
        assert!(validate_structure(StructureKind::Tree, Instance::Graph(&star)).ok);
        assert_eq!(
            validate_structure(StructureKind::Degenerate(1), Instance::Graph(&c4)).witness,
            Some(Witness::DenseCore(vec![1, 2, 3, 4]))
        );
    }

    #[test]
    fn degeneracy_peels() {
        let k4 = g(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        assert_eq!(degeneracy(&k4).0, 3);
        let star = g(4, &[(1, 2), (1, 3), (1, 4)]);
        assert_eq!(degeneracy(&star), (1, vec![2, 3, 1, 4]));
    }

    #[test]
    fn class_definitions() {
        let p4 = g(4, &[(1, 2), (2, 3), (3, 4)]);
        let ig = Instance::Graph(&p4);
        assert!(residual_violation(DeletionProblem::CographVd, ig, &[]).unwrap().is_some());
        assert!(residual_violation(DeletionProblem::CographVd, ig, &[2]).unwrap().is_none());
        assert!(residual_violation(DeletionProblem::ClusterVd, ig, &[3]).unwrap().is_none());
        assert!(residual_violation(DeletionProblem::ThresholdVd, ig, &[]).unwrap().is_some());
        assert!(residual_violation(DeletionProblem::SplitVd, ig, &[]).unwrap().is_none());
        let c4 = g(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert!(residual_violation(DeletionProblem::SplitVd, Instance::Graph(&c4), &[]).unwrap().is_some());
        let c3 = DigraphInstance::from_arcs(3, [(1, 2), (2, 3), (3, 1)]).unwrap();
        let id = Instance::Digraph(&c3);
        assert!(residual_violation(DeletionProblem::TournamentFvs, id, &[]).unwrap().is_some());
        assert!(residual_violation(DeletionProblem::TournamentFvs, id, &[2]).unwrap().is_none());
    }
}
