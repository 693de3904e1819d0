//! Stage-by-stage extraction of out-degree-one subgraphs.
//!
//! At stage `i` every live vertex points at its `i`-th neighbour in the
//! original adjacency order, provided that neighbour is live too. The
//! resulting digraph has out-degree at most one, so it can be solved
//! exactly by [`crate::tree`], and its solution becomes the next deletion
//! layer.

use crate::instance::{
    max_degree, Element, FamilyAccess, GraphAccess, GraphInstance, Meter, SetFamilyInstance,
    SetIndex, Vertex,
};
use crate::oracle::{ElementStage, FamilyLevel, GraphLevel, LayeredFamilyView, LayeredGraphView, Mode, VertexStage};
use crate::tree::{functional_in_cover, Functional};
use crate::error::{domain, Result};
use crate::Staged;

/// The stage digraph: `u -> ith_neighbor(u, i)` when both ends are live.
pub struct StageDigraph<'l, 'v, G: GraphAccess + ?Sized> {
    level: &'l GraphLevel<'v, G>,
    index: usize,
}

impl<'l, 'v, G: GraphAccess + ?Sized> StageDigraph<'l, 'v, G> {
    pub fn new(level: &'l GraphLevel<'v, G>, index: usize) -> Self {
        StageDigraph { level, index }
    }
}

impl<G: GraphAccess + ?Sized> Functional for StageDigraph<'_, '_, G> {
    fn order(&self) -> usize {
        self.level.order()
    }

    fn meter(&self) -> &Meter {
        self.level.meter()
    }

    fn present(&self, x: Vertex) -> bool {
        self.level.live(x)
    }

    fn out(&self, x: Vertex) -> Option<Vertex> {
        self.level.ith_neighbor(x, self.index).filter(|&w| self.level.live(w))
    }

    fn in_after(&self, x: Vertex, prev: Option<Vertex>) -> Option<Vertex> {
        let _f = self.meter().frame(2);
        let mut j = 1;
        if let Some(p) = prev {
            while self.level.ith_neighbor(x, j)? != p {
                j += 1;
            }
            j += 1;
        }
        loop {
            let y = self.level.ith_neighbor(x, j)?;
            if self.level.ith_neighbor(y, self.index) == Some(x) && self.level.live(y) {
                return Some(y);
            }
            j += 1;
        }
    }
}

/// Deletes the minimum vertex cover of stage digraph `index`.
struct CoverStage {
    index: usize,
}

impl<G: GraphAccess + ?Sized> VertexStage<G> for CoverStage {
    fn words(&self) -> u64 {
        1
    }

    fn check(&self, prev: &GraphLevel<'_, G>, v: Vertex) -> bool {
        functional_in_cover(&StageDigraph::new(prev, self.index), v)
    }
}

/// Membership in the stage's selected independent set: `v` is in the
/// maximum independent set of the stage digraph and no smaller live
/// neighbour is.
fn selected<G: GraphAccess + ?Sized>(prev: &GraphLevel<'_, G>, index: usize, v: Vertex) -> bool {
    let h = StageDigraph::new(prev, index);
    let _f = prev.meter().frame(1);
    !functional_in_cover(&h, v)
        && !prev.live_neighbors(v).any(|w| w < v && !functional_in_cover(&h, w))
}

/// Deletes the selected vertices and their neighbours.
struct IndependentStage {
    index: usize,
}

impl<G: GraphAccess + ?Sized> VertexStage<G> for IndependentStage {
    fn words(&self) -> u64 {
        1
    }

    fn check(&self, prev: &GraphLevel<'_, G>, v: Vertex) -> bool {
        selected(prev, self.index, v) || prev.live_neighbors(v).any(|w| selected(prev, self.index, w))
    }
}

fn resolve_delta<G: GraphAccess + ?Sized>(g: &G, delta: Option<usize>, meter: &Meter) -> usize {
    delta.unwrap_or_else(|| max_degree(g, meter))
}

/// 2-approximate vertex cover of a bounded-degree graph.
///
/// Runs `delta` stages (the maximum degree when `None`); stage `i` removes a
/// minimum cover of stage digraph `i`. The union covers every edge because
/// each edge is the `i`-th edge of one of its endpoints for some `i`.
pub fn bd_vc_2approx<G: GraphAccess + ?Sized>(
    g: &G,
    delta: Option<usize>,
    mode: Mode,
    meter: &Meter,
) -> Staged {
    let delta = resolve_delta(g, delta, meter);
    let mut view = LayeredGraphView::new(g, meter, mode);
    for i in 1..=delta {
        view.push(CoverStage { index: i });
    }
    let stages = (1..=delta)
        .map(|i| view.stage_vertices(i).expect("depth in range").collect())
        .collect();
    Staged { stages }
}

/// Maximal independent set oracle over a bounded-degree graph.
///
/// Stage `s` uses neighbour index `(s - 1) mod delta + 1`. It takes the
/// maximum independent set of that stage digraph, keeps the members that
/// are smallest among their live neighbours inside it, and deletes them
/// with their neighbourhoods. Every stage with a live vertex selects at
/// least one, so `n` stages always suffice.
pub struct MaximalIs<'a, G: GraphAccess + ?Sized> {
    view: LayeredGraphView<'a, G>,
    delta: usize,
}

impl<'a, G: GraphAccess + ?Sized> MaximalIs<'a, G> {
    pub fn new(g: &'a G, delta: Option<usize>, mode: Mode, meter: &'a Meter) -> Self {
        let delta = resolve_delta(g, delta, meter).max(1);
        let mut view = LayeredGraphView::new(g, meter, mode);
        for s in 1..=g.order() {
            view.push(IndependentStage { index: (s - 1) % delta + 1 });
        }
        MaximalIs { view, delta }
    }

    /// Whether `v` is in the output.
    pub fn contains(&self, v: Vertex) -> bool {
        let _f = self.view.meter().frame(1);
        for s in 1..=self.view.depth() {
            if !self.view.level(s - 1).live(v) {
                return false;
            }
            if self.is_selected(s, v) {
                return true;
            }
        }
        false
    }

    fn is_selected(&self, s: usize, v: Vertex) -> bool {
        let prev = self.view.level(s - 1);
        prev.live(v) && selected(&prev, (s - 1) % self.delta + 1, v)
    }

    /// Output split by stage, stopping once nothing is live.
    pub fn staged(&self) -> Staged {
        let n = self.view.base().order();
        let mut stages = Vec::new();
        for s in 1..=self.view.depth() {
            if self.view.level(s - 1).first_live().is_none() {
                break;
            }
            stages.push((1..=n as Vertex).filter(|&v| self.is_selected(s, v)).collect());
        }
        Staged { stages }
    }
}

/// Maximal independent set of a bounded-degree graph.
pub fn bd_maximal_is<G: GraphAccess + ?Sized>(
    g: &G,
    delta: Option<usize>,
    mode: Mode,
    meter: &Meter,
) -> Staged {
    MaximalIs::new(g, delta, mode, meter).staged()
}

/// Sets of `H` at level `prev` for stage `index`: live sets that are the
/// `index`-th set of one of their elements.
fn in_h<F: FamilyAccess + ?Sized>(prev: &FamilyLevel<'_, F>, index: usize, j: SetIndex) -> bool {
    let base = prev.base();
    let meter = prev.meter();
    let _f = meter.frame(2);
    prev.set_live(j)
        && (1..=base.set_len(j, meter)).any(|t| {
            let e = base.set_element(j, t, meter).expect("within set");
            base.ith_set_of(e, index, meter) == Some(j)
        })
}

/// Intersection graph on the members of `H`, numbered by position in set order.
pub struct IntersectionGraph<'l, 'v, F: FamilyAccess + ?Sized> {
    level: &'l FamilyLevel<'v, F>,
    index: usize,
    order: usize,
}

impl<'l, 'v, F: FamilyAccess + ?Sized> IntersectionGraph<'l, 'v, F> {
    pub fn new(level: &'l FamilyLevel<'v, F>, index: usize) -> Self {
        let m = level.base().set_count() as SetIndex;
        let order = (1..=m).filter(|&j| in_h(level, index, j)).count();
        IntersectionGraph { level, index, order }
    }

    /// The set at position `pos`.
    pub fn member(&self, pos: usize) -> SetIndex {
        let _f = self.level.meter().frame(2);
        let mut seen = 0;
        for j in 1..=self.level.base().set_count() as SetIndex {
            if in_h(self.level, self.index, j) {
                seen += 1;
                if seen == pos {
                    return j;
                }
            }
        }
        panic!("position {pos} beyond {}", self.order)
    }

    fn intersects(&self, a: SetIndex, b: SetIndex) -> bool {
        let base = self.level.base();
        let meter = self.level.meter();
        let _f = meter.frame(2);
        (1..=base.set_len(a, meter)).any(|t| {
            base.contains(b, base.set_element(a, t, meter).expect("within set"), meter)
        })
    }
}

impl<F: FamilyAccess + ?Sized> GraphAccess for IntersectionGraph<'_, '_, F> {
    fn order(&self) -> usize {
        self.order
    }

    fn ith_neighbor(&self, v: Vertex, i: usize, meter: &Meter) -> Option<Vertex> {
        let _f = meter.frame(4);
        let a = self.member(v as usize);
        let mut pos = 0;
        let mut seen = 0;
        for j in 1..=self.level.base().set_count() as SetIndex {
            if !in_h(self.level, self.index, j) {
                continue;
            }
            pos += 1;
            if j != a && self.intersects(a, j) {
                seen += 1;
                if seen == i {
                    return Some(pos as Vertex);
                }
            }
        }
        None
    }
}

/// Deletes every element of the sets chosen at stage `index`.
struct HittingStage {
    index: usize,
    mode: Mode,
}

impl<F: FamilyAccess + ?Sized> ElementStage<F> for HittingStage {
    fn words(&self) -> u64 {
        3
    }

    fn check(&self, prev: &FamilyLevel<'_, F>, e: Element) -> bool {
        let base = prev.base();
        let meter = prev.meter();
        let ig = IntersectionGraph::new(prev, self.index);
        let mis = MaximalIs::new(&ig, None, self.mode, meter);
        let mut t = 1;
        while let Some(j) = base.ith_set_of(e, t, meter) {
            if in_h(prev, self.index, j) && mis.contains(position_in_h(prev, self.index, j) as Vertex) {
                return true;
            }
            t += 1;
        }
        false
    }
}

fn position_in_h<F: FamilyAccess + ?Sized>(prev: &FamilyLevel<'_, F>, index: usize, j: SetIndex) -> usize {
    let _f = prev.meter().frame(1);
    (1..=j).filter(|&x| in_h(prev, index, x)).count()
}

/// `d`-approximate hitting set for families where every element lies in
/// at most `delta` sets.
///
/// Stage `i` collects the live sets that are some element's `i`-th set,
/// picks a maximal pairwise disjoint subfamily of them, and deletes all of
/// its elements. In [`Mode::Layered`] nothing is stored; in
/// [`Mode::Memoized`] each stage is materialized before the next one runs.
pub fn bounded_mult_hs(
    f: &SetFamilyInstance,
    delta: Option<usize>,
    mode: Mode,
    meter: &Meter,
) -> Result<Staged> {
    let actual = f.max_multiplicity();
    let delta = delta.unwrap_or(actual);
    if actual > delta {
        return Err(domain(format!("an element lies in {actual} sets, above the bound {delta}")));
    }
    match mode {
        Mode::Layered => {
            let mut view = LayeredFamilyView::new(f, meter, Mode::Layered);
            for i in 1..=delta {
                view.push(HittingStage { index: i, mode });
            }
            let stages = (1..=delta)
                .map(|i| view.stage_elements(i).expect("depth in range").collect())
                .collect();
            Ok(Staged { stages })
        }
        Mode::Memoized => Ok(materialized_hs(f, delta, meter)),
    }
}

fn materialized_hs(f: &SetFamilyInstance, delta: usize, meter: &Meter) -> Staged {
    let (n, m) = (f.n(), f.m());
    let words = (n + m) as u64;
    let _f = meter.frame(words);
    let mut elem_live = vec![true; n + 1];
    let mut set_live = vec![true; m + 1];
    let mut stages = Vec::with_capacity(delta);
    for i in 1..=delta {
        let h: Vec<SetIndex> = (1..=m as SetIndex)
            .filter(|&j| set_live[j as usize] && f.set(j).iter().any(|&e| f.sets_of(e).get(i - 1) == Some(&j)))
            .collect();
        let mut edges = Vec::new();
        for a in 0..h.len() {
            for b in a + 1..h.len() {
                if f.set(h[a]).iter().any(|e| f.set(h[b]).contains(e)) {
                    edges.push((a as Vertex + 1, b as Vertex + 1));
                }
            }
        }
        let ig = GraphInstance::from_edges(h.len(), edges).expect("simple graph");
        let _g = meter.frame((ig.n() + 2 * ig.m()) as u64);
        let chosen = bd_maximal_is(&ig, None, Mode::Memoized, meter).flatten();
        let mut stage: Vec<Element> = chosen.iter().flat_map(|&p| f.set(h[p as usize - 1]).iter().copied()).collect();
        stage.sort_unstable();
        stage.dedup();
        for &e in &stage {
            elem_live[e as usize] = false;
            for &j in f.sets_of(e) {
                set_live[j as usize] = false;
            }
        }
        stages.push(stage);
    }
    Staged { stages }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_opt, validate, Instance, ProblemKind, FAMILY_CAP};

    fn g(n: usize, e: &[(u32, u32)]) -> GraphInstance {
        GraphInstance::from_edges(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn vc_examples() {
        let m = Meter::new();
        let matching = g(6, &[(1, 2), (3, 4), (5, 6)]);
        assert_eq!(bd_vc_2approx(&matching, None, Mode::Layered, &m).len(), 3);
        let tri = g(3, &[(1, 2), (2, 3), (1, 3)]);
        let cover = bd_vc_2approx(&tri, None, Mode::Layered, &m).flatten();
        assert_eq!(cover.len(), 2);
        assert!(validate(ProblemKind::VertexCover, Instance::Graph(&tri), &cover).ok);
        assert!(bd_vc_2approx(&GraphInstance::empty(4), None, Mode::Layered, &m).is_empty());
    }

    #[test]
    fn mis_examples() {
        let m = Meter::new();
        assert_eq!(bd_maximal_is(&GraphInstance::empty(3), None, Mode::Layered, &m).flatten(), vec![1, 2, 3]);
        let k4 = g(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        for mode in [Mode::Layered, Mode::Memoized] {
            assert_eq!(bd_maximal_is(&k4, None, mode, &m).len(), 1);
        }
        let p3 = g(3, &[(1, 2), (2, 3)]);
        let is = bd_maximal_is(&p3, None, Mode::Layered, &m).flatten();
        assert!(validate(ProblemKind::MaximalIndependentSet, Instance::Graph(&p3), &is).ok);
    }

    #[test]
    fn hs_examples() {
        let m = Meter::new();
        let pairs = SetFamilyInstance::new(4, 2, vec![vec![1, 2], vec![3, 4]]).unwrap();
        for mode in [Mode::Layered, Mode::Memoized] {
            let out = bounded_mult_hs(&pairs, Some(1), mode, &m).unwrap().flatten();
            assert_eq!(out, vec![1, 2, 3, 4]);
        }
        let single = SetFamilyInstance::new(5, 1, vec![vec![5]]).unwrap();
        assert_eq!(bounded_mult_hs(&single, None, Mode::Layered, &m).unwrap().flatten(), vec![5]);
        assert!(bounded_mult_hs(&SetFamilyInstance::new(2, 2, vec![vec![1], vec![1, 2]]).unwrap(), Some(1), Mode::Layered, &m).is_err());
    }

    #[test]
    fn hs_modes_agree() {
        let m = Meter::new();
        let f = SetFamilyInstance::new(
            6,
            3,
            vec![vec![1, 2], vec![2, 3, 4], vec![4, 5], vec![5, 6, 1], vec![3, 6]],
        )
        .unwrap();
        let a = bounded_mult_hs(&f, None, Mode::Layered, &m).unwrap();
        let b = bounded_mult_hs(&f, None, Mode::Memoized, &m).unwrap();
        assert_eq!(a, b);
        let out = a.flatten();
        assert!(validate(ProblemKind::HittingSet, Instance::Family(&f), &out).ok);
        let opt = exact_opt(ProblemKind::HittingSet, Instance::Family(&f), FAMILY_CAP).unwrap();
        assert!(out.len() <= 3 * opt.value);
    }
}
