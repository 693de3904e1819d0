use std::cell::{Cell, RefCell};

use super::{Mode, DEAD, FRAME_WORDS, LIVE, UNKNOWN};
use crate::error::{domain, Result};
use crate::instance::{neighbor_position, word_bits, GraphAccess, Meter, Vertex};

/// Decides whether a vertex live at level `i - 1` is deleted by stage `i`.
pub trait VertexStage<G: GraphAccess + ?Sized> {
    /// Words charged while `check` runs, excluding nested queries.
    fn words(&self) -> u64;

    /// `v` is live at `prev`; return true to delete it.
    fn check(&self, prev: &GraphLevel<'_, G>, v: Vertex) -> bool;
}

/// Stack of vertex-deletion stages over a read-only graph.
pub struct LayeredGraphView<'a, G: GraphAccess + ?Sized> {
    base: &'a G,
    meter: &'a Meter,
    stages: Vec<Box<dyn VertexStage<G> + 'a>>,
    memo: Option<RefCell<Vec<Vec<u8>>>>,
    memo_words: Cell<u64>,
}

impl<'a, G: GraphAccess + ?Sized> LayeredGraphView<'a, G> {
    pub fn new(base: &'a G, meter: &'a Meter, mode: Mode) -> Self {
        let memo = (mode == Mode::Memoized).then(|| RefCell::new(Vec::new()));
        LayeredGraphView { base, meter, stages: Vec::new(), memo, memo_words: Cell::new(0) }
    }

    pub fn push(&mut self, stage: impl VertexStage<G> + 'a) {
        self.stages.push(Box::new(stage));
        if let Some(memo) = &self.memo {
            memo.borrow_mut().push(Vec::new());
        }
    }

    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn base(&self) -> &'a G {
        self.base
    }

    pub fn meter(&self) -> &'a Meter {
        self.meter
    }

    pub fn mode(&self) -> Mode {
        if self.memo.is_some() {
            Mode::Memoized
        } else {
            Mode::Layered
        }
    }

    pub fn level(&self, i: usize) -> GraphLevel<'_, G> {
        GraphLevel { view: self, depth: i.min(self.depth()) }
    }

    fn check_depth(&self, i: usize) -> Result<()> {
        if i > self.depth() {
            return Err(domain(format!("depth {i} exceeds view depth {}", self.depth())));
        }
        Ok(())
    }

    pub fn vertex_live(&self, i: usize, v: Vertex) -> Result<bool> {
        self.check_depth(i)?;
        Ok(self.live(i, v))
    }

    /// `(u, v)` must be an edge of the base graph.
    pub fn edge_live(&self, i: usize, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_depth(i)?;
        if neighbor_position(self.base, u, v, self.meter).is_none() {
            return Err(domain(format!("({u},{v}) is not an edge")));
        }
        Ok(self.live(i, u) && self.live(i, v))
    }

    /// Membership in the deletion set of stage `i >= 1`.
    pub fn in_stage(&self, i: usize, v: Vertex) -> Result<bool> {
        self.check_depth(i)?;
        if i == 0 {
            return Err(domain("stage sets start at depth 1"));
        }
        Ok(self.live(i - 1, v) && !self.live(i, v))
    }

    /// Vertices deleted by stage `i`, in id order.
    pub fn stage_vertices(&self, i: usize) -> Result<impl Iterator<Item = Vertex> + '_> {
        self.check_depth(i)?;
        if i == 0 {
            return Err(domain("stage sets start at depth 1"));
        }
        let guard = self.meter.frame(1);
        Ok((1..=self.base.order() as Vertex).filter(move |&v| {
            let _ = &guard;
            self.live(i - 1, v) && !self.live(i, v)
        }))
    }

    /// Vertices live at level `i`, in id order.
    pub fn live_vertices(&self, i: usize) -> Result<impl Iterator<Item = Vertex> + '_> {
        self.check_depth(i)?;
        let guard = self.meter.frame(1);
        Ok((1..=self.base.order() as Vertex).filter(move |&v| {
            let _ = &guard;
            self.live(i, v)
        }))
    }

    /// Edges live at level `i`, in the base's edge order.
    pub fn live_edges(&self, i: usize) -> Result<impl Iterator<Item = (Vertex, Vertex)> + '_> {
        self.check_depth(i)?;
        let guard = self.meter.frame(1);
        let mut j = 0;
        Ok(std::iter::from_fn(move || {
            let _ = &guard;
            loop {
                j += 1;
                let (u, v) = self.base.edge_at(j, self.meter)?;
                if self.live(i, u) && self.live(i, v) {
                    return Some((u, v));
                }
            }
        }))
    }

    pub(crate) fn live(&self, i: usize, v: Vertex) -> bool {
        if i == 0 {
            return true;
        }
        match &self.memo {
            None => {
                let _f = self.meter.frame(FRAME_WORDS);
                for j in 1..=i {
                    if self.run_check(j, v) {
                        return false;
                    }
                }
                true
            }
            Some(memo) => {
                let known = memo.borrow()[i - 1].get(v as usize).copied().unwrap_or(UNKNOWN);
                if known != UNKNOWN {
                    return known == LIVE;
                }
                let _f = self.meter.frame(FRAME_WORDS);
                let alive = self.live(i - 1, v) && !self.run_check(i, v);
                self.remember(i, v, alive);
                alive
            }
        }
    }

    fn remember(&self, i: usize, x: u32, alive: bool) {
        let memo = self.memo.as_ref().expect("memoized view");
        let mut tables = memo.borrow_mut();
        let table = &mut tables[i - 1];
        if table.is_empty() {
            let n = self.base.order();
            table.resize(n + 1, UNKNOWN);
            let words = (2 * n as u64).div_ceil(u64::from(word_bits(n)));
            self.meter.charge(words);
            self.memo_words.set(self.memo_words.get() + words);
        }
        table[x as usize] = if alive { LIVE } else { DEAD };
    }

    fn run_check(&self, j: usize, v: Vertex) -> bool {
        let stage = &self.stages[j - 1];
        let _f = self.meter.frame(stage.words());
        stage.check(&self.level(j - 1), v)
    }
}

impl<G: GraphAccess + ?Sized> Drop for LayeredGraphView<'_, G> {
    fn drop(&mut self) {
        let _ = self.meter.release(self.memo_words.get());
    }
}

/// Read handle on one level of a view. Stage predicates only ever see this.
pub struct GraphLevel<'v, G: GraphAccess + ?Sized> {
    view: &'v LayeredGraphView<'v, G>,
    depth: usize,
}

impl<'v, G: GraphAccess + ?Sized> GraphLevel<'v, G> {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base(&self) -> &'v G {
        self.view.base
    }

    pub fn meter(&self) -> &'v Meter {
        self.view.meter
    }

    pub fn order(&self) -> usize {
        self.view.base.order()
    }

    pub fn live(&self, v: Vertex) -> bool {
        self.view.live(self.depth, v)
    }

    /// The `i`-th neighbour of `v` in the base graph, live or not.
    pub fn ith_neighbor(&self, v: Vertex, i: usize) -> Option<Vertex> {
        self.view.base.ith_neighbor(v, i, self.view.meter)
    }

    /// Live neighbours of `v` in adjacency order.
    pub fn live_neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let guard = self.meter().frame(2);
        let mut i = 0;
        std::iter::from_fn(move || {
            let _ = &guard;
            loop {
                i += 1;
                let w = self.ith_neighbor(v, i)?;
                if self.live(w) {
                    return Some(w);
                }
            }
        })
    }

    pub fn live_degree(&self, v: Vertex) -> usize {
        self.live_neighbors(v).count()
    }

    /// Smallest live vertex, if any.
    pub fn first_live(&self) -> Option<Vertex> {
        let _f = self.meter().frame(1);
        (1..=self.order() as Vertex).find(|&v| self.live(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{with_meter, GraphInstance};
    use crate::oracle::GraphPredicate;

    fn k2_plus_isolated() -> GraphInstance {
        GraphInstance::from_edges(3, [(1, 2)]).unwrap()
    }

    #[test]
    fn isolated_stage() {
        let g = k2_plus_isolated();
        let m = Meter::new();
        let mut view = LayeredGraphView::new(&g, &m, Mode::Layered);
        view.push(GraphPredicate::Isolated);
        assert!(!view.vertex_live(1, 3).unwrap());
        assert!(view.vertex_live(1, 1).unwrap() && view.vertex_live(1, 2).unwrap());
        assert_eq!(view.stage_vertices(1).unwrap().collect::<Vec<_>>(), vec![3]);
        assert!(view.vertex_live(2, 1).is_err());
    }

    #[test]
    fn two_min_deletions_on_p3() {
        let g = GraphInstance::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        for mode in [Mode::Layered, Mode::Memoized] {
            let m = Meter::new();
            let mut view = LayeredGraphView::new(&g, &m, mode);
            view.push(GraphPredicate::MinLive);
            view.push(GraphPredicate::MinLive);
            assert_eq!(view.live_vertices(2).unwrap().collect::<Vec<_>>(), vec![3]);
            assert_eq!(view.live_edges(1).unwrap().collect::<Vec<_>>(), vec![(2, 3)]);
        }
    }

    #[test]
    fn edge_liveness_on_triangle() {
        let g = GraphInstance::from_edges(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let m = Meter::new();
        let mut view = LayeredGraphView::new(&g, &m, Mode::Layered);
        view.push(GraphPredicate::MinLive);
        assert!(view.edge_live(1, 2, 3).unwrap());
        assert!(!view.edge_live(1, 1, 2).unwrap());
        assert!(!view.edge_live(1, 1, 3).unwrap());
        assert!(view.edge_live(0, 1, 3).unwrap());
        let path = GraphInstance::from_edges(3, [(1, 2), (2, 3)]).unwrap();
        let view = LayeredGraphView::new(&path, &m, Mode::Layered);
        assert!(view.edge_live(0, 1, 3).is_err());
    }

    #[test]
    fn memo_charge_is_released() {
        let g = k2_plus_isolated();
        let (_, stats) = with_meter(|m| {
            let mut view = LayeredGraphView::new(&g, m, Mode::Memoized);
            view.push(GraphPredicate::Isolated);
            view.live_vertices(1).unwrap().count()
        })
        .unwrap();
        assert!(stats.charged_peak_words > 0);
    }
}
