//! Small library of stage predicates, used by tests and examples.

use super::{ElementStage, FamilyLevel, GraphLevel, VertexStage};
use crate::instance::{Element, FamilyAccess, GraphAccess, SetIndex, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphPredicate {
    /// No live neighbour.
    Isolated,
    /// The smallest live vertex.
    MinLive,
    DegreeAtLeast(usize),
    DegreeAtMost(usize),
    /// Smaller than every live neighbour.
    LocalMinimum,
    /// Exactly one live neighbour.
    Leaf,
}

impl<G: GraphAccess + ?Sized> VertexStage<G> for GraphPredicate {
    fn words(&self) -> u64 {
        2
    }

    fn check(&self, prev: &GraphLevel<'_, G>, v: Vertex) -> bool {
        match *self {
            GraphPredicate::Isolated => prev.live_neighbors(v).next().is_none(),
            GraphPredicate::MinLive => prev.first_live() == Some(v),
            GraphPredicate::DegreeAtLeast(t) => prev.live_neighbors(v).take(t).count() >= t,
            GraphPredicate::DegreeAtMost(t) => prev.live_neighbors(v).take(t + 1).count() <= t,
            GraphPredicate::LocalMinimum => prev.live_neighbors(v).all(|w| w > v),
            GraphPredicate::Leaf => prev.live_neighbors(v).take(2).count() == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyPredicate {
    /// In at least `t` live sets.
    Frequent(usize),
    /// In no live set.
    Uncovered,
    /// A member of the first live set.
    InFirstLiveSet,
}

impl<F: FamilyAccess + ?Sized> ElementStage<F> for FamilyPredicate {
    fn words(&self) -> u64 {
        2
    }

    fn check(&self, prev: &FamilyLevel<'_, F>, e: Element) -> bool {
        match *self {
            FamilyPredicate::Frequent(t) => prev.live_sets_of(e).take(t).count() >= t,
            FamilyPredicate::Uncovered => prev.live_sets_of(e).next().is_none(),
            FamilyPredicate::InFirstLiveSet => {
                let base = prev.base();
                let first = (1..=base.set_count() as SetIndex).find(|&j| prev.set_live(j));
                first.is_some_and(|j| base.contains(j, e, prev.meter()))
            }
        }
    }
}
