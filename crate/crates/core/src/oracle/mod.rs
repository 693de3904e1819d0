//! Layered deletion oracles.
//!
//! A view stacks stage predicates over a read-only base. Level 0 is the
//! base itself; a vertex is live at level `i` iff it was live at `i - 1`
//! and stage `i` does not select it. An edge is live iff both endpoints
//! are. For families a set is live iff none of its elements was deleted.
//!
//! Nothing is materialized in [`Mode::Layered`]: every query recomputes
//! the lower levels, so a depth-`i` query charges at most `(i + 1) * B`
//! words where `B` is [`LAYER_WORDS`].

mod family;
mod graph;
mod predicates;

pub use family::{ElementStage, FamilyLevel, LayeredFamilyView};
pub use graph::{GraphLevel, LayeredGraphView, VertexStage};
pub use predicates::{FamilyPredicate, GraphPredicate};

/// Words held by one membership query frame (level, id, loop index).
pub const FRAME_WORDS: u64 = 3;

/// Per-level charge bound: the query frame plus the largest stage budget
/// and helper frames used by any stage shipped with the crate.
pub const LAYER_WORDS: u64 = 32;

/// How a view answers repeated queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Recompute everything; the space discipline of the algorithms.
    #[default]
    Layered,
    /// Cache per-level membership bits. Faster, and charged to the meter.
    Memoized,
}

pub(crate) const UNKNOWN: u8 = 0;
pub(crate) const LIVE: u8 = 1;
pub(crate) const DEAD: u8 = 2;
