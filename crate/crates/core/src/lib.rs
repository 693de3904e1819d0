//! Approximation algorithms for covering, hitting, domination and
//! independence problems that run with a few machine words of workspace
//! over a read-only input.
//!
//! Every algorithm charges its auxiliary words to a [`Meter`], so the
//! space claims can be audited on real runs. Iterated deletions are never
//! materialized; they are answered by [`oracle`] views that recompute
//! membership through a stack of stage predicates.
//!
//! ```
//! use roapprox::{GraphInstance, Meter, Mode};
//! use roapprox::layered::bd_vc_2approx;
//!
//! let triangle: GraphInstance = "p 3 3\ne 1 2\ne 2 3\ne 1 3\n".parse()?;
//! let meter = Meter::new();
//! let cover = bd_vc_2approx(&triangle, None, Mode::Layered, &meter).flatten();
//! assert_eq!(cover.len(), 2);
//! # Ok::<(), roapprox::Error>(())
//! ```

pub mod dominating;
mod error;
pub mod exact;
pub mod generate;
pub mod hashing;
pub mod instance;
pub mod kernels;
pub mod layered;
pub mod oracle;
pub mod staggered;
pub mod tree;

pub use error::{Error, Result};
pub use instance::{
    with_meter, DigraphInstance, Element, GraphAccess, GraphInstance, Meter, MeterStats,
    SetFamilyInstance, SetIndex, Vertex,
};
pub use oracle::Mode;

/// Solution split by the stage that produced it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Staged {
    pub stages: Vec<Vec<u32>>,
}

impl Staged {
    pub fn flatten(&self) -> Vec<u32> {
        self.stages.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.stages.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/layering.md")]
    mod layering {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    mod kernels {}
    #[doc = include_str!("../../../book/src/dominating.md")]
    mod dominating {}
    #[doc = include_str!("../../../book/src/hashing.md")]
    mod hashing {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
}
