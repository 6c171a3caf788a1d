//! Minimum-weight homologous 1-cycles on triangulated closed manifolds.
//!
//! Given a closed triangulated `n`-manifold, a nonnegative edge-weight
//! function, and a 1-cycle `x`, this crate finds a minimum-weight 1-cycle in
//! the mod-2 homology class of `x`. It works by indexing every edge with a
//! vector in `Z_2^r` (one coordinate per codimension-1 basis cycle), using
//! those vectors to walk an implicit regular covering with deck group
//! `Z_2^r`, and running a label-setting shortest-path search on the covering.

pub mod complex;
pub mod covering;
mod error;
pub mod homology;
pub mod index;
pub mod io;
pub mod meshes;
pub mod mincycle;
pub mod oracle;
pub mod z2;

pub use complex::{Chain, PseudomanifoldReport, SimplicialComplex, VertexId};
pub use error::{Error, Result};
pub use homology::HomologyBasis;
pub use index::{GroupElement, IndexTable};
pub use mincycle::{MinCycleResult, WeightFunction};
