//! Exact counting of walks, cycles and trees in distance and dot-product
//! graphs over `F_q^d`, and numeric verification of the upper bounds those
//! counts are expected to satisfy.
//!
//! ```
//! use fq_cycles::{build_graph, cycle_count, FieldCtx, GraphSpec, PointSet};
//!
//! let ctx = FieldCtx::new(5, 2).unwrap();
//! let set = PointSet::full(ctx).unwrap();
//! let graph = build_graph(&set, &GraphSpec::distance(1)).unwrap();
//! // every vertex sits on a circle of q - 1 = 4 points
//! assert_eq!(graph.ordered_edge_count(), 25 * 4);
//! assert!(cycle_count(&graph, 4).unwrap().total > 0u32.into());
//! ```

pub mod bounds;
pub mod counting;
pub mod ensembles;
pub mod error;
pub mod exact;
pub mod field;
pub mod graph;
pub mod harness;
pub mod relation;
pub mod spectra;

pub use bounds::{verify, BoundReport, TheoremId, Verdict, VerifyInput, VerifyParams};
pub use counting::{
    bilinear_form, cycle_count, nondegenerate_count, oracle_count, total_paths, tree_embeddings,
    OracleKind, PairFunction, TreeShape,
};
pub use ensembles::{generate_set, SetRecipe};
pub use error::{Error, Result};
pub use field::{FieldCtx, Point, PointSet};
pub use graph::{build_graph, Graph};
pub use relation::{GraphSpec, Relation, RelationKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
