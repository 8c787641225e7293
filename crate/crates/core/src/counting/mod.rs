//! Exact walk, cycle and tree counts on relation graphs.

pub mod bilinear;
pub mod cycles;
pub mod nondegenerate;
pub mod oracle;
pub mod paths;
pub mod spectral;
pub mod trees;

pub use bilinear::{bilinear_form, BilinearValue, PairFunction};
pub use cycles::{cycle_count, CycleProfile};
pub use nondegenerate::nondegenerate_count;
pub use oracle::{oracle_count, OracleKind};
pub use paths::{pair_matrix, path_totals, total_paths, PathProfile};
pub use spectral::{full_space_spectral_cycles, SpectralCycles};
pub use trees::{
    degenerate_bound, enumerate_trees, supergraph_count, tree_classes, tree_embeddings,
    tree_embeddings_rooted, TreeShape,
};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest vertex count for dense `|E| x |E|` count matrices.
pub const DENSE_LIMIT: usize = 2_048;

pub(crate) fn check_dense(g: &Graph) -> Result<()> {
    if g.order() > DENSE_LIMIT {
        return Err(Error::too_large(
            "vertex set for dense count matrices",
            g.order() as u64,
            DENSE_LIMIT as u64,
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use num_bigint::BigUint;

    use super::*;
    use crate::field::{FieldCtx, PointSet};
    use crate::graph::build_graph;
    use crate::relation::GraphSpec;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn path_graph() -> Graph {
        let ctx = FieldCtx::new(5, 2).unwrap();
        let set = PointSet::from_points(ctx, [[0, 0], [1, 0], [0, 1]]).unwrap();
        build_graph(&set, &GraphSpec::distance(1)).unwrap()
    }

    fn triangle() -> Graph {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let set = PointSet::from_points(ctx, [[0, 0], [1, 1], [2, 2]]).unwrap();
        build_graph(&set, &GraphSpec::distance(2)).unwrap()
    }

    fn empty() -> Graph {
        let ctx = FieldCtx::new(5, 2).unwrap();
        build_graph(&PointSet::empty(ctx), &GraphSpec::distance(1)).unwrap()
    }

    #[test]
    fn path_graph_counts() {
        let g = path_graph();
        assert_eq!(total_paths(&g, 1, true).unwrap().total, big(4));
        let p2 = total_paths(&g, 2, true).unwrap();
        assert_eq!(p2.total, big(6));
        assert_eq!(p2.pair_matrix.unwrap().total().unwrap(), big(6));
        assert_eq!(cycle_count(&g, 2).unwrap().total, big(4));
        assert_eq!(cycle_count(&g, 4).unwrap().total, big(8));
        assert_eq!(nondegenerate_count(&g, 4).unwrap(), big(0));
        let tree = TreeShape::path(3).unwrap();
        assert_eq!(tree_embeddings(&g, &tree).unwrap(), big(6));
        assert_eq!(degenerate_bound(&g, 4).unwrap(), big(40));
        assert_eq!(path_totals(&g, 2).unwrap(), vec![big(3), big(4), big(6)]);
    }

    #[test]
    fn triangle_counts() {
        let g = triangle();
        assert_eq!(cycle_count(&g, 3).unwrap().total, big(6));
        assert_eq!(nondegenerate_count(&g, 3).unwrap(), big(6));
        assert_eq!(oracle_count(&g, &OracleKind::Cycles, 3).unwrap(), big(6));
        assert_eq!(oracle_count(&g, &OracleKind::Nondegenerate, 3).unwrap(), big(6));
    }

    #[test]
    fn empty_graph_counts() {
        let g = empty();
        assert_eq!(total_paths(&g, 3, false).unwrap().total, big(0));
        assert_eq!(nondegenerate_count(&g, 3).unwrap(), big(0));
        assert_eq!(tree_embeddings(&g, &TreeShape::star(4).unwrap()).unwrap(), big(0));
        assert_eq!(degenerate_bound(&g, 5).unwrap(), big(0));
    }

    #[test]
    fn limits() {
        let g = path_graph();
        assert!(matches!(total_paths(&g, 65, false), Err(Error::TooLong { .. })));
        assert!(matches!(cycle_count(&g, 65), Err(Error::TooLong { .. })));
        assert!(matches!(nondegenerate_count(&g, 13), Err(Error::TooLong { .. })));
        assert!(degenerate_bound(&g, 10).is_err());
    }

    #[test]
    fn bilinear_examples() {
        let g = path_graph();
        let p1 = PairFunction::from_counts(&pair_matrix(&g, 1).unwrap()).unwrap();
        let t = bilinear_form(&g, &p1, &p1).unwrap();
        assert_eq!(t.value, cycle_count(&g, 4).unwrap().total);
        for x in 0..3 {
            for y in 0..3 {
                let f = PairFunction::indicator(3, x, y);
                let v = bilinear_form(&g, &f, &PairFunction::from_values(3, vec![1; 9]).unwrap())
                    .unwrap();
                assert_eq!(v.value, big((g.degree(x) * g.degree(y)) as u64));
            }
        }
        assert!(matches!(
            PairFunction::from_signed(2, &[1, 0, -1, 0]),
            Err(Error::NegativeInput(1, 0))
        ));
    }

    #[test]
    fn spectral_cross_check() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let g = build_graph(&PointSet::full(ctx).unwrap(), &GraphSpec::distance(2)).unwrap();
        for n in 2..=6 {
            let s = full_space_spectral_cycles(ctx, &GraphSpec::distance(2), n).unwrap();
            assert_eq!(s.rounded, cycle_count(&g, n).unwrap().total, "n = {n}");
        }
        assert!(matches!(
            full_space_spectral_cycles(ctx, &GraphSpec::dot_product(1), 3),
            Err(Error::WrongRelation(_))
        ));
    }
}
