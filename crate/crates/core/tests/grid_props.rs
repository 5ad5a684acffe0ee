//! Randomized grid properties on shapes past the exhaustive range.

use deltatower_core::grid::{
    analysis_by_coreductions, analysis_by_reductions, closure, coreduction, internal, reduction, urank, CellSet,
    GridModel,
};
use proptest::prelude::*;

fn grid_and_sets() -> impl Strategy<Value = (GridModel, CellSet, CellSet, CellSet)> {
    (1u32..=8, 1u32..=6).prop_flat_map(|(d, m)| {
        let g = GridModel::new(d, m).unwrap();
        let full = g.all().0;
        (Just(g), any::<u64>(), any::<u64>(), any::<u64>())
            .prop_map(move |(g, a, b, c)| (g, CellSet(a & full), CellSet(b & full), CellSet(c & full)))
    })
}

/// Column-by-column fill from the highest occupied row.
fn naive_closure(g: &GridModel, s: CellSet) -> CellSet {
    let mut out = Vec::new();
    for j in 1..=g.columns() {
        let top = (1..=g.depth()).filter(|&i| g.cells_of(s).contains(&(i, j))).max().unwrap_or(0);
        out.extend((1..=top).map(|i| (i, j)));
    }
    g.set(&out).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn closure_matches_column_fill((g, s, _, _) in grid_and_sets()) {
        prop_assert_eq!(closure(s, &g), naive_closure(&g, s));
    }

    #[test]
    fn closure_is_a_closure_operator((g, a, b, _) in grid_and_sets()) {
        let ca = closure(a, &g);
        prop_assert!(a.is_subset(ca));
        prop_assert_eq!(closure(ca, &g), ca);
        prop_assert!(ca.is_subset(closure(a.union(b), &g)));
    }

    #[test]
    fn urank_is_additive((g, a, b, t) in grid_and_sets()) {
        prop_assert_eq!(urank(a.union(b), t, &g), urank(a, t.union(b), &g) + urank(b, t, &g));
    }

    #[test]
    fn reduction_is_internal_and_closed((g, s, t, _) in grid_and_sets()) {
        let r = reduction(s, t, &g);
        prop_assert!(internal(r, t, &g));
        prop_assert_eq!(closure(r, &g), r);
        prop_assert!(closure(t, &g).is_subset(r));
        prop_assert!(r.is_subset(closure(s.union(t), &g)));
        prop_assert_eq!(internal(s, t, &g), r == closure(s.union(t), &g));
    }

    #[test]
    fn coreduction_is_a_witness((g, s, t, _) in grid_and_sets()) {
        prop_assume!(g.cells() <= 24);
        let w = coreduction(s, t, &g);
        prop_assert!(internal(s, t.union(w), &g));
        prop_assert!(w.is_subset(closure(s.union(t), &g)));
    }

    #[test]
    fn both_analyses_add_up_to_the_rank((g, s, t, _) in grid_and_sets()) {
        prop_assume!(g.cells() <= 24);
        let total = urank(s, t, &g);
        for a in [analysis_by_reductions(s, t, &g), analysis_by_coreductions(s, t, &g)] {
            let u = a.u_type(&g);
            prop_assert_eq!(u.iter().sum::<u32>(), total);
            prop_assert!(u.iter().all(|&x| x > 0));
            prop_assert_eq!(a.steps().last().copied().unwrap_or(s), s);
        }
    }
}
