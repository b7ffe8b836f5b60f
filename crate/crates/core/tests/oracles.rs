//! Independent oracles for subgroup lattices, marks and double cosets.

mod common;

use std::collections::BTreeSet;

use common::{conjugacy_class_count, marks_by_fixed_points, res_tr_by_pullback, subsets_closed};
use mackey_sk::burnside::BurnsideRing;
use mackey_sk::groups;
use mackey_sk::mackey::burnside_mackey;

#[test]
fn lattice_matches_subset_closure() {
    for g in groups::fixtures() {
        let subs = subsets_closed(&g);
        assert_eq!(g.all_subgroups().len(), subs.len(), "{}", g.name());
        assert_eq!(
            g.subgroup_classes().len(),
            conjugacy_class_count(&g, &subs),
            "{}",
            g.name()
        );
        let ours: BTreeSet<Vec<usize>> = g.all_subgroups().iter().map(|h| h.elements().to_vec()).collect();
        assert_eq!(ours, subs.into_iter().collect());
    }
}

#[test]
fn marks_match_fixed_point_counts() {
    for g in groups::fixtures() {
        let ring = BurnsideRing::new(&g);
        assert_eq!(ring.table_of_marks(), &marks_by_fixed_points(&g), "{}", g.name());
    }
}

#[test]
fn c2_marks() {
    let ring = BurnsideRing::new(&groups::cyclic(2));
    assert_eq!(ring.table_of_marks().to_rows(), vec![vec![2, 1], vec![0, 1]]);
}

#[test]
fn double_coset_formula_matches_pullbacks() {
    for g in groups::fixtures() {
        let m = burnside_mackey(&g).unwrap();
        let f = m.frame().clone();
        let top = f.classes() - 1;
        let whole = g.whole();
        for i in 0..f.classes() {
            for j in 0..f.classes() {
                let (k, l) = (f.rep(i), f.rep(j));
                let oracle = res_tr_by_pullback(&g, &f, k, l);
                let formula = m.double_coset_sum(&whole, k, l).unwrap();
                let direct = m.res(top, k).mul(m.tr(top, l)).unwrap();
                assert_eq!(formula, oracle, "{} K={k} L={l}", g.name());
                assert_eq!(direct, oracle, "{} K={k} L={l}", g.name());
            }
        }
    }
}
