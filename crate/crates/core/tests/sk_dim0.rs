use mackey_sk::gset::{hom_set, GMap};
use mackey_sk::sk::{
    build_truncated, check_adjunction, check_square_functor, orbit_map, Restriction, Transfer,
    DEFAULT_OBJECT_CAP,
};
use mackey_sk::squares::{check_axioms, k0};
use mackey_sk::{groups, Error, FgAbelianGroup, GSet};

const CAP: usize = DEFAULT_OBJECT_CAP;

#[test]
fn presentation_k0_agrees_with_count_relations() {
    let cases = [
        (groups::trivial(), GSet::trivial(&groups::trivial(), 1), 3),
        (groups::cyclic(2), GSet::trivial(&groups::cyclic(2), 1), 4),
        (groups::cyclic(2), GSet::regular(&groups::cyclic(2)), 4),
        (groups::cyclic(3), GSet::trivial(&groups::cyclic(3), 1), 3),
    ];
    for (g, base, n) in cases {
        let t = build_truncated(&base, n, CAP).unwrap();
        let p = t.presentation(1_000_000).unwrap();
        let report = check_axioms(&p).unwrap();
        assert!(report.passed(), "{} {}", g.name(), report.render());
        let from_squares = k0(&p, false).unwrap();
        assert_eq!(&from_squares.group, t.k0_group().unwrap(), "{}", g.name());
        assert_eq!(&t.k0_from_squares().unwrap().group().clone(), t.k0_group().unwrap());
    }
}

#[test]
fn k0_over_orbits_counts_subgroup_classes() {
    for g in [groups::cyclic(4), groups::quaternion(), groups::cyclic(6)] {
        for c in g.subgroup_classes() {
            let base = GSet::coset_space(&g, &c.representative);
            let t = build_truncated(&base, 2 * g.order(), CAP).unwrap();
            let inner = g.subgroup_group(&c.representative).group.subgroup_classes().len();
            assert_eq!(*t.k0_group().unwrap(), FgAbelianGroup::free(inner));
        }
    }
}

#[test]
fn cells_beyond_the_bound_overflow() {
    let g = groups::symmetric3();
    let t = build_truncated(&GSet::trivial(&g, 1), 3, CAP).unwrap();
    let free = t.cells().iter().position(|c| c.size == 6).unwrap();
    let err = t.class_of_counts(&t.cell_counts(free)).unwrap_err();
    assert!(matches!(err, Error::TruncationOverflow { bound: 3, required: 6 }));
}

#[test]
fn object_cap_is_enforced() {
    let g = groups::trivial();
    let err = build_truncated(&GSet::trivial(&g, 2), 40, 100).unwrap_err();
    assert!(matches!(err, Error::SizeCap { .. }));
}

#[test]
fn orbit_maps_are_adjoint_pairs_on_s3() {
    let g = groups::symmetric3();
    let classes = g.subgroup_classes();
    for a in classes {
        for b in classes {
            let x = GSet::coset_space(&g, &a.representative);
            let y = GSet::coset_space(&g, &b.representative);
            for r in hom_set(&x, &y, CAP).unwrap() {
                let over_x = build_truncated(&x, 12, CAP).unwrap();
                let over_y = build_truncated(&y, 12, CAP).unwrap();
                let adj = check_adjunction(&r, &over_x, &over_y).unwrap();
                assert!(adj.passed(), "{}", adj.render());
                let res = check_square_functor(&Restriction { r: r.clone() }, &over_y, 12, CAP).unwrap();
                assert!(res.passed(), "{}", res.render());
                let tr = check_square_functor(&Transfer { r }, &over_x, 12, CAP).unwrap();
                assert!(tr.passed(), "{}", tr.render());
            }
        }
    }
}

#[test]
fn orbit_map_sends_base_coset_along_conjugator() {
    let g = groups::symmetric3();
    let e = g.trivial_subgroup();
    let r = orbit_map(&g, &e, 0, &g.whole()).unwrap();
    assert_eq!(r, GMap::to_point(&GSet::regular(&g)));
}
