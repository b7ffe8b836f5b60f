//! Oracles shared by the integration tests. Each one recomputes its answer
//! by brute force without going through the library's own algorithm.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use mackey_sk::gset::{canonical_pullback, GMap};
use mackey_sk::mackey::Frame;
use mackey_sk::{FiniteGroup, GSet, Matrix};

/// All subsets containing the identity and closed under multiplication,
/// by brute force over bitmasks.
pub fn subsets_closed(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    assert!(n <= 16);
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if elems
            .iter()
            .all(|&a| elems.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1))
        {
            out.push(elems);
        }
    }
    out
}

pub fn conjugacy_class_count(g: &FiniteGroup, subs: &[Vec<usize>]) -> usize {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut classes = 0;
    for s in subs {
        if seen.contains(s) {
            continue;
        }
        classes += 1;
        for x in 0..g.order() {
            let mut c: Vec<usize> = s.iter().map(|&h| g.conjugate(x, h)).collect();
            c.sort_unstable();
            seen.insert(c);
        }
    }
    classes
}

/// `|(G/K)^H|` by acting on cosets.
pub fn marks_by_fixed_points(g: &Arc<FiniteGroup>) -> Matrix {
    let classes = g.subgroup_classes();
    let mut m = Matrix::zeros(classes.len(), classes.len());
    for (j, k) in classes.iter().enumerate() {
        let orbit = GSet::coset_space(g, &k.representative);
        for (i, h) in classes.iter().enumerate() {
            m.set(i, j, orbit.fixed_points(&h.representative).len() as i64);
        }
    }
    m
}

/// Column `j` of `res^G_K ∘ tr^G_L` in the Burnside Mackey functor, read
/// off the pullback `G/K ×_{pt} G/Q` for `Q` the `j`-th basis orbit at `L`:
/// orbits of the fiber over `eK` under `K`, classified by stabilizer.
///
/// Values at a non-representative `S = cRc⁻¹` are written in the basis of
/// the representative `R`, moving subgroups across by `c`.
pub fn res_tr_by_pullback(g: &Arc<FiniteGroup>, f: &Frame, k: usize, l: usize) -> Matrix {
    let (sk, sl) = (f.subgroup(k), f.subgroup(l));
    let (ck, cl) = (f.conjugator(k), f.conjugator(l));
    let rk = g.subgroup_group(f.subgroup(f.rep(f.class_of(k))));
    let rl = g.subgroup_group(f.subgroup(f.rep(f.class_of(l))));
    let gk = GSet::coset_space(g, sk);
    let rows = rk.group.subgroup_classes().len();
    let cols: Vec<Vec<i64>> = rl
        .group
        .subgroup_classes()
        .iter()
        .map(|c| {
            let q = g.conjugate_subgroup(cl, &rl.lift_subgroup(&c.representative));
            assert!(q.is_subgroup_of(sl));
            let gq = GSet::coset_space(g, &q);
            let pb = canonical_pullback(&GMap::to_point(&gk), &GMap::to_point(&gq)).unwrap();
            let mut col = vec![0i64; rows];
            for orbit in pb.apex.orbits() {
                let p = *orbit.iter().find(|&&p| pb.left.apply(p) == 0).unwrap();
                let back = g.conjugate_subgroup(g.inv(ck), &pb.apex.stabilizer(p));
                let stab = rk.lower_subgroup(&back).unwrap();
                col[rk.group.class_index(&stab)] += 1;
            }
            col
        })
        .collect();
    Matrix::from_columns(&cols, rows).unwrap()
}
