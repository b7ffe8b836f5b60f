//! Equivariant Euler characteristics of finite G-CW cell data in the
//! Burnside ring.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::burnside::{burnside_class, BurnsideElement};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupEmbedding};
use crate::gset::GSet;
use crate::sk::TruncatedSK;

pub const DEFAULT_MAX_DIM: usize = 8;

/// One orbit of cells `G/H × Dᵈ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCell {
    pub dim: usize,
    pub stabilizer: Subgroup,
}

/// Cell counts of a finite G-CW complex. Attaching maps are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCWComplex {
    group: Arc<FiniteGroup>,
    cells: Vec<OrbitCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellData {
    pub dim: usize,
    pub stabilizer: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcwData {
    pub group: String,
    pub cells: Vec<CellData>,
}

impl GCWComplex {
    /// Stabilizers are replaced by their class representatives.
    pub fn new(group: &Arc<FiniteGroup>, cells: Vec<OrbitCell>, max_dim: usize) -> Result<Self> {
        let classes = group.subgroup_classes();
        let mut out = Vec::with_capacity(cells.len());
        for c in cells {
            if c.dim > max_dim {
                return Err(Error::Precondition(format!(
                    "cell dimension {} exceeds the maximum {max_dim}",
                    c.dim
                )));
            }
            if group.lattice().index_of(&c.stabilizer).is_none() {
                return Err(Error::InvalidSubgroup(format!("{:?}", c.stabilizer.elements())));
            }
            out.push(OrbitCell {
                dim: c.dim,
                stabilizer: classes[group.class_index(&c.stabilizer)].representative.clone(),
            });
        }
        Ok(GCWComplex {
            group: group.clone(),
            cells: out,
        })
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> Self {
        GCWComplex {
            group: group.clone(),
            cells: Vec::new(),
        }
    }

    /// A G-set as a complex of 0-cells, one per orbit.
    pub fn zero_cells(x: &GSet) -> Self {
        let cells = x
            .orbits()
            .iter()
            .map(|o| OrbitCell {
                dim: 0,
                stabilizer: x.stabilizer(o[0]),
            })
            .collect();
        GCWComplex::new(x.group(), cells, 0).expect("stabilizers are subgroups")
    }

    pub fn from_data(group: &Arc<FiniteGroup>, data: &GcwData, max_dim: usize) -> Result<Self> {
        let cells = data
            .cells
            .iter()
            .map(|c| {
                Ok(OrbitCell {
                    dim: c.dim,
                    stabilizer: group.subgroup(&c.stabilizer)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(group, cells, max_dim)
    }

    pub fn to_data(&self) -> GcwData {
        GcwData {
            group: self.group.name().to_string(),
            cells: self
                .cells
                .iter()
                .map(|c| CellData {
                    dim: c.dim,
                    stabilizer: c.stabilizer.elements().to_vec(),
                })
                .collect(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn cells(&self) -> &[OrbitCell] {
        &self.cells
    }

    pub fn disjoint_union(&self, other: &GCWComplex) -> Result<GCWComplex> {
        if self.group != other.group {
            return Err(Error::Precondition("complexes over different groups".into()));
        }
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        Ok(GCWComplex {
            group: self.group.clone(),
            cells,
        })
    }
}

fn sign(dim: usize) -> i64 {
    if dim % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `χ_G(M) = Σ (−1)ᵈ [G/H]` over orbit cells.
pub fn euler_characteristic(m: &GCWComplex) -> BurnsideElement {
    let g = &m.group;
    let mut e = BurnsideElement::zero(g.subgroup_classes().len());
    for c in &m.cells {
        e.coefficients[g.class_index(&c.stabilizer)] += sign(c.dim);
    }
    e
}

/// Restriction to `H`: each cell `G/K × Dᵈ` splits into the cells
/// `H/(H ∩ xKx⁻¹) × Dᵈ` for `x` over the double cosets `H\G/K`.
pub fn restrict_complex(m: &GCWComplex, emb: &SubgroupEmbedding) -> GCWComplex {
    let g = &m.group;
    let h = &emb.subgroup;
    let mut cells = Vec::new();
    for c in &m.cells {
        for x in g.double_cosets(h, &c.stabilizer) {
            let stab = h.intersection(&g.conjugate_subgroup(x, &c.stabilizer));
            cells.push(OrbitCell {
                dim: c.dim,
                stabilizer: emb.lower_subgroup(&stab).expect("intersection lies in H"),
            });
        }
    }
    GCWComplex::new(&emb.group, cells, usize::MAX).expect("lowered stabilizers are subgroups")
}

/// Ordinary Euler characteristic of the `K`-fixed subcomplex, counted
/// directly on coset spaces.
pub fn fixed_euler(m: &GCWComplex, k: &Subgroup) -> i64 {
    m.cells
        .iter()
        .map(|c| {
            let orbit = GSet::coset_space(&m.group, &c.stabilizer);
            sign(c.dim) * orbit.fixed_points(k).len() as i64
        })
        .sum()
}

/// Reads a K₀ class of objects over a point as a Burnside element by
/// taking orbit types of representing G-sets.
pub fn alpha_pi0(t: &TruncatedSK, class: &[i64]) -> Result<BurnsideElement> {
    if t.base().size() != 1 {
        return Err(Error::Precondition("alpha_pi0 needs objects over a point".into()));
    }
    let k0 = t.k0()?;
    if class.len() != k0.group().dim() {
        return Err(Error::Precondition(format!(
            "class has {} coordinates, K0 has {}",
            class.len(),
            k0.group().dim()
        )));
    }
    let g = t.group();
    let mut out = BurnsideElement::zero(g.subgroup_classes().len());
    for (k, &x) in class.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for &(obj, coeff) in k0.preimage(k) {
            let b = burnside_class(&t.object(obj).total);
            for (o, v) in out.coefficients.iter_mut().zip(b.coefficients) {
                *o = coeff
                    .checked_mul(v)
                    .and_then(|y| y.checked_mul(x))
                    .and_then(|y| o.checked_add(y))
                    .ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(out)
}

/// Small complexes with known Euler characteristics.
pub mod fixtures {
    use super::*;
    use crate::groups;

    fn complex(g: &Arc<FiniteGroup>, cells: &[(usize, &Subgroup)]) -> GCWComplex {
        let cells = cells
            .iter()
            .map(|&(dim, s)| OrbitCell {
                dim,
                stabilizer: s.clone(),
            })
            .collect();
        GCWComplex::new(g, cells, DEFAULT_MAX_DIM).expect("fixture cells are valid")
    }

    /// `S²` with `C₂` rotating about an axis: two fixed poles, one free
    /// orbit of edges and one of faces.
    pub fn c2_rotation_sphere() -> GCWComplex {
        let g = groups::cyclic(2);
        let (e, top) = (g.trivial_subgroup(), g.whole());
        complex(&g, &[(0, &top), (0, &top), (1, &e), (2, &e)])
    }

    /// `S²` with `C₂` reflecting across the equator: a fixed vertex and a
    /// fixed edge on the equator, and a free orbit of two hemispheres.
    pub fn c2_reflection_sphere() -> GCWComplex {
        let g = groups::cyclic(2);
        let (e, top) = (g.trivial_subgroup(), g.whole());
        complex(&g, &[(0, &top), (1, &top), (2, &e)])
    }

    /// `S²` with `C₃` rotating about an axis: two fixed poles, three
    /// meridians and three sectors.
    pub fn c3_rotation_sphere() -> GCWComplex {
        let g = groups::cyclic(3);
        let (e, top) = (g.trivial_subgroup(), g.whole());
        complex(&g, &[(0, &top), (0, &top), (1, &e), (2, &e)])
    }

    /// Boundary of a triangle under `S₃`, subdivided at edge midpoints:
    /// vertices and midpoints have reflection stabilizers, half-edges are
    /// free.
    pub fn s3_triangle() -> GCWComplex {
        let g = groups::symmetric3();
        let e = g.trivial_subgroup();
        let refl = g.subgroup_classes()[1].representative.clone();
        complex(&g, &[(0, &refl), (0, &refl), (1, &e)])
    }

    pub fn all() -> Vec<(&'static str, GCWComplex)> {
        vec![
            ("c2-rotation-sphere", c2_rotation_sphere()),
            ("c2-reflection-sphere", c2_reflection_sphere()),
            ("c3-rotation-sphere", c3_rotation_sphere()),
            ("s3-triangle", s3_triangle()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::BurnsideRing;
    use crate::groups;
    use crate::sk::{build_truncated, DEFAULT_OBJECT_CAP};

    #[test]
    fn empty_and_point() {
        let g = groups::cyclic(2);
        assert!(euler_characteristic(&GCWComplex::empty(&g)).is_zero());
        let pt = GCWComplex::zero_cells(&GSet::trivial(&g, 1));
        assert_eq!(euler_characteristic(&pt).coefficients, vec![0, 1]);
        assert_eq!(fixed_euler(&GCWComplex::empty(&g), &g.whole()), 0);
    }

    #[test]
    fn spheres() {
        let chi = euler_characteristic(&fixtures::c2_rotation_sphere());
        assert_eq!(chi.coefficients, vec![0, 2]);
        let chi = euler_characteristic(&fixtures::c2_reflection_sphere());
        assert_eq!(chi.coefficients, vec![1, 0]);
        let s = fixtures::c2_rotation_sphere();
        let g = s.group().clone();
        assert_eq!(fixed_euler(&s, &g.trivial_subgroup()), 2);
        assert_eq!(fixed_euler(&s, &g.whole()), 2);
        let r = fixtures::c2_reflection_sphere();
        assert_eq!(fixed_euler(&r, &g.whole()), 0);
    }

    #[test]
    fn marks_match_fixed_points() {
        for (_, m) in fixtures::all() {
            let ring = BurnsideRing::new(m.group());
            let marks = ring.marks(&euler_characteristic(&m)).unwrap();
            for (i, c) in m.group().subgroup_classes().iter().enumerate() {
                assert_eq!(marks[i], fixed_euler(&m, &c.representative));
            }
        }
    }

    #[test]
    fn free_cell_restricts_to_free_cells() {
        let g = groups::symmetric3();
        let m = GCWComplex::zero_cells(&GSet::regular(&g));
        let h = g.subgroup_classes()[1].representative.clone();
        let r = restrict_complex(&m, &g.subgroup_group(&h));
        assert_eq!(r.cells().len(), 3);
        assert!(r.cells().iter().all(|c| c.stabilizer.order() == 1));
        let same = restrict_complex(&m, &g.subgroup_group(&g.whole()));
        assert_eq!(euler_characteristic(&same), euler_characteristic(&m));
    }

    #[test]
    fn stabilizers_are_normalized() {
        let g = groups::symmetric3();
        let members = g.subgroup_classes()[1].members.clone();
        let a = GCWComplex::new(&g, vec![OrbitCell { dim: 0, stabilizer: members[1].clone() }], 8).unwrap();
        assert_eq!(a.cells()[0].stabilizer, g.subgroup_classes()[1].representative);
        assert!(GCWComplex::new(&g, vec![OrbitCell { dim: 9, stabilizer: g.whole() }], 8).is_err());
    }

    #[test]
    fn alpha_reads_orbit_types() {
        let g = groups::symmetric3();
        let t = build_truncated(&GSet::trivial(&g, 1), 6, DEFAULT_OBJECT_CAP).unwrap();
        let zero = vec![0; t.k0_group().unwrap().dim()];
        assert!(alpha_pi0(&t, &zero).unwrap().is_zero());
        let reg = crate::sk::ObjectOverX::new(crate::gset::GMap::to_point(&GSet::regular(&g)));
        let a = alpha_pi0(&t, &t.class_of(&reg).unwrap()).unwrap();
        assert_eq!(a.coefficients, vec![1, 0, 0, 0]);
        assert_eq!(BurnsideRing::new(&g).marks(&a).unwrap()[0], 6);
    }
}
