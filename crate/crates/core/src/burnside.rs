//! The Burnside ring of a finite group and its table of marks.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::gset::{product, GSet};
use crate::matrix::Matrix;

/// Integer combination of the transitive G-sets `[G/H]`, indexed by the
/// group's subgroup classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BurnsideElement {
    pub coefficients: Vec<i64>,
}

impl BurnsideElement {
    pub fn zero(rank: usize) -> Self {
        BurnsideElement {
            coefficients: vec![0; rank],
        }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut e = Self::zero(rank);
        e.coefficients[i] = 1;
        e
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        BurnsideElement {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        BurnsideElement {
            coefficients: self.coefficients.iter().map(|a| a * k).collect(),
        }
    }
}

/// Number of orbits of `x` in each stabilizer class.
pub fn burnside_class(x: &GSet) -> BurnsideElement {
    let g = x.group();
    let mut e = BurnsideElement::zero(g.subgroup_classes().len());
    for c in x.orbit_type() {
        e.coefficients[c] += 1;
    }
    e
}

/// `M[i][j] = |(G/K_j)^{H_i}|` over the subgroup classes in ascending order.
pub fn table_of_marks(g: &FiniteGroup) -> Matrix {
    let classes = g.subgroup_classes();
    let n = classes.len();
    let mut m = Matrix::zeros(n, n);
    for (j, kc) in classes.iter().enumerate() {
        let k = &kc.representative;
        let cosets = g.cosets(k);
        for (i, hc) in classes.iter().enumerate() {
            // gK is fixed by H iff g⁻¹Hg ≤ K
            let h = &hc.representative;
            let fixed = cosets
                .iter()
                .filter(|&&x| {
                    let xi = g.inv(x);
                    h.elements().iter().all(|&y| k.contains(g.conjugate(xi, y)))
                })
                .count();
            m.set(i, j, fixed as i64);
        }
    }
    m
}

/// Burnside ring of a group with a lazily computed basis product table.
#[derive(Debug)]
pub struct BurnsideRing {
    group: Arc<FiniteGroup>,
    marks: Matrix,
    products: OnceLock<Vec<Vec<BurnsideElement>>>,
}

impl BurnsideRing {
    pub fn new(group: &Arc<FiniteGroup>) -> Self {
        BurnsideRing {
            group: group.clone(),
            marks: table_of_marks(group),
            products: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.marks.rows()
    }

    pub fn table_of_marks(&self) -> &Matrix {
        &self.marks
    }

    pub fn zero(&self) -> BurnsideElement {
        BurnsideElement::zero(self.rank())
    }

    pub fn basis(&self, i: usize) -> BurnsideElement {
        BurnsideElement::basis(self.rank(), i)
    }

    /// `[G/G]`
    pub fn one(&self) -> BurnsideElement {
        self.basis(self.rank() - 1)
    }

    /// Transitive G-set `G/H` for the representative of class `i`.
    pub fn orbit(&self, i: usize) -> GSet {
        GSet::coset_space(&self.group, &self.group.subgroup_classes()[i].representative)
    }

    fn products(&self) -> &Vec<Vec<BurnsideElement>> {
        self.products.get_or_init(|| {
            let orbits: Vec<GSet> = (0..self.rank()).map(|i| self.orbit(i)).collect();
            orbits
                .iter()
                .map(|a| {
                    orbits
                        .iter()
                        .map(|b| burnside_class(&product(a, b).expect("same group")))
                        .collect()
                })
                .collect()
        })
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &BurnsideElement {
        &self.products()[i][j]
    }

    pub fn mul(&self, a: &BurnsideElement, b: &BurnsideElement) -> Result<BurnsideElement> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        for (i, &x) in a.coefficients.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coefficients.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x.checked_mul(y).ok_or(Error::Overflow)?;
                for (o, &p) in out.coefficients.iter_mut().zip(&self.products()[i][j].coefficients) {
                    *o = p
                        .checked_mul(xy)
                        .and_then(|t| o.checked_add(t))
                        .ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    /// Ghost coordinates `M · a`.
    pub fn marks(&self, a: &BurnsideElement) -> Result<Vec<i64>> {
        self.check(a)?;
        self.marks.apply(&a.coefficients)
    }

    fn check(&self, a: &BurnsideElement) -> Result<()> {
        if a.rank() != self.rank() {
            return Err(Error::Precondition(format!(
                "element has {} coefficients, the ring has rank {}",
                a.rank(),
                self.rank()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::disjoint_union;
    use crate::groups;

    #[test]
    fn marks_of_c2() {
        let c2 = groups::cyclic(2);
        assert_eq!(table_of_marks(&c2).to_rows(), vec![vec![2, 1], vec![0, 1]]);
        assert_eq!(table_of_marks(&groups::trivial()).to_rows(), vec![vec![1]]);
    }

    #[test]
    fn classes_of_small_sets() {
        let s3 = groups::symmetric3();
        assert!(burnside_class(&GSet::empty(&s3)).is_zero());
        let ring = BurnsideRing::new(&s3);
        assert_eq!(burnside_class(&GSet::trivial(&s3, 1)), ring.one());
        let c3 = &s3.subgroup_classes()[2].representative;
        let (x, _, _) =
            disjoint_union(&GSet::regular(&s3), &GSet::coset_space(&s3, c3)).unwrap();
        assert_eq!(burnside_class(&x).coefficients, vec![1, 0, 1, 0]);
    }

    #[test]
    fn products_in_c2() {
        let c2 = groups::cyclic(2);
        let ring = BurnsideRing::new(&c2);
        let free = ring.basis(0);
        assert_eq!(ring.mul(&free, &free).unwrap().coefficients, vec![2, 0]);
        assert_eq!(ring.mul(&free, &ring.one()).unwrap(), free);
    }

    #[test]
    fn marks_of_unit_and_zero() {
        let ring = BurnsideRing::new(&groups::alternating4());
        assert!(ring.marks(&ring.one()).unwrap().iter().all(|&m| m == 1));
        assert!(ring.marks(&ring.zero()).unwrap().iter().all(|&m| m == 0));
    }
}
