//! Finitely generated abelian groups and cokernels of integer relation
//! matrices.

use std::collections::HashSet;
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::snf::smith_normal_form_with;

/// `Z/d₁ ⊕ … ⊕ Z/dₖ ⊕ Z^r`. Elements are coordinate vectors with the
/// torsion coordinates first, each reduced into `0..dᵢ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn new(free_rank: usize, torsion: Vec<i64>) -> Result<Self> {
        let g = FgAbelianGroup { free_rank, torsion };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.torsion.iter().any(|&d| d < 2) {
            return Err(Error::Structural("torsion factors must be at least 2".into()));
        }
        if self.torsion.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Structural("torsion factors must form a divisibility chain".into()));
        }
        Ok(())
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Modulus per coordinate, `0` for free coordinates.
    pub fn moduli(&self) -> Vec<i64> {
        let mut m = self.torsion.clone();
        m.extend(std::iter::repeat(0).take(self.free_rank));
        m
    }

    pub fn reduce(&self, v: &mut [i64]) {
        for (x, &d) in v.iter_mut().zip(&self.torsion) {
            *x = x.rem_euclid(d);
        }
    }

    pub fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        m.reduce_rows(&self.moduli())
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A sparse relation `Σ cᵢ·xᵢ = 0` over generator indices.
pub type Relation = Vec<(usize, i64)>;

/// `Zⁿ / ⟨relations⟩` with explicit coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    group: FgAbelianGroup,
    classes: Vec<Vec<i64>>,
    preimages: Vec<Vec<(usize, i64)>>,
}

impl Cokernel {
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> usize {
        self.classes.len()
    }

    /// Coordinates of the class of generator `j`.
    pub fn class_of(&self, j: usize) -> &[i64] {
        &self.classes[j]
    }

    pub fn classes(&self) -> &[Vec<i64>] {
        &self.classes
    }

    /// Class of an integer combination of generators.
    pub fn class_of_combination(&self, combo: &[(usize, i64)]) -> Result<Vec<i64>> {
        let mut v = vec![0i64; self.group.dim()];
        for &(j, c) in combo {
            for (x, &y) in v.iter_mut().zip(&self.classes[j]) {
                *x = c
                    .checked_mul(y)
                    .and_then(|p| x.checked_add(p))
                    .ok_or(Error::Overflow)?;
            }
            self.group.reduce(&mut v);
        }
        Ok(v)
    }

    /// A combination of generators whose class is the `k`-th coordinate
    /// unit vector.
    pub fn preimage(&self, k: usize) -> &[(usize, i64)] {
        &self.preimages[k]
    }

    /// Cokernel of the relations on `n` generators.
    ///
    /// Generators are eliminated greedily, highest index first, through
    /// relations whose top generator has coefficient `±1`; what remains is
    /// handed to a dense Smith normal form.
    pub fn compute(n: usize, relations: &[Relation]) -> Result<Cokernel> {
        match sparse(n, relations) {
            Ok(c) => Ok(c),
            Err(Error::Overflow) => dense(n, relations),
            Err(e) => Err(e),
        }
    }

    /// Cokernel of a dense relation matrix, one relation per row.
    pub fn of_matrix(m: &Matrix) -> Result<Cokernel> {
        let rels: Vec<Relation> = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (j, c))
                    .collect()
            })
            .collect();
        Self::compute(m.cols(), &rels)
    }
}

fn normalize(rel: &Relation) -> Relation {
    let mut r = rel.clone();
    r.sort_unstable_by_key(|&(j, _)| j);
    let mut out: Relation = Vec::with_capacity(r.len());
    for (j, c) in r {
        match out.last_mut() {
            Some((k, d)) if *k == j => *d += c,
            _ => out.push((j, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

fn sparse(n: usize, relations: &[Relation]) -> Result<Cokernel> {
    let rels: Vec<Relation> = relations.iter().map(normalize).collect();
    if let Some(&(j, _)) = rels.iter().flatten().find(|(j, _)| *j >= n) {
        return Err(Error::Structural(format!("relation mentions generator {j} of {n}")));
    }
    // pivot[j] = relation eliminating generator j
    let mut pivot: Vec<Option<usize>> = vec![None; n];
    for (r, rel) in rels.iter().enumerate() {
        if let Some(&(top, c)) = rel.last() {
            if c.abs() == 1 && pivot[top].map_or(true, |p| rels[p].len() > rel.len()) {
                pivot[top] = Some(r);
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&j| pivot[j].is_none()).collect();
    let mut free_pos = vec![usize::MAX; n];
    for (i, &j) in free.iter().enumerate() {
        free_pos[j] = i;
    }
    let f = free.len();
    // normal form of every generator over the free ones
    let mut nf: Vec<Vec<i64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = vec![0i64; f];
        match pivot[j] {
            None => v[free_pos[j]] = 1,
            Some(p) => {
                let rel = &rels[p];
                let sign = rel.last().unwrap().1;
                // x_j = -sign · Σ_{k<j} c_k x_k
                for &(k, c) in &rel[..rel.len() - 1] {
                    let coef = c.checked_mul(-sign).ok_or(Error::Overflow)?;
                    axpy(&mut v, coef, &nf[k])?;
                }
            }
        }
        nf.push(v);
    }
    let mut residual: HashSet<Vec<i64>> = HashSet::new();
    let is_pivot: HashSet<usize> = pivot.iter().flatten().copied().collect();
    for (r, rel) in rels.iter().enumerate() {
        if is_pivot.contains(&r) {
            continue;
        }
        let mut v = vec![0i64; f];
        for &(k, c) in rel {
            axpy(&mut v, c, &nf[k])?;
        }
        if v.iter().any(|&x| x != 0) {
            residual.insert(v);
        }
    }
    let mut rows: Vec<Vec<i64>> = residual.into_iter().collect();
    rows.sort();
    let m = Matrix::from_rows(rows, f)?;
    let (group, coords) = finish(&m)?;
    let classes = nf
        .iter()
        .map(|v| project(v, &coords, &group))
        .collect::<Result<Vec<_>>>()?;
    let preimages = coords
        .inv_rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (free[i], c))
                .collect()
        })
        .collect();
    Ok(Cokernel {
        group,
        classes,
        preimages,
    })
}

fn dense(n: usize, relations: &[Relation]) -> Result<Cokernel> {
    let mut rows = Vec::with_capacity(relations.len());
    for rel in relations {
        let mut row = vec![0i64; n];
        for &(j, c) in rel {
            row[j] = row[j].checked_add(c).ok_or(Error::Overflow)?;
        }
        rows.push(row);
    }
    let m = Matrix::from_rows(rows, n)?;
    let (group, coords) = finish(&m)?;
    let classes = (0..n)
        .map(|j| {
            let mut e = vec![0i64; n];
            e[j] = 1;
            project(&e, &coords, &group)
        })
        .collect::<Result<Vec<_>>>()?;
    let preimages = coords
        .inv_rows
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect()
        })
        .collect();
    Ok(Cokernel {
        group,
        classes,
        preimages,
    })
}

fn axpy(v: &mut [i64], c: i64, w: &[i64]) -> Result<()> {
    if c == 0 {
        return Ok(());
    }
    for (x, &y) in v.iter_mut().zip(w) {
        if y != 0 {
            *x = c
                .checked_mul(y)
                .and_then(|p| x.checked_add(p))
                .ok_or(Error::Overflow)?;
        }
    }
    Ok(())
}

struct Coordinates {
    // columns of V kept as coordinates, torsion first
    columns: Vec<Vec<i64>>,
    // matching rows of V⁻¹
    inv_rows: Vec<Vec<i64>>,
}

fn finish(m: &Matrix) -> Result<(FgAbelianGroup, Coordinates)> {
    let s = smith_normal_form_with(m, false);
    let factors = s.factors_i64()?;
    let f = m.cols();
    let to_i64 = |x: &num_bigint::BigInt| x.to_i64().ok_or(Error::Overflow);
    let mut kept: Vec<usize> = Vec::new();
    let mut torsion = Vec::new();
    for (i, &d) in factors.iter().enumerate() {
        if d > 1 {
            kept.push(i);
            torsion.push(d);
        }
    }
    kept.extend(factors.len()..f);
    let group = FgAbelianGroup {
        free_rank: f - factors.len(),
        torsion,
    };
    let mut columns = Vec::with_capacity(kept.len());
    let mut inv_rows = Vec::with_capacity(kept.len());
    for &c in &kept {
        columns.push(s.v.iter().map(|row| to_i64(&row[c])).collect::<Result<Vec<_>>>()?);
        inv_rows.push(s.v_inv[c].iter().map(to_i64).collect::<Result<Vec<_>>>()?);
    }
    Ok((group, Coordinates { columns, inv_rows }))
}

fn project(v: &[i64], coords: &Coordinates, group: &FgAbelianGroup) -> Result<Vec<i64>> {
    let mut out = Vec::with_capacity(coords.columns.len());
    for col in &coords.columns {
        let mut acc = 0i64;
        for (&a, &b) in v.iter().zip(col) {
            if a != 0 && b != 0 {
                acc = a
                    .checked_mul(b)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(Error::Overflow)?;
            }
        }
        out.push(acc);
    }
    group.reduce(&mut out);
    Ok(out)
}

/// Whether `φ: A → B` (matrix on coordinates) is surjective.
pub fn is_surjective(phi: &Matrix, target: &FgAbelianGroup) -> Result<bool> {
    if phi.rows() != target.dim() {
        return Err(Error::Structural("matrix rows do not match the target".into()));
    }
    let mut columns: Vec<Vec<i64>> = (0..phi.cols()).map(|j| phi.column(j)).collect();
    for (i, &d) in target.torsion.iter().enumerate() {
        let mut c = vec![0; target.dim()];
        c[i] = d;
        columns.push(c);
    }
    let m = Matrix::from_columns(&columns, target.dim())?;
    let s = smith_normal_form_with(&m, false);
    Ok(s.rank() == target.dim() && s.diagonal.iter().all(|d| *d == 1.into()))
}

/// Whether `φ` is an isomorphism between the two groups. A surjection
/// between isomorphic finitely generated abelian groups is injective.
pub fn is_isomorphism(phi: &Matrix, source: &FgAbelianGroup, target: &FgAbelianGroup) -> Result<bool> {
    if phi.cols() != source.dim() {
        return Err(Error::Structural("matrix columns do not match the source".into()));
    }
    Ok(source == target && is_surjective(phi, target)?)
}

/// Whether `φ` sends every relation of the source to zero in the target.
pub fn is_well_defined(phi: &Matrix, source: &FgAbelianGroup, target: &FgAbelianGroup) -> bool {
    source.torsion.iter().enumerate().all(|(j, &d)| {
        let mut col: Vec<i64> = phi.column(j).iter().map(|&x| x.saturating_mul(d)).collect();
        target.reduce(&mut col);
        col.iter().all(|&x| x == 0)
    })
}
