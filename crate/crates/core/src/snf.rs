//! Smith normal form over the integers.
//!
//! Elimination runs in `i64` with checked operations and restarts in
//! arbitrary precision when any intermediate value overflows.

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `U · A · V = S` with `S` diagonal; `diagonal` holds the nonzero invariant
/// factors `d₁ | d₂ | …`, all positive.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<BigInt>,
    /// Present only when requested; `rows × rows`.
    pub u: Option<Vec<Vec<BigInt>>>,
    /// `cols × cols`
    pub v: Vec<Vec<BigInt>>,
    pub v_inv: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors as `i64`, failing on overflow.
    pub fn factors_i64(&self) -> Result<Vec<i64>> {
        self.diagonal
            .iter()
            .map(|d| d.to_i64().ok_or(Error::Overflow))
            .collect()
    }
}

pub fn smith_normal_form(a: &Matrix) -> SmithForm {
    smith_normal_form_with(a, true)
}

/// As [`smith_normal_form`], optionally skipping the row transform, which
/// is expensive for tall relation matrices.
pub fn smith_normal_form_with(a: &Matrix, track_u: bool) -> SmithForm {
    let small: Vec<Vec<i64>> = a.to_rows();
    if let Some(out) = Elimination::run(small, a.rows(), a.cols(), track_u) {
        return out.into_form(|x: i64| BigInt::from(x));
    }
    let big: Vec<Vec<BigInt>> = a
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    Elimination::run(big, a.rows(), a.cols(), track_u)
        .expect("arbitrary precision elimination cannot overflow")
        .into_form(|x| x)
}

trait Entry:
    Clone + Zero + One + Signed + Ord + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv
{
}

impl<T> Entry for T where
    T: Clone + Zero + One + Signed + Ord + CheckedAdd + CheckedSub + CheckedMul + CheckedDiv
{
}

struct Elimination<T> {
    a: Vec<Vec<T>>,
    u: Option<Vec<Vec<T>>>,
    v: Vec<Vec<T>>,
    v_inv: Vec<Vec<T>>,
    rank: usize,
}

fn ident<T: Entry>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

// row[dst] -= q * row[src]
fn row_axpy<T: Entry>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Option<()> {
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x = x.checked_sub(&q.checked_mul(y)?)?;
        }
    }
    Some(())
}

// col[dst] -= q * col[src]
fn col_axpy<T: Entry>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Option<()> {
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let p = q.checked_mul(&row[src])?;
            row[dst] = row[dst].checked_sub(&p)?;
        }
    }
    Some(())
}

fn swap_cols<T>(m: &mut [Vec<T>], i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

impl<T: Entry> Elimination<T> {
    fn run(a: Vec<Vec<T>>, rows: usize, cols: usize, track_u: bool) -> Option<Self> {
        let mut e = Elimination {
            a,
            u: track_u.then(|| ident(rows)),
            v: ident(cols),
            v_inv: ident(cols),
            rank: 0,
        };
        e.eliminate(rows, cols)?;
        Some(e)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_columns(&mut self, i: usize, j: usize) {
        swap_cols(&mut self.a, i, j);
        swap_cols(&mut self.v, i, j);
        self.v_inv.swap(i, j);
    }

    fn row_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        row_axpy(&mut self.a, dst, src, q)?;
        if let Some(u) = &mut self.u {
            row_axpy(u, dst, src, q)?;
        }
        Some(())
    }

    // col[dst] -= q col[src]; the inverse transform adds q·row[dst] to row[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &T) -> Option<()> {
        col_axpy(&mut self.a, dst, src, q)?;
        col_axpy(&mut self.v, dst, src, q)?;
        let neg = -q.clone();
        row_axpy(&mut self.v_inv, src, dst, &neg)
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -x.clone();
        }
        if let Some(u) = &mut self.u {
            for x in u[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }

    fn eliminate(&mut self, rows: usize, cols: usize) -> Option<()> {
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest(t, rows, cols) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_columns(t, pj);
            loop {
                let mut remainder = false;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].checked_div(&self.a[t][t])?;
                        self.row_op(i, t, &q)?;
                        remainder |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].checked_div(&self.a[t][t])?;
                        self.col_op(j, t, &q)?;
                        remainder |= !self.a[t][j].is_zero();
                    }
                }
                if remainder {
                    self.promote_smaller_remainder(t, rows, cols);
                    continue;
                }
                let pivot = self.a[t][t].clone();
                let bad = (t + 1..rows).find(|&i| {
                    self.a[i][t + 1..cols]
                        .iter()
                        .any(|x| !x.checked_div(&pivot).map_or(false, |q| (q * pivot.clone()) == *x))
                });
                match bad {
                    Some(i) => {
                        self.row_op(t, i, &-T::one())?;
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        self.rank = t;
        Some(())
    }

    fn smallest(&self, t: usize, rows: usize, cols: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn promote_smaller_remainder(&mut self, t: usize, rows: usize, cols: usize) {
        let mut best: Option<(bool, usize)> = None;
        let mut best_abs: Option<T> = None;
        for i in t + 1..rows {
            let x = &self.a[i][t];
            if !x.is_zero() && best_abs.as_ref().map_or(true, |b| x.abs() < *b) {
                best = Some((true, i));
                best_abs = Some(x.abs());
            }
        }
        for j in t + 1..cols {
            let x = &self.a[t][j];
            if !x.is_zero() && best_abs.as_ref().map_or(true, |b| x.abs() < *b) {
                best = Some((false, j));
                best_abs = Some(x.abs());
            }
        }
        match best {
            Some((true, i)) => self.swap_rows(t, i),
            Some((false, j)) => self.swap_columns(t, j),
            None => {}
        }
    }

    fn into_form(self, conv: impl Fn(T) -> BigInt) -> SmithForm {
        let rows = self.a.len();
        let cols = self.v.len();
        let diagonal = (0..self.rank)
            .map(|i| conv(self.a[i][i].clone()))
            .collect();
        let convm = |m: Vec<Vec<T>>| -> Vec<Vec<BigInt>> {
            m.into_iter()
                .map(|r| r.into_iter().map(&conv).collect())
                .collect()
        };
        SmithForm {
            rows,
            cols,
            diagonal,
            u: self.u.map(convm),
            v: convm(self.v),
            v_inv: convm(self.v_inv),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_big(m: &Matrix) -> Vec<Vec<BigInt>> {
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn check(m: &Matrix) -> SmithForm {
        let s = smith_normal_form(m);
        let prod = mul(&mul(s.u.as_ref().unwrap(), &to_big(m)), &s.v);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j && i < s.rank() {
                    s.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(*x, want, "U A V mismatch at ({i},{j})");
            }
        }
        for w in s.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        let vv = mul(&s.v, &s.v_inv);
        for (i, row) in vv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as i64));
            }
        }
        s
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&Matrix::identity(3));
        assert_eq!(s.factors_i64().unwrap(), vec![1, 1, 1]);
        let z = check(&Matrix::zeros(2, 3));
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn small_example() {
        let a = Matrix::from_rows(vec![vec![2, 4], vec![6, 8]], 2).unwrap();
        assert_eq!(check(&a).factors_i64().unwrap(), vec![2, 4]);
    }

    #[test]
    fn divisibility_fixup() {
        let a = Matrix::from_rows(vec![vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(check(&a).factors_i64().unwrap(), vec![1, 6]);
        let b = Matrix::from_rows(vec![vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]], 3).unwrap();
        assert_eq!(check(&b).factors_i64().unwrap(), vec![2, 2, 60]);
    }

    #[test]
    fn overflow_promotes() {
        let big = i64::MAX / 2;
        let a = Matrix::from_rows(vec![vec![big, big - 1], vec![big - 1, big - 2]], 2).unwrap();
        let s = check(&a);
        // det = -1, so both factors are 1
        assert_eq!(s.factors_i64().unwrap(), vec![1, 1]);
    }
}
