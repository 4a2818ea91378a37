//! Exact Gaussian elimination over any `Scalar`. Pivots are always units,
//! so the same code runs over fields and over the local rings W_N; in the
//! latter case a leftover non-unit entry is reported instead of guessed.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Matrix<R> = Vec<Vec<R>>;

/// Reduced row echelon form with unit pivots scaled to one.
#[derive(Clone, Debug)]
pub struct Echelon<R: Scalar> {
    pub rows: Matrix<R>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

pub fn rref<R: Scalar>(mut a: Matrix<R>, ncols: usize) -> Result<Echelon<R>> {
    let nrows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][c].is_unit()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        if !inv.is_one() {
            for x in a[r].iter_mut() {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()).skip(c) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return Err(Error::NonUnitPivot);
    }
    a.truncate(r);
    Ok(Echelon { rows: a, pivots, ncols })
}

impl<R: Scalar> Echelon<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in
    /// their span.
    pub fn coords(&self, v: &[R]) -> Option<Vec<R>> {
        let coords: Vec<R> = self.pivots.iter().map(|&c| v[c].clone()).collect();
        let mut rest: Vec<R> = v.to_vec();
        for (k, row) in coords.iter().zip(self.rows.iter()) {
            if k.is_zero() {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(row.iter()) {
                if !y.is_zero() {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    /// Basis of the right kernel {x : A x = 0}.
    pub fn kernel(&self, zero: &R, one: &R) -> Matrix<R> {
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![zero.clone(); self.ncols];
            v[free] = one.clone();
            for (row, &c) in self.rows.iter().zip(self.pivots.iter()) {
                v[c] = row[free].neg();
            }
            out.push(v);
        }
        out
    }
}

/// Kernel basis of an m×n matrix (rows of equations), in the canonical
/// order given by the free columns.
pub fn kernel<R: Scalar>(a: Matrix<R>, ncols: usize, ctx: &R::Ctx) -> Result<Matrix<R>> {
    let e = rref(a, ncols)?;
    Ok(e.kernel(&R::zero(ctx), &R::one(ctx)))
}

/// Solves A x = b; returns one solution if consistent.
pub fn solve<R: Scalar>(a: &Matrix<R>, b: &[R], ncols: usize, ctx: &R::Ctx) -> Result<Option<Vec<R>>> {
    let aug: Matrix<R> = a
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let e = rref(aug, ncols + 1)?;
    if e.pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let mut x = vec![R::zero(ctx); ncols];
    for (row, &c) in e.rows.iter().zip(e.pivots.iter()) {
        x[c] = row[ncols].clone();
    }
    Ok(Some(x))
}

pub fn rank<R: Scalar>(a: &Matrix<R>) -> Result<usize> {
    let ncols = a.first().map_or(0, |r| r.len());
    Ok(rref(a.clone(), ncols)?.rank())
}

/// Determinant with unit pivoting (zero when a field column has no pivot).
pub fn det<R: Scalar>(mut a: Matrix<R>, ctx: &R::Ctx) -> Result<R> {
    let n = a.len();
    let mut d = R::one(ctx);
    for c in 0..n {
        let p = match (c..n).find(|&i| a[i][c].is_unit()) {
            Some(p) => p,
            None => {
                if (c..n).all(|i| a[i][c].is_zero()) {
                    return Ok(R::zero(ctx));
                }
                return Err(Error::NonUnitPivot);
            }
        };
        if p != c {
            a.swap(p, c);
            d = d.neg();
        }
        d = d.mul(&a[c][c]);
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = f.mul(&a[c][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    Ok(d)
}

pub fn mat_mul<R: Scalar>(a: &Matrix<R>, b: &Matrix<R>, ctx: &R::Ctx) -> Matrix<R> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![R::zero(ctx); n];
            for (k, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(b[k].iter()) {
                    if !y.is_zero() {
                        *o = o.add(&x.mul(y));
                    }
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{CycloScalar, FiniteRing, WittScalar};

    fn c(n: i64) -> CycloScalar {
        CycloScalar::from_int_in(1, n)
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![vec![c(1), c(2), c(3)], vec![c(2), c(4), c(6)]];
        let e = rref(a.clone(), 3).unwrap();
        assert_eq!(e.rank(), 1);
        let k = e.kernel(&c(0), &c(1));
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &a {
                let s = row.iter().zip(v).fold(c(0), |acc, (x, y)| acc.add(&x.mul(y)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn determinant_and_solve() {
        let a = vec![vec![c(2), c(1)], vec![c(1), c(1)]];
        assert_eq!(det(a.clone(), &1).unwrap(), c(1));
        let x = solve(&a, &[c(3), c(2)], 2, &1).unwrap().unwrap();
        assert_eq!(x, vec![c(1), c(1)]);
        assert!(solve(&vec![vec![c(1)], vec![c(1)]], &[c(1), c(2)], 1, &1).unwrap().is_none());
    }

    #[test]
    fn local_ring_elimination() {
        let r = FiniteRing::new(3, 3, vec![0, 1]);
        let w = |n| WittScalar::from_int(&r, n);
        // rank 1 mod 3 but full rank over W_3: reported
        let a = vec![vec![w(1), w(0)], vec![w(0), w(3)]];
        assert!(matches!(rref(a, 2), Err(Error::NonUnitPivot)));
        let b = vec![vec![w(1), w(2)], vec![w(2), w(4)]];
        assert_eq!(rref(b, 2).unwrap().rank(), 1);
    }
}
