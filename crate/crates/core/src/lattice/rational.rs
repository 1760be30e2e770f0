//! Gaussian elimination over ℚ.

use num_traits::{One, Zero};

use super::IntMatrix;
use crate::exactnum::Rational;

/// Dense rational matrix, stored as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub cols: usize,
}

/// Affine solution set `particular + span(homogeneous)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub homogeneous: Vec<Vec<Rational>>,
}

impl QMatrix {
    pub fn new(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        Self { rows, cols }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        let rows = (0..m.rows()).map(|r| m.row(r).iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
        Self { rows, cols: m.cols() }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form in place; returns pivot columns.
/// `aug` extra trailing columns are carried along but never pivoted on.
fn rref_cols(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(p, r);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut rows = m.rows.clone();
    let piv = rref_cols(&mut rows, m.cols);
    (QMatrix { rows, cols: m.cols }, piv)
}

pub fn rank_rational(m: &QMatrix) -> usize {
    rref(m).1.len()
}

fn kernel_from_rref(rows: &[Vec<Rational>], cols: usize, pivots: &[usize]) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Basis of the rational kernel, one vector per free column.
pub fn nullspace(m: &QMatrix) -> Vec<Vec<Rational>> {
    let (r, piv) = rref(m);
    kernel_from_rref(&r.rows, m.cols, &piv)
}

/// Solve `m·x = b`; `None` when inconsistent.
pub fn solve(m: &QMatrix, b: &[Rational]) -> Option<Solution> {
    assert_eq!(m.nrows(), b.len(), "right-hand side length");
    let mut rows: Vec<Vec<Rational>> =
        m.rows.iter().zip(b).map(|(r, bi)| r.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let pivots = rref_cols(&mut rows, m.cols);
    if rows[pivots.len()..].iter().any(|r| !r[m.cols].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); m.cols];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = rows[r][m.cols].clone();
    }
    Some(Solution { particular, homogeneous: kernel_from_rref(&rows, m.cols, &pivots) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn q(rows: &[&[i64]]) -> QMatrix {
        let cols = rows[0].len();
        QMatrix::new(rows.iter().map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect(), cols)
    }

    #[test]
    fn solves_consistent_system() {
        let m = q(&[&[1, 1, 0], &[0, 1, 1]]);
        let s = solve(&m, &[rat(2, 1), rat(3, 1)]).unwrap();
        assert_eq!(m.mul_vec(&s.particular), vec![rat(2, 1), rat(3, 1)]);
        assert_eq!(s.homogeneous.len(), 1);
        assert!(m.mul_vec(&s.homogeneous[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn detects_inconsistency() {
        let m = q(&[&[1, 2], &[2, 4]]);
        assert!(solve(&m, &[rat(1, 1), rat(3, 1)]).is_none());
        assert!(solve(&m, &[rat(1, 1), rat(2, 1)]).is_some());
    }

    #[test]
    fn rank_and_kernel() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank_rational(&m), 2);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }
}
