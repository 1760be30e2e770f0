use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form with transforms: `u · m · v = d`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::new(r, cols, rows.into_iter().flatten().collect()).expect("shape")
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q·row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, s) in m[i].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *x -= q * s;
                }
            }
        }
    }

    /// col_i -= q·col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[j].is_zero() {
                let d = q * &row[j];
                row[i] -= d;
            }
        }
    }
}

/// Diagonalize by elementary operations, always pivoting on the smallest
/// nonzero entry of the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: to_rows(m),
        u: to_rows(&IntMatrix::identity(rows)),
        v: to_rows(&IntMatrix::identity(cols)),
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &w.a[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w, rows, cols);
            };
            if pi != t {
                w.swap_rows(pi, t);
            }
            if pj != t {
                w.swap_cols(pj, t);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_sub(i, t, &q);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_sub(j, t, &q);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into the pivot row.
            let piv = w.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    let minus_one = BigInt::from(-1);
                    w.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            for m in [&mut w.a, &mut w.u] {
                for x in m[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
    }
    finish(w, rows, cols)
}

fn finish(w: Work, rows: usize, cols: usize) -> Snf {
    Snf { d: from_rows(w.a, cols), u: from_rows(w.u, rows), v: from_rows(w.v, cols) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Snf {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.det().abs(), BigInt::from(1));
        assert_eq!(s.v.det().abs(), BigInt::from(1));
        let n = m.rows().min(m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for i in 0..n {
            assert!(!s.d.get(i, i).is_negative());
            if i + 1 < n && !s.d.get(i, i).is_zero() {
                assert!(s.d.get(i + 1, i + 1).is_multiple_of(s.d.get(i, i)));
            }
        }
        s
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]], 2));
        assert_eq!(s.d, IntMatrix::from_rows(&[[1, 0], [0, 6]], 2));
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(check(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        assert_eq!(check(&IntMatrix::zeros(2, 3)).d, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn assorted_shapes() {
        check(&IntMatrix::from_rows(&[[4, 6, 2], [2, 2, 8], [0, 6, -4]], 3));
        check(&IntMatrix::from_rows(&[[3, -1], [2, 7], [5, 5]], 2));
        check(&IntMatrix::from_rows(&[[0, 0, 12, 18]], 4));
        check(&IntMatrix::zeros(0, 3));
    }
}
