//! Exact integer and rational linear algebra.

mod feasibility;
mod rational;
mod snf;
mod vec3;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use feasibility::{find_point, Constraint, Feasibility, Relation};
pub use rational::{nullspace, rank_rational, rref, solve, QMatrix, Solution};
pub use snf::{smith_normal_form, Snf};
pub use vec3::{primitive, wedge_index, IntVec3};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix has {rows}x{cols} shape but {len} entries")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("column counts {left}+{right} do not match ambient dimension {ambient}")]
    ColumnCount { left: usize, right: usize, ambient: usize },
    #[error("row counts differ: {0} vs {1}")]
    RowCount(usize, usize),
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Index of a sublattice: finite, or infinite when the image has lower rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            LatticeIndex::Finite(n) => Some(n),
            LatticeIndex::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LatticeIndex::Infinite)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{n}"),
            LatticeIndex::Infinite => write!(f, "INFINITE"),
        }
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::Shape { rows, cols, len: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Build from small-integer rows. All rows must have the same length;
    /// `cols` is only consulted when `rows` is empty.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R], cols: usize) -> Self {
        let cols = rows.first().map_or(cols, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        Self { rows: rows.len(), cols, data }
    }

    /// Build from column vectors of length `rows`.
    pub fn from_columns<C: AsRef<[i64]>>(cols: &[C], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.as_ref().len(), rows, "ragged columns");
            for (i, &x) in c.as_ref().iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, o: &Self) -> Result<Self, LatticeError> {
        if self.rows != o.rows {
            return Err(LatticeError::RowCount(self.rows, o.rows));
        }
        let mut out = Self::zeros(self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                out.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, o: &Self) -> Result<Self, LatticeError> {
        if self.cols != o.cols {
            return Err(LatticeError::RowCount(self.cols, o.cols));
        }
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Ok(Self { rows: self.rows + o.rows, cols: self.cols, data })
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix::from_int(self)
    }

    /// Rank over ℚ by fraction-free elimination.
    pub fn rank(&self) -> usize {
        self.bareiss().0
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return BigInt::one();
        }
        let (rank, det) = self.bareiss();
        if rank < self.rows {
            BigInt::zero()
        } else {
            det
        }
    }

    /// Bareiss elimination. Returns the rank and, for square full-rank input,
    /// the determinant.
    fn bareiss(&self) -> (usize, BigInt) {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut prev = BigInt::one();
        let mut sign = 1;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else { continue };
            if p != rank {
                a.swap(p, rank);
                sign = -sign;
            }
            for r in rank + 1..self.rows {
                for k in c + 1..self.cols {
                    let v = &a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k];
                    a[r][k] = v / &prev;
                }
                a[r][c] = BigInt::zero();
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        (rank, if sign < 0 { -prev } else { prev })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = MatrixRepr::deserialize(d)?;
        let data = r
            .entries
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad entry {s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        IntMatrix::new(r.rows, r.cols, data).map_err(D::Error::custom)
    }
}

/// `|ℤ^m / M·ℤ^n|` for an `m × n` matrix.
pub fn lattice_index(m: &IntMatrix) -> LatticeIndex {
    if m.rows == 0 {
        return LatticeIndex::Finite(BigInt::one());
    }
    // Square case: the determinant is cheaper than a full reduction.
    if m.rows == m.cols {
        let d = m.det();
        return if d.is_zero() { LatticeIndex::Infinite } else { LatticeIndex::Finite(d.abs()) };
    }
    if m.rank() < m.rows {
        return LatticeIndex::Infinite;
    }
    let snf = smith_normal_form(m);
    let mut prod = BigInt::one();
    for i in 0..m.rows {
        prod *= snf.d.get(i, i);
    }
    LatticeIndex::Finite(prod)
}

/// Index of `L1 ⊕ L2` (given by columns) in `ℤ^ambient`.
pub fn lattice_index_sum(l1: &IntMatrix, l2: &IntMatrix, ambient: usize) -> Result<LatticeIndex, LatticeError> {
    if l1.cols + l2.cols != ambient {
        return Err(LatticeError::ColumnCount { left: l1.cols, right: l2.cols, ambient });
    }
    if l1.rows != ambient || l2.rows != ambient {
        return Err(LatticeError::RowCount(l1.rows.max(l2.rows), ambient));
    }
    let joined = l1.hstack(l2)?;
    let d = joined.det();
    Ok(if d.is_zero() { LatticeIndex::Infinite } else { LatticeIndex::Finite(d.abs()) })
}

/// Columns form a ℤ-basis of `ker M ∩ ℤ^cols`.
pub fn integral_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = (0..m.rows.min(m.cols)).take_while(|&i| !snf.d.get(i, i).is_zero()).count();
    let idx: Vec<usize> = (r..m.cols).collect();
    snf.v.select_columns(&idx)
}

/// A `2 × 3` integer matrix sending ℤ³ onto ℤ² with kernel `ℤ·primitive(α)`.
///
/// Deterministic in `primitive(α)`: the vector is reduced to a unit in its
/// last coordinate by a fixed Euclidean schedule of row operations, and the
/// first two rows of the accumulated unimodular transform are returned.
pub fn projection_matrix(alpha: IntVec3) -> Result<IntMatrix, LatticeError> {
    let (p, _) = primitive(alpha)?;
    let mut v = p.0;
    let mut u = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
    loop {
        let nonzero: Vec<usize> = (0..3).filter(|&i| v[i] != 0).collect();
        // Pivot: smallest absolute value, ties broken toward the last slot.
        let piv = *nonzero.iter().rev().min_by_key(|&&i| v[i].abs()).expect("primitive is nonzero");
        if nonzero.len() == 1 {
            if piv != 2 {
                v.swap(piv, 2);
                u.swap(piv, 2);
            }
            if v[2] < 0 {
                v[2] = -v[2];
                u[2] = [-u[2][0], -u[2][1], -u[2][2]];
            }
            break;
        }
        for &i in &nonzero {
            if i != piv {
                let q = v[i].div_euclid(v[piv]);
                v[i] -= q * v[piv];
                let row = u[piv];
                for (x, y) in u[i].iter_mut().zip(row) {
                    *x -= q * y;
                }
            }
        }
    }
    debug_assert_eq!(v, [0, 0, 1]);
    Ok(IntMatrix::from_rows(&u[..2], 3))
}
