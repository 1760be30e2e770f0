//! The linear system of edge equations and the multiplicity m_γ.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{CurveError, TropicalType};
use crate::exactnum::Rational;
use crate::lattice::{integral_kernel, lattice_index, nullspace, IntMatrix, LatticeIndex};

/// Solution space of the edge equations with its integral structure.
#[derive(Clone, Debug)]
pub struct DeformationSpace {
    pub matrix_a: IntMatrix,
    pub rational_basis: Vec<Vec<Rational>>,
    pub integral_lattice: IntMatrix,
    pub dimension: usize,
}

/// A type with explicit vertex positions and edge lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacedCurve {
    pub curve: TropicalType,
    pub positions: Vec<[Rational; 3]>,
    pub lengths: Vec<Rational>,
}

impl PlacedCurve {
    /// Read positions and lengths off a point of `ℝ^{3n} × ℝ^k`.
    pub fn from_coordinates(curve: &TropicalType, p: &[Rational]) -> Self {
        let n = curve.n_vertices();
        let positions = (0..n).map(|v| std::array::from_fn(|c| p[3 * v + c].clone())).collect();
        let lengths = p[3 * n..].to_vec();
        Self { curve: curve.clone(), positions, lengths }
    }

    /// Edge equations hold exactly and all lengths are positive.
    pub fn is_valid(&self) -> bool {
        self.lengths.iter().all(Signed::is_positive)
            && self.curve.internal_edges().iter().zip(&self.lengths).all(|(e, l)| {
                (0..3).all(|c| {
                    &self.positions[e.head][c] - &self.positions[e.tail][c]
                        == l * Rational::from_integer(BigInt::from(e.derivative.0[c]))
                })
            })
    }
}

impl TropicalType {
    /// Columns `[x_0 (3), …, x_{n-1} (3), l_0, …, l_{k-1}]`; rows are the three
    /// coordinates of `α_e·l_e − x_head + x_tail = 0` for each internal edge.
    pub fn system_matrix(&self) -> IntMatrix {
        let n = self.n_vertices();
        let k = self.internal_edges().len();
        let mut a = IntMatrix::zeros(3 * k, 3 * n + k);
        for (i, e) in self.internal_edges().iter().enumerate() {
            for c in 0..3 {
                let r = 3 * i + c;
                a.set(r, 3 * n + i, BigInt::from(e.derivative.0[c]));
                a.set(r, 3 * e.head + c, BigInt::from(-1));
                a.set(r, 3 * e.tail + c, BigInt::from(1));
            }
        }
        a
    }

    pub fn deformation_space(&self) -> DeformationSpace {
        let a = self.system_matrix();
        let rational_basis = nullspace(&a.to_qmatrix());
        let integral_lattice = integral_kernel(&a);
        debug_assert_eq!(rational_basis.len(), integral_lattice.cols());
        DeformationSpace { dimension: rational_basis.len(), matrix_a: a, rational_basis, integral_lattice }
    }

    /// The edge equations are linearly independent.
    pub fn is_transverse(&self) -> bool {
        self.system_matrix().rank() == 3 * self.internal_edges().len()
    }

    /// `|ℤ^{3k} / A(ℤ^{3n+k})|` for transverse types.
    pub fn m_gamma(&self) -> Result<BigInt, CurveError> {
        match lattice_index(&self.system_matrix()) {
            LatticeIndex::Finite(m) => Ok(m),
            LatticeIndex::Infinite => Err(CurveError::NotTransverse),
        }
    }

    /// Loop relations `Σ ±α_e l_e = 0`, one 3-row block per non-tree edge of
    /// a breadth-first spanning forest. Columns are the edge lengths.
    pub fn loop_matrix(&self) -> IntMatrix {
        let n = self.n_vertices();
        let edges = self.internal_edges();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.tail].push((e.head, i));
            adj[e.head].push((e.tail, i));
        }
        // parent[v] = (parent vertex, edge index)
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut depth = vec![0usize; n];
        let mut tree = vec![false; edges.len()];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(u) = q.pop_front() {
                for &(w, i) in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some((u, i));
                        depth[w] = depth[u] + 1;
                        tree[i] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let k = edges.len();
        let chords: Vec<usize> = (0..k).filter(|&i| !tree[i]).collect();
        let mut m = IntMatrix::zeros(3 * chords.len(), k);
        for (row, &c) in chords.iter().enumerate() {
            // Walk tail -> head along the chord, then head back to tail in the tree.
            let mut coef = vec![0i64; k];
            coef[c] += 1;
            let e = &edges[c];
            let (mut a, mut b) = (e.head, e.tail);
            // Path from a up to the common ancestor, then down to b.
            let mut down = Vec::new();
            while a != b {
                if depth[a] >= depth[b] {
                    let (p, i) = parent[a].expect("same component");
                    // traversing a -> p
                    coef[i] += if edges[i].tail == a { 1 } else { -1 };
                    a = p;
                } else {
                    let (p, i) = parent[b].expect("same component");
                    down.push((p, b, i));
                    b = p;
                }
            }
            for (from, _to, i) in down.into_iter().rev() {
                coef[i] += if edges[i].tail == from { 1 } else { -1 };
            }
            for (i, &s) in coef.iter().enumerate() {
                if s != 0 {
                    for comp in 0..3 {
                        let x = m.get(3 * row + comp, i) + BigInt::from(s * edges[i].derivative.0[comp]);
                        m.set(3 * row + comp, i, x);
                    }
                }
            }
        }
        m
    }

    /// m_γ through the loop relations only.
    pub fn m_gamma_loops(&self) -> Result<BigInt, CurveError> {
        if !self.is_transverse() {
            return Err(CurveError::NotTransverse);
        }
        match lattice_index(&self.loop_matrix()) {
            LatticeIndex::Finite(m) => Ok(m),
            LatticeIndex::Infinite => Err(CurveError::NotTransverse),
        }
    }

    /// Edge lengths of a point in `ℝ^{3n+k}` (trailing block).
    pub fn lengths_of<'a>(&self, p: &'a [Rational]) -> &'a [Rational] {
        &p[3 * self.n_vertices()..]
    }

    /// True when every edge equation holds at `p`.
    pub fn satisfies_equations(&self, p: &[Rational]) -> bool {
        let q = self.system_matrix().to_qmatrix();
        q.mul_vec(p).iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::super::build::*;
    use super::*;

    fn four_end() -> TropicalType {
        TropicalType::new(
            2,
            vec![edge(0, 1, v(1, 1, 0))],
            vec![end(0, v(-1, 0, 0), 1), end(0, v(0, -1, 0), 2), end(1, v(1, 0, 0), 3), end(1, v(0, 1, 0), 4)],
        )
        .unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(TropicalType::star(&[v(1, 0, 0), v(0, 1, 0), v(-1, -1, 0)]).deformation_space().dimension, 3);
        assert_eq!(four_end().deformation_space().dimension, 4);
        assert_eq!(gamma_mu(&[1, 1]).deformation_space().dimension, 4);
    }

    #[test]
    fn transversality() {
        assert!(four_end().is_transverse());
        assert!(!gamma_mu(&[1, 1]).is_transverse());
        assert!(gamma_mu(&[2]).is_transverse());
        assert!(TropicalType::star(&[v(1, 0, 0), v(0, 1, 0), v(-1, -1, 0)]).is_transverse());
        assert_eq!(gamma_mu(&[1, 1]).m_gamma(), Err(CurveError::NotTransverse));
    }

    #[test]
    fn genus_zero_multiplicity_is_one() {
        assert_eq!(four_end().m_gamma().unwrap(), BigInt::from(1));
        assert_eq!(four_end().m_gamma_loops().unwrap(), BigInt::from(1));
        assert_eq!(four_end().loop_matrix().rows(), 0);
    }

    /// Square loop with derivatives (1,0,0), (0,1,0), (0,0,d), (-1,-1,-d):
    /// the loop relation matrix has SNF diag(1,1,d).
    pub(crate) fn square_loop(d: i64) -> TropicalType {
        let dirs = [v(1, 0, 0), v(0, 1, 0), v(0, 0, d), v(-1, -1, -d)];
        let internal: Vec<_> = (0..4).map(|i| edge(i, (i + 1) % 4, dirs[i])).collect();
        let ext = (0..4usize)
            .map(|i| end(i, dirs[(i + 3) % 4] - dirs[i], i as u32 + 1))
            .collect();
        TropicalType::new(4, internal, ext).unwrap()
    }

    #[test]
    fn genus_one_multiplicity_agrees() {
        for d in 1..=4 {
            let t = square_loop(d);
            assert_eq!(t.genus(), Ok(1));
            assert!(t.is_transverse());
            assert_eq!(t.m_gamma().unwrap(), BigInt::from(d));
            assert_eq!(t.m_gamma_loops().unwrap(), BigInt::from(d));
        }
    }

    #[test]
    fn placed_curve_check() {
        let t = four_end();
        let p: Vec<Rational> = [0, 0, 0, 2, 2, 0, 2].iter().map(|&x| Rational::from_integer(x.into())).collect();
        let c = PlacedCurve::from_coordinates(&t, &p);
        assert!(c.is_valid());
        assert!(t.satisfies_equations(&p));
    }
}
