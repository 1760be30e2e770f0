//! Evaluation of end positions and the generality test.

use num_bigint::BigInt;

use super::TropicalType;
use crate::lattice::{projection_matrix, IntMatrix, IntVec3};

/// One end's slice of the evaluation space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalBlock {
    pub label: u32,
    pub derivative: IntVec3,
    pub offset: usize,
    /// 3 for zero ends, 2 otherwise.
    pub width: usize,
}

/// Coordinate layout of the evaluation space, ordered by end label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalLayout {
    pub blocks: Vec<EvalBlock>,
    pub dim: usize,
}

impl EvalLayout {
    pub fn for_ends(ends: &[IntVec3]) -> Self {
        let mut blocks = Vec::with_capacity(ends.len());
        let mut offset = 0;
        for (i, d) in ends.iter().enumerate() {
            let width = if d.is_zero() { 3 } else { 2 };
            blocks.push(EvalBlock { label: i as u32 + 1, derivative: *d, offset, width });
            offset += width;
        }
        Self { blocks, dim: offset }
    }

    pub fn block(&self, label: u32) -> Option<&EvalBlock> {
        self.blocks.iter().find(|b| b.label == label)
    }
}

/// The block of the evaluation map for one end: identity for a zero end,
/// otherwise the canonical projection along the end's direction.
pub fn end_projection(d: IntVec3) -> IntMatrix {
    if d.is_zero() {
        IntMatrix::identity(3)
    } else {
        projection_matrix(d).expect("nonzero")
    }
}

impl TropicalType {
    pub fn eval_layout(&self) -> EvalLayout {
        let ends: Vec<IntVec3> = self.ends_by_label().iter().map(|e| e.derivative).collect();
        EvalLayout::for_ends(&ends)
    }

    /// Linear map from `ℝ^{3n+k}` (vertex positions, lengths) to the
    /// evaluation space.
    pub fn evaluation_matrix(&self) -> (IntMatrix, EvalLayout) {
        let layout = self.eval_layout();
        let cols = 3 * self.n_vertices() + self.internal_edges().len();
        let mut m = IntMatrix::zeros(layout.dim, cols);
        for (e, b) in self.ends_by_label().into_iter().zip(&layout.blocks) {
            let p = end_projection(e.derivative);
            for r in 0..b.width {
                for c in 0..3 {
                    m.set(b.offset + r, 3 * e.vertex + c, p.get(r, c).clone());
                }
            }
        }
        (m, layout)
    }

    /// `ēv` restricted to the integral tangent lattice Λ_γ (columns).
    pub fn evaluation_on_lattice(&self) -> IntMatrix {
        let (e, _) = self.evaluation_matrix();
        e.mul(&self.deformation_space().integral_lattice)
    }

    /// dim P_γ equals the number of ends and `ēv` is injective on P_γ.
    pub fn is_general(&self) -> bool {
        let space = self.deformation_space();
        if space.dimension != self.n_ends() {
            return false;
        }
        let (e, _) = self.evaluation_matrix();
        e.mul(&space.integral_lattice).rank() == space.dimension
    }

    /// Image of a translation `w ∈ ℤ³` under the evaluation map.
    pub fn translation_image(&self, w: IntVec3) -> Vec<BigInt> {
        let cols = 3 * self.n_vertices() + self.internal_edges().len();
        let mut x = vec![BigInt::from(0); cols];
        for vtx in 0..self.n_vertices() {
            for c in 0..3 {
                x[3 * vtx + c] = BigInt::from(w.0[c]);
            }
        }
        let (e, _) = self.evaluation_matrix();
        let col = IntMatrix::new(cols, 1, x).expect("shape");
        let img = e.mul(&col);
        img.entries().to_vec()
    }
}
