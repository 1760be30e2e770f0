//! Constraint cycles in the evaluation space.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::EnumError;
use crate::exactnum::serde_big::{pair_to_rational, rational_to_pair};
use crate::exactnum::Rational;
use crate::lattice::{integral_kernel, IntMatrix, IntVec3};
use crate::tropcurve::{end_projection, EvalLayout};

/// One weighted affine piece `base + span(spanning)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub base: Vec<Rational>,
    pub spanning: IntMatrix,
    pub multiplicity: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalCycle {
    pub ambient_dim: usize,
    pub strata: Vec<Stratum>,
}

/// What one end is required to meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndConstraint {
    Free,
    /// The end passes through `point`.
    Point { point: [i64; 3] },
    /// The end lies in `{x : normal·x = value}`; `normal` must annihilate a
    /// nonzero end's direction.
    Plane { normal: [i64; 3], value: i64 },
    /// A zero end lies on the line `point + ℝ·direction`.
    Line { point: [i64; 3], direction: [i64; 3] },
}

impl EndConstraint {
    pub fn is_trivial(&self) -> bool {
        matches!(self, EndConstraint::Free)
    }
}

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn apply(p: &IntMatrix, x: &[Rational]) -> Vec<Rational> {
    (0..p.rows()).map(|r| (0..p.cols()).map(|c| Rational::from_integer(p.get(r, c).clone()) * &x[c]).sum()).collect()
}

impl TropicalCycle {
    /// A single stratum of multiplicity one formed by independent
    /// constraints on each end. `constraints[i]` applies to the end labeled
    /// `i + 1`.
    pub fn from_end_constraints(ends: &[IntVec3], constraints: &[EndConstraint]) -> Result<Self, EnumError> {
        if ends.len() != constraints.len() {
            return Err(EnumError::BadConstraint(format!("{} ends but {} constraints", ends.len(), constraints.len())));
        }
        let layout = EvalLayout::for_ends(ends);
        let mut base = vec![Rational::zero(); layout.dim];
        let mut span_cols: Vec<Vec<BigInt>> = Vec::new();
        for (b, c) in layout.blocks.iter().zip(constraints) {
            let d = b.derivative;
            let proj = end_projection(d);
            let mut block_base = vec![Rational::zero(); b.width];
            let mut block_span: Vec<Vec<BigInt>> = Vec::new();
            match c {
                EndConstraint::Free => {
                    for i in 0..b.width {
                        let mut col = vec![BigInt::zero(); b.width];
                        col[i] = BigInt::one();
                        block_span.push(col);
                    }
                }
                EndConstraint::Point { point } => {
                    block_base = apply(&proj, &point.map(q));
                }
                EndConstraint::Plane { normal, value } => {
                    let phi = IntVec3(*normal);
                    if phi.is_zero() {
                        return Err(EnumError::BadConstraint("zero plane normal".into()));
                    }
                    if phi.dot(&d) != 0 {
                        return Err(EnumError::BadConstraint(format!("plane normal {phi} does not contain end direction {d}")));
                    }
                    let norm2 = phi.dot(&phi);
                    let x0: Vec<Rational> = phi.0.iter().map(|&a| Rational::new(BigInt::from(a * value), BigInt::from(norm2))).collect();
                    block_base = apply(&proj, &x0);
                    let ker = integral_kernel(&IntMatrix::from_rows(&[phi.0], 3));
                    // Image of the plane's lattice in the end's coordinates.
                    let img = proj.mul(&ker);
                    let sat = saturated_column_basis(&img);
                    block_span.extend((0..sat.cols()).map(|j| sat.column(j)));
                }
                EndConstraint::Line { point, direction } => {
                    if !d.is_zero() {
                        return Err(EnumError::BadConstraint("line constraints apply to zero ends only".into()));
                    }
                    let (p, _) = crate::lattice::primitive(IntVec3(*direction)).map_err(|_| EnumError::BadConstraint("zero line direction".into()))?;
                    block_base = point.map(q).to_vec();
                    block_span.push(p.0.iter().map(|&a| BigInt::from(a)).collect());
                }
            }
            for (i, x) in block_base.into_iter().enumerate() {
                base[b.offset + i] = x;
            }
            for col in block_span {
                let mut full = vec![BigInt::zero(); layout.dim];
                for (i, x) in col.into_iter().enumerate() {
                    full[b.offset + i] = x;
                }
                span_cols.push(full);
            }
        }
        let mut spanning = IntMatrix::zeros(layout.dim, span_cols.len());
        for (j, col) in span_cols.into_iter().enumerate() {
            for (i, x) in col.into_iter().enumerate() {
                spanning.set(i, j, x);
            }
        }
        Ok(Self { ambient_dim: layout.dim, strata: vec![Stratum { base, spanning, multiplicity: Rational::one() }] })
    }

    pub fn codimension(&self, stratum: usize) -> usize {
        self.ambient_dim - self.strata[stratum].spanning.cols()
    }

    /// Every stratum multiplicity multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut c = self.clone();
        for s in c.strata.iter_mut() {
            s.multiplicity = &s.multiplicity * factor;
        }
        c
    }

    /// `base + span` contains `y`.
    pub fn contains(&self, stratum: usize, y: &[Rational]) -> bool {
        let s = &self.strata[stratum];
        let diff: Vec<Rational> = y.iter().zip(&s.base).map(|(a, b)| a - b).collect();
        crate::lattice::solve(&s.spanning.to_qmatrix(), &diff).is_some()
    }
}

/// Columns spanning `(column space ⊗ ℚ) ∩ ℤ^rows`.
pub(crate) fn saturated_column_basis(m: &IntMatrix) -> IntMatrix {
    // The saturation is the kernel of the kernel of the transpose.
    let left = integral_kernel(&m.transpose());
    if left.cols() == 0 {
        return IntMatrix::identity(m.rows());
    }
    integral_kernel(&left.transpose())
}

#[derive(Serialize, Deserialize)]
struct StratumRepr {
    base: Vec<[String; 2]>,
    spanning: IntMatrix,
    multiplicity: [String; 2],
}

#[derive(Serialize, Deserialize)]
struct CycleRepr {
    ambient_dim: usize,
    strata: Vec<StratumRepr>,
}

impl Serialize for TropicalCycle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycleRepr {
            ambient_dim: self.ambient_dim,
            strata: self
                .strata
                .iter()
                .map(|st| StratumRepr {
                    base: st.base.iter().map(rational_to_pair).collect(),
                    spanning: st.spanning.clone(),
                    multiplicity: rational_to_pair(&st.multiplicity),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalCycle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CycleRepr::deserialize(d)?;
        let mut strata = Vec::new();
        for st in r.strata {
            if st.base.len() != r.ambient_dim || st.spanning.rows() != r.ambient_dim {
                return Err(D::Error::custom("stratum does not match ambient_dim"));
            }
            if st.spanning.rank() != st.spanning.cols() {
                return Err(D::Error::custom("spanning columns are dependent"));
            }
            strata.push(Stratum {
                base: st.base.iter().map(pair_to_rational).collect::<Result<_, _>>().map_err(D::Error::custom)?,
                spanning: st.spanning,
                multiplicity: pair_to_rational(&st.multiplicity).map_err(D::Error::custom)?,
            });
        }
        Ok(TropicalCycle { ambient_dim: r.ambient_dim, strata })
    }
}
