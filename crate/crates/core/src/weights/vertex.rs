//! Weights of single trivalent vertices and of transverse types.

use num_traits::Zero;

use super::{Mode, Weight, WeightError};
use crate::exactnum::{rat, series_sin_half, GaussRational, LaurentSeries, QLaurent, Rational};
use crate::lattice::{wedge_index, IntVec3};
use crate::tropcurve::TropicalType;

/// How a trivalent vertex is classified for weighting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    /// Three nonzero derivatives spanning a plane with wedge index `n`.
    Wedge(i64),
    /// Derivatives `α, 0, −α`.
    ZeroEnd,
}

pub fn classify_vertex(t: &TropicalType) -> Result<VertexKind, WeightError> {
    if t.n_vertices() != 1 || !t.internal_edges().is_empty() || t.n_ends() != 3 {
        return Err(WeightError::NotVertex(t.to_string()));
    }
    let ds: Vec<IntVec3> = t.external_edges().iter().map(|e| e.derivative).collect();
    let nonzero: Vec<IntVec3> = ds.iter().copied().filter(|d| !d.is_zero()).collect();
    match nonzero.len() {
        3 => match wedge_index(nonzero[0], nonzero[1]) {
            0 => Err(WeightError::NotGeneral(t.to_string())),
            n => Ok(VertexKind::Wedge(n)),
        },
        2 => Ok(VertexKind::ZeroEnd),
        _ => Err(WeightError::UnsupportedVertex(t.to_string())),
    }
}

/// `2 sin(nλ/2)/n` for a wedge-`n` vertex, `λ` for a vertex with one zero end.
pub fn vertex_weight_lambda(t: &TropicalType, order: i64) -> Result<LaurentSeries, WeightError> {
    Ok(match classify_vertex(t)? {
        VertexKind::Wedge(n) => series_sin_half(n, order)?,
        VertexKind::ZeroEnd => LaurentSeries::lambda(order),
    })
}

/// `(i^{−(n+1)} q^{n/2} + i^{n+1} q^{−n/2})/n`, or `1` with a zero end.
pub fn vertex_weight_q(t: &TropicalType) -> Result<QLaurent, WeightError> {
    Ok(match classify_vertex(t)? {
        VertexKind::Wedge(n) => bracket_q(n).scale_rational(&rat(1, n)),
        VertexKind::ZeroEnd => QLaurent::one(),
    })
}

/// `[n]` as a Laurent polynomial in `q^{1/2}`.
pub fn bracket_q(n: i64) -> QLaurent {
    QLaurent::from_terms([(n, GaussRational::i_pow(-(n + 1))), (-n, GaussRational::i_pow(n + 1))])
}

pub fn vertex_weight(t: &TropicalType, mode: Mode, order: i64) -> Result<Weight, WeightError> {
    Ok(match mode {
        Mode::Lambda => Weight::Lambda(vertex_weight_lambda(t, order)?),
        Mode::Q => Weight::Q(vertex_weight_q(t)?),
    })
}

/// `m_γ` times the product of the weights of all vertex stars.
pub fn f_transverse(t: &TropicalType, order: i64, mode: Mode) -> Result<Weight, WeightError> {
    if !t.is_transverse() {
        return Err(WeightError::NotTransverse(t.to_string()));
    }
    if !t.is_general() {
        return Err(WeightError::NotGeneral(t.to_string()));
    }
    let m = t.m_gamma()?;
    let mut w = Weight::one(mode, order);
    for v in 0..t.n_vertices() {
        let (star, _) = t.vertex_star(v)?;
        w = w.mul(&vertex_weight(&star, mode, order)?);
    }
    debug_assert!(!m.is_zero());
    Ok(w.scale(&Rational::from_integer(m)).truncated(order))
}
