//! Weighted counts of tropical curves meeting constraint cycles, and the
//! invariants assembled from them.

mod fan;
pub mod identities;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::enumerate::{
    enumerate_disconnected, enumerate_types, perturb_cycle, place_on_stratum, EnumBounds, EnumError, PlacementOutcome, TropicalCycle,
    MAX_RESAMPLES,
};
use crate::exactnum::Rational;
use crate::lattice::{primitive, IntVec3};
use crate::tropcurve::TropicalType;
use crate::weights::{Evaluator, Mode, Weight, WeightConfig, WeightError};

pub use fan::{absolute_gw, check_convexity, check_relative_convexity, dt_reduced, dt_to_gw, relative_gw, Fan3, FanError, Insertion};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum CountError {
    #[error(transparent)]
    Enum(#[from] EnumError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("cycle ambient dimension {got} does not match the evaluation space ({expected})")]
    Layout { got: usize, expected: usize },
    #[error("constraint codimension {codim} differs from the {ends} ends of a general curve")]
    Dimension { codim: usize, ends: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectedness {
    Connected,
    /// Possibly disconnected, every component carrying at least three ends
    /// and a nonzero end.
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRequest {
    pub ends: Vec<IntVec3>,
    pub cycle: TropicalCycle,
    pub connectedness: Connectedness,
    pub mode: Mode,
    pub bounds: EnumBounds,
}

/// One curve meeting one stratum.
#[derive(Clone, Debug, Serialize)]
pub struct Contribution {
    pub curve: TropicalType,
    pub stratum: usize,
    pub index: String,
    pub automorphisms: u64,
    pub weight: Weight,
    /// `m_S · index · F_γ / |Aut γ|`.
    pub term: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub value: Weight,
    pub mode: Mode,
    pub order: i64,
    pub seed: u64,
    pub bounds: EnumBounds,
    /// Number of enumerated types within the bounds.
    pub types: usize,
    /// Constraint positions tried before a generic one was found.
    pub attempts: usize,
    pub contributions: Vec<Contribution>,
    /// Whether widening every bound by one leaves the value unchanged;
    /// computed only on request.
    pub certified: Option<bool>,
}

/// `W = Σ_S m_S Σ_γ |ℤ^N/(ēv(Λ_γ) ⊕ Λ_S)| F_γ / |Aut γ|`, with every type
/// placed against the same seeded generic perturbation of the cycle.
pub fn weighted_count(req: &CountRequest, order: i64, seed: u64) -> Result<CountReport, CountError> {
    let types = match req.connectedness {
        Connectedness::Connected => enumerate_types(&req.ends, &req.bounds)?,
        Connectedness::Disconnected => enumerate_disconnected(&req.ends, &req.bounds)?,
    };
    let expected = crate::tropcurve::EvalLayout::for_ends(&req.ends).dim;
    if req.cycle.ambient_dim != expected {
        return Err(CountError::Layout { got: req.cycle.ambient_dim, expected });
    }
    for s in 0..req.cycle.strata.len() {
        let codim = req.cycle.codimension(s);
        if codim != req.ends.len() {
            return Err(CountError::Dimension { codim, ends: req.ends.len() });
        }
    }
    let mut hits = None;
    'attempts: for attempt in 0..MAX_RESAMPLES {
        let cycle = perturb_cycle(&req.cycle, seed, attempt);
        let mut found = Vec::new();
        for t in &types {
            for s in 0..cycle.strata.len() {
                match place_on_stratum(t, &cycle, s)? {
                    PlacementOutcome::Hit(p) => found.push((t, p)),
                    PlacementOutcome::Miss => {}
                    PlacementOutcome::Degenerate => continue 'attempts,
                }
            }
        }
        hits = Some((found, attempt + 1));
        break;
    }
    let (found, attempts) = hits.ok_or(EnumError::Degenerate(MAX_RESAMPLES))?;
    let mut eval = Evaluator::new(WeightConfig { order, seed, bounds: req.bounds.clone(), depth_cap: 8 });
    let mut value = Weight::zero(req.mode, order);
    let mut contributions = Vec::new();
    for (t, p) in found {
        let weight = eval.weight(t, req.mode)?;
        let aut = t.automorphism_count();
        let factor = &req.cycle.strata[p.stratum].multiplicity * Rational::from_integer(p.index.clone())
            / Rational::from_integer(BigInt::from(aut));
        let term = weight.scale(&factor).truncated(order);
        value = value.add(&term);
        contributions.push(Contribution { curve: t.clone(), stratum: p.stratum, index: p.index.to_string(), automorphisms: aut, weight, term });
    }
    Ok(CountReport {
        value: value.truncated(order),
        mode: req.mode,
        order,
        seed,
        bounds: req.bounds.clone(),
        types: types.len(),
        attempts,
        contributions,
        certified: None,
    })
}

/// `weighted_count` plus the stability check under widened bounds.
pub fn certified_count(req: &CountRequest, order: i64, seed: u64) -> Result<CountReport, CountError> {
    let mut r = weighted_count(req, order, seed)?;
    let wide = CountRequest { bounds: req.bounds.widened(), ..req.clone() };
    let w = weighted_count(&wide, order, seed)?;
    r.certified = Some(w.value == r.value);
    Ok(r)
}

/// Multiply every stratum multiplicity by the product of `|α_e|` over the
/// nonzero ends that the stratum constrains.
pub fn scale_constraint(base: &TropicalCycle, ends: &[IntVec3]) -> TropicalCycle {
    let layout = crate::tropcurve::EvalLayout::for_ends(ends);
    let mut out = base.clone();
    for s in out.strata.iter_mut() {
        let mut factor = Rational::one();
        for b in &layout.blocks {
            if b.derivative.is_zero() {
                continue;
            }
            // Rows of the spanning matrix belonging to this end.
            let rows: Vec<Vec<i64>> = (0..b.width)
                .map(|r| {
                    (0..s.spanning.cols())
                        .map(|c| i64::try_from(s.spanning.get(b.offset + r, c)).expect("small spanning entries"))
                        .collect()
                })
                .collect();
            let block = crate::lattice::IntMatrix::from_rows(&rows, s.spanning.cols());
            if block.rank() < b.width {
                let (_, g) = primitive(b.derivative).expect("nonzero");
                factor *= Rational::from_integer(BigInt::from(g));
            }
        }
        s.multiplicity = &s.multiplicity * factor.abs();
    }
    out
}
