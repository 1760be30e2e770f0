//! Solving for curves of a fixed type that meet a constraint cycle.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnumError, TropicalCycle};
use crate::exactnum::Rational;
use crate::lattice::{lattice_index_sum, solve, LatticeIndex};
use crate::tropcurve::{PlacedCurve, TropicalType};

/// Resampling cap for generic constraint positions.
pub const MAX_RESAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub curve: PlacedCurve,
    pub stratum: usize,
    /// `|ℤ^N / (ēv(Λ_γ) ⊕ Λ_S)|`.
    pub index: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlacementOutcome {
    Hit(Placement),
    Miss,
    /// The constraint meets the type non-transversely or on the boundary of
    /// its cone; the position must be perturbed.
    Degenerate,
}

/// Intersect the type's deformation space with one stratum.
pub fn place_on_stratum(t: &TropicalType, cycle: &TropicalCycle, stratum: usize) -> Result<PlacementOutcome, EnumError> {
    if !t.is_general() {
        return Err(EnumError::NotGeneral);
    }
    let space = t.deformation_space();
    let (e, layout) = t.evaluation_matrix();
    if layout.dim != cycle.ambient_dim {
        return Err(EnumError::Layout { got: cycle.ambient_dim, expected: layout.dim });
    }
    let s = &cycle.strata[stratum];
    if space.dimension + s.spanning.cols() != layout.dim {
        return Err(EnumError::Codimension { curve: space.dimension, cycle: s.spanning.cols(), ambient: layout.dim });
    }
    let ek = e.mul(&space.integral_lattice);
    let index = match lattice_index_sum(&ek, &s.spanning, layout.dim).expect("dimensions checked") {
        LatticeIndex::Finite(m) => Some(m),
        LatticeIndex::Infinite => None,
    };
    let system = ek.hstack(&s.spanning).expect("row counts agree").to_qmatrix();
    let sol = match solve(&system, &s.base) {
        None => return Ok(PlacementOutcome::Miss),
        Some(sol) => sol,
    };
    let index = match index {
        Some(m) => m,
        None => return Ok(PlacementOutcome::Degenerate),
    };
    debug_assert!(sol.homogeneous.is_empty());
    let tcoords = &sol.particular[..space.dimension];
    let k = &space.integral_lattice;
    let point: Vec<Rational> = (0..k.rows())
        .map(|r| (0..k.cols()).map(|c| Rational::from_integer(k.get(r, c).clone()) * &tcoords[c]).sum())
        .collect();
    let curve = PlacedCurve::from_coordinates(t, &point);
    if curve.lengths.iter().any(Signed::is_negative) {
        return Ok(PlacementOutcome::Miss);
    }
    if curve.lengths.iter().any(Zero::is_zero) {
        return Ok(PlacementOutcome::Degenerate);
    }
    Ok(PlacementOutcome::Hit(Placement { curve, stratum, index }))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The first `count` primes above `start`.
fn primes_above(start: u64, count: usize) -> Vec<u64> {
    (start..).filter(|&n| is_prime(n)).take(count).collect()
}

/// Shift every stratum base by small rational offsets `r/p` (`p` distinct
/// primes near 10⁶, `|r/p| < 10⁻³`), keyed by `(seed, attempt)`.
pub fn perturb_cycle(cycle: &TropicalCycle, seed: u64, attempt: usize) -> TropicalCycle {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt as u64));
    let total: usize = cycle.strata.iter().map(|s| s.base.len()).sum();
    let primes = primes_above(1_000_003 + 7919 * attempt as u64, total);
    let mut primes = primes.into_iter();
    let mut out = cycle.clone();
    for s in out.strata.iter_mut() {
        for x in s.base.iter_mut() {
            let p = primes.next().expect("one prime per coordinate");
            let r: i64 = rng.gen_range(-999..=999);
            *x = &*x + Rational::new(BigInt::from(r), BigInt::from(p));
        }
    }
    out
}

/// Every placement is a transverse point intersection with positive
/// lengths lying on its stratum.
pub fn genericity_check(t: &TropicalType, cycle: &TropicalCycle, placements: &[Placement]) -> bool {
    placements.iter().all(|p| {
        if !(p.curve.is_valid() && &p.curve.curve == t && !p.index.is_zero()) {
            return false;
        }
        let (e, _) = t.evaluation_matrix();
        let coords: Vec<Rational> =
            p.curve.positions.iter().flat_map(|x| x.iter().cloned()).chain(p.curve.lengths.iter().cloned()).collect();
        let y: Vec<Rational> = (0..e.rows())
            .map(|r| (0..e.cols()).map(|c| Rational::from_integer(e.get(r, c).clone()) * &coords[c]).sum())
            .collect();
        cycle.contains(p.stratum, &y)
    })
}

/// All placements of `t` on the strata of a seeded generic perturbation of
/// `cycle`, resampling while any stratum is hit degenerately.
pub fn solve_placement(t: &TropicalType, cycle: &TropicalCycle, seed: u64) -> Result<Vec<Placement>, EnumError> {
    'attempts: for attempt in 0..MAX_RESAMPLES {
        let c = perturb_cycle(cycle, seed, attempt);
        let mut hits = Vec::new();
        for s in 0..c.strata.len() {
            match place_on_stratum(t, &c, s)? {
                PlacementOutcome::Hit(p) => hits.push(p),
                PlacementOutcome::Miss => {}
                PlacementOutcome::Degenerate => continue 'attempts,
            }
        }
        debug_assert!(genericity_check(t, &c, &hits));
        return Ok(hits);
    }
    Err(EnumError::Degenerate(MAX_RESAMPLES))
}
