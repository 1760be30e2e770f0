//! δ-deformations: replacing every vertex of a non-transverse type by a
//! general curve so that the shifted edge equations have a solution.

use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::WeightError;
use crate::enumerate::{enumerate_types, EnumBounds};
use crate::exactnum::Rational;
use crate::lattice::{find_point, integral_kernel, lattice_index, Constraint, Feasibility, IntMatrix, IntVec3, LatticeIndex, Relation};
use crate::tropcurve::{EdgeRef, Side, TropicalType};

/// One shift vector per internal edge of the base type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaAssignment(pub Vec<[Rational; 3]>);

const DELTA_PRIMES: [i64; 12] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157];

impl DeltaAssignment {
    pub fn zero(edges: usize) -> Self {
        Self(vec![std::array::from_fn(|_| Rational::zero()); edges])
    }

    pub fn from_integers(vs: &[[i64; 3]]) -> Self {
        Self(vs.iter().map(|v| v.map(|x| Rational::from_integer(x.into()))).collect())
    }

    /// Integral vectors in `[−B, B]³` with `B = 8(attempt + 1)`, edge `e`
    /// divided by the `e`-th prime above 100.
    pub fn sample(edges: usize, seed: u64, attempt: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (attempt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
        let b = 8 * (attempt as i64 + 1);
        Self(
            (0..edges)
                .map(|e| {
                    let p = DELTA_PRIMES[e % DELTA_PRIMES.len()] + 2 * (e / DELTA_PRIMES.len()) as i64;
                    std::array::from_fn(|_| Rational::new(rng.gen_range(-b..=b).into(), p.into()))
                })
                .collect(),
        )
    }
}

/// A solvable choice of replacement curves, one per base vertex. The ends
/// of `replacements[v]` are labeled in the order of `base.incident(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaDeformation {
    pub base: TropicalType,
    pub replacements: Vec<TropicalType>,
    /// Signed edge lengths `l′_e` of one solution.
    pub lengths: Vec<Rational>,
    pub matrix: IntMatrix,
    pub m: BigInt,
}

/// General curves with prescribed labeled ends, memoized by the ends.
#[derive(Default)]
pub(crate) struct CandidateCache {
    map: HashMap<Vec<IntVec3>, Rc<Vec<TropicalType>>>,
}

impl CandidateCache {
    fn get(&mut self, ends: &[IntVec3], bounds: &EnumBounds) -> Result<Rc<Vec<TropicalType>>, WeightError> {
        if let Some(c) = self.map.get(ends) {
            return Ok(c.clone());
        }
        let b = EnumBounds { max_chords: 0, ..bounds.clone() };
        let c = Rc::new(enumerate_types(ends, &b)?);
        self.map.insert(ends.to_vec(), c.clone());
        Ok(c)
    }
}

/// Per-candidate data reused across combinations.
struct Piece {
    curve: TropicalType,
    /// `attach[j]`: vertex of `curve` carrying end label `j + 1`.
    attach: Vec<usize>,
    system: IntMatrix,
    lattice: IntMatrix,
}

impl Piece {
    fn new(curve: &TropicalType) -> Self {
        let attach = curve.ends_by_label().iter().map(|e| e.vertex).collect();
        let space = curve.deformation_space();
        Piece { curve: curve.clone(), attach, system: space.matrix_a, lattice: space.integral_lattice }
    }

    fn n_coords(&self) -> usize {
        self.system.cols()
    }

    fn n_vertices(&self) -> usize {
        self.curve.n_vertices()
    }

    fn n_lengths(&self) -> usize {
        self.curve.internal_edges().len()
    }
}

fn rat_i(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Edge equations and positivity of a piece placed at column `offset` of a
/// system with `n` variables.
fn piece_constraints(p: &Piece, offset: usize, n: usize, out: &mut Vec<Constraint>) {
    for r in 0..p.system.rows() {
        let mut c = vec![Rational::zero(); n];
        for j in 0..p.system.cols() {
            c[offset + j] = rat_i(p.system.get(r, j));
        }
        out.push(Constraint::new(c, Relation::Eq, Rational::zero()));
    }
    for i in 0..p.n_lengths() {
        let mut c = vec![Rational::zero(); n];
        c[offset + 3 * p.n_vertices() + i] = Rational::one();
        out.push(Constraint::new(c, Relation::Gt, Rational::zero()));
    }
}

enum Check {
    Solvable(Vec<Rational>),
    Insolvable,
    NonGeneric,
}

fn strict_then_relaxed(n: usize, cons: &[Constraint]) -> Check {
    match find_point(n, cons) {
        Feasibility::Feasible(x) => Check::Solvable(x),
        Feasibility::Infeasible => {
            let relaxed: Vec<Constraint> = cons.iter().map(Constraint::relaxed).collect();
            if find_point(n, &relaxed).is_feasible() {
                Check::NonGeneric
            } else {
                Check::Insolvable
            }
        }
    }
}

/// All δ-deformations of `t` for the shifts `delta`.
pub fn delta_deformations(t: &TropicalType, delta: &DeltaAssignment, bounds: &EnumBounds) -> Result<Vec<DeltaDeformation>, WeightError> {
    delta_deformations_cached(t, delta, bounds, &mut CandidateCache::default())
}

pub(crate) fn delta_deformations_cached(
    t: &TropicalType,
    delta: &DeltaAssignment,
    bounds: &EnumBounds,
    cache: &mut CandidateCache,
) -> Result<Vec<DeltaDeformation>, WeightError> {
    if !t.is_general() {
        return Err(WeightError::NotGeneral(t.to_string()));
    }
    let k = t.internal_edges().len();
    if delta.0.len() != k {
        return Err(WeightError::DeltaLength { edges: k, got: delta.0.len() });
    }
    let nv = t.n_vertices();
    let incident: Vec<Vec<(EdgeRef, IntVec3)>> = (0..nv).map(|v| t.incident(v)).collect();
    // Linear forms constant on every curve with the ends of vertex w.
    let annihilators: Vec<Vec<IntVec3>> = incident
        .iter()
        .map(|inc| {
            let rows: Vec<[i64; 3]> = inc.iter().map(|(_, d)| d.0).collect();
            let ker = integral_kernel(&IntMatrix::from_rows(&rows, 3));
            (0..ker.cols())
                .map(|j| {
                    let c = ker.column(j);
                    IntVec3::new(
                        i64::try_from(&c[0]).expect("small"),
                        i64::try_from(&c[1]).expect("small"),
                        i64::try_from(&c[2]).expect("small"),
                    )
                })
                .collect()
        })
        .collect();
    // Where edge `i` attaches: (incident index at tail, incident index at head).
    let mut slot = vec![(usize::MAX, usize::MAX); k];
    for inc in &incident {
        for (j, (r, _)) in inc.iter().enumerate() {
            match r {
                EdgeRef::Internal(i, Side::Tail) => slot[*i].0 = j,
                EdgeRef::Internal(i, Side::Head) => slot[*i].1 = j,
                EdgeRef::External(_) => {}
            }
        }
    }

    let mut pieces: Vec<Vec<Piece>> = Vec::with_capacity(nv);
    for v in 0..nv {
        let ends: Vec<IntVec3> = incident[v].iter().map(|(_, d)| *d).collect();
        let candidates = cache.get(&ends, bounds)?;
        let mut kept = Vec::new();
        for c in candidates.iter() {
            let p = Piece::new(c);
            match prune_check(t, v, &p, &incident, &annihilators, delta) {
                Check::Solvable(_) => kept.push(p),
                Check::Insolvable => {}
                Check::NonGeneric => return Err(WeightError::NonGenericDelta),
            }
        }
        if kept.is_empty() {
            return Ok(Vec::new());
        }
        pieces.push(kept);
    }

    let mut out = Vec::new();
    let mut pick = vec![0usize; nv];
    loop {
        let chosen: Vec<&Piece> = pick.iter().enumerate().map(|(v, &i)| &pieces[v][i]).collect();
        if let Some(d) = full_check(t, &chosen, &slot, delta)? {
            out.push(d);
        }
        let mut v = 0;
        loop {
            if v == nv {
                return Ok(out);
            }
            pick[v] += 1;
            if pick[v] < pieces[v].len() {
                break;
            }
            pick[v] = 0;
            v += 1;
        }
    }
}

/// Necessary condition on one vertex's replacement: each neighbour `w`
/// confines its replacement to a translate of the span of its ends, so the
/// forms annihilating that span take one common value on every attachment
/// point, shifted by the edge's δ.
fn prune_check(
    t: &TropicalType,
    v: usize,
    p: &Piece,
    incident: &[Vec<(EdgeRef, IntVec3)>],
    annihilators: &[Vec<IntVec3>],
    delta: &DeltaAssignment,
) -> Check {
    let mut extra: Vec<(usize, usize)> = Vec::new();
    for (r, _) in &incident[v] {
        if let EdgeRef::Internal(i, side) = r {
            let e = &t.internal_edges()[*i];
            let w = if *side == Side::Tail { e.head } else { e.tail };
            for j in 0..annihilators[w].len() {
                if !extra.contains(&(w, j)) {
                    extra.push((w, j));
                }
            }
        }
    }
    let n = p.n_coords() + extra.len();
    let mut cons = Vec::new();
    piece_constraints(p, 0, n, &mut cons);
    for (slot, (r, _)) in incident[v].iter().enumerate() {
        if let EdgeRef::Internal(i, side) = r {
            let e = &t.internal_edges()[*i];
            let w = if *side == Side::Tail { e.head } else { e.tail };
            let x = p.attach[slot];
            for (j, phi) in annihilators[w].iter().enumerate() {
                let mut c = vec![Rational::zero(); n];
                for a in 0..3 {
                    c[3 * x + a] = q(phi.0[a]);
                }
                let col = p.n_coords() + extra.iter().position(|&z| z == (w, j)).expect("registered");
                c[col] = -Rational::one();
                let shift: Rational = (0..3).map(|a| q(phi.0[a]) * &delta.0[*i][a]).sum();
                let rhs = if *side == Side::Tail { shift } else { -shift };
                cons.push(Constraint::new(c, Relation::Eq, rhs));
            }
        }
    }
    strict_then_relaxed(n, &cons)
}

/// Solve the shifted edge equations jointly; on success build `A_{γ′}` on
/// `ℤ^k × Π Λ_{γ′_v}` and its index.
fn full_check(
    t: &TropicalType,
    chosen: &[&Piece],
    slot: &[(usize, usize)],
    delta: &DeltaAssignment,
) -> Result<Option<DeltaDeformation>, WeightError> {
    let k = t.internal_edges().len();
    let mut offsets = Vec::with_capacity(chosen.len());
    let mut n = k;
    for p in chosen {
        offsets.push(n);
        n += p.n_coords();
    }
    let mut cons = Vec::new();
    for (p, &off) in chosen.iter().zip(&offsets) {
        piece_constraints(p, off, n, &mut cons);
    }
    for (i, e) in t.internal_edges().iter().enumerate() {
        let xt = chosen[e.tail].attach[slot[i].0];
        let xh = chosen[e.head].attach[slot[i].1];
        for a in 0..3 {
            let mut c = vec![Rational::zero(); n];
            c[i] = q(e.derivative.0[a]);
            c[offsets[e.head] + 3 * xh + a] -= Rational::one();
            c[offsets[e.tail] + 3 * xt + a] += Rational::one();
            cons.push(Constraint::new(c, Relation::Eq, delta.0[i][a].clone()));
        }
    }
    let witness = match strict_then_relaxed(n, &cons) {
        Check::Solvable(x) => x,
        Check::Insolvable => return Ok(None),
        Check::NonGeneric => return Err(WeightError::NonGenericDelta),
    };
    let dims: Vec<usize> = chosen.iter().map(|p| p.lattice.cols()).collect();
    let cols = k + dims.iter().sum::<usize>();
    let mut a = IntMatrix::zeros(3 * k, cols);
    let mut lat_off = Vec::with_capacity(chosen.len());
    let mut o = k;
    for d in &dims {
        lat_off.push(o);
        o += d;
    }
    for (i, e) in t.internal_edges().iter().enumerate() {
        for r in 0..3 {
            a.set(3 * i + r, i, BigInt::from(e.derivative.0[r]));
        }
        for (v, x, sign) in [(e.head, chosen[e.head].attach[slot[i].1], -1), (e.tail, chosen[e.tail].attach[slot[i].0], 1)] {
            let lat = &chosen[v].lattice;
            for r in 0..3 {
                for j in 0..lat.cols() {
                    let cur = a.get(3 * i + r, lat_off[v] + j).clone();
                    a.set(3 * i + r, lat_off[v] + j, cur + lat.get(3 * x + r, j) * sign);
                }
            }
        }
    }
    let m = match lattice_index(&a) {
        LatticeIndex::Finite(m) => m,
        LatticeIndex::Infinite => return Err(WeightError::NonGenericDelta),
    };
    Ok(Some(DeltaDeformation {
        base: t.clone(),
        replacements: chosen.iter().map(|p| p.curve.clone()).collect(),
        lengths: witness[..k].to_vec(),
        matrix: a,
        m,
    }))
}
