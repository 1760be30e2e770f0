//! Bounded enumeration of general tropical curve types and placement of
//! curves against constraint cycles.

mod cycle;
mod place;
mod trees;

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;
use crate::lattice::{find_point, primitive, Constraint, IntVec3, Relation};
use crate::tropcurve::{InternalEdge, TropicalType};

pub use cycle::{EndConstraint, Stratum, TropicalCycle};
pub use place::{genericity_check, perturb_cycle, place_on_stratum, solve_placement, Placement, PlacementOutcome, MAX_RESAMPLES};
pub use trees::trivalent_trees;

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum EnumError {
    #[error("ends do not sum to zero")]
    Unbalanced,
    #[error("too many ends ({0}) for the enumerator")]
    TooManyEnds(usize),
    #[error("type is not general")]
    NotGeneral,
    #[error("constraint dimension {cycle} does not complement deformation dimension {curve} in ambient {ambient}")]
    Codimension { curve: usize, cycle: usize, ambient: usize },
    #[error("constraint layout has dimension {got}, expected {expected}")]
    Layout { got: usize, expected: usize },
    #[error("constraint invalid: {0}")]
    BadConstraint(String),
    #[error("no generic constraint position found after {0} attempts")]
    Degenerate(usize),
}

/// Search bounds. Derivatives forced by balancing are never bounded;
/// `max_derivative_norm` limits the free flow carried by chords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumBounds {
    pub max_internal_edges: usize,
    pub max_genus: usize,
    pub max_derivative_norm: i64,
    /// Extra edges added between existing edges of a tree or bundle type.
    pub max_chords: usize,
    pub seed: u64,
}

impl Default for EnumBounds {
    fn default() -> Self {
        Self { max_internal_edges: 8, max_genus: 6, max_derivative_norm: 3, max_chords: 0, seed: 0 }
    }
}

impl EnumBounds {
    /// Each bound raised by one (for stability certification).
    pub fn widened(&self) -> Self {
        Self {
            max_internal_edges: self.max_internal_edges + 1,
            max_genus: self.max_genus + 1,
            max_derivative_norm: self.max_derivative_norm + 1,
            max_chords: self.max_chords,
            seed: self.seed,
        }
    }
}

/// Integer partitions of `n` in non-increasing order.
pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn go(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Replace internal edges by parallel bundles `μ_i·p` for every partition
/// `μ` of the edge's content, within the bounds. Includes `t` itself.
fn bundle_variants(t: &TropicalType, bounds: &EnumBounds) -> Vec<TropicalType> {
    let mut options: Vec<Vec<Vec<InternalEdge>>> = Vec::new();
    for e in t.internal_edges() {
        let (p, g) = primitive(e.derivative).expect("general types have nonzero internal edges");
        options.push(
            partitions(g)
                .into_iter()
                .map(|mu| mu.into_iter().map(|m| InternalEdge { tail: e.tail, head: e.head, derivative: p * m }).collect())
                .collect(),
        );
    }
    let base_genus = t.internal_edges().len() + 1 - t.n_vertices();
    let mut out = Vec::new();
    let mut pick = vec![0usize; options.len()];
    loop {
        let edges: Vec<InternalEdge> = pick.iter().zip(&options).flat_map(|(&i, o)| o[i].iter().cloned()).collect();
        let genus = base_genus + edges.len() - t.internal_edges().len();
        if edges.len() <= bounds.max_internal_edges && genus <= bounds.max_genus {
            out.push(TropicalType::new(t.n_vertices(), edges, t.external_edges().to_vec()).expect("bundles stay balanced"));
        }
        // Odometer step.
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// A point of P_γ with every internal length strictly positive, if any.
pub fn realizable(t: &TropicalType) -> Option<Vec<Rational>> {
    let a = t.system_matrix().to_qmatrix();
    let nvars = a.cols;
    let mut cons: Vec<Constraint> = a.rows.iter().map(|r| Constraint::new(r.clone(), Relation::Eq, Rational::zero())).collect();
    let base = 3 * t.n_vertices();
    for i in 0..t.internal_edges().len() {
        let mut c = vec![Rational::zero(); nvars];
        c[base + i] = Rational::from_integer(1.into());
        cons.push(Constraint::new(c, Relation::Gt, Rational::zero()));
    }
    match find_point(nvars, &cons) {
        crate::lattice::Feasibility::Feasible(x) => Some(x),
        crate::lattice::Feasibility::Infeasible => None,
    }
}

/// Add one chord: subdivide edges `e1` and `e2` (internal or external),
/// join the new vertices by an edge of derivative `c`, and route the flow
/// `c` back along the tree path so every vertex stays balanced.
fn add_chord(t: &TropicalType, e1: EdgeSel, e2: EdgeSel, c: IntVec3) -> Option<TropicalType> {
    let mut internal = t.internal_edges().to_vec();
    let mut external = t.external_edges().to_vec();
    let mut nv = t.n_vertices();
    // Subdivide: returns (new vertex, the old vertex on the far side from the
    // end, whether the new vertex sits on an end).
    let mut split = |sel: EdgeSel, internal: &mut Vec<InternalEdge>, external: &mut Vec<crate::tropcurve::ExternalEdge>| -> usize {
        let s = nv;
        nv += 1;
        match sel {
            EdgeSel::Internal(i) => {
                let e = internal[i].clone();
                internal[i] = InternalEdge { tail: e.tail, head: s, derivative: e.derivative };
                internal.push(InternalEdge { tail: s, head: e.head, derivative: e.derivative });
            }
            EdgeSel::External(i) => {
                let e = external[i].clone();
                internal.push(InternalEdge { tail: e.vertex, head: s, derivative: e.derivative });
                external[i].vertex = s;
            }
        }
        s
    };
    let s1 = split(e1, &mut internal, &mut external);
    let s2 = split(e2, &mut internal, &mut external);
    // Path s2 -> s1 through internal edges (excluding the chord).
    let path = path_between(nv, &internal, s2, s1)?;
    let mut around = vec![c];
    for (i, forward) in path {
        // Flow c travels from s1 over the chord to s2 and returns to s1.
        let d = internal[i].derivative;
        internal[i].derivative = if forward { d + c } else { d - c };
        around.push(if forward { internal[i].derivative } else { -internal[i].derivative });
    }
    // Positive lengths close the loop only if no coordinate is one-signed.
    for k in 0..3 {
        let pos = around.iter().any(|d| d.0[k] > 0);
        let neg = around.iter().any(|d| d.0[k] < 0);
        if pos != neg {
            return None;
        }
    }
    internal.push(InternalEdge { tail: s1, head: s2, derivative: c });
    TropicalType::new(nv, internal, external).ok()
}

#[derive(Clone, Copy, Debug)]
enum EdgeSel {
    Internal(usize),
    External(usize),
}

/// Edges on the breadth-first path `from -> to`, each with `true` when
/// traversed tail to head.
fn path_between(n: usize, edges: &[InternalEdge], from: usize, to: usize) -> Option<Vec<(usize, bool)>> {
    let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        if u == to {
            break;
        }
        for (i, e) in edges.iter().enumerate() {
            let (w, fwd) = if e.tail == u {
                (e.head, true)
            } else if e.head == u {
                (e.tail, false)
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, i, fwd));
                q.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut out = Vec::new();
    let mut x = to;
    while x != from {
        let (p, i, fwd) = prev[x]?;
        out.push((i, fwd));
        x = p;
    }
    out.reverse();
    Some(out)
}

fn chord_variants(t: &TropicalType, bounds: &EnumBounds) -> Vec<TropicalType> {
    let d = bounds.max_derivative_norm;
    let mut sels: Vec<EdgeSel> = (0..t.internal_edges().len()).map(EdgeSel::Internal).collect();
    sels.extend((0..t.n_ends()).map(EdgeSel::External));
    let mut out = Vec::new();
    for (i, &a) in sels.iter().enumerate() {
        for &b in &sels[i + 1..] {
            for x in -d..=d {
                for y in -d..=d {
                    for z in -d..=d {
                        let c = IntVec3::new(x, y, z);
                        if c.is_zero() {
                            continue;
                        }
                        if let Some(u) = add_chord(t, a, b, c) {
                            out.push(u);
                        }
                    }
                }
            }
        }
    }
    out
}

fn admissible(t: &TropicalType, bounds: &EnumBounds) -> bool {
    t.internal_edges().len() <= bounds.max_internal_edges
        && t.genus().is_ok_and(|g| g <= bounds.max_genus)
        && t.internal_edges().iter().all(|e| !e.derivative.is_zero())
        && (0..t.n_vertices()).all(|v| {
            let inc = t.incident(v);
            inc.len() >= 3 && {
                let ds: Vec<IntVec3> = inc.iter().map(|(_, d)| *d).filter(|d| !d.is_zero()).collect();
                ds.iter().any(|a| ds.iter().any(|b| crate::lattice::wedge_index(*a, *b) != 0)) || ds.len() < inc.len()
            }
        })
}

/// General connected types with ends `ends` (labels 1..=n in order), one per
/// isomorphism class, sorted canonically. Complete only within `bounds`.
pub fn enumerate_types(ends: &[IntVec3], bounds: &EnumBounds) -> Result<Vec<TropicalType>, EnumError> {
    if !ends.iter().copied().sum::<IntVec3>().is_zero() {
        return Err(EnumError::Unbalanced);
    }
    if ends.len() > 20 {
        return Err(EnumError::TooManyEnds(ends.len()));
    }
    let mut found: BTreeSet<TropicalType> = BTreeSet::new();
    let mut frontier: Vec<TropicalType> = Vec::new();
    for tree in trivalent_trees(ends) {
        if tree.internal_edges().len() > bounds.max_internal_edges {
            continue;
        }
        for b in bundle_variants(&tree, bounds) {
            if b.is_general() {
                let c = b.canonical_form();
                if found.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
    }
    let mut tried: BTreeSet<TropicalType> = BTreeSet::new();
    for _ in 0..bounds.max_chords {
        let mut next = Vec::new();
        for t in &frontier {
            for u in chord_variants(t, bounds) {
                if !admissible(&u, bounds) {
                    continue;
                }
                let c = u.canonical_form();
                if found.contains(&c) || !tried.insert(c.clone()) {
                    continue;
                }
                if !c.is_general() || realizable(&c).is_none() {
                    continue;
                }
                found.insert(c.clone());
                next.push(c);
            }
        }
        frontier = next;
    }
    Ok(found.into_iter().collect())
}

/// Possibly disconnected general types: the ends are split into blocks that
/// each balance, contain a nonzero end and at least three ends; each block
/// carries one connected type. Components are recombined with the original
/// labels.
pub fn enumerate_disconnected(ends: &[IntVec3], bounds: &EnumBounds) -> Result<Vec<TropicalType>, EnumError> {
    if !ends.iter().copied().sum::<IntVec3>().is_zero() {
        return Err(EnumError::Unbalanced);
    }
    let n = ends.len();
    let mut out = Vec::new();
    for blocks in set_partitions(n) {
        let ok = blocks.iter().all(|b| {
            b.len() >= 3 && b.iter().any(|&i| !ends[i].is_zero()) && b.iter().map(|&i| ends[i]).sum::<IntVec3>().is_zero()
        });
        if !ok {
            continue;
        }
        let mut per_block: Vec<Vec<TropicalType>> = Vec::new();
        for b in &blocks {
            let sub: Vec<IntVec3> = b.iter().map(|&i| ends[i]).collect();
            per_block.push(enumerate_types(&sub, bounds)?);
        }
        if per_block.iter().any(Vec::is_empty) {
            continue;
        }
        let mut pick = vec![0usize; blocks.len()];
        'combos: loop {
            let mut acc: Option<TropicalType> = None;
            let mut labels: Vec<u32> = Vec::new();
            for (k, b) in blocks.iter().enumerate() {
                let comp = &per_block[k][pick[k]];
                labels.extend(b.iter().map(|&i| i as u32 + 1));
                acc = Some(match acc {
                    None => comp.clone(),
                    Some(a) => a.disjoint_union(comp),
                });
            }
            let t = acc.expect("at least one block").relabel(|l| labels[l as usize - 1]).expect("labels form a permutation");
            if t.internal_edges().len() <= bounds.max_internal_edges {
                out.push(t.canonical_form());
            }
            let mut k = 0;
            loop {
                if k == pick.len() {
                    break 'combos;
                }
                pick[k] += 1;
                if pick[k] < per_block[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Set partitions of `0..n` (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            go(i + 1, n, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        go(i + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropcurve::build::{gamma_mu, v};

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn set_partition_counts() {
        let bell: Vec<usize> = (0..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, [1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn two_general_four_end_trees() {
        let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, 0), v(0, -1, 0)];
        let types = enumerate_types(&ends, &EnumBounds { max_genus: 0, ..EnumBounds::default() }).unwrap();
        assert_eq!(types.len(), 2);
        let mut internal: Vec<IntVec3> = types.iter().map(|t| t.internal_edges()[0].derivative).collect();
        for d in internal.iter_mut() {
            if d.0 < [0, 0, 0] {
                *d = -*d;
            }
        }
        internal.sort();
        assert_eq!(internal, [v(1, -1, 0), v(1, 1, 0)]);
    }

    #[test]
    fn three_ends_give_the_vertex() {
        let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, -1, 0)];
        let types = enumerate_types(&ends, &EnumBounds::default()).unwrap();
        assert_eq!(types, vec![TropicalType::star(&ends).canonical_form()]);
    }

    #[test]
    fn partition_family_contains_every_gamma_mu() {
        for n in 1..=6 {
            let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, n), v(0, -1, -n)];
            let types = enumerate_types(&ends, &EnumBounds::default()).unwrap();
            assert_eq!(types.len(), 2 + partitions(n).len(), "n = {n}");
            for mu in partitions(n) {
                let g = gamma_mu(&mu).canonical_form();
                assert!(types.contains(&g), "missing γ_{mu:?}");
            }
        }
    }

    #[test]
    fn genus_bound_limits_bundles() {
        let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, 4), v(0, -1, -4)];
        let types = enumerate_types(&ends, &EnumBounds { max_genus: 1, ..EnumBounds::default() }).unwrap();
        // (4), (3,1), (2,2) plus the two other trees.
        assert_eq!(types.len(), 5);
    }

    #[test]
    fn unbalanced_is_an_error() {
        assert_eq!(enumerate_types(&[v(1, 0, 0), v(0, 1, 0)], &EnumBounds::default()), Err(EnumError::Unbalanced));
    }

    #[test]
    fn chords_are_general_and_realizable() {
        // Planar ends force planar loops, which are never general.
        let planar = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, 0), v(0, -1, 0)];
        let bounds = EnumBounds { max_chords: 1, max_derivative_norm: 1, ..EnumBounds::default() };
        assert_eq!(enumerate_types(&planar, &bounds).unwrap().len(), 2);
        // A loop through four spatial ends needs room: −d must lie inside
        // the simplex spanned by partial sums of the ends.
        let ends = [v(4, 0, 0), v(0, 4, 0), v(0, 0, 4), v(-4, -4, -4)];
        let bounds = EnumBounds { max_chords: 1, max_derivative_norm: 3, ..EnumBounds::default() };
        let types = enumerate_types(&ends, &bounds).unwrap();
        for t in &types {
            assert!(t.is_general());
            assert!(realizable(t).is_some());
            assert_eq!(t, &t.canonical_form());
        }
        assert!(types.iter().any(|t| t.genus() == Ok(1)));
    }

    #[test]
    fn disconnected_splits_balanced_blocks() {
        // Two lines through points, as in a degree-two class.
        let ends = [v(1, 0, 0), v(-1, 0, 0), v(0, 0, 0), v(0, 1, 0), v(0, -1, 0), v(0, 0, 0)];
        let bounds = EnumBounds { max_genus: 0, ..EnumBounds::default() };
        let types = enumerate_disconnected(&ends, &bounds).unwrap();
        assert!(types.iter().any(|t| !t.is_connected()));
        for t in &types {
            assert_eq!(t.n_ends(), 6);
            assert!(t.is_general());
        }
    }
}
