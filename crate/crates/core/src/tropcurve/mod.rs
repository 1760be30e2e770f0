//! Combinatorial types of tropical curves in ℝ³ and their affine geometry.

mod deform;
mod eval;
mod iso;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::IntVec3;

pub use deform::{DeformationSpace, PlacedCurve};
pub use eval::{end_projection, EvalBlock, EvalLayout};

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum CurveError {
    #[error("vertex {0} is not balanced")]
    Unbalanced(usize),
    #[error("edge refers to missing vertex {0}")]
    BadVertex(usize),
    #[error("external labels must be a permutation of 1..={0}")]
    BadLabels(usize),
    #[error("internal edge {0} has both ends at the same vertex")]
    SelfLoop(usize),
    #[error("curve is disconnected")]
    Disconnected,
    #[error("curve is not transverse")]
    NotTransverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InternalEdge {
    pub tail: usize,
    pub head: usize,
    pub derivative: IntVec3,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExternalEdge {
    pub vertex: usize,
    pub derivative: IntVec3,
    pub label: u32,
}

/// A combinatorial type: vertices `0..n`, oriented internal edges with
/// derivatives (`x_head = x_tail + l·α`), and labeled ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalType {
    n_vertices: usize,
    internal: Vec<InternalEdge>,
    external: Vec<ExternalEdge>,
}

impl TropicalType {
    pub fn new(n_vertices: usize, internal: Vec<InternalEdge>, external: Vec<ExternalEdge>) -> Result<Self, CurveError> {
        for (i, e) in internal.iter().enumerate() {
            for v in [e.tail, e.head] {
                if v >= n_vertices {
                    return Err(CurveError::BadVertex(v));
                }
            }
            if e.tail == e.head {
                return Err(CurveError::SelfLoop(i));
            }
        }
        for e in &external {
            if e.vertex >= n_vertices {
                return Err(CurveError::BadVertex(e.vertex));
            }
        }
        let labels: BTreeSet<u32> = external.iter().map(|e| e.label).collect();
        let n = external.len();
        if labels.len() != n || labels.iter().next().is_some_and(|&l| l != 1) || labels.iter().last().is_some_and(|&l| l as usize != n) {
            return Err(CurveError::BadLabels(n));
        }
        let t = Self { n_vertices, internal, external };
        for v in 0..n_vertices {
            if !t.outgoing_sum(v).is_zero() {
                return Err(CurveError::Unbalanced(v));
            }
        }
        Ok(t)
    }

    /// Single vertex with the given ends, labeled 1.. in order.
    pub fn star(ends: &[IntVec3]) -> Self {
        let external = ends
            .iter()
            .enumerate()
            .map(|(i, &d)| ExternalEdge { vertex: 0, derivative: d, label: i as u32 + 1 })
            .collect();
        Self::new(1, Vec::new(), external).expect("star must be balanced")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn internal_edges(&self) -> &[InternalEdge] {
        &self.internal
    }

    pub fn external_edges(&self) -> &[ExternalEdge] {
        &self.external
    }

    /// Ends sorted by label.
    pub fn ends_by_label(&self) -> Vec<&ExternalEdge> {
        let mut v: Vec<&ExternalEdge> = self.external.iter().collect();
        v.sort_by_key(|e| e.label);
        v
    }

    pub fn n_ends(&self) -> usize {
        self.external.len()
    }

    pub fn n_zero_ends(&self) -> usize {
        self.external.iter().filter(|e| e.derivative.is_zero()).count()
    }

    fn outgoing_sum(&self, v: usize) -> IntVec3 {
        self.incident(v).into_iter().map(|(_, d)| d).sum()
    }

    /// Derivatives of all edges at `v`, oriented away from `v`, each tagged
    /// with its identity.
    pub fn incident(&self, v: usize) -> Vec<(EdgeRef, IntVec3)> {
        let mut out = Vec::new();
        for (i, e) in self.internal.iter().enumerate() {
            if e.tail == v {
                out.push((EdgeRef::Internal(i, Side::Tail), e.derivative));
            }
            if e.head == v {
                out.push((EdgeRef::Internal(i, Side::Head), -e.derivative));
            }
        }
        for (i, e) in self.external.iter().enumerate() {
            if e.vertex == v {
                out.push((EdgeRef::External(i), e.derivative));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incident(v).len()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Vertex sets of connected components, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for e in &self.internal {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut index = vec![usize::MAX; self.n_vertices];
        for v in 0..self.n_vertices {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[index[r]].push(v);
        }
        comps
    }

    /// First Betti number of a connected type.
    pub fn genus(&self) -> Result<usize, CurveError> {
        if !self.is_connected() {
            return Err(CurveError::Disconnected);
        }
        Ok(self.internal.len() + 1 - self.n_vertices)
    }

    /// Single-vertex type of the edges leaving `v`, in `incident` order,
    /// labeled 1.. .
    pub fn vertex_star(&self, v: usize) -> Result<(TropicalType, Vec<EdgeRef>), CurveError> {
        if v >= self.n_vertices {
            return Err(CurveError::BadVertex(v));
        }
        let inc = self.incident(v);
        let ends: Vec<IntVec3> = inc.iter().map(|(_, d)| *d).collect();
        Ok((TropicalType::star(&ends), inc.into_iter().map(|(r, _)| r).collect()))
    }

    /// Apply an integral 3×3 matrix to every derivative.
    pub fn transform(&self, m: &[[i64; 3]; 3]) -> Self {
        let mut t = self.clone();
        for e in t.internal.iter_mut() {
            e.derivative = e.derivative.transform(m);
        }
        for e in t.external.iter_mut() {
            e.derivative = e.derivative.transform(m);
        }
        t
    }

    /// Reverse the orientation of internal edge `i`.
    pub fn flip_edge(&self, i: usize) -> Self {
        let mut t = self.clone();
        let e = &mut t.internal[i];
        std::mem::swap(&mut e.tail, &mut e.head);
        e.derivative = -e.derivative;
        t
    }

    /// Disjoint union; labels of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &TropicalType) -> TropicalType {
        let off = self.n_vertices;
        let shift = self.external.len() as u32;
        let mut internal = self.internal.clone();
        internal.extend(other.internal.iter().map(|e| InternalEdge { tail: e.tail + off, head: e.head + off, ..e.clone() }));
        let mut external = self.external.clone();
        external.extend(other.external.iter().map(|e| ExternalEdge {
            vertex: e.vertex + off,
            derivative: e.derivative,
            label: e.label + shift,
        }));
        TropicalType::new(self.n_vertices + other.n_vertices, internal, external).expect("union of valid types")
    }

    /// Rename end labels through `f` (must stay a permutation).
    pub fn relabel(&self, f: impl Fn(u32) -> u32) -> Result<Self, CurveError> {
        let external = self.external.iter().map(|e| ExternalEdge { label: f(e.label), ..e.clone() }).collect();
        TropicalType::new(self.n_vertices, self.internal.clone(), external)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Tail,
    Head,
}

/// An edge end seen from a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Internal(usize, Side),
    External(usize),
}

impl fmt::Display for TropicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices;", self.n_vertices)?;
        for e in &self.internal {
            write!(f, " {}->{} {}", e.tail, e.head, e.derivative)?;
        }
        write!(f, ";")?;
        for e in self.ends_by_label() {
            write!(f, " #{}@{} {}", e.label, e.vertex, e.derivative)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TypeRepr {
    vertices: Vec<i64>,
    internal_edges: Vec<EdgeRepr>,
    external_edges: Vec<EndRepr>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    tail: i64,
    head: i64,
    derivative: IntVec3,
}

#[derive(Serialize, Deserialize)]
struct EndRepr {
    vertex: i64,
    derivative: IntVec3,
    label: u32,
}

impl Serialize for TropicalType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TypeRepr {
            vertices: (0..self.n_vertices as i64).collect(),
            internal_edges: self
                .internal
                .iter()
                .map(|e| EdgeRepr { tail: e.tail as i64, head: e.head as i64, derivative: e.derivative })
                .collect(),
            external_edges: self
                .ends_by_label()
                .into_iter()
                .map(|e| EndRepr { vertex: e.vertex as i64, derivative: e.derivative, label: e.label })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = TypeRepr::deserialize(d)?;
        let idx = |id: i64| {
            r.vertices.iter().position(|&v| v == id).ok_or_else(|| D::Error::custom(format!("unknown vertex id {id}")))
        };
        if r.vertices.iter().collect::<BTreeSet<_>>().len() != r.vertices.len() {
            return Err(D::Error::custom("duplicate vertex id"));
        }
        let mut internal = Vec::new();
        for e in &r.internal_edges {
            internal.push(InternalEdge { tail: idx(e.tail)?, head: idx(e.head)?, derivative: e.derivative });
        }
        let mut external = Vec::new();
        for e in &r.external_edges {
            external.push(ExternalEdge { vertex: idx(e.vertex)?, derivative: e.derivative, label: e.label });
        }
        TropicalType::new(r.vertices.len(), internal, external).map_err(D::Error::custom)
    }
}

/// Small constructors shared by tests and examples.
pub mod build {
    use super::*;

    pub fn v(a: i64, b: i64, c: i64) -> IntVec3 {
        IntVec3::new(a, b, c)
    }

    pub fn edge(tail: usize, head: usize, d: IntVec3) -> InternalEdge {
        InternalEdge { tail, head, derivative: d }
    }

    pub fn end(vertex: usize, d: IntVec3, label: u32) -> ExternalEdge {
        ExternalEdge { vertex, derivative: d, label }
    }

    /// Two vertices joined by parallel edges `μ_i·dir` (tail 0, head 1);
    /// vertex 0 carries `ends0`, vertex 1 carries `ends1`, labeled in order.
    pub fn bundle(parts: &[i64], dir: IntVec3, ends0: &[IntVec3], ends1: &[IntVec3]) -> Result<TropicalType, CurveError> {
        let internal = parts.iter().map(|&m| edge(0, 1, dir * m)).collect();
        let external = ends0
            .iter()
            .map(|&d| (0, d))
            .chain(ends1.iter().map(|&d| (1, d)))
            .enumerate()
            .map(|(i, (vx, d))| end(vx, d, i as u32 + 1))
            .collect();
        TropicalType::new(2, internal, external)
    }

    /// The type γ_μ: ends (1,0,0)#1, (0,1,0)#2, (-1,0,n)#3, (0,-1,-n)#4.
    pub fn gamma_mu(mu: &[i64]) -> TropicalType {
        let n: i64 = mu.iter().sum();
        let internal = mu.iter().map(|&m| edge(1, 0, v(0, 0, m))).collect();
        let external = vec![end(0, v(1, 0, 0), 1), end(1, v(0, 1, 0), 2), end(0, v(-1, 0, n), 3), end(1, v(0, -1, -n), 4)];
        TropicalType::new(2, internal, external).expect("γ_μ is balanced")
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    #[test]
    fn genus_examples() {
        let s = TropicalType::star(&[v(1, 0, 0), v(0, 1, 0), v(-1, -1, 0)]);
        assert_eq!(s.genus(), Ok(0));
        let t = TropicalType::new(
            2,
            vec![edge(0, 1, v(1, 1, 0))],
            vec![end(0, v(-1, 0, 0), 1), end(0, v(0, -1, 0), 2), end(1, v(1, 0, 0), 3), end(1, v(0, 1, 0), 4)],
        )
        .unwrap();
        assert_eq!(t.genus(), Ok(0));
        for l in 1..=4usize {
            let mu = vec![1i64; l];
            assert_eq!(gamma_mu(&mu).genus(), Ok(l - 1));
        }
    }

    #[test]
    fn rejects_unbalanced_and_bad_labels() {
        let bad = TropicalType::new(1, vec![], vec![end(0, v(1, 0, 0), 1), end(0, v(0, 1, 0), 2)]);
        assert_eq!(bad, Err(CurveError::Unbalanced(0)));
        let labels = TropicalType::new(1, vec![], vec![end(0, v(1, 0, 0), 1), end(0, v(-1, 0, 0), 3)]);
        assert_eq!(labels, Err(CurveError::BadLabels(2)));
    }

    #[test]
    fn disconnected_genus_errors() {
        let s = TropicalType::star(&[v(1, 0, 0), v(0, 1, 0), v(-1, -1, 0)]);
        let u = s.disjoint_union(&s);
        assert!(!u.is_connected());
        assert_eq!(u.genus(), Err(CurveError::Disconnected));
        assert_eq!(u.n_ends(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let t = gamma_mu(&[2, 1]);
        let j = serde_json::to_value(&t).unwrap();
        assert_eq!(j["internal_edges"][0]["derivative"], serde_json::json!([0, 0, 2]));
        let back: TropicalType = serde_json::from_value(j).unwrap();
        assert_eq!(back, t);
        let bad = serde_json::json!({"vertices": [7], "internal_edges": [], "external_edges": [{"vertex": 8, "derivative": [0,0,0], "label": 1}]});
        assert!(serde_json::from_value::<TropicalType>(bad).is_err());
    }

    #[test]
    fn star_of_vertex() {
        let t = gamma_mu(&[1, 1]);
        let (s, refs) = t.vertex_star(0).unwrap();
        assert_eq!(s.n_ends(), 4);
        assert_eq!(refs.len(), 4);
        assert!(t.vertex_star(5).is_err());
    }
}
