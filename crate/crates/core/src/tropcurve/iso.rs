//! Isomorphism classes: canonical forms and automorphism counts.
//!
//! Vertices are colored by iterated neighborhood refinement; remaining ties
//! are broken by individualizing one vertex at a time and keeping the
//! lexicographically smallest encoding.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use super::{ExternalEdge, InternalEdge, TropicalType};
use crate::lattice::IntVec3;

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

impl TropicalType {
    fn initial_colors(&self) -> Vec<u64> {
        (0..self.n_vertices())
            .map(|v| {
                let mut ends: Vec<(u32, IntVec3)> =
                    self.external_edges().iter().filter(|e| e.vertex == v).map(|e| (e.label, e.derivative)).collect();
                ends.sort();
                hash_of(&(self.valence(v), ends))
            })
            .collect()
    }

    fn neighbor_lists(&self) -> Vec<Vec<(usize, IntVec3)>> {
        let mut adj = vec![Vec::new(); self.n_vertices()];
        for e in self.internal_edges() {
            adj[e.tail].push((e.head, e.derivative));
            adj[e.head].push((e.tail, -e.derivative));
        }
        adj
    }

    fn refine(&self, adj: &[Vec<(usize, IntVec3)>], mut colors: Vec<u64>) -> Vec<u64> {
        let distinct = |c: &[u64]| {
            let mut s = c.to_vec();
            s.sort_unstable();
            s.dedup();
            s.len()
        };
        let mut count = distinct(&colors);
        loop {
            let next: Vec<u64> = (0..colors.len())
                .map(|v| {
                    let mut nb: Vec<(u64, IntVec3)> = adj[v].iter().map(|&(w, d)| (colors[w], d)).collect();
                    nb.sort();
                    hash_of(&(colors[v], nb))
                })
                .collect();
            let c = distinct(&next);
            colors = next;
            if c == count {
                return colors;
            }
            count = c;
        }
    }

    fn encode(&self, rank: &[usize]) -> Vec<i64> {
        let mut out = vec![self.n_vertices() as i64];
        for e in self.ends_by_label() {
            out.push(e.label as i64);
            out.push(rank[e.vertex] as i64);
            out.extend(e.derivative.0);
        }
        let mut edges: Vec<(usize, usize, IntVec3)> = self
            .internal_edges()
            .iter()
            .map(|e| {
                let (a, b) = (rank[e.tail], rank[e.head]);
                if a <= b {
                    (a, b, e.derivative)
                } else {
                    (b, a, -e.derivative)
                }
            })
            .collect();
        edges.sort();
        for (a, b, d) in edges {
            out.push(a as i64);
            out.push(b as i64);
            out.extend(d.0);
        }
        out
    }

    fn best_ranking(&self, adj: &[Vec<(usize, IntVec3)>], colors: Vec<u64>, best: &mut Option<(Vec<i64>, Vec<usize>)>) {
        let colors = self.refine(adj, colors);
        let mut order: Vec<usize> = (0..colors.len()).collect();
        order.sort_by_key(|&v| colors[v]);
        let tie = order.windows(2).find(|w| colors[w[0]] == colors[w[1]]).map(|w| colors[w[0]]);
        match tie {
            None => {
                let mut rank = vec![0; colors.len()];
                for (r, &v) in order.iter().enumerate() {
                    rank[v] = r;
                }
                let code = self.encode(&rank);
                if best.as_ref().is_none_or(|(b, _)| code < *b) {
                    *best = Some((code, rank));
                }
            }
            Some(c) => {
                for v in (0..colors.len()).filter(|&v| colors[v] == c) {
                    let mut next = colors.clone();
                    next[v] = hash_of(&(c, u64::MAX));
                    self.best_ranking(adj, next, best);
                }
            }
        }
    }

    /// A representative depending only on the isomorphism class (with ends
    /// labeled and edge orientation ignored).
    pub fn canonical_form(&self) -> TropicalType {
        let adj = self.neighbor_lists();
        let mut best = None;
        self.best_ranking(&adj, self.initial_colors(), &mut best);
        let Some((_, rank)) = best else { return self.clone() };
        let mut internal: Vec<InternalEdge> = self
            .internal_edges()
            .iter()
            .map(|e| {
                let (a, b) = (rank[e.tail], rank[e.head]);
                if a <= b {
                    InternalEdge { tail: a, head: b, derivative: e.derivative }
                } else {
                    InternalEdge { tail: b, head: a, derivative: -e.derivative }
                }
            })
            .collect();
        internal.sort();
        let external: Vec<ExternalEdge> = self
            .ends_by_label()
            .into_iter()
            .map(|e| ExternalEdge { vertex: rank[e.vertex], derivative: e.derivative, label: e.label })
            .collect();
        TropicalType::new(self.n_vertices(), internal, external).expect("relabeling preserves validity")
    }

    pub fn is_isomorphic(&self, other: &TropicalType) -> bool {
        self.n_vertices() == other.n_vertices()
            && self.n_ends() == other.n_ends()
            && self.internal_edges().len() == other.internal_edges().len()
            && self.canonical_form() == other.canonical_form()
    }

    /// Automorphisms fixing every labeled end. Vertex permutations are
    /// searched by backtracking; parallel edges with equal derivative
    /// contribute the factorial of their multiplicity.
    pub fn automorphism_count(&self) -> u64 {
        let n = self.n_vertices();
        let adj = self.neighbor_lists();
        let colors = self.refine(&adj, self.initial_colors());
        let mut pairs: BTreeMap<(usize, usize), Vec<IntVec3>> = BTreeMap::new();
        for e in self.internal_edges() {
            pairs.entry((e.tail, e.head)).or_default().push(e.derivative);
            pairs.entry((e.head, e.tail)).or_default().push(-e.derivative);
        }
        for v in pairs.values_mut() {
            v.sort();
        }
        let empty = Vec::new();
        let between = |a: usize, b: usize| pairs.get(&(a, b)).unwrap_or(&empty);
        let mut sigma = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go<'a>(
            v: usize,
            n: usize,
            colors: &[u64],
            sigma: &mut Vec<usize>,
            used: &mut Vec<bool>,
            between: &dyn Fn(usize, usize) -> &'a Vec<IntVec3>,
        ) -> u64 {
            if v == n {
                return 1;
            }
            let mut total = 0;
            for w in 0..n {
                if used[w] || colors[w] != colors[v] {
                    continue;
                }
                let ok = (0..v).all(|u| between(u, v) == between(sigma[u], w)) && between(v, v) == between(w, w);
                if ok {
                    sigma[v] = w;
                    used[w] = true;
                    total += go(v + 1, n, colors, sigma, used, between);
                    used[w] = false;
                }
            }
            total
        }
        let vertex_perms = go(0, n, &colors, &mut sigma, &mut used, &between);
        let mut edge_factor: u64 = 1;
        for ((a, b), ds) in &pairs {
            if a < b {
                let mut i = 0;
                while i < ds.len() {
                    let j = (i..ds.len()).find(|&j| ds[j] != ds[i]).unwrap_or(ds.len());
                    edge_factor *= (1..=(j - i) as u64).product::<u64>();
                    i = j;
                }
            }
        }
        vertex_perms * edge_factor
    }
}

#[cfg(test)]
mod tests {
    use super::super::build::*;
    use super::*;

    #[test]
    fn tree_has_trivial_automorphisms() {
        let t = TropicalType::new(
            2,
            vec![edge(0, 1, v(1, 1, 0))],
            vec![end(0, v(-1, 0, 0), 1), end(0, v(0, -1, 0), 2), end(1, v(1, 0, 0), 3), end(1, v(0, 1, 0), 4)],
        )
        .unwrap();
        assert_eq!(t.automorphism_count(), 1);
    }

    #[test]
    fn doubled_edge_has_two() {
        assert_eq!(gamma_mu(&[1, 1]).automorphism_count(), 2);
        assert_eq!(gamma_mu(&[3, 3]).automorphism_count(), 2);
    }

    #[test]
    fn gamma_mu_matches_partition_symmetry() {
        assert_eq!(gamma_mu(&[2, 1]).automorphism_count(), 1);
        assert_eq!(gamma_mu(&[1, 1, 1]).automorphism_count(), 6);
        assert_eq!(gamma_mu(&[2, 2, 1, 1, 1]).automorphism_count(), 12);
    }

    #[test]
    fn canonical_form_ignores_presentation() {
        let t = gamma_mu(&[2, 1, 1]);
        let flipped = t.flip_edge(1);
        assert_eq!(t.canonical_form(), flipped.canonical_form());
        // Swap the two vertex indices.
        let internal = t.internal_edges().iter().map(|e| edge(1 - e.tail, 1 - e.head, e.derivative)).collect();
        let external = t.external_edges().iter().map(|e| end(1 - e.vertex, e.derivative, e.label)).collect();
        let swapped = TropicalType::new(2, internal, external).unwrap();
        assert!(t.is_isomorphic(&swapped));
        assert!(!t.is_isomorphic(&gamma_mu(&[2, 2])));
    }

    #[test]
    fn endless_vertices_are_resolved() {
        // Square loop: four vertices each with one end; canonical form is stable
        // under rotating vertex indices.
        let t = crate::tropcurve::deform::tests::square_loop(2);
        let rot = |x: usize| (x + 1) % 4;
        let internal = t.internal_edges().iter().map(|e| edge(rot(e.tail), rot(e.head), e.derivative)).collect();
        let external = t.external_edges().iter().map(|e| end(rot(e.vertex), e.derivative, e.label)).collect();
        let r = TropicalType::new(4, internal, external).unwrap();
        assert_eq!(t.canonical_form(), r.canonical_form());
        assert_eq!(t.automorphism_count(), 1);
    }
}
