//! Leaf-labeled trivalent trees with balancing-forced derivatives.

use std::collections::HashMap;
use std::rc::Rc;

use crate::lattice::{wedge_index, IntVec3};
use crate::tropcurve::{ExternalEdge, InternalEdge, TropicalType};

enum Node {
    Leaf(usize),
    Join(Rc<Node>, Rc<Node>, u32),
}

struct Builder<'a> {
    ends: &'a [IntVec3],
    memo: HashMap<u32, Vec<Rc<Node>>>,
}

fn mask_sum(ends: &[IntVec3], mask: u32) -> IntVec3 {
    (0..ends.len()).filter(|i| mask >> i & 1 == 1).map(|i| ends[i]).sum()
}

/// A vertex with outgoing derivatives `a`, `b`, `-(a+b)` can occur in a
/// general curve: not all zero, and not three nonzero colinear vectors.
pub(crate) fn vertex_ok(a: IntVec3, b: IntVec3) -> bool {
    let c = -(a + b);
    let zeros = [a, b, c].iter().filter(|x| x.is_zero()).count();
    match zeros {
        0 => wedge_index(a, b) != 0,
        1 => true,
        _ => false,
    }
}

impl Builder<'_> {
    fn subtrees(&mut self, mask: u32) -> Vec<Rc<Node>> {
        if mask.count_ones() == 1 {
            return vec![Rc::new(Node::Leaf(mask.trailing_zeros() as usize))];
        }
        if let Some(v) = self.memo.get(&mask) {
            return v.clone();
        }
        let mut out = Vec::new();
        if !mask_sum(self.ends, mask).is_zero() {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            // Enumerate subsets s1 ⊇ {low}, s1 ≠ mask.
            let mut sub = rest;
            loop {
                let s1 = sub | low;
                let s2 = mask ^ s1;
                if s2 != 0 {
                    let (a, b) = (mask_sum(self.ends, s1), mask_sum(self.ends, s2));
                    if vertex_ok(a, b) && (s1.count_ones() == 1 || !a.is_zero()) && (s2.count_ones() == 1 || !b.is_zero()) {
                        let left = self.subtrees(s1);
                        let right = self.subtrees(s2);
                        for l in &left {
                            for r in &right {
                                out.push(Rc::new(Node::Join(l.clone(), r.clone(), mask)));
                            }
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        self.memo.insert(mask, out.clone());
        out
    }
}

fn attach(node: &Node, parent: usize, ends: &[IntVec3], n_vertices: &mut usize, internal: &mut Vec<InternalEdge>, external: &mut Vec<ExternalEdge>) {
    match node {
        Node::Leaf(i) => external.push(ExternalEdge { vertex: parent, derivative: ends[*i], label: *i as u32 + 1 }),
        Node::Join(l, r, mask) => {
            let w = *n_vertices;
            *n_vertices += 1;
            internal.push(InternalEdge { tail: parent, head: w, derivative: mask_sum(ends, *mask) });
            attach(l, w, ends, n_vertices, internal, external);
            attach(r, w, ends, n_vertices, internal, external);
        }
    }
}

/// Every trivalent tree with the given labeled ends (label = index + 1)
/// whose vertices can be general. Requires at least three ends.
pub fn trivalent_trees(ends: &[IntVec3]) -> Vec<TropicalType> {
    let n = ends.len();
    assert!(n <= 31, "too many ends for bitmask enumeration");
    if n < 3 {
        return Vec::new();
    }
    let mut b = Builder { ends, memo: HashMap::new() };
    let all: u32 = ((1u64 << n) - 1) as u32;
    let rest = all ^ 1;
    let mut out = Vec::new();
    // Root vertex carries end 1 and two subtrees A ∋ end 2, B.
    let low = rest & rest.wrapping_neg();
    let free = rest ^ low;
    let mut sub = free;
    loop {
        let sa = sub | low;
        let sb = rest ^ sa;
        if sb != 0 {
            let (a, bsum) = (mask_sum(ends, sa), mask_sum(ends, sb));
            if vertex_ok(a, bsum) && (sa.count_ones() == 1 || !a.is_zero()) && (sb.count_ones() == 1 || !bsum.is_zero()) {
                for ta in b.subtrees(sa) {
                    for tb in b.subtrees(sb) {
                        let mut nv = 1;
                        let (mut internal, mut external) = (Vec::new(), vec![ExternalEdge { vertex: 0, derivative: ends[0], label: 1 }]);
                        attach(&ta, 0, ends, &mut nv, &mut internal, &mut external);
                        attach(&tb, 0, ends, &mut nv, &mut internal, &mut external);
                        out.push(TropicalType::new(nv, internal, external).expect("trees are balanced by construction"));
                    }
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & free;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropcurve::build::v;

    fn double_factorial(n: usize) -> usize {
        (1..=n).rev().step_by(2).product()
    }

    #[test]
    fn generic_ends_give_all_shapes() {
        // Ends in general position: no pruning, (2n-5)!! shapes.
        let base = [v(1, 0, 0), v(0, 1, 0), v(0, 0, 1), v(1, 2, 3), v(-2, 5, 1), v(3, -1, 4)];
        for n in 3..=6 {
            let mut ends: Vec<IntVec3> = base[..n - 1].to_vec();
            ends.push(-ends.iter().copied().sum::<IntVec3>());
            assert_eq!(trivalent_trees(&ends).len(), double_factorial(2 * n - 5), "n = {n}");
        }
    }

    #[test]
    fn opposite_pairs_prune_zero_edges() {
        // α, β, -α, -β: the split {α,-α}|{β,-β} has zero internal edge.
        let ends = [v(1, 0, 0), v(0, 1, 0), v(-1, 0, 0), v(0, -1, 0)];
        assert_eq!(trivalent_trees(&ends).len(), 2);
    }

    #[test]
    fn every_tree_is_general() {
        let ends = [v(1, 0, 0), v(0, 1, 0), v(0, 0, 1), v(-1, -1, -1), v(0, 0, 0), v(0, 0, 0)];
        let trees = trivalent_trees(&ends);
        assert!(!trees.is_empty());
        for t in &trees {
            assert!(t.is_general(), "{t}");
            assert_eq!(t.genus(), Ok(0));
        }
    }
}
