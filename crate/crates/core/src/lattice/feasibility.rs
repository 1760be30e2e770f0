//! Rational feasibility of mixed strict/non-strict linear systems by
//! Fourier–Motzkin elimination, with an explicit witness on success.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::rational::{dot, solve, QMatrix};
use crate::exactnum::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Ge,
    Gt,
}

/// `coeffs · x  (relation)  rhs`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible,
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self { coeffs, relation, rhs }
    }

    pub fn relaxed(&self) -> Self {
        let relation = if self.relation == Relation::Gt { Relation::Ge } else { self.relation };
        Self { relation, ..self.clone() }
    }
}

/// One inequality `a·t ≥ b` (or `>` when strict).
#[derive(Clone, Debug)]
struct Ineq {
    a: Vec<Rational>,
    b: Rational,
    strict: bool,
}

/// Find a rational point satisfying every constraint over `n` variables.
pub fn find_point(n: usize, constraints: &[Constraint]) -> Feasibility {
    let (eqs, ineqs): (Vec<&Constraint>, Vec<&Constraint>) = constraints.iter().partition(|c| c.relation == Relation::Eq);
    // Parametrize the equality solution set as p + N·t.
    let m = QMatrix::new(eqs.iter().map(|c| c.coeffs.clone()).collect(), n);
    let b: Vec<Rational> = eqs.iter().map(|c| c.rhs.clone()).collect();
    let sol = if eqs.is_empty() {
        super::Solution {
            particular: vec![Rational::zero(); n],
            homogeneous: (0..n)
                .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
                .collect(),
        }
    } else {
        match solve(&m, &b) {
            Some(s) => s,
            None => return Feasibility::Infeasible,
        }
    };
    let dim = sol.homogeneous.len();
    let reduced: Vec<Ineq> = ineqs
        .iter()
        .map(|c| Ineq {
            a: sol.homogeneous.iter().map(|h| dot(&c.coeffs, h)).collect(),
            b: &c.rhs - dot(&c.coeffs, &sol.particular),
            strict: c.relation == Relation::Gt,
        })
        .collect();
    match eliminate(dim, reduced) {
        Some(t) => {
            let mut x = sol.particular.clone();
            for (ti, h) in t.iter().zip(&sol.homogeneous) {
                for (xi, hi) in x.iter_mut().zip(h) {
                    *xi += ti * hi;
                }
            }
            Feasibility::Feasible(x)
        }
        None => Feasibility::Infeasible,
    }
}

fn trivially_ok(q: &Ineq) -> bool {
    if q.strict {
        q.b.is_negative()
    } else {
        !q.b.is_positive()
    }
}

/// Scale so the first nonzero coefficient has absolute value 1, then keep
/// only the tightest inequality per coefficient vector.
fn normalize(system: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: BTreeMap<Vec<Rational>, (Rational, bool)> = BTreeMap::new();
    for mut q in system {
        let Some(lead) = q.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else {
            if !trivially_ok(&q) {
                return None;
            }
            continue;
        };
        if !lead.is_one() {
            for x in q.a.iter_mut() {
                *x /= &lead;
            }
            q.b /= &lead;
        }
        match best.get_mut(&q.a) {
            Some((b, s)) => {
                if q.b > *b || (q.b == *b && q.strict && !*s) {
                    *b = q.b;
                    *s = q.strict;
                }
            }
            None => {
                best.insert(q.a, (q.b, q.strict));
            }
        }
    }
    Some(best.into_iter().map(|(a, (b, strict))| Ineq { a, b, strict }).collect())
}

fn eliminate(dim: usize, system: Vec<Ineq>) -> Option<Vec<Rational>> {
    // stages[j] involves only variables 0..=j once variables above j are gone.
    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(dim);
    let mut cur = normalize(system)?;
    for j in (0..dim).rev() {
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in &cur {
            if q.a[j].is_positive() {
                lower.push(q);
            } else if q.a[j].is_negative() {
                upper.push(q);
            } else {
                rest.push(q.clone());
            }
        }
        for l in &lower {
            for u in &upper {
                let (cl, cu) = (l.a[j].clone(), -u.a[j].clone());
                let a: Vec<Rational> = l.a.iter().zip(&u.a).map(|(x, y)| x * &cu + y * &cl).collect();
                rest.push(Ineq { a, b: &l.b * &cu + &u.b * &cl, strict: l.strict || u.strict });
            }
        }
        stages.push(cur);
        cur = normalize(rest)?;
    }
    stages.reverse();
    // Back-substitute, choosing each variable strictly inside its interval.
    let mut t = vec![Rational::zero(); dim];
    for j in 0..dim {
        let mut lo: Option<(Rational, bool)> = None;
        let mut hi: Option<(Rational, bool)> = None;
        for q in &stages[j] {
            let aj = &q.a[j];
            if aj.is_zero() {
                continue;
            }
            let rest: Rational = (0..j).map(|i| &q.a[i] * &t[i]).sum();
            let bound = (&q.b - rest) / aj;
            if aj.is_positive() {
                if lo.as_ref().is_none_or(|(v, s)| bound > *v || (bound == *v && q.strict && !s)) {
                    lo = Some((bound, q.strict));
                }
            } else if hi.as_ref().is_none_or(|(v, s)| bound < *v || (bound == *v && q.strict && !s)) {
                hi = Some((bound, q.strict));
            }
        }
        t[j] = match (lo, hi) {
            (None, None) => Rational::zero(),
            (Some((l, s)), None) => if s { l + Rational::one() } else { l },
            (None, Some((h, s))) => if s { h - Rational::one() } else { h },
            (Some((l, _)), Some((h, _))) => {
                if l == h {
                    l
                } else {
                    (l + h) / Rational::from_integer(2.into())
                }
            }
        };
    }
    Some(t)
}
