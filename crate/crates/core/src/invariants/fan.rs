//! Toric fans, the convexity assumptions, and absolute, relative and
//! reduced DT invariants assembled from weighted counts.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{weighted_count, Connectedness, CountError, CountReport, CountRequest};
use crate::enumerate::{EndConstraint, EnumBounds, TropicalCycle};
use crate::exactnum::{factorial, GaussRational, LambdaImage, LaurentSeries, QLaurent, Rational};
use crate::lattice::{find_point, primitive, Constraint, IntVec3, Relation};
use crate::weights::Mode;

/// A constraint on one zero end (a point, line or plane in ℝ³).
pub type Insertion = EndConstraint;

#[derive(Debug, thiserror::Error, PartialEq, Eq, Clone)]
pub enum FanError {
    #[error("invalid fan: {0}")]
    Invalid(String),
    #[error("fan violates the convexity assumption")]
    NotConvex,
    #[error("fan violates the relative convexity assumption")]
    NotRelativelyConvex,
    #[error("degrees do not balance: Σ d_S α_S = {0}")]
    Unbalanced(IntVec3),
    #[error("the curve class is zero")]
    ZeroClass,
    #[error("expected {expected} degrees, got {got}")]
    DegreeCount { expected: usize, got: usize },
    #[error("degree {0} is negative")]
    NegativeDegree(i64),
    #[error("degree on non-special ray {0}")]
    NotSpecial(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan3 {
    pub rays: Vec<IntVec3>,
    /// Ray-index sets of dimension one to three, closed under faces.
    pub cones: Vec<Vec<usize>>,
    #[serde(default)]
    pub special_rays: Vec<usize>,
}

impl Fan3 {
    pub fn new(rays: Vec<IntVec3>, cones: Vec<Vec<usize>>, special_rays: Vec<usize>) -> Result<Self, FanError> {
        let mut cones: Vec<Vec<usize>> = cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        let f = Fan3 { rays, cones, special_rays };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), FanError> {
        for (i, r) in self.rays.iter().enumerate() {
            match primitive(*r) {
                Ok((_, 1)) => {}
                _ => return Err(FanError::Invalid(format!("ray {i} = {r} is not primitive"))),
            }
            if self.rays[..i].contains(r) {
                return Err(FanError::Invalid(format!("ray {r} repeated")));
            }
        }
        let sorted: Vec<Vec<usize>> = self
            .cones
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        for c in &sorted {
            if c.is_empty() || c.len() > 3 || c.iter().any(|&i| i >= self.rays.len()) {
                return Err(FanError::Invalid(format!("bad cone {c:?}")));
            }
            for mask in 1..(1u32 << c.len()) - 1 {
                let face: Vec<usize> = c.iter().enumerate().filter(|(j, _)| mask >> j & 1 == 1).map(|(_, &x)| x).collect();
                if !sorted.contains(&face) {
                    return Err(FanError::Invalid(format!("face {face:?} of {c:?} missing")));
                }
            }
        }
        for i in 0..self.rays.len() {
            if !sorted.contains(&vec![i]) {
                return Err(FanError::Invalid(format!("ray {i} is not a cone")));
            }
        }
        if self.special_rays.iter().any(|&i| i >= self.rays.len()) {
            return Err(FanError::Invalid("special ray out of range".into()));
        }
        Ok(())
    }

    fn full(rays: Vec<IntVec3>, maximal: &[[usize; 3]]) -> Self {
        let mut cones = Vec::new();
        for m in maximal {
            for mask in 1u32..8 {
                cones.push((0..3).filter(|j| mask >> j & 1 == 1).map(|j| m[j]).collect());
            }
        }
        Fan3::new(rays, cones, Vec::new()).expect("standard fan")
    }

    /// Rays e₁, e₂, e₃, −e₁−e₂−e₃.
    pub fn cp3() -> Self {
        let rays = vec![IntVec3::new(1, 0, 0), IntVec3::new(0, 1, 0), IntVec3::new(0, 0, 1), IntVec3::new(-1, -1, -1)];
        Self::full(rays, &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]])
    }

    /// Rays ±e₁, ±e₂, ±e₃ (in that order).
    pub fn p1_cubed() -> Self {
        let rays = vec![
            IntVec3::new(1, 0, 0),
            IntVec3::new(-1, 0, 0),
            IntVec3::new(0, 1, 0),
            IntVec3::new(0, -1, 0),
            IntVec3::new(0, 0, 1),
            IntVec3::new(0, 0, -1),
        ];
        let mut maximal = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    maximal.push([a, b, c]);
                }
            }
        }
        Self::full(rays, &maximal)
    }

    pub fn with_special(mut self, special: Vec<usize>) -> Result<Self, FanError> {
        self.special_rays = special;
        self.validate()?;
        Ok(self)
    }

    /// Every 3-cone's rays form a basis of ℤ³.
    pub fn is_smooth(&self) -> bool {
        self.cones.iter().filter(|c| c.len() == 3).all(|c| {
            let [a, b, d] = [self.rays[c[0]], self.rays[c[1]], self.rays[c[2]]];
            a.cross(&b).dot(&d).abs() == 1
        })
    }

    /// The cone meets the non-negative span of the rays outside it only at 0.
    fn cone_is_isolated(&self, cone: &[usize]) -> bool {
        let others: Vec<usize> = (0..self.rays.len()).filter(|i| !cone.contains(i)).collect();
        let n = cone.len() + others.len();
        let q = |x: i64| Rational::from_integer(BigInt::from(x));
        let mut cons = Vec::new();
        for a in 0..3 {
            let mut c: Vec<Rational> = cone.iter().map(|&i| q(self.rays[i].0[a])).collect();
            c.extend(others.iter().map(|&i| -q(self.rays[i].0[a])));
            cons.push(Constraint::new(c, Relation::Eq, Rational::zero()));
        }
        for j in 0..n {
            let mut c = vec![Rational::zero(); n];
            c[j] = Rational::one();
            cons.push(Constraint::new(c, Relation::Ge, Rational::zero()));
        }
        let mut c = vec![Rational::zero(); n];
        for x in c.iter_mut().take(cone.len()) {
            *x = Rational::one();
        }
        cons.push(Constraint::new(c, Relation::Eq, Rational::one()));
        !find_point(n, &cons).is_feasible()
    }

    fn check_degrees(&self, degrees: &[i64]) -> Result<(), FanError> {
        if degrees.len() != self.rays.len() {
            return Err(FanError::DegreeCount { expected: self.rays.len(), got: degrees.len() });
        }
        if let Some(&d) = degrees.iter().find(|&&d| d < 0) {
            return Err(FanError::NegativeDegree(d));
        }
        if degrees.iter().all(|&d| d == 0) {
            return Err(FanError::ZeroClass);
        }
        Ok(())
    }

    /// `d_S` copies of each ray, in ray order.
    fn ray_ends(&self, degrees: &[i64]) -> Vec<IntVec3> {
        self.rays.iter().zip(degrees).flat_map(|(r, &d)| std::iter::repeat_n(*r, d as usize)).collect()
    }
}

pub fn check_convexity(fan: &Fan3) -> Result<bool, FanError> {
    fan.validate()?;
    Ok(fan.cones.iter().all(|c| fan.cone_is_isolated(c)))
}

/// Convexity restricted to cones containing a special ray.
pub fn check_relative_convexity(fan: &Fan3) -> Result<bool, FanError> {
    fan.validate()?;
    Ok(fan.cones.iter().filter(|c| c.iter().any(|i| fan.special_rays.contains(i))).all(|c| fan.cone_is_isolated(c)))
}

fn factorials(degrees: &[i64]) -> Rational {
    degrees.iter().map(|&d| Rational::from_integer(factorial(d as u32))).product()
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport<T> {
    pub value: T,
    pub count: CountReport,
}

#[allow(clippy::too_many_arguments)]
fn count_with_insertions(
    ends: Vec<IntVec3>,
    mut constraints: Vec<EndConstraint>,
    insertions: &[Insertion],
    connectedness: Connectedness,
    mode: Mode,
    order: i64,
    seed: u64,
    bounds: &EnumBounds,
) -> Result<CountReport, CountError> {
    let mut ends = ends;
    ends.extend(std::iter::repeat_n(IntVec3::ZERO, insertions.len()));
    constraints.extend(insertions.iter().cloned());
    let cycle = TropicalCycle::from_end_constraints(&ends, &constraints)?;
    let req = CountRequest { ends, cycle, connectedness, mode, bounds: bounds.clone() };
    weighted_count(&req, order, seed)
}

/// `⟨θ₁,…,θ_k⟩ = W Π_S (d_S! λ^{d_S})⁻¹` for a convex fan.
pub fn absolute_gw(
    fan: &Fan3,
    degrees: &[i64],
    insertions: &[Insertion],
    order: i64,
    seed: u64,
    bounds: &EnumBounds,
) -> Result<InvariantReport<LaurentSeries>, CountError> {
    fan.check_degrees(degrees)?;
    if !check_convexity(fan)? {
        return Err(FanError::NotConvex.into());
    }
    let ends = fan.ray_ends(degrees);
    let total: IntVec3 = ends.iter().copied().sum();
    if !total.is_zero() {
        return Err(FanError::Unbalanced(total).into());
    }
    let free = vec![EndConstraint::Free; ends.len()];
    let dsum: i64 = degrees.iter().sum();
    let count = count_with_insertions(ends, free, insertions, Connectedness::Connected, Mode::Lambda, order + dsum, seed, bounds)?;
    let w = count.value.as_lambda().expect("λ mode").clone();
    let value = w.shift(-dsum).scale_rational(&(Rational::one() / factorials(degrees))).truncate(order);
    Ok(InvariantReport { value, count })
}

/// Right side of the relative correspondence: `W_{d,α}(θ) Π_S F^{d_S}/d_S!`
/// with `F = λ⁻¹`, where only special rays carry degrees.
#[allow(clippy::too_many_arguments)]
pub fn relative_gw(
    fan: &Fan3,
    degrees: &[i64],
    ends: &[IntVec3],
    constraints: &[EndConstraint],
    order: i64,
    seed: u64,
    bounds: &EnumBounds,
) -> Result<InvariantReport<LaurentSeries>, CountError> {
    if degrees.len() != fan.rays.len() {
        return Err(FanError::DegreeCount { expected: fan.rays.len(), got: degrees.len() }.into());
    }
    if let Some(i) = (0..degrees.len()).find(|&i| degrees[i] != 0 && !fan.special_rays.contains(&i)) {
        return Err(FanError::NotSpecial(i).into());
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 0) {
        return Err(FanError::NegativeDegree(d).into());
    }
    if !check_relative_convexity(fan)? {
        return Err(FanError::NotRelativelyConvex.into());
    }
    let mut all = fan.ray_ends(degrees);
    let mut cons = vec![EndConstraint::Free; all.len()];
    all.extend_from_slice(ends);
    cons.extend_from_slice(constraints);
    let dsum: i64 = degrees.iter().sum();
    let count = count_with_insertions(all, cons, &[], Connectedness::Connected, Mode::Lambda, order + dsum, seed, bounds)?;
    let w = count.value.as_lambda().expect("λ mode").clone();
    let value = w.shift(-dsum).scale_rational(&(Rational::one() / factorials(degrees))).truncate(order);
    Ok(InvariantReport { value, count })
}

/// `Z′_DT = W^DT Π_S q^{d_S/2}/d_S!`, counting possibly disconnected curves
/// without trivial components.
pub fn dt_reduced(
    fan: &Fan3,
    degrees: &[i64],
    insertions: &[Insertion],
    seed: u64,
    bounds: &EnumBounds,
) -> Result<InvariantReport<QLaurent>, CountError> {
    fan.check_degrees(degrees)?;
    if !check_convexity(fan)? {
        return Err(FanError::NotConvex.into());
    }
    let ends = fan.ray_ends(degrees);
    let total: IntVec3 = ends.iter().copied().sum();
    if !total.is_zero() {
        return Err(FanError::Unbalanced(total).into());
    }
    let free = vec![EndConstraint::Free; ends.len()];
    let count = count_with_insertions(ends, free, insertions, Connectedness::Disconnected, Mode::Q, 1, seed, bounds)?;
    let dsum: i64 = degrees.iter().sum();
    let w = count.value.as_q().expect("q mode");
    let shift = QLaurent::monomial(GaussRational::one(), dsum);
    let value = (w * &shift).scale_rational(&(Rational::one() / factorials(degrees)));
    Ok(InvariantReport { value, count })
}

/// The normalization linking the two invariants: strip `q^{Σd/2}`,
/// substitute `q^{1/2} = ie^{iλ/2}`, and multiply by `λ^{k − Σd}` for `k`
/// insertions.
pub fn dt_to_gw(z: &QLaurent, degree_sum: i64, insertions: usize, order: i64) -> LambdaImage {
    let shift = insertions as i64 - degree_sum;
    let stripped = z * &QLaurent::monomial(GaussRational::one(), -degree_sum);
    let img = stripped.substitute_lambda(order - shift);
    LambdaImage { series: img.series.shift(shift), real: img.real }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fans_are_convex_and_smooth() {
        for f in [Fan3::cp3(), Fan3::p1_cubed()] {
            assert!(check_convexity(&f).unwrap());
            assert!(f.is_smooth());
        }
    }

    #[test]
    fn blown_up_ray_breaks_convexity() {
        // CP³ with e₁+e₂ added inside the cone of e₁ and e₂.
        let mut rays = Fan3::cp3().rays;
        rays.push(IntVec3::new(1, 1, 0));
        let maximal = [[0, 4, 2], [4, 1, 2], [0, 4, 3], [4, 1, 3], [0, 2, 3], [1, 2, 3]];
        let fan = Fan3::full(rays, &maximal);
        assert!(!check_convexity(&fan).unwrap());
        let special = fan.clone().with_special(vec![2]).unwrap();
        assert!(!check_relative_convexity(&special).unwrap());
        assert!(check_relative_convexity(&fan.with_special(vec![]).unwrap()).unwrap());
    }

    #[test]
    fn relative_convexity_special_cases() {
        let cp3 = Fan3::cp3();
        assert!(check_relative_convexity(&cp3.clone().with_special(vec![0]).unwrap()).unwrap());
        let all = cp3.clone().with_special(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(check_relative_convexity(&all).unwrap(), check_convexity(&cp3).unwrap());
    }

    #[test]
    fn invalid_fans() {
        assert!(Fan3::new(vec![IntVec3::new(2, 0, 0)], vec![vec![0]], vec![]).is_err());
        assert!(Fan3::new(vec![IntVec3::new(1, 0, 0), IntVec3::new(0, 1, 0)], vec![vec![0, 1], vec![0]], vec![]).is_err());
    }

    #[test]
    fn degree_errors() {
        let f = Fan3::cp3();
        let b = EnumBounds::default();
        assert!(matches!(absolute_gw(&f, &[0, 0, 0, 0], &[], 5, 0, &b), Err(CountError::Fan(FanError::ZeroClass))));
        assert!(matches!(absolute_gw(&f, &[1, 0, 0, 0], &[], 5, 0, &b), Err(CountError::Fan(FanError::Unbalanced(_)))));
        let p = EndConstraint::Point { point: [0, 0, 0] };
        assert!(matches!(absolute_gw(&f, &[1, 1, 1, 1], &[p], 5, 0, &b), Err(CountError::Dimension { .. })));
    }
}
