use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::LatticeError;

/// Integral vector in ℤ³ (edge derivatives, end directions).
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVec3(pub [i64; 3]);

impl IntVec3 {
    pub const ZERO: IntVec3 = IntVec3([0, 0, 0]);

    pub fn new(a: i64, b: i64, c: i64) -> Self {
        IntVec3([a, b, c])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// gcd of the absolute entries (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, x| g.gcd(x))
    }

    pub fn cross(&self, o: &IntVec3) -> IntVec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        IntVec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn dot(&self, o: &IntVec3) -> i64 {
        self.0.iter().zip(o.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Apply the integer 3×3 matrix `m` (row-major).
    pub fn transform(&self, m: &[[i64; 3]; 3]) -> IntVec3 {
        IntVec3(std::array::from_fn(|i| (0..3).map(|j| m[i][j] * self.0[j]).sum()))
    }
}

impl Add for IntVec3 {
    type Output = IntVec3;
    fn add(self, o: IntVec3) -> IntVec3 {
        IntVec3(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for IntVec3 {
    type Output = IntVec3;
    fn sub(self, o: IntVec3) -> IntVec3 {
        IntVec3(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for IntVec3 {
    type Output = IntVec3;
    fn neg(self) -> IntVec3 {
        IntVec3(self.0.map(|x| -x))
    }
}

impl Mul<i64> for IntVec3 {
    type Output = IntVec3;
    fn mul(self, k: i64) -> IntVec3 {
        IntVec3(self.0.map(|x| x * k))
    }
}

impl std::iter::Sum for IntVec3 {
    fn sum<I: Iterator<Item = IntVec3>>(it: I) -> IntVec3 {
        it.fold(IntVec3::ZERO, Add::add)
    }
}

impl fmt::Display for IntVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Split `v = g·p` with `p` primitive and `g > 0`.
pub fn primitive(v: IntVec3) -> Result<(IntVec3, i64), LatticeError> {
    let g = v.content();
    if g == 0 {
        return Err(LatticeError::ZeroVector);
    }
    Ok((IntVec3(v.0.map(|x| x / g)), g))
}

/// gcd of the entries of `α × β`; zero exactly when they are parallel.
pub fn wedge_index(a: IntVec3, b: IntVec3) -> i64 {
    a.cross(&b).content()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(IntVec3::new(2, 4, 6)), Ok((IntVec3::new(1, 2, 3), 2)));
        assert_eq!(primitive(IntVec3::new(0, 0, -3)), Ok((IntVec3::new(0, 0, -1), 3)));
        assert_eq!(primitive(IntVec3::new(1, 1, 1)), Ok((IntVec3::new(1, 1, 1), 1)));
        assert_eq!(primitive(IntVec3::ZERO), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(wedge_index(IntVec3::new(1, 0, 0), IntVec3::new(0, 1, 0)), 1);
        assert_eq!(wedge_index(IntVec3::new(1, 0, 0), IntVec3::new(2, 0, 0)), 0);
        for k in 1..=3 {
            for n in 1..=3 {
                assert_eq!(wedge_index(IntVec3::new(k, 0, 0), IntVec3::new(0, n * k, 0)), k * k * n);
            }
        }
    }

    #[test]
    fn wedge_symmetries() {
        let vs: Vec<IntVec3> =
            (-2..=2).flat_map(|a| (-2..=2).flat_map(move |b| (-1..=1).map(move |c| IntVec3::new(a, b, c)))).collect();
        for &a in &vs {
            for &b in vs.iter().step_by(7) {
                let w = wedge_index(a, b);
                assert_eq!(w, wedge_index(b, a));
                assert_eq!(w, wedge_index(a, -b));
                assert_eq!(w, wedge_index(a, b + a));
            }
        }
    }
}
