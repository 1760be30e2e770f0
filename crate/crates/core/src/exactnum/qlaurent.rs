use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{factorial, rat, GaussRational, LaurentSeries, Rational};

/// Laurent polynomial in `q^{1/2}` with Gaussian-rational coefficients.
///
/// Keys are exponents measured in units of one half, so `q^{3/2}` is stored
/// under `3` and `q^{-1}` under `-2`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, GaussRational>,
}

/// Result of substituting `q^{1/2} = i·e^{iλ/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaImage {
    pub series: LaurentSeries,
    /// False if some coefficient through the truncation order kept a nonzero
    /// imaginary part.
    pub real: bool,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(GaussRational::one(), 0)
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·q^{half_exponent/2}`.
    pub fn monomial(c: GaussRational, half_exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exponent, c);
        }
        Self { terms }
    }

    pub fn from_terms(pairs: impl IntoIterator<Item = (i64, GaussRational)>) -> Self {
        let mut out = Self::zero();
        for (h, c) in pairs {
            out.add_term(h, &c);
        }
        out
    }

    fn add_term(&mut self, h: i64, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(h).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&h);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRational)> + '_ {
        self.terms.iter().map(|(h, c)| (*h, c))
    }

    pub fn coeff(&self, half_exponent: i64) -> GaussRational {
        self.terms.get(&half_exponent).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(h, x)| (*h, x * c)))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&GaussRational::real(q.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitute `q^{1/2} = i·e^{iλ/2}` and expand through `λ^order`.
    pub fn substitute_lambda(&self, order: i64) -> LambdaImage {
        let order = order.max(0);
        let mut coeffs = vec![GaussRational::zero(); order as usize + 1];
        for (&m, c) in &self.terms {
            // c·i^m·e^{imλ/2} = c·i^m·Σ_j i^j (m/2)^j λ^j / j!
            let base = c * &GaussRational::i_pow(m);
            let half_m = rat(m, 2);
            let mut p = Rational::one();
            for (j, slot) in coeffs.iter_mut().enumerate() {
                let term = GaussRational::i_pow(j as i64)
                    .scale(&(&p / Rational::from_integer(factorial(j as u32))));
                *slot += &(&base * &term);
                p = &p * &half_m;
            }
        }
        let real = coeffs.iter().all(GaussRational::is_real);
        LambdaImage { series: LaurentSeries::new(0, coeffs, order), real }
    }
}

impl<'a> Add<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn add(self, o: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (h, c) in &o.terms {
            out.add_term(*h, c);
        }
        out
    }
}

impl<'a> Sub<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn sub(self, o: &QLaurent) -> QLaurent {
        self + &(-o)
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { terms: self.terms.iter().map(|(h, c)| (*h, -c.clone())).collect() }
    }
}

impl<'a> Mul<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn mul(self, o: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (h1, c1) in &self.terms {
            for (h2, c2) in &o.terms {
                out.add_term(h1 + h2, &(c1 * c2));
            }
        }
        out
    }
}

impl Add for QLaurent {
    type Output = QLaurent;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Mul for QLaurent {
    type Output = QLaurent;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (h, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (h % 2 == 0, *h) {
                (_, 0) => write!(f, "{c}")?,
                (true, _) => write!(f, "{c}·q^{}", h / 2)?,
                (false, _) => write!(f, "{c}·q^({h}/2)")?,
            }
        }
        Ok(())
    }
}
