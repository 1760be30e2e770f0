use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{factorial, rat, rational_sqrt, GaussRational, NumError, Rational};

/// Truncated Laurent series in λ with Gaussian-rational coefficients.
///
/// Coefficients are known for every exponent up to and including the
/// truncation order; nothing is claimed beyond it. The representation is
/// canonical: the first stored coefficient is nonzero, and the zero series
/// stores nothing (its `start` sits just above the truncation order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    start: i64,
    coeffs: Vec<GaussRational>,
    order: i64,
}

impl LaurentSeries {
    pub fn new(start: i64, coeffs: Vec<GaussRational>, order: i64) -> Self {
        let mut coeffs = coeffs;
        let known = (order - start + 1).max(0) as usize;
        coeffs.truncate(known);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(order),
            Some(k) => {
                coeffs.drain(..k);
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                Self { start: start + k as i64, coeffs, order }
            }
        }
    }

    pub fn from_rationals(start: i64, coeffs: Vec<Rational>, order: i64) -> Self {
        Self::new(start, coeffs.into_iter().map(GaussRational::real).collect(), order)
    }

    pub fn zero(order: i64) -> Self {
        Self { start: order + 1, coeffs: Vec::new(), order }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(GaussRational::one(), 0, order)
    }

    pub fn constant(c: GaussRational, order: i64) -> Self {
        Self::monomial(c, 0, order)
    }

    /// `c·λ^exp`, known to `order`.
    pub fn monomial(c: GaussRational, exp: i64, order: i64) -> Self {
        Self::new(exp, vec![c], order)
    }

    /// The series `λ` itself.
    pub fn lambda(order: i64) -> Self {
        Self::monomial(GaussRational::one(), 1, order)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the leading known nonzero coefficient.
    pub fn lowest_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }

    pub fn truncation_order(&self) -> i64 {
        self.order
    }

    pub fn leading_coefficient(&self) -> Option<&GaussRational> {
        self.coeffs.first()
    }

    pub fn coefficients(&self) -> &[GaussRational] {
        &self.coeffs
    }

    /// Coefficient of `λ^e`, or `None` if `e` lies beyond the truncation order.
    pub fn coeff(&self, e: i64) -> Option<GaussRational> {
        if e > self.order {
            return None;
        }
        if e < self.start {
            return Some(GaussRational::zero());
        }
        Some(self.coeffs.get((e - self.start) as usize).cloned().unwrap_or_default())
    }

    /// Iterate `(exponent, coefficient)` over the stored range.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussRational)> + '_ {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.start + k as i64, c))
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.start, self.coeffs.clone(), order.min(self.order))
    }

    /// Multiply by `λ^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { start: self.start + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    pub fn scale(&self, c: &GaussRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        Self { start: self.start, coeffs: self.coeffs.iter().map(|x| x * c).collect(), order: self.order }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&GaussRational::real(q.clone()))
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussRational::is_real)
    }

    pub fn real_part(&self) -> Self {
        self.map(|c| GaussRational::real(c.re.clone()))
    }

    pub fn imag_part(&self) -> Self {
        self.map(|c| GaussRational::real(c.im.clone()))
    }

    fn map(&self, f: impl Fn(&GaussRational) -> GaussRational) -> Self {
        Self::new(self.start, self.coeffs.iter().map(f).collect(), self.order)
    }

    /// True when both series are known through `order` and agree there.
    pub fn agrees_to(&self, other: &Self, order: i64) -> bool {
        if self.order < order || other.order < order {
            return false;
        }
        let lo = self.start.min(other.start);
        (lo..=order).all(|e| self.coeff(e) == other.coeff(e))
    }

    pub fn inverse(&self) -> Result<Self, NumError> {
        let lead = self.leading_coefficient().ok_or(NumError::ZeroDivisor)?;
        let lead_inv = lead.inv().ok_or(NumError::ZeroDivisor)?;
        let v = self.start;
        let rel = self.order - v;
        let mut out: Vec<GaussRational> = Vec::with_capacity(rel as usize + 1);
        out.push(lead_inv.clone());
        for n in 1..=rel as usize {
            let mut acc = GaussRational::zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                acc += &(&self.coeffs[k] * &out[n - k]);
            }
            out.push(-(&acc * &lead_inv));
        }
        Ok(Self::new(-v, out, -v + rel))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, NumError> {
        Ok(self * &other.inverse()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.order - self.start);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = &acc * self;
        }
        acc
    }

    /// Square root whose leading coefficient is the positive rational root.
    pub fn sqrt(&self) -> Result<Self, NumError> {
        let lead = self.leading_coefficient().ok_or(NumError::NotASquare)?;
        if !lead.is_real() || self.start % 2 != 0 {
            return Err(NumError::NotASquare);
        }
        let s0 = rational_sqrt(&lead.re).filter(|s| s.is_positive()).ok_or(NumError::NotASquare)?;
        let s0 = GaussRational::real(s0);
        let two_s0_inv = (&s0 * &GaussRational::from(2)).inv().expect("nonzero");
        let rel = (self.order - self.start) as usize;
        let mut out = vec![s0];
        for n in 1..=rel {
            let mut acc = self.coeffs.get(n).cloned().unwrap_or_default();
            for k in 1..n {
                acc = &acc - &(&out[k] * &out[n - k]);
            }
            out.push(&acc * &two_s0_inv);
        }
        let half = self.start / 2;
        Ok(Self::new(half, out, half + rel as i64))
    }
}

impl<'a> Add<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, o: &LaurentSeries) -> LaurentSeries {
        let order = self.order.min(o.order);
        let lo = self.start.min(o.start);
        if lo > order {
            return LaurentSeries::zero(order);
        }
        let coeffs = (lo..=order)
            .map(|e| self.coeff(e).unwrap() + o.coeff(e).unwrap())
            .collect();
        LaurentSeries::new(lo, coeffs, order)
    }
}

impl<'a> Sub<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, o: &LaurentSeries) -> LaurentSeries {
        self + &(-o)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.map(|c| -c.clone())
    }
}

impl<'a> Mul<&'a LaurentSeries> for &'a LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, o: &LaurentSeries) -> LaurentSeries {
        let order = (self.order.saturating_add(o.start)).min(o.order.saturating_add(self.start));
        if self.is_zero() || o.is_zero() {
            return LaurentSeries::zero(order);
        }
        let start = self.start + o.start;
        let len = (order - start + 1).max(0) as usize;
        let mut out = vec![GaussRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                out[i + j] += &(a * b);
            }
        }
        LaurentSeries::new(start, out, order)
    }
}

impl Add for LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Sub for LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl Mul for LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> Self {
        -&self
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·λ")?,
                _ => write!(f, "{c}·λ^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(λ^{})", self.order + 1)
    }
}

/// `2·sin(nλ/2)/n` as a λ-series known through `order`.
pub fn series_sin_half(n: i64, order: i64) -> Result<LaurentSeries, NumError> {
    if n <= 0 {
        return Err(NumError::NonPositive(n));
    }
    if order < 1 {
        return Err(NumError::NonPositive(order));
    }
    let half = rat(n, 2);
    let half_sq = &half * &half;
    let mut coeffs = Vec::new();
    let mut pow = Rational::one();
    let mut j: u32 = 0;
    while (2 * j + 1) as i64 <= order {
        if j > 0 {
            coeffs.push(Rational::zero());
        }
        let sign = if j.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let denom = Rational::from_integer(factorial(2 * j + 1));
        coeffs.push(sign * &pow / denom);
        pow = &pow * &half_sq;
        j += 1;
    }
    Ok(LaurentSeries::from_rationals(1, coeffs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    fn real(n: i64, d: i64) -> GaussRational {
        GaussRational::real(rat(n, d))
    }

    #[test]
    fn sin_half_n1() {
        let s = series_sin_half(1, 5).unwrap();
        let want = LaurentSeries::new(1, vec![real(1, 1), real(0, 1), real(-1, 24), real(0, 1), real(1, 1920)], 5);
        assert_eq!(s, want);
    }

    #[test]
    fn sin_half_n2_is_sin() {
        let s = series_sin_half(2, 3).unwrap();
        let want = LaurentSeries::new(1, vec![real(1, 1), real(0, 1), real(-1, 6)], 3);
        assert_eq!(s, want);
    }

    #[test]
    fn sin_half_rejects_nonpositive() {
        assert_eq!(series_sin_half(0, 5), Err(NumError::NonPositive(0)));
        assert!(series_sin_half(-3, 5).is_err());
    }

    #[test]
    fn leading_term_is_lambda() {
        for n in 1..=12 {
            let s = series_sin_half(n, 9).unwrap();
            assert_eq!(s.lowest_exponent(), Some(1));
            assert_eq!(s.leading_coefficient(), Some(&GaussRational::one()));
        }
    }

    #[test]
    fn lambda_times_inverse() {
        let l = LaurentSeries::lambda(10);
        let p = &l * &l.inverse().unwrap();
        assert_eq!(p.lowest_exponent(), Some(0));
        assert!(p.agrees_to(&LaurentSeries::one(5), 5));
    }

    #[test]
    fn square_by_convolution() {
        // (λ − λ³/24 + O(λ⁵))² = λ² − λ⁴/12 + O(λ⁶)
        let a = LaurentSeries::new(1, vec![real(1, 1), real(0, 1), real(-1, 24)], 4);
        let sq = &a * &a;
        assert_eq!(sq.truncation_order(), 5);
        assert_eq!(sq.coeff(2), Some(real(1, 1)));
        assert_eq!(sq.coeff(3), Some(real(0, 1)));
        assert_eq!(sq.coeff(4), Some(real(-1, 12)));
        assert_eq!(sq.coeff(5), Some(real(0, 1)));
        assert_eq!(sq.coeff(6), None);
    }

    #[test]
    fn zero_absorbs() {
        let z = LaurentSeries::zero(6);
        let s = series_sin_half(3, 9).unwrap();
        let p = &z * &s;
        assert!(p.is_zero());
        assert_eq!(p.truncation_order(), 7);
    }

    #[test]
    fn division_by_zero_series() {
        let z = LaurentSeries::zero(4);
        assert_eq!(LaurentSeries::one(4).checked_div(&z), Err(NumError::ZeroDivisor));
    }

    #[test]
    fn division_tracks_precision() {
        let s = series_sin_half(1, 11).unwrap();
        let q = LaurentSeries::one(11).checked_div(&s).unwrap();
        assert_eq!(q.lowest_exponent(), Some(-1));
        assert_eq!(q.truncation_order(), 9);
        let back = &q * &s;
        assert!(back.agrees_to(&LaurentSeries::one(8), 8));
    }

    #[test]
    fn sqrt_of_square() {
        let s = series_sin_half(3, 15).unwrap().scale_rational(&int(3));
        let sq = &s * &s;
        let r = sq.sqrt().unwrap();
        assert!(r.agrees_to(&s, r.truncation_order()));
        assert!(r.truncation_order() >= 15);
        assert_eq!(LaurentSeries::lambda(4).sqrt(), Err(NumError::NotASquare));
    }
}
