use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::Rational;

/// A number `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    /// `i^m` for any integer `m`.
    pub fn i_pow(m: i64) -> Self {
        match m.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self { re: &self.re * q, im: &self.im * q }
    }
}

impl From<Rational> for GaussRational {
    fn from(q: Rational) -> Self {
        Self::real(q)
    }
}

impl From<i64> for GaussRational {
    fn from(n: i64) -> Self {
        Self::real(super::int(n))
    }
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self::real(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::real(Rational::one())
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<'a> Sub<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn sub(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(&self.re * &o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Div for GaussRational {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        &self * &o.inv().expect("division by zero")
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "({} {} {}i)", self.re, sign, self.im.abs())
            }
        }
    }
}
