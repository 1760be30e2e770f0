//! A deliberately naive exact power series used as an oracle. It shares no
//! code with the library's series type.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use tropgw::exactnum::LaurentSeries;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients of `λ^start, …, λ^order`.
#[derive(Clone, Debug)]
pub struct Oracle {
    pub start: i64,
    pub coeffs: Vec<Q>,
    pub order: i64,
}

/// Equal as truncated series, whatever the stored leading zeros.
impl PartialEq for Oracle {
    fn eq(&self, o: &Self) -> bool {
        self.order == o.order && (self.start.min(o.start)..=self.order).all(|e| self.coeff(e) == o.coeff(e))
    }
}

impl Oracle {
    pub fn monomial(c: Q, e: i64, order: i64) -> Self {
        let mut coeffs = vec![Q::zero(); (order - e + 1).max(0) as usize];
        if let Some(x) = coeffs.first_mut() {
            *x = c;
        }
        Self { start: e, coeffs, order }
    }

    pub fn coeff(&self, e: i64) -> Q {
        if e < self.start || e > self.order {
            return Q::zero();
        }
        self.coeffs[(e - self.start) as usize].clone()
    }

    /// `2 sin(nλ/2) = Σ_k (-1)^k 2 (n/2)^{2k+1} λ^{2k+1} / (2k+1)!`.
    pub fn bracket(n: i64, order: i64) -> Self {
        let mut coeffs = Vec::new();
        let half = q(n, 2);
        let mut fact = BigInt::one();
        let mut pow = Q::one();
        for j in 1..=order.max(1) {
            fact *= BigInt::from(j);
            pow = &pow * &half;
            if j > order {
                break;
            }
            if j % 2 == 1 {
                let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
                coeffs.push(&pow * Q::from_integer(BigInt::from(2 * sign)) / Q::from_integer(fact.clone()));
            } else {
                coeffs.push(Q::zero());
            }
        }
        Self { start: 1, coeffs, order }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let start = self.start + o.start;
        let order = (self.order + o.start).min(o.order + self.start);
        let mut coeffs = vec![Q::zero(); (order - start + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let e = start + (i + j) as i64;
                if e > order {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self { start, coeffs, order }
    }

    pub fn add(&self, o: &Self) -> Self {
        let start = self.start.min(o.start);
        let order = self.order.min(o.order);
        let coeffs = (start..=order).map(|e| self.coeff(e) + o.coeff(e)).collect();
        Self { start, coeffs, order }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { start: self.start + k, coeffs: self.coeffs.clone(), order: self.order + k }
    }

    pub fn truncate(&self, order: i64) -> Self {
        assert!(order <= self.order, "cannot extend precision");
        let coeffs = (self.start..=order).map(|e| self.coeff(e)).collect();
        Self { start: self.start, coeffs, order }
    }

    /// Exact agreement with a library series: same truncation order, same
    /// real coefficients, no imaginary parts.
    pub fn matches(&self, s: &LaurentSeries) -> bool {
        if s.truncation_order() != self.order {
            return false;
        }
        let mut seen = std::collections::BTreeMap::new();
        for (e, c) in s.terms() {
            if !c.im.is_zero() {
                return false;
            }
            seen.insert(e, c.re.clone());
        }
        let lo = self.start.min(seen.keys().next().copied().unwrap_or(self.start));
        (lo..=self.order).all(|e| seen.get(&e).cloned().unwrap_or_else(Q::zero) == self.coeff(e))
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(xs: &[i64]) -> i64 {
    xs.iter().fold(1, |a, &b| a / gcd(a, b) * b)
}

/// `(1/LCM μ) Π [μ_i]²/μ_i`.
pub fn gamma_mu_oracle(mu: &[i64], order: i64) -> Oracle {
    let mut s = Oracle::monomial(Q::one(), 0, order);
    for &m in mu {
        let b = Oracle::bracket(m, order);
        s = s.mul(&b).mul(&b).scale(&q(1, m));
    }
    s.scale(&q(1, lcm(mu))).truncate(order)
}

/// `Σ_{|μ|=n} Π[μ_i]² / (|Aut μ| Π μ_i)`.
pub fn partition_sum_oracle(n: i64, order: i64) -> Oracle {
    fn parts(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            parts(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    parts(n, n, &mut Vec::new(), &mut all);
    let mut total = Oracle::monomial(Q::zero(), 0, order);
    for mu in all {
        let mut term = Oracle::monomial(Q::one(), 0, order);
        let mut denom = BigInt::one();
        for &m in &mu {
            let b = Oracle::bracket(m, order);
            term = term.mul(&b).mul(&b);
            denom *= BigInt::from(m);
        }
        for m in 1..=n {
            let mult = mu.iter().filter(|&&x| x == m).count() as i64;
            for k in 1..=mult {
                denom *= BigInt::from(k);
            }
        }
        total = total.add(&term.scale(&Q::new(BigInt::one(), denom)));
    }
    total.truncate(order)
}
