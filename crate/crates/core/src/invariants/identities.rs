//! Closed forms for `[n]` and the identities they satisfy, used as oracles.

use num_integer::Integer;

use crate::enumerate::partitions;
use crate::exactnum::{factorial, rat, series_sin_half, LaurentSeries, NumError, QLaurent, Rational};
use crate::lattice::{wedge_index, IntVec3};
use crate::weights::bracket_q;

/// `[n]_λ = 2 sin(nλ/2)` through `λ^order`.
pub fn closed_form_n_lambda(n: i64, order: i64) -> Result<LaurentSeries, NumError> {
    Ok(series_sin_half(n, order)?.scale_rational(&Rational::from_integer(n.into())))
}

/// `[n] = i^{−(n+1)} q^{n/2} + i^{n+1} q^{−n/2}`.
pub fn closed_form_n_q(n: i64) -> Result<QLaurent, NumError> {
    if n <= 0 {
        return Err(NumError::NonPositive(n));
    }
    Ok(bracket_q(n))
}

/// `[1], …, [nmax]` solved forward from `[1] = 2 sin(λ/2)` with the odd and
/// even recursions. Division by `[2]` costs precision, so the start is
/// computed `slack` orders beyond `order`.
pub fn recursive_brackets(nmax: i64, order: i64) -> Result<Vec<LaurentSeries>, NumError> {
    let slack = 2 * nmax + 4;
    let work = order + slack;
    let one = closed_form_n_lambda(1, work)?;
    let one_sq = &one * &one;
    let mut b: Vec<LaurentSeries> = vec![LaurentSeries::zero(work), one.clone()];
    let int = |x: i64| Rational::from_integer(x.into());
    for n in 2..=nmax {
        let s = if n % 2 == 1 {
            // [2h+1] = (2h+1)[1] − [1] Σ_{k≤h} [k]²
            let h = n / 2;
            let sum = (1..=h).fold(LaurentSeries::zero(work), |acc, k| &acc + &(&b[k as usize] * &b[k as usize]));
            &one.scale_rational(&int(n)) - &(&one * &sum)
        } else if n == 2 {
            // [2]² = [1]²(4 − [1]²)
            let four = LaurentSeries::constant(int(4).into(), work);
            (&one_sq * &(&four - &one_sq)).sqrt()?
        } else {
            // [2h][2]/2 = [1]²(2h − [h]²/2 − Σ_{k<h} [k]²)
            let h = n / 2;
            let mut inner = LaurentSeries::constant(int(2 * h).into(), work);
            inner = &inner - &(&b[h as usize] * &b[h as usize]).scale_rational(&rat(1, 2));
            for k in 1..h {
                inner = &inner - &(&b[k as usize] * &b[k as usize]);
            }
            let rhs = (&one_sq * &inner).scale_rational(&int(2));
            rhs.checked_div(&b[2])?
        };
        b.push(s);
    }
    Ok(b.into_iter().skip(1).map(|s| s.truncate(order)).collect())
}

/// `n[1]² = Σ_{|μ|=n} Π[μ_i]² / (|Aut μ| Π μ_i)` through `λ^order`.
pub fn partition_identity_holds(n: i64, order: i64) -> Result<bool, NumError> {
    let work = order + 2;
    let one = closed_form_n_lambda(1, work)?;
    let lhs = (&one * &one).scale_rational(&Rational::from_integer(n.into()));
    let mut rhs = LaurentSeries::zero(work + 2 * n);
    for mu in partitions(n) {
        let mut term = LaurentSeries::one(work);
        for &m in &mu {
            let b = closed_form_n_lambda(m, work)?;
            term = &(&term * &b) * &b;
        }
        rhs = &rhs + &term.scale_rational(&(Rational::from_integer(1.into()) / partition_weight(&mu)));
    }
    Ok(lhs.agrees_to(&rhs, order))
}

/// `|Aut μ| Π μ_i`, the centralizer order of a permutation of cycle type μ.
pub fn partition_weight(mu: &[i64]) -> Rational {
    let mut aut = num_bigint::BigInt::from(1);
    let mut i = 0;
    while i < mu.len() {
        let j = (i..mu.len()).find(|&j| mu[j] != mu[i]).unwrap_or(mu.len());
        aut *= factorial((j - i) as u32);
        i = j;
    }
    let prod: i64 = mu.iter().product();
    Rational::from_integer(aut * prod)
}

pub fn lcm(mu: &[i64]) -> i64 {
    mu.iter().fold(1, |a, &b| a.lcm(&b))
}

/// `(1/LCM μ) Π [μ_i]²/μ_i`.
pub fn gamma_mu_closed_form(mu: &[i64], order: i64) -> Result<LaurentSeries, NumError> {
    let work = order + 2 * mu.len() as i64;
    let mut s = LaurentSeries::one(work);
    for &m in mu {
        let b = closed_form_n_lambda(m, work)?;
        s = (&(&s * &b) * &b).scale_rational(&rat(1, m));
    }
    Ok(s.scale_rational(&rat(1, lcm(mu))).truncate(order))
}

/// `[α∧β][(α+β)∧γ] = [β∧γ][(β+γ)∧α] + [α∧γ][(α+γ)∧β]` for a coplanar,
/// consistently oriented triple.
pub fn plucker_holds(a: IntVec3, b: IntVec3, c: IntVec3, order: i64) -> Result<bool, NumError> {
    let br = |x: IntVec3, y: IntVec3| -> Result<LaurentSeries, NumError> { closed_form_n_lambda(wedge_index(x, y), order + 2) };
    let lhs = &br(a, b)? * &br(a + b, c)?;
    let rhs = &(&br(b, c)? * &br(b + c, a)?) + &(&br(a, c)? * &br(a + c, b)?);
    Ok(lhs.agrees_to(&rhs, order))
}

/// The cross products `α∧β`, `α∧γ`, `β∧γ`, `(α+γ)∧β` are positive multiples
/// of one vector.
pub fn positively_oriented(a: IntVec3, b: IntVec3, c: IntVec3) -> bool {
    let ws = [a.cross(&b), a.cross(&c), b.cross(&c), (a + c).cross(&b)];
    if ws.iter().any(|w| w.is_zero()) {
        return false;
    }
    let r = ws[0];
    ws.iter().all(|w| w.cross(&r).is_zero() && w.dot(&r) > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::GaussRational;

    #[test]
    fn closed_forms_agree_under_substitution() {
        for n in 1..=12 {
            let img = closed_form_n_q(n).unwrap().substitute_lambda(20);
            assert!(img.real);
            assert_eq!(img.series, closed_form_n_lambda(n, 20).unwrap());
        }
    }

    #[test]
    fn small_q_forms() {
        let m1 = GaussRational::from(-1);
        assert_eq!(closed_form_n_q(1).unwrap(), QLaurent::from_terms([(1, m1.clone()), (-1, m1)]));
        assert!(closed_form_n_q(0).is_err());
    }

    #[test]
    fn recursion_reproduces_closed_form() {
        let b = recursive_brackets(8, 12).unwrap();
        for (i, s) in b.iter().enumerate() {
            assert_eq!(s, &closed_form_n_lambda(i as i64 + 1, 12).unwrap(), "n = {}", i + 1);
        }
    }

    #[test]
    fn partition_identity_small() {
        for n in 1..=5 {
            assert!(partition_identity_holds(n, 12).unwrap());
        }
    }

    #[test]
    fn plucker_on_oriented_triples() {
        let mut checked = 0;
        let vs: Vec<IntVec3> = (-2..=2).flat_map(|x| (-2..=2).map(move |y| IntVec3::new(x, y, 0))).collect();
        for &a in &vs {
            for &b in &vs {
                for &c in &vs {
                    if checked < 12 && positively_oriented(a, b, c) {
                        assert!(plucker_holds(a, b, c, 12).unwrap(), "{a} {b} {c}");
                        checked += 1;
                    }
                }
            }
        }
        assert_eq!(checked, 12);
    }
}
