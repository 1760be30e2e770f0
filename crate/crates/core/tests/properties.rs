//! Property tests for algebraic invariants of the exact types and weights.

use num_bigint::BigInt;
use proptest::prelude::*;

use tropgw::enumerate::EnumBounds;
use tropgw::exactnum::{rat, series_sin_half, GaussRational, LaurentSeries, QLaurent};
use tropgw::invariants::identities::closed_form_n_lambda;
use tropgw::lattice::{lattice_index, wedge_index, IntMatrix, IntVec3};
use tropgw::tropcurve::build::gamma_mu;
use tropgw::tropcurve::TropicalType;
use tropgw::weights::{bracket_q, f_general, Mode};

const ORDER: i64 = 8;

fn series() -> impl Strategy<Value = LaurentSeries> {
    (-2i64..=2, prop::collection::vec((-20i64..=20, 1i64..=6), 1..8)).prop_map(|(start, cs)| {
        let coeffs = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
        LaurentSeries::from_rationals(start, coeffs, ORDER)
    })
}

fn qpoly() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-6i64..=6, -5i64..=5, -5i64..=5, 1i64..=4), 0..5).prop_map(|ts| {
        QLaurent::from_terms(ts.into_iter().map(|(h, re, im, d)| (h, GaussRational::new(rat(re, d), rat(im, d)))))
    })
}

fn agree(a: &LaurentSeries, b: &LaurentSeries) -> bool {
    a.agrees_to(b, a.truncation_order().min(b.truncation_order()))
}

/// Product of elementary integer matrices; determinant ±1.
fn unimodular() -> impl Strategy<Value = [[i64; 3]; 3]> {
    prop::collection::vec((0usize..3, 0usize..3, -2i64..=2, any::<bool>()), 0..6).prop_map(|ops| {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (i, j, k, neg) in ops {
            if i != j {
                let row = m[j];
                for (x, y) in m[i].iter_mut().zip(row) {
                    *x += k * y;
                }
            }
            if neg {
                m[i] = m[i].map(|x| -x);
            }
        }
        m
    })
}

fn small_vec() -> impl Strategy<Value = IntVec3> {
    (-3i64..=3, -3i64..=3, -3i64..=3).prop_map(|(a, b, c)| IntVec3::new(a, b, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&(&a + &b), &(&b + &a)));
        prop_assert!(agree(&(&a * &b), &(&b * &a)));
        prop_assert!(agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(agree(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn series_inverse(a in series()) {
        prop_assume!(!a.is_zero());
        let inv = a.inverse().unwrap();
        let one = &a * &inv;
        prop_assert!(agree(&one, &LaurentSeries::one(ORDER)));
    }

    #[test]
    fn substitution_is_multiplicative(p in qpoly(), r in qpoly()) {
        let lhs = (&p * &r).substitute_lambda(ORDER).series;
        let rhs = &p.substitute_lambda(ORDER).series * &r.substitute_lambda(ORDER).series;
        prop_assert!(lhs.agrees_to(&rhs, ORDER));
    }

    #[test]
    fn bracket_substitution(n in 1i64..=12) {
        let img = bracket_q(n).substitute_lambda(20);
        prop_assert!(img.real);
        prop_assert_eq!(img.series, closed_form_n_lambda(n, 20).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vertex_weight_is_unimodular_invariant(a in small_vec(), b in small_vec(), m in unimodular(), q_mode in any::<bool>()) {
        prop_assume!(wedge_index(a, b) != 0);
        let t = TropicalType::star(&[a, b, -(a + b)]);
        let mode = if q_mode { Mode::Q } else { Mode::Lambda };
        let bounds = EnumBounds::default();
        let w1 = f_general(&t, 12, mode, 0, &bounds, 8).unwrap();
        let w2 = f_general(&t.transform(&m), 12, mode, 0, &bounds, 8).unwrap();
        prop_assert_eq!(&w1, &w2);
        if !q_mode {
            prop_assert_eq!(w1.as_lambda().unwrap(), &series_sin_half(wedge_index(a, b), 12).unwrap());
        }
    }

    #[test]
    fn weight_ignores_edge_orientation(mu in prop::collection::vec(1i64..=3, 1..=3), flips in prop::collection::vec(any::<bool>(), 3), seed in 0u64..1000) {
        let mut mu = mu;
        mu.sort_unstable_by(|a, b| b.cmp(a));
        let t = gamma_mu(&mu);
        let mut flipped = t.clone();
        for (i, &f) in flips.iter().enumerate().take(mu.len()) {
            if f {
                flipped = flipped.flip_edge(i);
            }
        }
        let bounds = EnumBounds::default();
        let a = f_general(&t, 10, Mode::Lambda, seed, &bounds, 8).unwrap();
        let b = f_general(&flipped, 10, Mode::Lambda, seed.wrapping_add(1), &bounds, 8).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lattice_index_is_invariant_under_column_operations(
        entries in prop::collection::vec(-3i64..=3, 12),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        let m = IntMatrix::from_rows(&rows, 4);
        let mut u = IntMatrix::identity(4);
        for (i, j, k) in ops {
            if i != j {
                for r in 0..4 {
                    let x = u.get(r, i) + BigInt::from(k) * u.get(r, j);
                    u.set(r, i, x);
                }
            }
        }
        prop_assert_eq!(lattice_index(&m), lattice_index(&m.mul(&u)));
    }
}
