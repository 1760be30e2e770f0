//! JSON encodings for exact numbers. Big integers travel as decimal strings.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GaussRational, LaurentSeries, QLaurent, Rational};

pub(crate) fn rational_to_pair(q: &Rational) -> [String; 2] {
    [q.numer().to_string(), q.denom().to_string()]
}

pub(crate) fn pair_to_rational(p: &[String; 2]) -> Result<Rational, String> {
    let n: BigInt = p[0].parse().map_err(|e| format!("bad numerator {:?}: {e}", p[0]))?;
    let d: BigInt = p[1].parse().map_err(|e| format!("bad denominator {:?}: {e}", p[1]))?;
    if d == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(Rational::new(n, d))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum CoeffRepr {
    Real([String; 2]),
    Complex([[String; 2]; 2]),
}

impl From<&GaussRational> for CoeffRepr {
    fn from(c: &GaussRational) -> Self {
        if c.is_real() {
            CoeffRepr::Real(rational_to_pair(&c.re))
        } else {
            CoeffRepr::Complex([rational_to_pair(&c.re), rational_to_pair(&c.im)])
        }
    }
}

impl TryFrom<&CoeffRepr> for GaussRational {
    type Error = String;
    fn try_from(r: &CoeffRepr) -> Result<Self, String> {
        Ok(match r {
            CoeffRepr::Real(p) => GaussRational::real(pair_to_rational(p)?),
            CoeffRepr::Complex([a, b]) => GaussRational::new(pair_to_rational(a)?, pair_to_rational(b)?),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    lowest_exponent: i64,
    coefficients: Vec<CoeffRepr>,
    truncation_order: i64,
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            lowest_exponent: self.lowest_exponent().unwrap_or(self.truncation_order() + 1),
            coefficients: self.coefficients().iter().map(CoeffRepr::from).collect(),
            truncation_order: self.truncation_order(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        let coeffs = r
            .coefficients
            .iter()
            .map(GaussRational::try_from)
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(LaurentSeries::new(r.lowest_exponent, coeffs, r.truncation_order))
    }
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(i64, CoeffRepr)> = self.terms().map(|(h, c)| (h, CoeffRepr::from(c))).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<(i64, CoeffRepr)> = Vec::deserialize(d)?;
        let mut pairs = Vec::with_capacity(v.len());
        for (h, c) in &v {
            pairs.push((*h, GaussRational::try_from(c).map_err(D::Error::custom)?));
        }
        Ok(QLaurent::from_terms(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, series_sin_half};

    #[test]
    fn series_json_shape() {
        let s = series_sin_half(1, 3).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["lowest_exponent"], 1);
        assert_eq!(v["truncation_order"], 3);
        assert_eq!(v["coefficients"][2], serde_json::json!(["-1", "24"]));
        let back: LaurentSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn qlaurent_json_shape() {
        let p = QLaurent::from_terms([(2, GaussRational::new(rat(0, 1), rat(1, 2))), (-2, GaussRational::real(rat(3, 1)))]);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!([[-2, ["3", "1"]], [2, [["0", "1"], ["1", "2"]]]]));
        let back: QLaurent = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);
    }
}
