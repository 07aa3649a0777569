//! JSON encodings shared by the library and the CLI.
//!
//! Rationals are strings `"p/q"` (bare JSON integers are accepted on input),
//! matrices are row-major arrays of arrays, polynomials are
//! `{"vars": [...], "terms": [{"exp": [...], "coef": "p/q"}]}` objects.
//! Wherever a polynomial is expected, a string expression such as
//! `"2*t1 - c^2/3"` is accepted as well.

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::MultiPoly;
use crate::ring::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct RationalRepr(pub Rational);

impl Serialize for RationalRepr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RationalRepr;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RationalRepr, E> {
                parse_rational(v).map(RationalRepr).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RationalRepr, E> {
                Ok(RationalRepr(crate::ring::rat(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RationalRepr, E> {
                Ok(RationalRepr(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn rational_from_value(v: &Value) -> Result<Rational> {
    serde_json::from_value::<RationalRepr>(v.clone())
        .map(|r| r.0)
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn rational_to_value(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

/// Accepts a polynomial object, an expression string, or an integer.
pub fn poly_from_value(v: &Value) -> Result<MultiPoly> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(_) => rational_from_value(v).map(MultiPoly::constant),
        Value::Object(_) => serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string())),
        other => Err(Error::Parse(format!("expected a polynomial, found {other}"))),
    }
}

pub fn matrix_from_value(v: &Value) -> Result<Matrix<Rational>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(rational_from_value)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

pub fn matrix_to_value(m: &Matrix<Rational>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| rational_to_value(m.get(i, j))).collect()))
            .collect(),
    )
}

pub fn poly_matrix_to_value<R: crate::ring::Ring>(m: &Matrix<R>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(m.get(i, j).to_string())).collect()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{rat, ratio};
    use serde_json::json;

    #[test]
    fn rationals_accept_strings_and_integers() {
        assert_eq!(rational_from_value(&json!("3/6")).unwrap(), ratio(1, 2));
        assert_eq!(rational_from_value(&json!(-4)).unwrap(), rat(-4));
        assert!(rational_from_value(&json!(1.5)).is_err());
        assert_eq!(rational_to_value(&ratio(-2, 4)), json!("-1/2"));
    }

    #[test]
    fn matrices_round_trip() {
        let v = json!([[0, "1"], ["-1", 0]]);
        let m = matrix_from_value(&v).unwrap();
        assert_eq!(matrix_to_value(&m), json!([["0", "1"], ["-1", "0"]]));
        assert!(matrix_from_value(&json!([[1, 2], [3]])).is_err());
    }

    #[test]
    fn polys_from_any_literal() {
        assert_eq!(poly_from_value(&json!("c")).unwrap(), MultiPoly::var("c"));
        assert_eq!(poly_from_value(&json!(2)).unwrap(), MultiPoly::from(2));
        let obj = json!({"vars": ["x"], "terms": [{"exp": [2], "coef": 1}]});
        assert_eq!(poly_from_value(&obj).unwrap().to_string(), "x^2");
    }
}
