//! JSON exchange helpers: exact rationals as "p/q" strings, Gaussian
//! rationals as {"re","im"} objects, matrices as row-major nested arrays.

use serde_json::{json, Map, Value};

use crate::error::{CoreError, Result};
use crate::matrix::Matrix;
use crate::scalar::{parse_rational, GaussRational, Rational, Scalar};

pub fn rational_to_value(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(CoreError::Parse(format!(
                    "non-integer JSON number {n} is not an exact rational; use \"p/q\""
                )))
            }
        }
        other => Err(CoreError::Parse(format!("expected rational, got {other}"))),
    }
}

pub fn gauss_to_value(z: &GaussRational) -> Value {
    if z.is_real() {
        rational_to_value(&z.re)
    } else {
        json!({ "re": z.re.to_string(), "im": z.im.to_string() })
    }
}

pub fn gauss_from_value(v: &Value) -> Result<GaussRational> {
    match v {
        Value::Object(obj) => {
            let re = obj
                .get("re")
                .map(rational_from_value)
                .transpose()?
                .unwrap_or_else(<Rational as Scalar>::zero);
            let im = obj
                .get("im")
                .map(rational_from_value)
                .transpose()?
                .unwrap_or_else(<Rational as Scalar>::zero);
            Ok(GaussRational::new(re, im))
        }
        other => Ok(GaussRational::from_re(rational_from_value(other)?)),
    }
}

pub fn matrix_to_value<S: Scalar>(m: &Matrix<S>, entry: impl Fn(&S) -> Value) -> Value {
    Value::Array(
        m.rows()
            .map(|r| Value::Array(r.iter().map(&entry).collect()))
            .collect(),
    )
}

pub fn matrix_from_value<S: Scalar>(
    v: &Value,
    entry: impl Fn(&Value) -> Result<S>,
) -> Result<Matrix<S>> {
    let rows = v
        .as_array()
        .ok_or_else(|| CoreError::Parse("expected matrix (array of arrays)".into()))?;
    let mut data = Vec::new();
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| CoreError::Parse("expected matrix row (array)".into()))?;
        data.push(cells.iter().map(&entry).collect::<Result<Vec<S>>>()?);
    }
    if data.is_empty() {
        return Err(CoreError::Parse("empty matrix".into()));
    }
    let w = data[0].len();
    if data.iter().any(|r| r.len() != w) {
        return Err(CoreError::Parse("ragged matrix".into()));
    }
    Ok(Matrix::from_rows(data))
}

pub fn gauss_matrix_to_value(m: &Matrix<GaussRational>) -> Value {
    matrix_to_value(m, gauss_to_value)
}

pub fn gauss_matrix_from_value(v: &Value) -> Result<Matrix<GaussRational>> {
    matrix_from_value(v, gauss_from_value)
}

pub fn rational_matrix_to_value(m: &Matrix<Rational>) -> Value {
    matrix_to_value(m, rational_to_value)
}

pub fn rational_matrix_from_value(v: &Value) -> Result<Matrix<Rational>> {
    matrix_from_value(v, rational_from_value)
}

pub fn get<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| CoreError::Parse(format!("missing field {key:?}")))
}

pub fn get_i64(obj: &Value, key: &str) -> Result<i64> {
    get(obj, key)?
        .as_i64()
        .ok_or_else(|| CoreError::Parse(format!("field {key:?} must be an integer")))
}

pub fn get_str<'a>(obj: &'a Value, key: &str) -> Result<&'a str> {
    get(obj, key)?
        .as_str()
        .ok_or_else(|| CoreError::Parse(format!("field {key:?} must be a string")))
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, rat};

    #[test]
    fn rational_matrix_roundtrip() {
        let m = Matrix::<Rational>::from_i64(&[&[1, -2], &[0, 7]]);
        let v = rational_matrix_to_value(&m);
        assert_eq!(rational_matrix_from_value(&v).unwrap(), m);
    }

    #[test]
    fn gauss_roundtrip_and_plain_string() {
        let z = gauss(1, 2, -3, 4);
        let v = gauss_to_value(&z);
        assert_eq!(gauss_from_value(&v).unwrap(), z);
        let r: GaussRational = gauss_from_value(&Value::String("5/6".into())).unwrap();
        assert_eq!(r, GaussRational::from_re(rat(5, 6)));
    }
}
