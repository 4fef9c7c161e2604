//! Exact rational values and their `"num/den"` string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Result, WsatError};

/// Reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn from_u128(value: u128) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

/// Formats as `num/den`, always with an explicit denominator.
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || WsatError::Parse(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Smallest integer not below `value`.
pub fn ceil_i64(value: &Rational) -> i64 {
    value.ceil().to_integer().to_i64().expect("ceil out of i64 range")
}

pub fn to_f64(value: &Rational) -> f64 {
    value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_integer(value: &Rational) -> bool {
    value.denom().is_one()
}

pub fn max_zero(value: &Rational) -> Rational {
    if value.is_negative() {
        Rational::zero()
    } else {
        value.clone()
    }
}

/// Least common multiple of all denominators.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    use num_integer::Integer;
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(value))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let text = String::deserialize(d)?;
    parse(&text).map_err(serde::de::Error::custom)
}

/// Serde adapter for `Vec<Rational>` as a list of `num/den` strings.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(
        values: &[Rational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Option<Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Rational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("8/3").unwrap(), ratio(8, 3));
        assert_eq!(parse("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(format(&ratio(4, -2)), "-2/1");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [ratio(8, 3), ratio(1, 2), int(4)];
        assert_eq!(denominator_lcm(v.iter()), BigInt::from(6));
    }

    #[test]
    fn ceil_values() {
        assert_eq!(ceil_i64(&ratio(43, 3)), 15);
        assert_eq!(ceil_i64(&ratio(-1, 2)), 0);
        assert_eq!(ceil_i64(&int(9)), 9);
    }
}
