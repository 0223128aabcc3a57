//! Serde adapters for exact values in JSON: big integers become JSON numbers
//! carrying every digit, rationals become `"p/q"` strings.

use std::fmt::Display;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

struct AsNumber<'a, T>(&'a T);

impl<T: Display> Serialize for AsNumber<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_json::Number::from_str(&self.0.to_string())
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

struct FromNumber<T>(T);

impl<'de, T: FromStr> Deserialize<'de> for FromNumber<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        let text = n.to_string();
        text.parse::<T>()
            .map(FromNumber)
            .map_err(|_| D::Error::custom(format!("not an integer: {text}")))
    }
}

pub mod int {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
        AsNumber(x).serialize(s)
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<T, D::Error> {
        Ok(FromNumber::<T>::deserialize(d)?.0)
    }
}

pub mod int_seq {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(AsNumber))
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<T>, D::Error> {
        Ok(Vec::<FromNumber<T>>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod int_table {
    use super::*;

    struct Row<'a, T>(&'a [T]);

    impl<T: Display> Serialize for Row<'_, T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.collect_seq(self.0.iter().map(AsNumber))
        }
    }

    pub fn serialize<T: Display, S: Serializer>(rows: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(rows.iter().map(|r| Row(r)))
    }

    pub fn deserialize<'de, T: FromStr, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<T>>, D::Error> {
        Ok(Vec::<Vec<FromNumber<T>>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}

pub mod rational {
    use num_rational::BigRational;

    use super::*;
    use crate::linalg::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

pub mod rational_seq {
    use num_rational::BigRational;

    use super::*;
    use crate::linalg::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}
