//! Scalar abstractions shared by the polynomial, operator and kernel code.
//!
//! Everything that manipulates coefficients is generic over [`Field`]. Exact
//! routines (elimination, rank, nullspace) additionally require
//! [`ExactField`], which is implemented for arbitrary-precision rationals and
//! for complex numbers with rational parts. Floating-point instantiations are
//! used for evaluation on boundary samples.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field used throughout the crate.
pub trait Field:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
}

impl<T> Field for T where
    T: Clone + PartialEq + Debug + Num + Neg<Output = T> + Send + Sync + 'static
{
}

/// A field whose arithmetic is exact, so `is_zero` is a decision and not a
/// tolerance test.
pub trait ExactField: Field {}

impl ExactField for BigRational {}
impl ExactField for Complex<BigRational> {}

/// Scalars that can be evaluated in double precision.
pub trait RealScalar: Field + ToPrimitive + Display {
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl RealScalar for BigRational {}
impl RealScalar for f64 {}

/// Scalars into which exact operator coefficients can be embedded.
pub trait FromRational: Field {
    fn from_rational(value: &BigRational) -> Self;
}

impl FromRational for BigRational {
    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }
}

impl FromRational for Complex<BigRational> {
    fn from_rational(value: &BigRational) -> Self {
        Complex::new(value.clone(), BigRational::zero())
    }
}

impl FromRational for f64 {
    fn from_rational(value: &BigRational) -> Self {
        value.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromRational for Complex<f64> {
    fn from_rational(value: &BigRational) -> Self {
        Complex::new(value.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Build a rational from a numerator/denominator pair.
pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

/// Parse `"p/q"`, `"p"`, or a decimal literal such as `"0.25"` into an exact
/// rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if text.contains('/') {
            return Err(Error::Parse(format!("malformed rational `{text}`")));
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| Error::Parse(format!("malformed rational `{text}`")))?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let value = BigRational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let value = BigRational::from_str(text)
        .map_err(|_| Error::Parse(format!("malformed rational `{text}`")))?;
    Ok(value)
}

/// Canonical `p/q` (or `p` for integers) rendering.
pub fn format_rational(value: &BigRational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Render a complex rational as `a+bi` with rational parts.
pub fn format_complex(value: &Complex<BigRational>) -> String {
    let re = &value.re;
    let im = &value.im;
    match (re.is_zero(), im.is_zero()) {
        (_, true) => format_rational(re),
        (true, false) => format!("{}i", format_imag(im)),
        (false, false) => {
            let sign = if im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", format_rational(re), sign, format_imag(&im.abs()))
        }
    }
}

fn format_imag(im: &BigRational) -> String {
    if im.is_one() {
        String::new()
    } else if *im == -BigRational::one() {
        "-".into()
    } else if im.is_integer() {
        format_rational(im)
    } else {
        format!("({})", format_rational(im))
    }
}

/// Serde adapter for rationals carried as `"p/q"` strings (integers and
/// decimal JSON numbers are accepted on input).
pub mod serde_rational {
    use super::*;
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl Visitor<'_> for RationalVisitor {
        type Value = BigRational;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a rational literal such as \"-3/2\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigRational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigRational, E> {
            Ok(int(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigRational, E> {
            Ok(BigRational::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<BigRational, E> {
            BigRational::from_float(v).ok_or_else(|| E::custom("non-finite number"))
        }
    }

    /// Same adapter for `Vec<BigRational>`.
    pub mod vec {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        #[serde(transparent)]
        struct Wrapped(#[serde(with = "super")] BigRational);

        pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let wrapped: Vec<_> = values.iter().cloned().map(Wrapped).collect();
            wrapped.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
            let wrapped = Vec::<Wrapped>::deserialize(d)?;
            Ok(wrapped.into_iter().map(|w| w.0).collect())
        }
    }
}

/// Deserialize a real parameter that may be given as a JSON number or as a
/// rational string.
pub mod serde_real {
    use super::*;
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(*value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        struct RealVisitor;
        impl Visitor<'_> for RealVisitor {
            type Value = f64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or a rational string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<f64, E> {
                parse_rational(v)
                    .map(|r| r.to_f64().unwrap_or(f64::NAN))
                    .map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<f64, E> {
                Ok(v)
            }
        }
        d.deserialize_any(RealVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_literals() {
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn formats_rationals_and_complex() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-7)), "-7");
        let z = Complex::new(int(1), int(-1));
        assert_eq!(format_complex(&z), "1-i");
        let w = Complex::new(BigRational::zero(), ratio(1, 2));
        assert_eq!(format_complex(&w), "(1/2)i");
    }
}
