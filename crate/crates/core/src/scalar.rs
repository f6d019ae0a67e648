//! Exact rational scalars.
//!
//! `BigRational` already normalizes to lowest terms with a positive
//! denominator, so equality on [`Scalar`] is structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Exact `base^exp` for a non-negative exponent.
pub fn pow(base: &Scalar, exp: usize) -> Scalar {
    let mut acc = one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Rational in the interchange format: decimal numerator and denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalDoc {
    pub num: String,
    #[serde(default = "default_den")]
    pub den: String,
}

fn default_den() -> String {
    "1".to_string()
}

impl RationalDoc {
    pub fn from_scalar(s: &Scalar) -> Self {
        RationalDoc { num: s.numer().to_string(), den: s.denom().to_string() }
    }

    pub fn to_scalar(&self) -> Result<Scalar> {
        let num: BigInt =
            self.num.trim().parse().map_err(|_| Error::Invalid(format!("bad numerator {:?}", self.num)))?;
        let den: BigInt =
            self.den.trim().parse().map_err(|_| Error::Invalid(format!("bad denominator {:?}", self.den)))?;
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Serializes a scalar as its exact `p/q` string.
pub fn ser_scalar<S: serde::Serializer>(s: &Scalar, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.serialize_str(&fmt_scalar(s))
}

pub fn ser_scalars<S: serde::Serializer>(v: &[Scalar], ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(v.iter().map(fmt_scalar))
}
