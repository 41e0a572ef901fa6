//! Scalars that stay exact when their inputs are rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number used throughout for weights, turns and slacks.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"0.125"` or `"1.5e-3"` into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let exp: i32 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
        let scale = Q::from_integer(num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize));
        let m = parse_q(m)?;
        return Ok(if exp >= 0 { m * scale } else { m / scale });
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d: BigInt = d.trim().parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| Error::Parse(format!("bad decimal `{s}`")))?
        };
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal `{s}`")));
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part: BigInt = if frac.is_empty() { BigInt::zero() } else { frac.parse().unwrap() };
        let mag = Q::new(int_part.abs() * &den + frac_part, den);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    Ok(Q::from_integer(n))
}

pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A real number that is exact when it can be.
#[derive(Clone, Debug)]
pub enum Real {
    Exact(Q),
    Float(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Q::zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(x) => q_to_f64(x),
            Real::Float(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&Q> {
        match self {
            Real::Exact(x) => Some(x),
            Real::Float(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Exact(x) => x.is_positive(),
            Real::Float(x) => *x > 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(x) => x.is_zero(),
            Real::Float(x) => *x == 0.0,
        }
    }

    pub fn abs(&self) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(x.abs()),
            Real::Float(x) => Real::Float(x.abs()),
        }
    }

    pub fn scale(&self, k: &Q) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(x * k),
            Real::Float(x) => Real::Float(x * q_to_f64(k)),
        }
    }
}

impl From<Q> for Real {
    fn from(x: Q) -> Self {
        Real::Exact(x)
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Self {
        Real::Float(x)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(x) => write!(f, "{}", format_q(x)),
            Real::Float(x) => write!(f, "{x}"),
        }
    }
}

macro_rules! real_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: &'a Real) -> Real {
                match (self, rhs) {
                    (Real::Exact(a), Real::Exact(b)) => Real::Exact(a $op b),
                    _ => Real::Float(self.to_f64() $op rhs.to_f64()),
                }
            }
        }
        impl $tr for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self) $op (&rhs)
            }
        }
    };
}

real_binop!(Add, add, +);
real_binop!(Sub, sub, -);
real_binop!(Mul, mul, *);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(x) => Real::Exact(-x),
            Real::Float(x) => Real::Float(-x),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl std::iter::Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_q("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn mixed_arithmetic_degrades_to_float() {
        let a = Real::Exact(q(1, 2));
        let b = Real::Float(0.25);
        assert!(!(&a + &b).is_exact());
        assert!((&a + &a).is_exact());
        assert_eq!((&a * &a).exact().unwrap(), &q(1, 4));
    }
}
