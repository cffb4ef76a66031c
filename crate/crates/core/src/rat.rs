//! Arbitrary-precision rationals kept in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ArithError;

/// An exact rational number.
///
/// The wrapped value is always reduced with a positive denominator; every
/// constructor and arithmetic operation renormalizes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Self, ArithError> {
        if other.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// The integer value, if this rational is integral and fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Least common multiple of the denominators, and gcd of the numerators, of a
/// slice of rationals. Zeros are skipped; an all-zero slice gives `(1, 0)`.
pub fn denominator_lcm_and_numerator_gcd<'a>(
    values: impl IntoIterator<Item = &'a Rat>,
) -> (BigInt, BigInt) {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for v in values {
        if v.is_zero() {
            continue;
        }
        lcm = lcm.lcm(v.denom());
        gcd = gcd.gcd(v.numer());
    }
    (lcm, gcd)
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| {
            BigInt::from_str(t.trim()).map_err(|_| ArithError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => Rat::from_big(parse(n)?, parse(d)?),
            None => Ok(Rat::from_bigint(parse(s)?)),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_int(n as i64)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_bigint(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    /// Panics on division by zero; use [`Rat::checked_div`] when the divisor
    /// is not known to be nonzero.
    fn div(self, rhs: &Rat) -> Rat {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        (&self).div(&rhs)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = Rat::new(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.to_string(), "-3/2");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("12/8".parse::<Rat>().unwrap(), Rat::new(3, 2));
        assert_eq!("-7".parse::<Rat>().unwrap().to_string(), "-7");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("abc".parse::<Rat>().is_err());
    }

    #[test]
    fn json_strings() {
        let v: Vec<Rat> = serde_json::from_str(r#"["1/2","-3","4/6"]"#).unwrap();
        assert_eq!(v, vec![Rat::new(1, 2), Rat::from_int(-3), Rat::new(2, 3)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","-3","2/3"]"#);
    }

    #[test]
    fn checked_division() {
        assert!(Rat::one().checked_div(&Rat::zero()).is_err());
        assert_eq!(Rat::new(1, 3).pow(3), Rat::new(1, 27));
    }
}
