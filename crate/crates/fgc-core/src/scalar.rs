//! Exact base-ring scalars: arbitrary-precision integers and reduced
//! fractions.
//!
//! A [`Scalar`] is always tagged with the base ring it lives in, so that
//! elements of Z and Q never mix silently. `BigRational` keeps fractions
//! in lowest terms with a positive denominator, which is exactly the
//! canonical form the ring layer requires.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// The two supported base rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseRing {
    Integers,
    Rationals,
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Rationals => write!(f, "Q"),
        }
    }
}

/// An exact scalar in Z or Q.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
}

impl Scalar {
    pub fn zero(base: BaseRing) -> Self {
        match base {
            BaseRing::Integers => Scalar::Int(BigInt::zero()),
            BaseRing::Rationals => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(base: BaseRing) -> Self {
        match base {
            BaseRing::Integers => Scalar::Int(BigInt::one()),
            BaseRing::Rationals => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(base: BaseRing, n: i64) -> Self {
        match base {
            BaseRing::Integers => Scalar::Int(BigInt::from(n)),
            BaseRing::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    /// Fraction n/d. Only meaningful over Q; over Z the division must be exact.
    pub fn fraction(base: BaseRing, n: BigInt, d: BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        match base {
            BaseRing::Rationals => Ok(Scalar::Rat(BigRational::new(n, d))),
            BaseRing::Integers => {
                let (q, r) = num::Integer::div_rem(&n, &d);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(Error::Invalid(format!(
                        "fraction {}/{} is not an integer",
                        n, d
                    )))
                }
            }
        }
    }

    pub fn base(&self) -> BaseRing {
        match self {
            Scalar::Int(_) => BaseRing::Integers,
            Scalar::Rat(_) => BaseRing::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_zero(),
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_one(),
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Int(n) => n.is_negative(),
            Scalar::Rat(r) => r.is_negative(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("scalar base mismatch"),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("scalar base mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(a) => Scalar::Int(-a),
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }

    /// Multiplicative inverse within the base ring, if one exists
    /// (only ±1 over Z; any nonzero over Q).
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Int(a) => {
                if a.is_one() || (-a).is_one() {
                    Some(Scalar::Int(a.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(a.recip()))
                }
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.inverse().is_some()
    }

    /// Exact division: errors over Z when the quotient is not integral.
    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (_, d) if d.is_zero() => Err(Error::Invalid("division by zero".into())),
            (Scalar::Int(a), Scalar::Int(b)) => {
                let (q, r) = num::Integer::div_rem(a, b);
                if r.is_zero() {
                    Ok(Scalar::Int(q))
                } else {
                    Err(Error::Invalid(format!(
                        "non-exact division {} / {} over Z",
                        a, b
                    )))
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(a / b)),
            _ => panic!("scalar base mismatch"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{}", n),
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn int_units_are_plus_minus_one() {
        assert!(Scalar::from_i64(BaseRing::Integers, 1).is_unit());
        assert!(Scalar::from_i64(BaseRing::Integers, -1).is_unit());
        assert!(!Scalar::from_i64(BaseRing::Integers, 2).is_unit());
        assert!(!Scalar::from_i64(BaseRing::Integers, 0).is_unit());
    }

    #[test]
    fn rat_units_are_nonzero() {
        let x = Scalar::fraction(
            BaseRing::Rationals,
            BigInt::from(3),
            BigInt::from(4),
        )
        .unwrap();
        let inv = x.inverse().unwrap();
        assert!(x.mul(&inv).is_one());
        assert!(!Scalar::zero(BaseRing::Rationals).is_unit());
    }

    #[test]
    fn exact_division_over_z() {
        let six = Scalar::from_i64(BaseRing::Integers, 6);
        let two = Scalar::from_i64(BaseRing::Integers, 2);
        assert_eq!(six.try_div(&two).unwrap(), Scalar::from_i64(BaseRing::Integers, 3));
        let five = Scalar::from_i64(BaseRing::Integers, 5);
        assert!(five.try_div(&two).is_err());
    }

    #[test]
    fn display_reduced_fraction() {
        let x = Scalar::fraction(BaseRing::Rationals, BigInt::from(6), BigInt::from(-4)).unwrap();
        assert_eq!(x.to_string(), "-3/2");
        let y = Scalar::fraction(BaseRing::Rationals, BigInt::from(4), BigInt::from(2)).unwrap();
        assert_eq!(y.to_string(), "2");
    }
}
