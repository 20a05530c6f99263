use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Field elements. Over a prime field the value is kept as an integer in `[0, p)`.
pub type Scalar = BigRational;

/// Coefficient field of a polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseField {
    Rationals,
    Prime(u32),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let p = p as u64;
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    pub fn prime(p: u32) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not a prime below 2^31")));
        }
        Ok(BaseField::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce_int(BigInt::from(v))
    }

    fn reduce_int(&self, v: BigInt) -> Scalar {
        match self {
            BaseField::Rationals => Scalar::from_integer(v),
            BaseField::Prime(p) => Scalar::from_integer(v.mod_floor(&BigInt::from(*p))),
        }
    }

    /// Maps an arbitrary rational into the field. Fails when the denominator
    /// vanishes modulo the characteristic.
    pub fn from_rational(&self, v: &BigRational) -> Result<Scalar> {
        match self {
            BaseField::Rationals => Ok(v.clone()),
            BaseField::Prime(p) => {
                let pb = BigInt::from(*p);
                let den = v.denom().mod_floor(&pb);
                if den.is_zero() {
                    return Err(Error::Invalid(format!("denominator {} vanishes mod {p}", v.denom())));
                }
                let num = v.numer().mod_floor(&pb);
                let inv = mod_inverse(den.to_u64().unwrap_or(0), *p as u64);
                Ok(self.reduce_int(num * BigInt::from(inv)))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a + b,
            BaseField::Prime(_) => self.reduce_int(a.numer() + b.numer()),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a - b,
            BaseField::Prime(_) => self.reduce_int(a.numer() - b.numer()),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => a * b,
            BaseField::Prime(_) => self.reduce_int(a.numer() * b.numer()),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match self {
            BaseField::Rationals => -a,
            BaseField::Prime(_) => self.reduce_int(-a.numer()),
        }
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        debug_assert!(!a.is_zero());
        match self {
            BaseField::Rationals => a.recip(),
            BaseField::Prime(p) => {
                let v = a.numer().to_u64().unwrap_or(0);
                Scalar::from_integer(BigInt::from(mod_inverse(v, *p as u64)))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        a.is_one()
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "QQ"),
            BaseField::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Formats a scalar the way the textual polynomial syntax expects it.
pub(crate) fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn scalar_is_negative(c: &Scalar) -> bool {
    c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = BaseField::prime(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(f.add(&a, &b), f.from_i64(2));
        assert_eq!(f.mul(&a, &b), f.from_i64(6));
        assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        assert_eq!(f.neg(&a), f.from_i64(2));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), f.from_i64(4));
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(BaseField::prime(9).is_err());
        assert!(BaseField::prime(1).is_err());
        assert!(BaseField::prime(2_147_483_647).is_ok());
        assert!(BaseField::prime(u32::MAX).is_err());
    }

    #[test]
    fn denominator_divisible_by_p_is_rejected() {
        let f = BaseField::prime(5).unwrap();
        let r = BigRational::new(1.into(), 10.into());
        assert!(f.from_rational(&r).is_err());
    }
}
