//! Coefficient fields: the rationals and prime fields.
//!
//! Coefficients are always stored as `BigRational`; over `𝔽ₚ` they are kept
//! as integers in `[0, p)`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

pub type Coef = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Prime field, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    /// Parses `q` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Field> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" || s == "qq" {
            return Ok(Field::Q);
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let p: u64 = rest.parse().map_err(|_| Error::InvalidInput(format!("bad prime in field '{s}'")))?;
            return Field::prime(p);
        }
        Err(Error::InvalidInput(format!("unknown field '{s}'")))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => *p,
        }
    }

    pub fn norm(&self, c: Coef) -> Coef {
        match self {
            Field::Q => c,
            Field::Fp(p) => {
                let p = BigInt::from(*p);
                let n = c.numer().mod_floor(&p);
                if c.denom().is_one() {
                    return BigRational::from_integer(n);
                }
                let d = c.denom().mod_floor(&p);
                assert!(!d.is_zero(), "denominator divisible by the characteristic");
                let inv = d.modpow(&(&p - 2u32), &p);
                BigRational::from_integer((n * inv).mod_floor(&p))
            }
        }
    }

    pub fn from_int(&self, v: i64) -> Coef {
        self.norm(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn add(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a + b)
    }

    pub fn sub(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a - b)
    }

    pub fn mul(&self, a: &Coef, b: &Coef) -> Coef {
        self.norm(a * b)
    }

    pub fn neg(&self, a: &Coef) -> Coef {
        self.norm(-a)
    }

    pub fn inv(&self, a: &Coef) -> Coef {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Q => a.recip(),
            Field::Fp(_) => self.norm(BigRational::new(BigInt::one(), a.numer().clone())),
        }
    }

    pub fn div(&self, a: &Coef, b: &Coef) -> Coef {
        self.mul(a, &self.inv(b))
    }

    /// Is the integer `n` invertible in the field?
    pub fn int_invertible(&self, n: &BigInt) -> bool {
        match self {
            Field::Q => !n.is_zero(),
            Field::Fp(p) => !n.mod_floor(&BigInt::from(*p)).is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let three = f.from_int(3);
        assert_eq!(f.mul(&three, &f.inv(&three)), f.from_int(1));
        assert_eq!(f.from_int(-1), f.from_int(6));
        assert!(Field::prime(9).is_err());
        assert_eq!(Field::parse("fp:32003").unwrap(), Field::Fp(32003));
        assert_eq!(Field::parse("q").unwrap(), Field::Q);
    }
}
