//! Exact rational scalars and vectors.

use std::fmt;
use std::ops::{Deref, Index};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-3/2"` or `"0"`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let text = text.trim();
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("invalid rational literal {text:?}"),
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::new(n, d))
        }
        None => Ok(Scalar::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

pub fn format_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// A point or direction in `Q^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vector(entries)
    }

    pub fn zero(rank: usize) -> Self {
        Vector(vec![Scalar::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&x| int(x)).collect())
    }

    pub fn from_bigints(entries: &[BigInt]) -> Self {
        Vector(entries.iter().cloned().map(Scalar::from_integer).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &[Scalar]) -> Scalar {
        dot(&self.0, other)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Vector(v)
    }

    /// Positive rescaling to a primitive integer vector. The zero vector is returned unchanged.
    pub fn primitive(&self) -> Vector {
        Vector(primitive(&self.0))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Integer entries, if every entry is integral.
    pub fn to_bigints(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.numer().clone()))
            .collect()
    }
}

impl Deref for Vector {
    type Target = [Scalar];
    fn deref(&self) -> &[Scalar] {
        &self.0
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(v: Vec<Scalar>) -> Self {
        Vector(v)
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_scalar(x))?;
        }
        f.write_str(")")
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Rescales `v` by a positive factor so that its entries are coprime integers.
pub fn primitive(v: &[Scalar]) -> Vec<Scalar> {
    if v.iter().all(Zero::is_zero) {
        return v.to_vec();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter()
        .map(|x| Scalar::from_integer(x / &g))
        .collect()
}

/// Sign of a scalar as -1, 0, 1.
pub fn sign(x: &Scalar) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_are_reduced() {
        let s = ratio(6, -4);
        assert_eq!(s.numer(), &BigInt::from(-3));
        assert_eq!(s.denom(), &BigInt::from(2));
        assert_eq!(ratio(1, 2) + ratio(1, 3), ratio(5, 6));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_scalar(" 7 ").unwrap(), int(7));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert_eq!(format_scalar(&ratio(4, 2)), "2");
        assert_eq!(format_scalar(&ratio(-1, 3)), "-1/3");
    }

    #[test]
    fn primitive_scaling() {
        let v = Vector::new(vec![ratio(1, 2), ratio(-3, 4), int(0)]);
        assert_eq!(v.primitive(), Vector::from_ints(&[2, -3, 0]));
        assert_eq!(Vector::from_ints(&[0, 0]).primitive(), Vector::from_ints(&[0, 0]));
        assert_eq!(Vector::from_ints(&[4, 6]).primitive(), Vector::from_ints(&[2, 3]));
    }
}
