//! Exact scalars: rational numbers, optionally extended by a Gaussian
//! imaginary part.  All arithmetic is exact; equality is decidable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// A Gaussian rational `re + im*i`.  Plain rationals have `im = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re^2 + im^2` as an exact rational.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sq();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Exact `n!` as a scalar.
    pub fn factorial(n: u64) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= BigInt::from(k);
        }
        Scalar::from_rational(BigRational::from_integer(acc))
    }

    /// Exact double factorial `n!! = n (n-2) (n-4) ...`.
    pub fn double_factorial(n: u64) -> Self {
        let mut acc = BigInt::one();
        let mut k = n;
        while k > 1 {
            acc *= BigInt::from(k);
            k -= 2;
        }
        Scalar::from_rational(BigRational::from_integer(acc))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{} i", fmt_rational(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}{} i", fmt_rational(&self.re), fmt_rational(&self.im))
        } else {
            write!(f, "{}+{} i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse scalar from {0:?}")]
pub struct ScalarParseError(pub String);

fn parse_rational(s: &str) -> Result<BigRational, ScalarParseError> {
    let s = s.trim();
    let err = || ScalarParseError(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let num = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(BigRational::new(num, den))
    } else {
        let num = BigInt::from_str(s).map_err(|_| err())?;
        Ok(BigRational::from_integer(num))
    }
}

impl FromStr for Scalar {
    type Err = ScalarParseError;

    /// Accepts "p/q", "n", and "p/q+r/s i" (also "p/q-r/s i", "r/s i").
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ScalarParseError(s.to_string());
        if let Some(im_part) = t.strip_suffix('i') {
            let im_part = im_part.trim_end();
            // Split at the last '+' or '-' that is not a leading sign.
            let bytes = im_part.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if bytes[k] == b'+' || bytes[k] == b'-' {
                    if bytes[k - 1] == b'/' {
                        continue;
                    }
                    split = Some(k);
                    break;
                }
            }
            match split {
                Some(k) => {
                    let re = parse_rational(&im_part[..k])?;
                    let sign = if bytes[k] == b'-' { -1 } else { 1 };
                    let rest = im_part[k + 1..].trim();
                    let im = if rest.is_empty() {
                        BigRational::one()
                    } else {
                        parse_rational(rest)?
                    };
                    let im = if sign < 0 { -im } else { im };
                    Ok(Scalar { re, im })
                }
                None => {
                    let body = im_part.trim();
                    let im = if body.is_empty() || body == "+" {
                        BigRational::one()
                    } else if body == "-" {
                        -BigRational::one()
                    } else {
                        parse_rational(body)?
                    };
                    Ok(Scalar { re: BigRational::zero(), im })
                }
            }
        } else {
            if t.is_empty() {
                return Err(err());
            }
            Ok(Scalar { re: parse_rational(t)?, im: BigRational::zero() })
        }
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let $a = self;
                let $b = rhs;
                $body
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $trait::$method(&self, &rhs)
            }
        }
        impl<'b> $trait<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                $trait::$method(&self, rhs)
            }
        }
    };
}

impl_binop!(Add, add, |a, b| Scalar { re: &a.re + &b.re, im: &a.im + &b.im });
impl_binop!(Sub, sub, |a, b| Scalar { re: &a.re - &b.re, im: &a.im - &b.im });
impl_binop!(Mul, mul, |a, b| Scalar {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl<'a, 'b> Div<&'b Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Sign of `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s: Scalar = "3/4".parse().unwrap();
        assert_eq!(s, Scalar::ratio(3, 4));
        let s: Scalar = "-2".parse().unwrap();
        assert_eq!(s, Scalar::from_int(-2));
        let s: Scalar = "1/2+1/3 i".parse().unwrap();
        assert_eq!(s.to_string(), "1/2+1/3 i");
        let s: Scalar = "1/2-1/3 i".parse().unwrap();
        assert_eq!(&s + &s.conj(), Scalar::from_int(1));
        let s: Scalar = "2 i".parse().unwrap();
        assert_eq!(&s * &s, Scalar::from_int(-4));
    }

    #[test]
    fn field_ops() {
        let a = Scalar::ratio(2, 3);
        let b: Scalar = "1+1 i".parse().unwrap();
        let prod = &a * &b;
        assert_eq!(&prod / &b, a);
        assert_eq!(&b * &b.inv().unwrap(), Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn factorials() {
        assert_eq!(Scalar::factorial(5), Scalar::from_int(120));
        assert_eq!(Scalar::double_factorial(5), Scalar::from_int(15));
        assert_eq!(Scalar::double_factorial(0), Scalar::one());
    }
}
