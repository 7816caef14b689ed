//! Exact complex rationals.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im*i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts reduced with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num / den` as a real rational. Panics if `den == 0`.
    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Sign used when printing a term: negative real, or purely imaginary
    /// with a negative imaginary part.
    pub(crate) fn is_negative_like(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.im.is_zero() && self.re.is_negative()
        }
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        if self.im.is_zero() && o.im.is_zero() {
            return ExactComplex::from_rational(&self.re * &o.re);
        }
        ExactComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn div(self, o: &ExactComplex) -> ExactComplex {
        self * &o.inv().expect("division by zero")
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: ExactComplex) -> ExactComplex {
        &self + &o
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: ExactComplex) -> ExactComplex {
        &self - &o
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: ExactComplex) -> ExactComplex {
        &self * &o
    }
}

impl Div for ExactComplex {
    type Output = ExactComplex;
    fn div(self, o: ExactComplex) -> ExactComplex {
        &self / &o
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, o: &ExactComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, o: &ExactComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, o: &ExactComplex) {
        *self = &*self * o;
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Prints in the polynomial grammar: `3/2`, `-i`, `2/3*i`, `(1/2-3*i)`.
impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = BigRational::one();
        let fmt_imag = |f: &mut fmt::Formatter<'_>, im: &BigRational| -> fmt::Result {
            if *im == one {
                f.write_str("i")
            } else if *im == -one.clone() {
                f.write_str("-i")
            } else {
                fmt_rational(im, f)?;
                f.write_str("*i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => fmt_imag(f, &self.im),
            (false, false) => {
                f.write_str("(")?;
                fmt_rational(&self.re, f)?;
                if self.im.is_positive() {
                    f.write_str("+")?;
                    fmt_imag(f, &self.im)?;
                } else {
                    f.write_str("-")?;
                    fmt_imag(f, &-self.im.clone())?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn field_ops() {
        let a = ExactComplex::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer(3.into()));
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, ExactComplex::one());
        assert_eq!(&ExactComplex::i() * &ExactComplex::i(), ExactComplex::from_int(-1));
        assert!(ExactComplex::zero().inv().is_none());
        assert_eq!(ExactComplex::from_frac(2, 4), ExactComplex::from_frac(-1, -2));
    }

    #[test]
    fn display() {
        assert_eq!(ExactComplex::from_frac(-3, 2).to_string(), "-3/2");
        assert_eq!(ExactComplex::i().to_string(), "i");
        assert_eq!((-ExactComplex::i()).to_string(), "-i");
        let z = &ExactComplex::from_frac(1, 2) - &(&ExactComplex::from_int(3) * &ExactComplex::i());
        assert_eq!(z.to_string(), "(1/2-3*i)");
    }
}
