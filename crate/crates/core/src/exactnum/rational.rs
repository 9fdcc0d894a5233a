use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use dashu_base::Signed;
use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::Error;

/// Arbitrary-precision signed rational in canonical form.
///
/// The denominator is always positive and coprime to the numerator; zero is
/// `0/1`. Every constructor and operator re-establishes that form, so two
/// equal values always compare equal structurally.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rational(RBig);

impl Rational {
    pub const ZERO: Rational = Rational(RBig::ZERO);
    pub const ONE: Rational = Rational(RBig::ONE);

    /// Builds `numerator / denominator`, reducing to lowest terms.
    ///
    /// Panics if `denominator` is zero.
    pub fn new(numerator: impl Into<IBig>, denominator: impl Into<IBig>) -> Self {
        let den: IBig = denominator.into();
        assert!(den != IBig::ZERO, "zero denominator");
        Rational(RBig::from_parts_signed(numerator.into(), den))
    }

    pub fn from_integer(n: impl Into<IBig>) -> Self {
        Rational(RBig::from(n.into()))
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_int()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rational {
        Rational(dashu_base::Abs::abs(self.0.clone()))
    }

    /// The value as a non-negative machine integer, if it is one.
    pub fn to_nonneg_integer(&self) -> Option<u64> {
        if !self.is_integer() || self.is_negative() {
            return None;
        }
        u64::try_from(self.numerator()).ok()
    }

    /// Nearest `f64` (round-half-to-even). Magnitudes beyond the `f64`
    /// range saturate to infinity, tiny ones flush to zero.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    /// The exact value of a finite double.
    pub fn from_f64(x: f64) -> Option<Rational> {
        RBig::try_from(x).ok().map(Rational)
    }

    /// `self^exp` for a signed machine exponent. Panics on `0^negative`.
    pub fn pow(&self, exp: i64) -> Rational {
        let base = if exp < 0 {
            assert!(!self.is_zero(), "zero to a negative power");
            Rational::ONE / self
        } else {
            self.clone()
        };
        let e = exp.unsigned_abs() as usize;
        let (num, den) = base.0.into_parts();
        Rational(RBig::from_parts(num.pow(e), den.pow(e)))
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // a/b vs c/d with b, d > 0
        let lhs = self.numerator() * IBig::from(other.denominator().clone());
        let rhs = other.numerator() * IBig::from(self.denominator().clone());
        lhs.cmp(&rhs)
    }
}

impl From<RBig> for Rational {
    fn from(r: RBig) -> Self {
        Rational(r)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Rational {
            fn from(n: $t) -> Self {
                Rational(RBig::from(IBig::from(n)))
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, IBig, UBig);

/// Writes `p/q`, or just `p` when the denominator is one.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == &UBig::ONE {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal integers.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::Argument(format!("not a fraction: {s:?}"));
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num = IBig::from_str_radix(num.strip_prefix('+').unwrap_or(num), 10).map_err(|_| bad())?;
        let den = IBig::from_str_radix(den, 10).map_err(|_| bad())?;
        if den == IBig::ZERO {
            return Err(Error::Argument(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(num, den))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $atr:ident, $amethod:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $atr<Rational> for Rational {
            fn $amethod(&mut self, rhs: Rational) {
                (self.0).$amethod(rhs.0)
            }
        }
        impl $atr<&Rational> for Rational {
            fn $amethod(&mut self, rhs: &Rational) {
                (self.0).$amethod(&rhs.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Rational::new(6, -8);
        assert_eq!(x.numerator(), &IBig::from(-3));
        assert_eq!(x.denominator(), &UBig::from(4u8));
        let z = Rational::new(0, -7);
        assert_eq!(z.denominator(), &UBig::ONE);
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("17/36").to_string(), "17/36");
        assert_eq!(r("-7/12").to_string(), "-7/12");
        assert_eq!(r("4/2").to_string(), "2");
        assert_eq!(r(" +3 ").to_string(), "3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("0.5".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn arithmetic_and_order() {
        assert_eq!(r("1/2") + r("1/3"), r("5/6"));
        assert_eq!(r("1/2") - r("1/3"), r("1/6"));
        assert_eq!(&r("2/3") * &r("9/4"), r("3/2"));
        assert_eq!(r("2/3") / r("-4/9"), r("-3/2"));
        assert!(r("-1/2") < r("1/3"));
        assert!(r("7/8") > r("6/7"));
        assert_eq!(r("-2/3").pow(3), r("-8/27"));
        assert_eq!(r("2/3").pow(-2), r("9/4"));
    }

    #[test]
    fn float_conversion_rounds_to_nearest() {
        assert_eq!(r("1/3").to_f64(), 1.0 / 3.0);
        assert_eq!(r("22/7").to_f64(), 22.0 / 7.0);
        let huge = Rational::from(UBig::from(10u8).pow(400)) / Rational::from(UBig::from(10u8).pow(399));
        assert_eq!(huge.to_f64(), 10.0);
    }
}
