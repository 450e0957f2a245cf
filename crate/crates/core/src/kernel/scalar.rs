use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact integer or rational value, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactScalar(BigRational);

impl ExactScalar {
    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactScalar(BigRational::from_integer(n.into()))
    }

    /// Builds `num / den`. Panics if `den` is zero.
    pub fn from_fraction(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        ExactScalar(BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        ExactScalar(r)
    }

    pub fn zero() -> Self {
        ExactScalar(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Integer value, if the denominator is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    /// Value as `u64` when it is a non-negative integer that fits.
    pub fn to_u64(&self) -> Option<u64> {
        if !self.is_integer() {
            return None;
        }
        let (sign, digits) = self.0.numer().to_u64_digits();
        match (sign, digits.as_slice()) {
            (Sign::NoSign, []) => Some(0),
            (Sign::Plus, [d]) => Some(*d),
            _ => None,
        }
    }

    /// Upper bound on `|log2(self)|`, used for exact-path budget estimates.
    pub fn log2_bound(&self) -> u64 {
        self.0.numer().bits().max(self.0.denom().bits())
    }

    /// `self^e` exactly.
    pub fn pow(&self, e: u64) -> ExactScalar {
        ExactScalar(BigRational::new_raw(
            big_pow(self.0.numer(), e),
            big_pow(self.0.denom(), e),
        ))
    }

    /// Returns `(n, d)` with `self = n / d`, `d > 0`, `gcd(n, d) = 1`.
    pub fn parts(&self) -> (&BigInt, &BigInt) {
        (self.0.numer(), self.0.denom())
    }

    pub fn gcd_is_one(&self) -> bool {
        self.0.numer().gcd(self.0.denom()).is_one()
    }

    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn big_pow(base: &BigInt, e: u64) -> BigInt {
    num_traits::pow::Pow::pow(base, e)
}

impl From<u64> for ExactScalar {
    fn from(v: u64) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<u32> for ExactScalar {
    fn from(v: u32) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<i32> for ExactScalar {
    fn from(v: i32) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<BigInt> for ExactScalar {
    fn from(v: BigInt) -> Self {
        ExactScalar::from_integer(v)
    }
}

impl From<num_bigint::BigUint> for ExactScalar {
    fn from(v: num_bigint::BigUint) -> Self {
        ExactScalar::from_integer(BigInt::from(v))
    }
}

impl From<BigRational> for ExactScalar {
    fn from(v: BigRational) -> Self {
        ExactScalar(v)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_integer() && rhs.is_integer() {
            return ExactScalar::from_integer(self.numer() + rhs.numer());
        }
        ExactScalar(&self.0 + &rhs.0)
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        if self.is_integer() && rhs.is_integer() {
            let sum = self.numer() + rhs.numer();
            self.0 = BigRational::from_integer(sum);
        } else {
            self.0 += &rhs.0;
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar(&self.0 * &rhs.0)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}
