//! Coefficient fields.
//!
//! Everything in the polynomial, vector-field, and linear-algebra layers is
//! generic over [`Scalar`]. The engine itself runs over [`Rational`]; the
//! prime field [`Zp`] exists for cheap cross-checks of ranks.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, NumRef, One, Signed, Zero};

/// Exact rational numbers, always reduced with a positive denominator.
pub type Rational = BigRational;

/// A field usable as a coefficient ring.
pub trait Scalar:
    Num + NumRef + Neg<Output = Self> + Clone + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// Parses an unsigned decimal literal, optionally `a/b`.
    fn parse_literal(s: &str) -> Option<Self>;

    /// Whether the value prints with a leading minus sign.
    fn is_negative_repr(&self) -> bool;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n = BigInt::from_str(num).ok()?;
        let d = match den {
            Some(d) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
                BigInt::from_str(d).ok()?
            }
            Some(_) => return None,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    }

    fn is_negative_repr(&self) -> bool {
        self.is_negative()
    }
}

/// Builds a rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integers modulo the Mersenne prime 2^31 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Zp(u64);

impl Zp {
    pub const MODULUS: u64 = (1 << 31) - 1;

    pub fn new(v: i64) -> Self {
        Zp(v.rem_euclid(Self::MODULUS as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Zp(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(Self::MODULUS - 2))
        }
    }

    /// Reduces a rational; `None` when the denominator vanishes mod p.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let m = BigInt::from(Self::MODULUS);
        let reduce = |x: &BigInt| -> u64 {
            let r = ((x % &m) + &m) % &m;
            u64::try_from(r).expect("residue fits in u64")
        };
        let n = Zp(reduce(r.numer()));
        let d = Zp(reduce(r.denom()));
        d.inverse().map(|inv| n * inv)
    }
}

impl fmt::Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Zp {
    type Output = Zp;
    fn add(self, o: Zp) -> Zp {
        Zp((self.0 + o.0) % Self::MODULUS)
    }
}

impl Sub for Zp {
    type Output = Zp;
    fn sub(self, o: Zp) -> Zp {
        Zp((self.0 + Self::MODULUS - o.0) % Self::MODULUS)
    }
}

impl Mul for Zp {
    type Output = Zp;
    fn mul(self, o: Zp) -> Zp {
        Zp(self.0 * o.0 % Self::MODULUS)
    }
}

impl Div for Zp {
    type Output = Zp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Zp) -> Zp {
        self * o.inverse().expect("division by zero in Zp")
    }
}

impl Rem for Zp {
    type Output = Zp;
    fn rem(self, _o: Zp) -> Zp {
        Zp(0)
    }
}

impl Neg for Zp {
    type Output = Zp;
    fn neg(self) -> Zp {
        Zp((Self::MODULUS - self.0) % Self::MODULUS)
    }
}

macro_rules! zp_ref_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<'a> $tr<&'a Zp> for Zp {
            type Output = Zp;
            fn $m(self, o: &'a Zp) -> Zp {
                $tr::$m(self, *o)
            }
        }
    )*};
}
zp_ref_ops!(Add add, Sub sub, Mul mul, Div div, Rem rem);

impl Zero for Zp {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Zp {
    fn one() -> Self {
        Zp(1)
    }
}

impl Num for Zp {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        i64::from_str_radix(s, radix).map(Zp::new)
    }
}

impl Scalar for Zp {
    fn from_i64(v: i64) -> Self {
        Zp::new(v)
    }

    fn parse_literal(s: &str) -> Option<Self> {
        Rational::parse_literal(s).and_then(|r| Zp::from_rational(&r))
    }

    fn is_negative_repr(&self) -> bool {
        false
    }
}
