//! Numeric backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] for exact arithmetic and `f64` for fast approximate
//! work. Comparisons go through the `approx_*` helpers so that the float
//! backend absorbs rounding noise while the exact backend stays exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Comparison slack used by the `f64` backend.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read {text:?} as a number: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: &'static str,
}

pub trait Scalar:
    Copy
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for backends whose comparisons carry no tolerance.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_decimal_str(text: &str) -> Result<Self, ParseScalarError>;
    fn to_f64(&self) -> f64;
    fn tolerance() -> Self;

    /// Converts a float through its shortest round-trip decimal form, so
    /// `0.6` becomes exactly `3/5` in the rational backend.
    fn from_f64(v: f64) -> Result<Self, ParseScalarError> {
        if !v.is_finite() {
            return Err(ParseScalarError {
                text: v.to_string(),
                reason: "not finite",
            });
        }
        Self::from_decimal_str(&v.to_string())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// `max(self, 0)`.
    fn pos(self) -> Self {
        self.max(Self::zero())
    }

    fn abs(self) -> Self {
        if self < Self::zero() {
            -self
        } else {
            self
        }
    }

    fn approx_le(self, other: Self) -> bool {
        self <= other + Self::tolerance()
    }

    fn approx_ge(self, other: Self) -> bool {
        other.approx_le(self)
    }

    fn approx_lt(self, other: Self) -> bool {
        self + Self::tolerance() < other
    }

    fn approx_gt(self, other: Self) -> bool {
        other.approx_lt(self)
    }

    fn approx_eq(self, other: Self) -> bool {
        (self - other).abs() <= Self::tolerance()
    }
}

/// Maximum over values where `None` stands for negative infinity.
pub fn max_ext<T: Scalar>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Positive part of an extended value; negative infinity maps to zero.
pub fn pos_ext<T: Scalar>(a: Option<T>) -> T {
    a.map_or(T::zero(), Scalar::pos)
}

/// Exact rational number backed by 128-bit integers.
///
/// Arithmetic is overflow-checked and panics rather than wrapping. Decimal
/// inputs with up to fifteen significant digits stay far from the limits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(Ratio::new(num, den))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }
}

fn overflow(op: &str) -> ! {
    panic!("exact arithmetic overflow in {op}; use the float backend for inputs of this size")
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if self.0.denom() == rhs.0.denom() {
            let n = i128::checked_add(*self.0.numer(), *rhs.0.numer())
                .unwrap_or_else(|| overflow("addition"));
            return Rational(Ratio::new(n, *self.0.denom()));
        }
        Rational(
            self.0
                .checked_add(&rhs.0)
                .unwrap_or_else(|| overflow("addition")),
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        if self.0.denom() == rhs.0.denom() {
            let n = i128::checked_sub(*self.0.numer(), *rhs.0.numer())
                .unwrap_or_else(|| overflow("subtraction"));
            return Rational(Ratio::new(n, *self.0.denom()));
        }
        Rational(
            self.0
                .checked_sub(&rhs.0)
                .unwrap_or_else(|| overflow("subtraction")),
        )
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(
            self.0
                .checked_mul(&rhs.0)
                .unwrap_or_else(|| overflow("multiplication")),
        )
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero");
        Rational(
            self.0
                .checked_div(&rhs.0)
                .unwrap_or_else(|| overflow("division")),
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn pow10(exp: u32) -> Option<i128> {
    10i128.checked_pow(exp)
}

/// Parses `[+-]digits[.digits][(e|E)[+-]digits]` into an exact fraction.
fn parse_decimal(text: &str) -> Result<Ratio<i128>, ParseScalarError> {
    let fail = |reason| ParseScalarError {
        text: text.to_string(),
        reason,
    };
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| fail("bad exponent"))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(fail("no digits"));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(fail("unexpected character"));
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_start_matches('0');
    let mut numer: i128 = if digits.is_empty() {
        0
    } else {
        digits.parse().map_err(|_| fail("too many digits"))?
    };
    let scale = frac_part.len() as i64 - exponent as i64;
    let mut denom: i128 = 1;
    if numer != 0 {
        if scale >= 0 {
            denom = u32::try_from(scale)
                .ok()
                .and_then(pow10)
                .ok_or_else(|| fail("out of range"))?;
        } else {
            let factor = u32::try_from(-scale)
                .ok()
                .and_then(pow10)
                .ok_or_else(|| fail("out of range"))?;
            numer = numer
                .checked_mul(factor)
                .ok_or_else(|| fail("out of range"))?;
        }
    }
    if negative {
        numer = -numer;
    }
    Ok(Ratio::new(numer, denom))
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Rational(Ratio::from_integer(0))
    }

    fn one() -> Self {
        Rational(Ratio::from_integer(1))
    }

    fn from_i64(v: i64) -> Self {
        Rational(Ratio::from_integer(v as i128))
    }

    fn from_decimal_str(text: &str) -> Result<Self, ParseScalarError> {
        parse_decimal(text).map(Rational)
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn tolerance() -> Self {
        Self::zero()
    }

    fn abs(self) -> Self {
        Rational(self.0.abs())
    }

    fn approx_le(self, other: Self) -> bool {
        self <= other
    }

    fn approx_lt(self, other: Self) -> bool {
        self < other
    }

    fn approx_eq(self, other: Self) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_decimal_str(text: &str) -> Result<Self, ParseScalarError> {
        let v: f64 = text.trim().parse().map_err(|_| ParseScalarError {
            text: text.to_string(),
            reason: "not a decimal number",
        })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseScalarError {
                text: text.to_string(),
                reason: "not finite",
            })
        }
    }

    fn from_f64(v: f64) -> Result<Self, ParseScalarError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ParseScalarError {
                text: v.to_string(),
                reason: "not finite",
            })
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }
}

/// Total order for sorting scalar sequences. Panics on NaN.
pub fn cmp_slices<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).expect("NaN in comparison") {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        Rational::from_decimal_str(s).unwrap()
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(q("0.6"), Rational::new(3, 5));
        assert_eq!(q("-0.125"), Rational::new(-1, 8));
        assert_eq!(q("1e-3"), Rational::new(1, 1000));
        assert_eq!(q("2.5E2"), Rational::new(250, 1));
        assert_eq!(q("0"), Rational::zero());
        assert_eq!(q(".5"), Rational::new(1, 2));
        assert_eq!(q("007"), Rational::new(7, 1));
    }

    #[test]
    fn rejects_garbage() {
        assert!(Rational::from_decimal_str("abc").is_err());
        assert!(Rational::from_decimal_str("").is_err());
        assert!(Rational::from_decimal_str("1.2.3").is_err());
        assert!(Rational::from_decimal_str("1e").is_err());
    }

    #[test]
    fn float_round_trip_through_shortest_repr() {
        assert_eq!(Rational::from_f64(0.1).unwrap(), Rational::new(1, 10));
        assert_eq!(
            Rational::from_f64(1e-7).unwrap(),
            Rational::new(1, 10_000_000)
        );
        assert!(Rational::from_f64(f64::NAN).is_err());
    }

    #[test]
    fn decimal_sums_stay_exact() {
        assert_eq!(q("0.1") + q("0.2"), q("0.3"));
        assert!((0.1f64 + 0.2).approx_eq(0.3));
    }

    #[test]
    fn extended_max() {
        assert_eq!(max_ext::<f64>(None, None), None);
        assert_eq!(max_ext(Some(1.0), None), Some(1.0));
        assert_eq!(max_ext(Some(1.0), Some(2.0)), Some(2.0));
        assert_eq!(pos_ext::<f64>(None), 0.0);
        assert_eq!(pos_ext(Some(-3.0)), 0.0);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_panics() {
        let big = Rational::new(i128::MAX / 2, 1);
        let _ = big + big + big;
    }
}
