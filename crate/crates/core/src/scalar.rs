//! Precision-generic real numbers.
//!
//! Every algorithm in this crate is written against the [`Scalar`] trait, which
//! is implemented for native `f64` and for [`BigFloat`], an MPFR-backed float
//! whose precision is chosen per thread with [`set_working_digits`] (default:
//! 300 significant decimal digits).

use std::cell::Cell;
use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Special;
use rug::ops::Pow;
use rug::Float;

use crate::error::Error;

/// Default number of significant decimal digits for extended precision.
pub const DEFAULT_DIGITS: u32 = 300;

/// Precision level of a scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    NativeDouble,
    Extended { digits: u32 },
}

impl Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::NativeDouble => write!(f, "double"),
            Precision::Extended { digits } => write!(f, "{digits} digits"),
        }
    }
}

/// Real number contract shared by all solvers.
pub trait Scalar:
    Clone
    + Debug
    + Display
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
    fn from_f64(v: f64) -> Self;
    fn from_i64(v: i64) -> Self;
    fn parse_decimal(s: &str) -> Result<Self, Error>;
    fn to_f64(&self) -> f64;
    /// Significant decimal digits, mantissa first (`d.ddd…e±x`).
    fn to_decimal_string(&self, digits: usize) -> String;

    /// Unit roundoff spacing at 1 for the active precision.
    fn epsilon() -> Self;
    fn precision() -> Precision;

    fn abs(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn cbrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tanh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn powf(&self, e: &Self) -> Self;

    fn is_finite(&self) -> bool;
    fn is_nan(&self) -> bool;

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Sign as -1, 0 or 1 (NaN maps to 0).
    fn signum_i(&self) -> i32 {
        match self.partial_cmp(&Self::zero()) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// `10^-n` at the active precision.
    fn exp10_neg(n: u32) -> Self {
        Self::one() / Self::from_i64(10).powi(n as i32)
    }
}

/// True when `a` and `b` are indistinguishable at the active precision:
/// `|a - b| <= 4 eps max(|a|, |b|)`.
pub fn coincident<S: Scalar>(a: &S, b: &S) -> bool {
    let scale = S::max_of(&a.abs(), &b.abs());
    (a.clone() - b.clone()).abs() <= S::from_i64(4) * S::epsilon() * scale
}

impl Scalar for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn parse_decimal(s: &str) -> Result<Self, Error> {
        s.trim().parse().map_err(|_| Error::Parse(s.to_string()))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_decimal_string(&self, digits: usize) -> String {
        format!("{:.*e}", digits.saturating_sub(1), self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn precision() -> Precision {
        Precision::NativeDouble
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn cbrt(&self) -> Self {
        f64::cbrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tanh(&self) -> Self {
        f64::tanh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn powf(&self, e: &Self) -> Self {
        f64::powf(*self, *e)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_nan(&self) -> bool {
        f64::is_nan(*self)
    }
}

thread_local! {
    static WORKING_BITS: Cell<u32> = Cell::new(bits_for_digits(DEFAULT_DIGITS));
}

/// Binary precision that round-trips `digits` significant decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 1
}

/// Sets the extended precision used by [`BigFloat`] constructors on this thread.
pub fn set_working_digits(digits: u32) {
    assert!(digits >= 1, "at least one decimal digit is required");
    WORKING_BITS.with(|b| b.set(bits_for_digits(digits)));
}

/// Decimal digits currently configured on this thread.
pub fn working_digits() -> u32 {
    let bits = working_bits();
    ((f64::from(bits) - 1.0) / std::f64::consts::LOG2_10).floor() as u32
}

fn working_bits() -> u32 {
    WORKING_BITS.with(|b| b.get())
}

/// Runs `f` with the working precision temporarily set to `digits`.
pub fn with_working_digits<R>(digits: u32, f: impl FnOnce() -> R) -> R {
    let saved = working_bits();
    set_working_digits(digits);
    let out = f();
    WORKING_BITS.with(|b| b.set(saved));
    out
}

/// Arbitrary-precision float. New values take the thread's working precision;
/// arithmetic keeps the precision of the left operand.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat(pub Float);

impl BigFloat {
    pub fn inner(&self) -> &Float {
        &self.0
    }

    fn wrap(v: Float) -> Self {
        BigFloat(v)
    }
}

impl Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self.to_decimal_string(20))
    }
}

impl Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "{}", self.to_decimal_string(p.max(1))),
            None => write!(f, "{}", self.to_decimal_string(20)),
        }
    }
}

macro_rules! big_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                BigFloat(self.0.$method(rhs.0))
            }
        }
    };
}

big_binop!(Add, add);
big_binop!(Sub, sub);
big_binop!(Mul, mul);
big_binop!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat(-self.0)
    }
}

impl Scalar for BigFloat {
    fn from_f64(v: f64) -> Self {
        BigFloat(Float::with_val(working_bits(), v))
    }
    fn from_i64(v: i64) -> Self {
        BigFloat(Float::with_val(working_bits(), v))
    }
    fn parse_decimal(s: &str) -> Result<Self, Error> {
        let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
        Ok(BigFloat(Float::with_val(working_bits(), parsed)))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn to_decimal_string(&self, digits: usize) -> String {
        if !self.0.is_finite() {
            return self.0.to_string();
        }
        self.0.to_string_radix(10, Some(digits.max(1)))
    }
    fn epsilon() -> Self {
        let bits = working_bits();
        BigFloat(Float::with_val(bits, Float::i_exp(1, 1 - bits as i32)))
    }
    fn precision() -> Precision {
        Precision::Extended {
            digits: working_digits(),
        }
    }
    fn abs(&self) -> Self {
        Self::wrap(self.0.clone().abs())
    }
    fn sqrt(&self) -> Self {
        Self::wrap(self.0.clone().sqrt())
    }
    fn cbrt(&self) -> Self {
        Self::wrap(self.0.clone().cbrt())
    }
    fn exp(&self) -> Self {
        Self::wrap(self.0.clone().exp())
    }
    fn ln(&self) -> Self {
        Self::wrap(self.0.clone().ln())
    }
    fn sin(&self) -> Self {
        Self::wrap(self.0.clone().sin())
    }
    fn cos(&self) -> Self {
        Self::wrap(self.0.clone().cos())
    }
    fn tanh(&self) -> Self {
        Self::wrap(self.0.clone().tanh())
    }
    fn cosh(&self) -> Self {
        Self::wrap(self.0.clone().cosh())
    }
    fn powi(&self, n: i32) -> Self {
        Self::wrap(self.0.clone().pow(n))
    }
    fn powf(&self, e: &Self) -> Self {
        Self::wrap(self.0.clone().pow(&e.0))
    }
    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }
    fn is_nan(&self) -> bool {
        self.0.is_nan()
    }
    fn zero() -> Self {
        BigFloat(Float::with_val(working_bits(), Special::Zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mantissa_digits(s: &str) -> String {
        let mant = s.split(['e', 'E']).next().unwrap();
        mant.chars()
            .filter(char::is_ascii_digit)
            .collect::<String>()
            .trim_start_matches('0')
            .to_string()
    }

    #[test]
    fn three_hundred_digit_round_trip() {
        let digits: String = "1234567890".repeat(30);
        let literal = format!("0.{digits}");
        with_working_digits(300, || {
            let v = BigFloat::parse_decimal(&literal).unwrap();
            let printed = v.to_decimal_string(300);
            assert_eq!(mantissa_digits(&printed), digits.trim_start_matches('0'));
        });
    }

    #[test]
    fn default_precision_is_three_hundred_digits() {
        std::thread::spawn(|| {
            assert_eq!(working_digits(), 300);
            assert_eq!(BigFloat::precision(), Precision::Extended { digits: 300 });
        })
        .join()
        .unwrap();
    }

    #[test]
    fn extended_epsilon_is_tiny() {
        with_working_digits(300, || {
            let eps = BigFloat::epsilon();
            assert!(eps.ln().to_f64() < -300.0 * std::f64::consts::LN_10);
            let one = BigFloat::one();
            assert!(one.clone() + eps.clone() > one);
        });
    }

    #[test]
    fn elementary_functions_agree_across_precisions() {
        let x = 0.731_f64;
        let bx = BigFloat::from_f64(x);
        let pairs = [
            (x.exp(), bx.exp()),
            (x.ln(), bx.ln()),
            (x.sqrt(), bx.sqrt()),
            (x.sin(), bx.sin()),
            (x.cos(), bx.cos()),
            (x.tanh(), bx.tanh()),
            (x.cbrt(), bx.cbrt()),
            (x.cosh(), bx.cosh()),
            (x.powi(5), bx.powi(5)),
            (x.powf(1.7), bx.powf(&BigFloat::from_f64(1.7))),
        ];
        for (native, big) in pairs {
            assert!((native - big.to_f64()).abs() <= 4.0 * f64::EPSILON * native.abs());
        }
    }

    #[test]
    fn negative_sqrt_is_nan_at_both_precisions() {
        assert!(Scalar::sqrt(&-1.0f64).is_nan());
        assert!(BigFloat::from_i64(-1).sqrt().is_nan());
    }

    #[test]
    fn coincidence_threshold() {
        assert!(coincident(&1.0f64, &(1.0 + f64::EPSILON)));
        assert!(!coincident(&1.0f64, &(1.0 + 1e-12)));
        assert!(coincident(&0.0f64, &0.0));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(f64::parse_decimal("abc").is_err());
        assert!(BigFloat::parse_decimal("1.2.3").is_err());
    }
}
