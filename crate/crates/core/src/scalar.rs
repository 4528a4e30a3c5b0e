//! Coefficient types.
//!
//! The kernel is generic over its coefficient type. Anything that behaves like
//! a field under `num-traits` works; the exact pipeline uses [`Scalar`]
//! (arbitrary-precision rationals), the numeric lab uses `f64`.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use std::ops::Neg;

use num_traits::{FromPrimitive, NumAssignRef, NumRef, Signed, ToPrimitive, Zero};

/// Exact rational coefficient: reduced, positive denominator, zero as `0/1`.
pub type Scalar = BigRational;

/// Coefficient field for [`Form`](crate::kernel::Form) and the linear algebra.
pub trait Coeff:
    NumAssignRef + NumRef + Neg<Output = Self> + Clone + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Whether the value prints with a leading minus sign.
    fn is_negative_coeff(&self) -> bool;

    /// Magnitude used when rendering; `abs` for ordered types.
    fn abs_coeff(&self) -> Self;

    /// True when `Display` would need parentheses to be used as a factor.
    fn needs_parens(&self) -> bool {
        false
    }
}

impl Coeff for BigRational {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }
    fn abs_coeff(&self) -> Self {
        self.abs()
    }
}

impl Coeff for num_rational::Rational64 {
    fn is_negative_coeff(&self) -> bool {
        self.is_negative()
    }
    fn abs_coeff(&self) -> Self {
        self.abs()
    }
}

impl Coeff for f64 {
    fn is_negative_coeff(&self) -> bool {
        self.is_sign_negative()
    }
    fn abs_coeff(&self) -> Self {
        self.abs()
    }
    fn needs_parens(&self) -> bool {
        // exponent notation would not survive a round trip through the parser
        let s = self.to_string();
        s.contains('e') || s.contains("inf") || s.contains("NaN")
    }
}

/// Builds an exact rational from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds an exact rational `n / d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses a decimal literal such as `12`, `0.25` or `3.` into an exact rational.
pub fn parse_decimal(text: &str) -> Option<Scalar> {
    let (int_part, frac_part) = match text.split_once('.') {
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Some(BigRational::new(numer, denom))
}

/// Lossy conversion of an exact rational to `f64`.
pub fn to_f64(q: &Scalar) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // numerator/denominator individually overflow f64
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best-effort exact rational from an `f64` (exact binary expansion).
pub fn from_f64(v: f64) -> Option<Scalar> {
    BigRational::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("12"), Some(int(12)));
        assert_eq!(parse_decimal("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_decimal("3."), Some(int(3)));
        assert_eq!(parse_decimal(".5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1e5"), None);
    }

    #[test]
    fn rational_invariants_hold() {
        let q = ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        let z = ratio(0, 7);
        assert_eq!(z.denom(), &BigInt::one());
    }
}
