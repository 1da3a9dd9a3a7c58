//! The value type: sign, significand, exponent, and a canonical form that
//! makes structural equality mean numeric equality.

use super::digits::{digit_len, shl_digits, trailing_zero_digits};
use super::{FloatFormat, ValueError};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One finite value: `sign * significand * radix^exponent`.
///
/// Canonical form, maintained by every constructor in this module:
///
/// * zero is `(Plus, 0, 0)`;
/// * a nonzero significand is not divisible by the radix (trailing zero
///   digits are absorbed into the exponent) and spans at most `precision`
///   digits.
///
/// Two values produced under the same format are numerically equal if and
/// only if they are field-for-field equal, so `PartialEq` derives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FloatValue {
    sign: Sign,
    significand: BigUint,
    exponent: i64,
}

impl FloatValue {
    pub fn zero() -> FloatValue {
        FloatValue {
            sign: Sign::Plus,
            significand: BigUint::zero(),
            exponent: 0,
        }
    }

    /// Canonicalizes without rounding. The magnitude must already fit the
    /// precision once trailing zero digits are stripped; arithmetic calls
    /// this only after rounding.
    pub(super) fn canonical(sign: Sign, magnitude: BigUint, exponent: i64, fmt: &FloatFormat) -> FloatValue {
        if magnitude.is_zero() {
            return FloatValue::zero();
        }
        let strip = trailing_zero_digits(&magnitude, fmt.radix());
        let (significand, exponent) = if strip == 0 {
            (magnitude, exponent)
        } else {
            let (kept, _) = super::digits::shr_digits_rem(&magnitude, fmt.radix(), strip);
            let exponent = exponent
                .checked_add(i64::try_from(strip).expect("exponent out of range"))
                .expect("exponent out of range");
            (kept, exponent)
        };
        debug_assert!(digit_len(&significand, fmt.radix()) <= u64::from(fmt.precision()));
        FloatValue {
            sign,
            significand,
            exponent,
        }
    }

    /// Embeds a nonnegative integer, rounding per the format if it needs
    /// more than `precision` digits.
    pub fn from_integer(x: &BigUint, fmt: &FloatFormat) -> FloatValue {
        super::arith::round_magnitude(Sign::Plus, x.clone(), 0, fmt)
    }

    /// Embeds a signed integer the same way, keeping sign and magnitude apart.
    pub fn from_signed(x: &BigInt, fmt: &FloatFormat) -> FloatValue {
        let sign = if x.is_negative() { Sign::Minus } else { Sign::Plus };
        super::arith::round_magnitude(sign, x.magnitude().clone(), 0, fmt)
    }

    /// Exact conversion from `coefficient * radix^exponent`, or `None` if the
    /// value cannot be held without rounding.
    pub fn try_exact(coefficient: &BigInt, exponent: i64, fmt: &FloatFormat) -> Option<FloatValue> {
        if coefficient.is_zero() {
            return Some(FloatValue::zero());
        }
        let sign = if coefficient.is_negative() {
            Sign::Minus
        } else {
            Sign::Plus
        };
        let magnitude = coefficient.magnitude().clone();
        let strip = trailing_zero_digits(&magnitude, fmt.radix());
        if digit_len(&magnitude, fmt.radix()) - strip > u64::from(fmt.precision()) {
            return None;
        }
        Some(FloatValue::canonical(sign, magnitude, exponent, fmt))
    }

    /// The exact integer this value denotes, if it has none of its digits
    /// below the radix point.
    pub fn to_integer(&self, fmt: &FloatFormat) -> Result<BigInt, ValueError> {
        if self.is_zero() {
            return Ok(BigInt::zero());
        }
        if self.exponent < 0 {
            return Err(ValueError::NotAnInteger);
        }
        let magnitude = shl_digits(&self.significand, fmt.radix(), self.exponent as u64);
        let sign = match self.sign {
            Sign::Plus => IntSign::Plus,
            Sign::Minus => IntSign::Minus,
        };
        Ok(BigInt::from_biguint(sign, magnitude))
    }

    /// Exact import of a finite `f32`. Radix 2 only; rounds per the format,
    /// which is a no-op whenever the precision is at least 24.
    pub fn from_f32(x: f32, fmt: &FloatFormat) -> Option<FloatValue> {
        if fmt.radix() != 2 || !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(FloatValue::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 31 == 1 { Sign::Minus } else { Sign::Plus };
        let exp_field = (bits >> 23) & 0xff;
        let mantissa = bits & 0x7f_ffff;
        let (magnitude, exponent) = if exp_field == 0 {
            (u64::from(mantissa), -149)
        } else {
            (u64::from(mantissa | 0x80_0000), i64::from(exp_field) - 150)
        };
        Some(super::arith::round_magnitude(
            sign,
            BigUint::from(magnitude),
            exponent,
            fmt,
        ))
    }

    /// Exact export to `f32`: `Some` only when the value converts without any
    /// rounding, so comparisons against native results stay unambiguous.
    pub fn to_f32(&self, fmt: &FloatFormat) -> Option<f32> {
        if fmt.radix() != 2 {
            return None;
        }
        if self.is_zero() {
            return Some(0.0);
        }
        if self.significand.bits() > 53 || self.exponent.abs() > 1100 {
            return None;
        }
        let mut sig = u64::try_from(&self.significand).ok()? as f64;
        if self.sign == Sign::Minus {
            sig = -sig;
        }
        let value = sig * f64::powi(2.0, self.exponent as i32);
        if !value.is_finite() {
            return None;
        }
        let narrowed = value as f32;
        (f64::from(narrowed) == value).then_some(narrowed)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn significand(&self) -> &BigUint {
        &self.significand
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.significand.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Minus
    }

    /// True when no digits sit below the radix point. Canonical form absorbs
    /// trailing zeros, so this is a plain exponent check.
    pub fn is_integer(&self) -> bool {
        self.exponent >= 0 || self.is_zero()
    }

    /// Exact negation; zero stays the canonical positive zero.
    pub fn neg(&self) -> FloatValue {
        if self.is_zero() {
            return FloatValue::zero();
        }
        FloatValue {
            sign: self.sign.flipped(),
            significand: self.significand.clone(),
            exponent: self.exponent,
        }
    }
}

// Serialization renders the significand in decimal so report files stay
// exact and readable. There is deliberately no `Deserialize`: a bare triple
// cannot be checked for canonical form without its format.
impl Serialize for FloatValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FloatValue", 3)?;
        s.serialize_field("sign", if self.is_negative() { "-" } else { "+" })?;
        s.serialize_field("significand", &self.significand.to_string())?;
        s.serialize_field("exponent", &self.exponent)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::super::Rounding;
    use super::*;

    fn fmt(radix: u32, precision: u32) -> FloatFormat {
        FloatFormat::new(radix, precision, Rounding::TruncateTowardZero).unwrap()
    }

    fn int(x: u64, f: &FloatFormat) -> FloatValue {
        FloatValue::from_integer(&BigUint::from(x), f)
    }

    #[test]
    fn small_integers_embed_exactly() {
        let f = fmt(2, 10);
        let v = int(211, &f);
        assert_eq!(v.to_integer(&f).unwrap(), BigInt::from(211));
        assert_eq!(v.significand(), &BigUint::from(211u32));
        assert_eq!(v.exponent(), 0);
    }

    #[test]
    fn canonical_form_absorbs_trailing_zeros() {
        let f = fmt(2, 10);
        let v = int(513 + 511, &f); // 1024 = 2^10
        assert_eq!(v.significand(), &BigUint::from(1u32));
        assert_eq!(v.exponent(), 10);
        assert_eq!(v.to_integer(&f).unwrap(), BigInt::from(1024));
    }

    #[test]
    fn embedding_truncates_past_the_precision() {
        let f = fmt(2, 10);
        // 1025 needs 11 bits; truncation drops the low 1.
        assert_eq!(int(1025, &f).to_integer(&f).unwrap(), BigInt::from(1024));
        // 513 still fits in 10 bits and stays exact.
        assert_eq!(int(513, &f).to_integer(&f).unwrap(), BigInt::from(513));
    }

    #[test]
    fn zero_is_unique() {
        let f = fmt(2, 10);
        assert_eq!(int(0, &f), FloatValue::zero());
        assert_eq!(FloatValue::from_signed(&BigInt::from(0), &f), FloatValue::zero());
        assert_eq!(FloatValue::zero().neg(), FloatValue::zero());
        assert!(FloatValue::zero().is_integer());
    }

    #[test]
    fn signed_embedding_keeps_magnitude() {
        let f = fmt(2, 24);
        let v = FloatValue::from_signed(&BigInt::from(-205), &f);
        assert!(v.is_negative());
        assert_eq!(v.to_integer(&f).unwrap(), BigInt::from(-205));
        assert_eq!(v.neg().to_integer(&f).unwrap(), BigInt::from(205));
    }

    #[test]
    fn try_exact_refuses_rounding() {
        let f = fmt(2, 10);
        assert!(FloatValue::try_exact(&BigInt::from(1025), 0, &f).is_none());
        let v = FloatValue::try_exact(&BigInt::from(-1024), -3, &f).unwrap();
        assert_eq!(v.to_integer(&f).unwrap(), BigInt::from(-128));
        assert_eq!(
            FloatValue::try_exact(&BigInt::zero(), 7, &f).unwrap(),
            FloatValue::zero()
        );
    }

    #[test]
    fn fractional_values_are_not_integers() {
        let f = fmt(2, 10);
        let v = FloatValue::try_exact(&BigInt::from(3), -1, &f).unwrap(); // 1.5
        assert!(!v.is_integer());
        assert_eq!(v.to_integer(&f), Err(ValueError::NotAnInteger));
    }

    #[test]
    fn f32_round_trip_is_exact_for_binary24() {
        let f = FloatFormat::new(2, 24, Rounding::RoundNearestEven).unwrap();
        for x in [0.0f32, 1.0, -1.0, 0.15625, 3.5e8, -1.1754944e-38, 3.4028235e38] {
            let v = FloatValue::from_f32(x, &f).unwrap();
            assert_eq!(v.to_f32(&f).unwrap().to_bits(), x.to_bits(), "x = {x}");
        }
        assert!(FloatValue::from_f32(f32::NAN, &f).is_none());
        assert!(FloatValue::from_f32(f32::INFINITY, &f).is_none());
    }

    #[test]
    fn serializes_to_exact_decimal_fields() {
        let f = fmt(2, 10);
        let v = FloatValue::from_signed(&BigInt::from(-96), &f);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"sign":"-","significand":"3","exponent":5}"#);
    }
}
