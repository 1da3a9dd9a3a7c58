//! Digit-string rendering. Traces show every value as fixed-width digit
//! groups so block movement between layers is visible at a glance; the byte
//! output is stable and golden-testable.

use super::digits::{shl_digits, shr_digits_rem};
use super::value::FloatValue;
use super::{FloatFormat, ValueError, MAX_RENDER_RADIX};
use num_bigint::BigUint;
use num_traits::Zero;

const ALPHABET: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Renders a nonnegative integer value as radix digits, space-separated into
/// groups of `group` counted from the least significant digit, zero-padded on
/// the left to a whole number of groups. Zero renders as one group of zeros.
pub fn render_digits(v: &FloatValue, fmt: &FloatFormat, group: u32) -> Result<String, ValueError> {
    assert!(group >= 1, "digit group width must be at least 1");
    if fmt.radix() > MAX_RENDER_RADIX {
        return Err(ValueError::UnrenderableRadix(fmt.radix()));
    }
    if v.is_negative() {
        return Err(ValueError::NegativeValue);
    }
    if !v.is_integer() {
        return Err(ValueError::NotAnInteger);
    }
    let magnitude = shl_digits(v.significand(), fmt.radix(), v.exponent().max(0) as u64);
    Ok(grouped(&magnitude, fmt.radix(), group))
}

/// Renders any value, extending [`render_digits`] to signs and fractions: a
/// leading `-` for negatives and ungrouped fraction digits after a `.`.
/// Intended for traces and reports, where out-of-range intermediates must
/// still print exactly.
pub fn render_value(v: &FloatValue, fmt: &FloatFormat, group: u32) -> String {
    assert!(group >= 1, "digit group width must be at least 1");
    if fmt.radix() > MAX_RENDER_RADIX {
        // No digit alphabet; fall back to the exact triple.
        return format!("{:?}", v);
    }
    let sign = if v.is_negative() { "-" } else { "" };
    if v.exponent() >= 0 {
        let magnitude = shl_digits(v.significand(), fmt.radix(), v.exponent().max(0) as u64);
        return format!("{sign}{}", grouped(&magnitude, fmt.radix(), group));
    }
    let fraction_digits = v.exponent().unsigned_abs();
    let (int_part, frac_part) = shr_digits_rem(v.significand(), fmt.radix(), fraction_digits);
    let mut frac = digit_string(&frac_part, fmt.radix());
    while (frac.len() as u64) < fraction_digits {
        frac.insert(0, '0');
    }
    format!("{sign}{}.{frac}", grouped(&int_part, fmt.radix(), group))
}

/// Plain human form: integers in decimal, fractions as an exact ratio
/// `m/radix^k`.
pub(crate) fn display_value(v: &FloatValue, fmt: &FloatFormat) -> String {
    match v.to_integer(fmt) {
        Ok(n) => n.to_string(),
        Err(_) => {
            let sign = if v.is_negative() { "-" } else { "" };
            let denominator = BigUint::from(fmt.radix())
                .pow(u32::try_from(v.exponent().unsigned_abs()).expect("exponent out of range"));
            format!("{sign}{}/{denominator}", v.significand())
        }
    }
}

fn digit_string(x: &BigUint, radix: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_radix_be(radix)
        .iter()
        .map(|&d| ALPHABET[d as usize] as char)
        .collect()
}

fn grouped(magnitude: &BigUint, radix: u32, group: u32) -> String {
    let digits = digit_string(magnitude, radix);
    let group = group as usize;
    let padded_len = digits.len().div_ceil(group) * group;
    let mut padded = "0".repeat(padded_len - digits.len());
    padded.push_str(&digits);
    padded
        .as_bytes()
        .chunks(group)
        .map(|chunk| std::str::from_utf8(chunk).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::super::{add, Rounding};
    use super::*;
    use num_bigint::BigInt;

    fn fmt(radix: u32, precision: u32) -> FloatFormat {
        FloatFormat::new(radix, precision, Rounding::TruncateTowardZero).unwrap()
    }

    fn int(x: u64, f: &FloatFormat) -> FloatValue {
        FloatValue::from_integer(&BigUint::from(x), f)
    }

    #[test]
    fn groups_count_from_the_low_end() {
        let f = fmt(2, 20);
        assert_eq!(render_digits(&int(211, &f), &f, 3).unwrap(), "011 010 011");
        assert_eq!(render_digits(&int(211, &f), &f, 4).unwrap(), "1101 0011");
        assert_eq!(render_digits(&int(0, &f), &f, 3).unwrap(), "000");
    }

    #[test]
    fn truncated_sum_renders_with_zeroed_block() {
        // 211 + 2^12 under 10 significant bits truncates the low block.
        let f = fmt(2, 10);
        let sum = add(&int(211, &f), &int(4096, &f), &f);
        assert_eq!(render_digits(&sum, &f, 3).unwrap(), "001 000 011 010 000");
    }

    #[test]
    fn wide_radixes_use_letter_digits() {
        let f = fmt(16, 8);
        assert_eq!(render_digits(&int(0xdead, &f), &f, 2).unwrap(), "de ad");
        let f36 = fmt(36, 8);
        assert_eq!(render_digits(&int(35, &f36), &f36, 1).unwrap(), "z");
    }

    #[test]
    fn render_errors_are_specific() {
        let f = fmt(2, 10);
        let minus = FloatValue::from_signed(&BigInt::from(-3), &f);
        assert_eq!(render_digits(&minus, &f, 3), Err(ValueError::NegativeValue));

        let half = FloatValue::try_exact(&BigInt::from(1), -1, &f).unwrap();
        assert_eq!(render_digits(&half, &f, 3), Err(ValueError::NotAnInteger));

        let f37 = fmt(37, 8);
        assert_eq!(
            render_digits(&int(1, &f37), &f37, 1),
            Err(ValueError::UnrenderableRadix(37))
        );
    }

    #[test]
    fn render_value_extends_to_signs_and_fractions() {
        let f = fmt(2, 10);
        let minus = FloatValue::from_signed(&BigInt::from(-3), &f);
        assert_eq!(render_value(&minus, &f, 3), "-011");
        let three_halves = FloatValue::try_exact(&BigInt::from(3), -1, &f).unwrap();
        assert_eq!(render_value(&three_halves, &f, 3), "001.1");
        let eighth = FloatValue::try_exact(&BigInt::from(1), -3, &f).unwrap();
        assert_eq!(render_value(&eighth, &f, 3), "000.001");
    }

    #[test]
    fn display_uses_decimal_or_exact_ratio() {
        let f = fmt(2, 10);
        assert_eq!(display_value(&int(211, &f), &f), "211");
        let v = FloatValue::try_exact(&BigInt::from(-45), -3, &f).unwrap();
        assert_eq!(display_value(&v, &f), "-45/8");
    }
}
