//! The four operations. Alignment and accumulation happen at full width on
//! big integers, so each operation rounds exactly once, at the end.

use super::digits::{digit_len, shl_digits, shr_digits_rem, trailing_zero_digits};
use super::value::{FloatValue, Sign};
use super::{FloatFormat, Rounding};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Rounds `sign * magnitude * radix^exponent` to at most `precision`
/// significant digits and returns it in canonical form.
pub(super) fn round_magnitude(sign: Sign, magnitude: BigUint, exponent: i64, fmt: &FloatFormat) -> FloatValue {
    if magnitude.is_zero() {
        return FloatValue::zero();
    }
    // Strip trailing zero digits first: they shift into the exponent for
    // free and must not count against the precision.
    let strip = trailing_zero_digits(&magnitude, fmt.radix());
    let (magnitude, exponent) = if strip == 0 {
        (magnitude, exponent)
    } else {
        let (kept, _) = shr_digits_rem(&magnitude, fmt.radix(), strip);
        (kept, bump_exponent(exponent, strip))
    };

    let width = digit_len(&magnitude, fmt.radix());
    let precision = u64::from(fmt.precision());
    if width <= precision {
        return FloatValue::canonical(sign, magnitude, exponent, fmt);
    }

    let shift = width - precision;
    let kept = match fmt.rounding() {
        Rounding::TruncateTowardZero => shr_digits_rem(&magnitude, fmt.radix(), shift).0,
        Rounding::RoundNearestEven => {
            // Radix 2, enforced when the format was built. The bit below the
            // kept window decides; on a tie the sticky OR of everything
            // lower, then the kept low bit, break it.
            let kept = &magnitude >> shift;
            let round = magnitude.bit(shift - 1);
            let sticky = shift >= 2 && {
                let below = &magnitude & ((BigUint::one() << (shift - 1)) - 1u32);
                !below.is_zero()
            };
            if round && (sticky || kept.bit(0)) {
                kept + 1u32
            } else {
                kept
            }
        }
    };
    // A round-up can carry out to radix^precision; canonicalization strips
    // the trailing zeros it brings, so the result still fits.
    FloatValue::canonical(sign, kept, bump_exponent(exponent, shift), fmt)
}

fn bump_exponent(exponent: i64, by: u64) -> i64 {
    i64::try_from(by)
        .ok()
        .and_then(|by| exponent.checked_add(by))
        .expect("exponent out of range")
}

/// `radix^exponent`, always exact: a one-digit significand scaled by the
/// exponent fits any precision.
pub fn power_of_radix(exponent: i64, fmt: &FloatFormat) -> FloatValue {
    FloatValue::canonical(Sign::Plus, BigUint::one(), exponent, fmt)
}

/// Sum, rounded once.
pub fn add(a: &FloatValue, b: &FloatValue, fmt: &FloatFormat) -> FloatValue {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    // Align on the smaller exponent by widening the other significand; with
    // unbounded intermediates this is exact.
    let exponent = a.exponent().min(b.exponent());
    let ma = align(a, exponent, fmt);
    let mb = align(b, exponent, fmt);
    if a.sign() == b.sign() {
        return round_magnitude(a.sign(), ma + mb, exponent, fmt);
    }
    match ma.cmp(&mb) {
        Ordering::Equal => FloatValue::zero(),
        Ordering::Greater => round_magnitude(a.sign(), ma - mb, exponent, fmt),
        Ordering::Less => round_magnitude(b.sign(), mb - ma, exponent, fmt),
    }
}

fn align(v: &FloatValue, to_exponent: i64, fmt: &FloatFormat) -> BigUint {
    let delta = u64::try_from(i128::from(v.exponent()) - i128::from(to_exponent)).expect("alignment shift too large");
    shl_digits(v.significand(), fmt.radix(), delta)
}

/// Difference, rounded once.
pub fn sub(a: &FloatValue, b: &FloatValue, fmt: &FloatFormat) -> FloatValue {
    add(a, &b.neg(), fmt)
}

/// Product, rounded once.
pub fn mul(a: &FloatValue, b: &FloatValue, fmt: &FloatFormat) -> FloatValue {
    if a.is_zero() || b.is_zero() {
        return FloatValue::zero();
    }
    let sign = if a.sign() == b.sign() { Sign::Plus } else { Sign::Minus };
    let magnitude = a.significand() * b.significand();
    let exponent = a.exponent().checked_add(b.exponent()).expect("exponent out of range");
    round_magnitude(sign, magnitude, exponent, fmt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn fmt(radix: u32, precision: u32, rounding: Rounding) -> FloatFormat {
        FloatFormat::new(radix, precision, rounding).unwrap()
    }

    fn trunc10() -> FloatFormat {
        fmt(2, 10, Rounding::TruncateTowardZero)
    }

    fn rne10() -> FloatFormat {
        fmt(2, 10, Rounding::RoundNearestEven)
    }

    fn int(x: i64, f: &FloatFormat) -> FloatValue {
        FloatValue::from_signed(&BigInt::from(x), f)
    }

    fn as_int(v: &FloatValue, f: &FloatFormat) -> BigInt {
        v.to_integer(f).unwrap()
    }

    // 211 + 4096 = 4307 needs 13 bits; under 10 significant bits the low
    // three drop (trunc) or round to nearest (tie-free here would differ).
    #[test]
    fn add_truncates_the_low_digits() {
        let f = trunc10();
        let sum = add(&int(211, &f), &int(4096, &f), &f);
        assert_eq!(as_int(&sum, &f), BigInt::from(4304));
    }

    // 213 + 4096 = 4309 = 0b1000011010101; the dropped tail 101 rounds the
    // kept window up under nearest-even.
    #[test]
    fn add_rounds_to_nearest_even() {
        let f = rne10();
        let sum = add(&int(213, &f), &int(4096, &f), &f);
        assert_eq!(as_int(&sum, &f), BigInt::from(4312));

        let t = trunc10();
        let sum = add(&int(213, &t), &int(4096, &t), &t);
        assert_eq!(as_int(&sum, &t), BigInt::from(4304));
    }

    #[test]
    fn rne_ties_go_to_the_even_significand() {
        let f = fmt(2, 4, Rounding::RoundNearestEven);
        // 23 = 0b10111 sits exactly between 0b1011_ and 0b1100_; the kept
        // window is odd, so the tie bumps it up to 24.
        let v = FloatValue::from_integer(&23u32.into(), &f);
        assert_eq!(as_int(&v, &f), BigInt::from(24));
        // 21 = 0b10101 ties the other way: 0b1010_ is even and stays, so the
        // result drops to 20.
        let v = FloatValue::from_integer(&21u32.into(), &f);
        assert_eq!(as_int(&v, &f), BigInt::from(20));
        // 43 = 0b101011 is past the midpoint (sticky bit set) and rounds up.
        let v = FloatValue::from_integer(&43u32.into(), &f);
        assert_eq!(as_int(&v, &f), BigInt::from(44));
    }

    #[test]
    fn subtraction_is_sign_magnitude() {
        let f = trunc10();
        let d = sub(&int(13, &f), &int(211, &f), &f);
        assert_eq!(as_int(&d, &f), BigInt::from(-198));
        let d = sub(&int(211, &f), &int(13, &f), &f);
        assert_eq!(as_int(&d, &f), BigInt::from(198));
        assert_eq!(sub(&int(211, &f), &int(211, &f), &f), FloatValue::zero());
    }

    #[test]
    fn mul_scales_exactly_by_powers_of_the_radix() {
        let f = trunc10();
        let v = int(211, &f);
        let up = mul(&v, &power_of_radix(6, &f), &f);
        assert_eq!(as_int(&up, &f), BigInt::from(211 << 6));
        let back = mul(&up, &power_of_radix(-6, &f), &f);
        assert_eq!(back, v);
    }

    #[test]
    fn mul_rounds_like_any_other_operation() {
        let f = trunc10();
        // 33 * 33 = 1089 = 0b10001000001; truncated to 10 bits: 1088.
        let p = mul(&int(33, &f), &int(33, &f), &f);
        assert_eq!(as_int(&p, &f), BigInt::from(1088));
    }

    #[test]
    fn zero_and_sign_identities_hold_exactly() {
        let f = trunc10();
        let v = int(-211, &f);
        assert_eq!(add(&v, &FloatValue::zero(), &f), v);
        assert_eq!(add(&FloatValue::zero(), &v, &f), v);
        assert_eq!(mul(&v, &FloatValue::zero(), &f), FloatValue::zero());
        assert_eq!(add(&int(211, &f), &v, &f), FloatValue::zero());
    }

    #[test]
    fn power_of_radix_is_exact_in_any_format() {
        for (radix, exponent) in [(2u32, 9i64), (2, -12), (3, 5), (10, -2)] {
            let f = fmt(radix, 4, Rounding::TruncateTowardZero);
            let v = power_of_radix(exponent, &f);
            assert_eq!(v.significand(), &num_bigint::BigUint::from(1u32));
            assert_eq!(v.exponent(), exponent);
        }
    }

    // The reconstruction trick: adding then subtracting radix^(P-1+t) leaves
    // exactly the input with its low t digits zeroed.
    #[test]
    fn bias_then_unbias_zeroes_the_low_digits() {
        for radix in [2u32, 3, 10] {
            let p = 6u32;
            let f = fmt(radix, p, Rounding::TruncateTowardZero);
            let bound = u64::from(radix).pow(p - 1);
            for t in 0..p as i64 {
                let bias = power_of_radix(i64::from(p) - 1 + t, &f);
                let modulus = u64::from(radix).pow(t as u32);
                for c in (0..bound).step_by(7) {
                    let v = int(c as i64, &f);
                    let masked = sub(&add(&v, &bias, &f), &bias, &f);
                    let expected = (c / modulus) * modulus;
                    assert_eq!(as_int(&masked, &f), BigInt::from(expected), "radix {radix} t {t} c {c}");
                }
            }
        }
    }
}
