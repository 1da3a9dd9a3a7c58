//! Radix-digit manipulation of big unsigned integers. Power-of-two radixes
//! reduce to bit operations; everything else falls back to division.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `Some(k)` when `radix == 2^k`, so one digit spans `k` bits.
fn pow2_log(radix: u32) -> Option<u64> {
    radix.is_power_of_two().then(|| u64::from(radix.trailing_zeros()))
}

/// Number of significant radix digits; zero has none.
pub(crate) fn digit_len(x: &BigUint, radix: u32) -> u64 {
    if x.is_zero() {
        return 0;
    }
    match pow2_log(radix) {
        Some(k) => x.bits().div_ceil(k),
        None => x.to_radix_be(radix).len() as u64,
    }
}

/// `x * radix^count`.
pub(crate) fn shl_digits(x: &BigUint, radix: u32, count: u64) -> BigUint {
    if x.is_zero() || count == 0 {
        return x.clone();
    }
    match pow2_log(radix) {
        Some(k) => x << (count * k),
        None => {
            let count = u32::try_from(count).expect("digit shift too large");
            x * BigUint::from(radix).pow(count)
        }
    }
}

/// Quotient and remainder of `x / radix^count`.
pub(crate) fn shr_digits_rem(x: &BigUint, radix: u32, count: u64) -> (BigUint, BigUint) {
    if count == 0 {
        return (x.clone(), BigUint::zero());
    }
    match pow2_log(radix) {
        Some(k) => {
            let bits = count * k;
            let mask = (BigUint::one() << bits) - 1u32;
            (x >> bits, x & mask)
        }
        None => {
            let count = u32::try_from(count).expect("digit shift too large");
            x.div_rem(&BigUint::from(radix).pow(count))
        }
    }
}

/// Largest `t` such that `radix^t` divides `x`; zero yields zero.
pub(crate) fn trailing_zero_digits(x: &BigUint, radix: u32) -> u64 {
    if x.is_zero() {
        return 0;
    }
    match pow2_log(radix) {
        Some(k) => x.trailing_zeros().unwrap_or(0) / k,
        None => {
            let radix = BigUint::from(radix);
            let mut rest = x.clone();
            let mut count = 0;
            loop {
                let (q, r) = rest.div_rem(&radix);
                if !r.is_zero() {
                    return count;
                }
                rest = q;
                count += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn digit_len_matches_positional_width() {
        assert_eq!(digit_len(&big(0), 2), 0);
        assert_eq!(digit_len(&big(1), 2), 1);
        assert_eq!(digit_len(&big(211), 2), 8);
        assert_eq!(digit_len(&big(8), 4), 2);
        assert_eq!(digit_len(&big(999), 10), 3);
        assert_eq!(digit_len(&big(1000), 10), 4);
        assert_eq!(digit_len(&big(26), 3), 3);
    }

    #[test]
    fn shifts_invert_each_other() {
        for radix in [2u32, 3, 8, 10, 16] {
            for x in [0u64, 1, 7, 211, 4304, 123_456_789] {
                let shifted = shl_digits(&big(x), radix, 5);
                let (back, rem) = shr_digits_rem(&shifted, radix, 5);
                assert_eq!(back, big(x));
                assert!(rem.is_zero());
            }
        }
    }

    #[test]
    fn shr_keeps_the_low_digits_as_remainder() {
        let (q, r) = shr_digits_rem(&big(4307), 2, 3);
        assert_eq!(q, big(538));
        assert_eq!(r, big(3));
        let (q, r) = shr_digits_rem(&big(12345), 10, 2);
        assert_eq!(q, big(123));
        assert_eq!(r, big(45));
    }

    #[test]
    fn trailing_zeros_count_divisibility() {
        assert_eq!(trailing_zero_digits(&big(0), 10), 0);
        assert_eq!(trailing_zero_digits(&big(5), 10), 0);
        assert_eq!(trailing_zero_digits(&big(4300), 10), 2);
        assert_eq!(trailing_zero_digits(&big(96), 2), 5);
        assert_eq!(trailing_zero_digits(&big(54), 3), 3);
    }
}
