//! Property tests for the softfloat engine and the packing oracles.

use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use pseudoae::net::NetworkSpec;
use pseudoae::softfloat::{add, mul, power_of_radix, sub, FloatFormat, FloatValue, Rounding};
use pseudoae::verify::{oracle_pack, oracle_unpack};

fn trunc_format() -> impl Strategy<Value = FloatFormat> {
    (2u32..=16, 1u32..=40)
        .prop_map(|(radix, precision)| FloatFormat::new(radix, precision, Rounding::TruncateTowardZero).unwrap())
}

proptest! {
    #[test]
    fn integers_inside_the_significand_embed_exactly(x in 0u64..1 << 24) {
        for rounding in [Rounding::TruncateTowardZero, Rounding::RoundNearestEven] {
            let fmt = FloatFormat::binary(23, rounding).unwrap();
            let value = FloatValue::from_integer(&BigUint::from(x), &fmt);
            prop_assert_eq!(value.to_integer(&fmt).unwrap(), BigInt::from(x));
        }
    }

    #[test]
    fn scaling_by_radix_powers_is_lossless(fmt in trunc_format(), coefficient in any::<i64>(), exponent in -60i64..=60) {
        let value = FloatValue::from_signed(&BigInt::from(coefficient), &fmt);
        let scaled = mul(&value, &power_of_radix(exponent, &fmt), &fmt);
        let back = mul(&scaled, &power_of_radix(-exponent, &fmt), &fmt);
        prop_assert_eq!(back, value);
    }

    #[test]
    fn sums_that_fit_the_significand_are_exact(fmt in trunc_format(), a in any::<u32>(), b in any::<u32>()) {
        // Keep both terms under radix^(P-1) so the sum stays within P digits.
        let bound = BigUint::from(fmt.radix()).pow(fmt.precision().saturating_sub(1));
        let a = BigUint::from(a) % &bound;
        let b = BigUint::from(b) % &bound;
        let sum = add(
            &FloatValue::from_integer(&a, &fmt),
            &FloatValue::from_integer(&b, &fmt),
            &fmt,
        );
        prop_assert_eq!(sum.to_integer(&fmt).unwrap(), BigInt::from(a + b));
    }

    #[test]
    fn rounding_modes_agree_when_nothing_is_dropped(a in any::<u32>(), b in any::<u32>(), precision in 33u32..=40) {
        // Two 32-bit terms need at most 33 bits, so any wider significand
        // holds the result exactly under either rounding mode.
        for op in [add, sub] {
            let trunc = FloatFormat::new(2, precision, Rounding::TruncateTowardZero).unwrap();
            let rne = FloatFormat::new(2, precision, Rounding::RoundNearestEven).unwrap();
            let make = |fmt: &FloatFormat| {
                (
                    FloatValue::from_integer(&BigUint::from(a), fmt),
                    FloatValue::from_integer(&BigUint::from(b), fmt),
                )
            };
            let (ta, tb) = make(&trunc);
            let (ra, rb) = make(&rne);
            prop_assert_eq!(op(&ta, &tb, &trunc), op(&ra, &rb, &rne));
        }
    }

    #[test]
    fn addition_is_commutative(fmt in trunc_format(), seed in any::<(i64, i64)>(), ea in -60i64..=60, eb in -60i64..=60) {
        let a = mul(&FloatValue::from_signed(&BigInt::from(seed.0), &fmt), &power_of_radix(ea, &fmt), &fmt);
        let b = mul(&FloatValue::from_signed(&BigInt::from(seed.1), &fmt), &power_of_radix(eb, &fmt), &fmt);
        prop_assert_eq!(add(&a, &b, &fmt), add(&b, &a, &fmt));
        prop_assert_eq!(mul(&a, &b, &fmt), mul(&b, &a, &fmt));
    }

    #[test]
    fn subtraction_is_antisymmetric(fmt in trunc_format(), seed in any::<(i64, i64)>(), ea in -60i64..=60, eb in -60i64..=60) {
        let a = mul(&FloatValue::from_signed(&BigInt::from(seed.0), &fmt), &power_of_radix(ea, &fmt), &fmt);
        let b = mul(&FloatValue::from_signed(&BigInt::from(seed.1), &fmt), &power_of_radix(eb, &fmt), &fmt);
        prop_assert_eq!(sub(&a, &b, &fmt), sub(&b, &a, &fmt).neg());
        prop_assert_eq!(sub(&a, &a, &fmt), FloatValue::zero());
    }

    #[test]
    fn binary24_addition_matches_native_f32(bits in any::<(u32, u32)>()) {
        let (a, b) = (f32::from_bits(bits.0), f32::from_bits(bits.1));
        prop_assume!(a.is_normal() && b.is_normal());
        let native = a + b;
        prop_assume!(native.is_normal() || native == 0.0);

        let fmt = FloatFormat::binary(23, Rounding::RoundNearestEven).unwrap();
        let soft = add(
            &FloatValue::from_f32(a, &fmt).unwrap(),
            &FloatValue::from_f32(b, &fmt).unwrap(),
            &fmt,
        );
        prop_assert_eq!(soft.to_f32(&fmt).unwrap().to_bits(), native.to_bits());
    }

    #[test]
    fn packing_round_trips_on_arbitrary_tuples(
        radix in 2u32..=16,
        n in 1u32..=6,
        m in 2u32..=6,
        raw in proptest::collection::vec(any::<u64>(), 6),
    ) {
        let fmt = FloatFormat::new(radix, 64, Rounding::TruncateTowardZero).unwrap();
        let spec = NetworkSpec::new(n, m, fmt).unwrap();
        let bound = BigUint::from(radix).pow(m);
        let xs: Vec<BigUint> = raw.iter().take(n as usize).map(|&v| BigUint::from(v) % &bound).collect();
        let code = oracle_pack(&xs, &spec);
        prop_assert_eq!(oracle_unpack(&code, &spec), xs);
    }
}
