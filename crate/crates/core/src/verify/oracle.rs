//! Exact integer oracles: what the network is supposed to compute, written
//! as plain arithmetic with no floating point anywhere. Verification runs
//! the softfloat pipeline against these.

use crate::net::NetworkSpec;
use crate::softfloat::digits::{shl_digits, shr_digits_rem};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// The packed value `sum_k x_k * radix^((k-1) * m)`: block `k` of the result,
/// reading `m`-digit blocks from the low end, is `x_k` whenever every input
/// is below `radix^m`.
pub fn oracle_pack(xs: &[BigUint], spec: &NetworkSpec) -> BigUint {
    let m = u64::from(spec.m());
    xs.iter()
        .enumerate()
        .map(|(k, x)| shl_digits(x, spec.radix(), k as u64 * m))
        .sum()
}

/// Inverse of [`oracle_pack`] on in-range tuples: splits off `n` blocks of
/// `m` digits from the low end.
pub fn oracle_unpack(code: &BigUint, spec: &NetworkSpec) -> Vec<BigUint> {
    let m = u64::from(spec.m());
    let mut rest = code.clone();
    (0..spec.n())
        .map(|_| {
            let (quotient, block) = shr_digits_rem(&rest, spec.radix(), m);
            rest = quotient;
            block
        })
        .collect()
}

/// Intended exact value of every neuron of the synthesized network, layer by
/// layer, as plain integers. `zero_low(c, t)` writes `c` with its low `t`
/// digits zeroed; the intended layers are:
///
/// * L1: the inputs;
/// * L2: the packed code `c`;
/// * L3: `radix^(P-1+t_k) + zero_low(c, t_k)`;
/// * L4: `zero_low(c, t_k)`;
/// * L5: `zero_low(c, t_k) - zero_low(c, t_{k+1})` (last neuron passes
///   through);
/// * L6: layer 5 divided by `radix^t_k`, which is exact.
///
/// The first index where the softfloat run differs from this list is the
/// diverging layer a counterexample reports.
pub(crate) fn oracle_trace(xs: &[BigUint], spec: &NetworkSpec) -> Vec<Vec<BigInt>> {
    let radix = spec.radix();
    let m = u64::from(spec.m());
    let n = xs.len();
    let p = u64::from(spec.precision());
    let code = oracle_pack(xs, spec);

    let zero_low: Vec<BigUint> = (0..n)
        .map(|k| {
            let t = k as u64 * m;
            let (kept, _) = shr_digits_rem(&code, radix, t);
            shl_digits(&kept, radix, t)
        })
        .collect();
    let biased: Vec<BigUint> = (0..n)
        .map(|k| shl_digits(&BigUint::one(), radix, p - 1 + k as u64 * m) + &zero_low[k])
        .collect();
    let isolated: Vec<BigUint> = (0..n)
        .map(|k| {
            if k + 1 < n {
                &zero_low[k] - &zero_low[k + 1]
            } else {
                zero_low[k].clone()
            }
        })
        .collect();
    let unpacked: Vec<BigUint> = isolated
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (shifted, remainder) = shr_digits_rem(v, radix, k as u64 * m);
            debug_assert!(remainder.is_zero(), "block difference is divisible by radix^t");
            shifted
        })
        .collect();

    let to_ints = |v: Vec<BigUint>| v.into_iter().map(BigInt::from).collect();
    vec![
        xs.iter().cloned().map(BigInt::from).collect(),
        vec![BigInt::from(code)],
        to_ints(biased),
        to_ints(zero_low),
        to_ints(isolated),
        to_ints(unpacked),
    ]
}
