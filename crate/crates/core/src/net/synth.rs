//! Network synthesis. Every weight and bias is written down in closed form;
//! nothing is trained, and nothing depends on the input values.

use super::{Activation, Layer, NetError, Network, NetworkSpec, ScaledInteger};
use crate::softfloat::FloatFormat;

fn diagonal(size: usize, entry: impl Fn(usize) -> ScaledInteger) -> Vec<Vec<ScaledInteger>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { entry(i) } else { ScaledInteger::zero() })
                .collect()
        })
        .collect()
}

/// Builds the packing autoencoder for a spec: five weight layers shaped
/// `n -> 1 -> n -> n -> n -> n`, identity activations, code at layer 1.
///
/// With `t_k = (k-1) * m` and `P` the precision, the layers are:
///
/// 1. pack: the code neuron receives `sum_k x_k * radix^t_k`;
/// 2. bias up: neuron `k` gets `code + radix^(P-1+t_k)`, pushing the low
///    `t_k` digits of the code past the significand so rounding deletes them;
/// 3. bias down: subtracts `radix^(P-1+t_k)` again, leaving the code with its
///    low `t_k` digits zeroed;
/// 4. difference: neuron `k` subtracts neuron `k+1`, isolating digit block
///    `k` in place (the last neuron passes through);
/// 5. unpack: multiplies by `radix^-t_k`, moving block `k` to the units.
///
/// The construction is independent of capacity safety; an unsafe spec yields
/// a network whose failures the verifier can then exhibit.
pub fn synthesize(spec: &NetworkSpec) -> Network {
    let n = spec.n() as usize;
    let m = i64::from(spec.m());
    let p = i64::from(spec.precision());
    let t = |k: usize| (k as i64) * m; // k is 0-based here

    let pack = Layer::new(
        vec![(0..n).map(|k| ScaledInteger::power(t(k))).collect()],
        vec![ScaledInteger::zero()],
        Activation::Identity,
    )
    .expect("pack layer shape is fixed");

    let bias_up = Layer::new(
        vec![vec![ScaledInteger::one()]; n],
        (0..n).map(|k| ScaledInteger::power(p - 1 + t(k))).collect(),
        Activation::Identity,
    )
    .expect("bias-up layer shape is fixed");

    let bias_down = Layer::new(
        diagonal(n, |_| ScaledInteger::one()),
        (0..n).map(|k| ScaledInteger::negative_power(p - 1 + t(k))).collect(),
        Activation::Identity,
    )
    .expect("bias-down layer shape is fixed");

    let mut difference = diagonal(n, |_| ScaledInteger::one());
    for (k, row) in difference.iter_mut().enumerate().take(n - 1) {
        row[k + 1] = ScaledInteger::new(-1, 0);
    }
    let difference = Layer::new(difference, vec![ScaledInteger::zero(); n], Activation::Identity)
        .expect("difference layer shape is fixed");

    let unpack = Layer::new(
        diagonal(n, |k| ScaledInteger::power(-t(k))),
        vec![ScaledInteger::zero(); n],
        Activation::Identity,
    )
    .expect("unpack layer shape is fixed");

    Network::new(*spec, vec![pack, bias_up, bias_down, difference, unpack], 1)
        .expect("synthesized layers always compose")
}

/// The two-weight-layer warm-up: encode a point on the line `y = a*x + b`
/// down to its `x` coordinate and rebuild `y` from it.
///
/// Shapes are `2 -> 1 -> 2` with the code at layer 1. Fails if `a` or `b`
/// cannot be held exactly at the format's precision.
pub fn synthesize_line_demo(a: &ScaledInteger, b: &ScaledInteger, fmt: &FloatFormat) -> Result<Network, NetError> {
    // m only controls trace digit grouping here; the minimum legal width
    // keeps the frames narrow.
    let spec = NetworkSpec::new(2, 2, *fmt)?;
    let keep_x = Layer::new(
        vec![vec![ScaledInteger::one(), ScaledInteger::zero()]],
        vec![ScaledInteger::zero()],
        Activation::Identity,
    )
    .expect("keep-x layer shape is fixed");
    let rebuild = Layer::new(
        vec![vec![ScaledInteger::one()], vec![a.clone()]],
        vec![ScaledInteger::zero(), b.clone()],
        Activation::Identity,
    )
    .expect("rebuild layer shape is fixed");
    Network::new(spec, vec![keep_x, rebuild], 1)
}
