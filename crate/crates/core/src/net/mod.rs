//! Network model: exact scaled-integer weights, dense layers with identity
//! activation, and a bottleneck (code) layer marker. Construction validates
//! shape composition and exact representability, so a `Network` in hand is
//! always runnable.

mod exec;
mod synth;

pub(crate) use exec::CompiledNetwork;
pub use exec::{LayerTrace, TraceReport};
pub use synth::{synthesize, synthesize_line_demo};

use crate::softfloat::{FloatFormat, FloatValue};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NetError {
    #[error("invalid network: {0}")]
    InvalidSpec(String),
    #[error("expected {expected} inputs, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
}

/// Dimensions of the packing problem plus the number format to run under.
///
/// `n` values of `m` radix digits each pack into one bottleneck value; the
/// pack is lossless for leading-zero inputs exactly when `n * m` does not
/// exceed the format's precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NetworkSpecRepr", into = "NetworkSpecRepr")]
pub struct NetworkSpec {
    n: u32,
    m: u32,
    format: FloatFormat,
}

impl NetworkSpec {
    pub fn new(n: u32, m: u32, format: FloatFormat) -> Result<Self, NetError> {
        if n < 1 {
            return Err(NetError::InvalidSpec("n must be at least 1".into()));
        }
        if m < 2 {
            return Err(NetError::InvalidSpec(format!("m must be at least 2, got {m}")));
        }
        Ok(NetworkSpec { n, m, format })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn format(&self) -> &FloatFormat {
        &self.format
    }

    pub fn radix(&self) -> u32 {
        self.format.radix()
    }

    pub fn precision(&self) -> u32 {
        self.format.precision()
    }

    /// Total packed digits fit the significand: `n * m <= precision`. Inside
    /// this bound the round trip is exact for every leading-zero tuple;
    /// outside it some tuple must collide.
    pub fn is_capacity_safe(&self) -> bool {
        u64::from(self.n) * u64::from(self.m) <= u64::from(self.format.precision())
    }

    /// With `m` wider than the precision even a single input cannot be
    /// stored exactly; callers surface this as a warning.
    pub fn m_exceeds_precision(&self) -> bool {
        self.m > self.format.precision()
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkSpecRepr {
    n: u32,
    m: u32,
    #[serde(flatten)]
    format: FloatFormat,
}

impl TryFrom<NetworkSpecRepr> for NetworkSpec {
    type Error = NetError;

    fn try_from(repr: NetworkSpecRepr) -> Result<Self, Self::Error> {
        NetworkSpec::new(repr.n, repr.m, repr.format)
    }
}

impl From<NetworkSpec> for NetworkSpecRepr {
    fn from(spec: NetworkSpec) -> Self {
        NetworkSpecRepr {
            n: spec.n,
            m: spec.m,
            format: spec.format,
        }
    }
}

/// An exact weight: `coefficient * radix^exponent` with an arbitrary-size
/// integer coefficient. Every weight and bias in a network is one of these,
/// so serialized networks carry no decimal floating-point approximations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScaledIntegerRepr", into = "ScaledIntegerRepr")]
pub struct ScaledInteger {
    coefficient: BigInt,
    exponent: i64,
}

impl ScaledInteger {
    pub fn new(coefficient: impl Into<BigInt>, exponent: i64) -> Self {
        ScaledInteger {
            coefficient: coefficient.into(),
            exponent,
        }
    }

    pub fn zero() -> Self {
        ScaledInteger::new(0, 0)
    }

    pub fn one() -> Self {
        ScaledInteger::new(1, 0)
    }

    /// `radix^exponent`.
    pub fn power(exponent: i64) -> Self {
        ScaledInteger::new(1, exponent)
    }

    /// `-(radix^exponent)`.
    pub fn negative_power(exponent: i64) -> Self {
        ScaledInteger::new(-1, exponent)
    }

    pub fn coefficient(&self) -> &BigInt {
        &self.coefficient
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    /// Exact conversion into a float of the given format; an entry that does
    /// not fit the precision is a construction error, never a silent round.
    pub fn to_float(&self, fmt: &FloatFormat) -> Result<FloatValue, NetError> {
        FloatValue::try_exact(&self.coefficient, self.exponent, fmt).ok_or_else(|| {
            NetError::InvalidSpec(format!(
                "entry {} * {}^{} is not exactly representable at precision {}",
                self.coefficient,
                fmt.radix(),
                self.exponent,
                fmt.precision()
            ))
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ScaledIntegerRepr {
    coefficient: String,
    exponent: i64,
}

impl TryFrom<ScaledIntegerRepr> for ScaledInteger {
    type Error = NetError;

    fn try_from(repr: ScaledIntegerRepr) -> Result<Self, Self::Error> {
        let coefficient = BigInt::from_str(&repr.coefficient)
            .map_err(|e| NetError::InvalidSpec(format!("bad coefficient {:?}: {e}", repr.coefficient)))?;
        Ok(ScaledInteger {
            coefficient,
            exponent: repr.exponent,
        })
    }
}

impl From<ScaledInteger> for ScaledIntegerRepr {
    fn from(s: ScaledInteger) -> Self {
        ScaledIntegerRepr {
            coefficient: s.coefficient.to_string(),
            exponent: s.exponent,
        }
    }
}

/// The only activation in this model. Reconstruction relies purely on linear
/// maps plus rounding, and keeping the enum makes that explicit in files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Activation {
    #[serde(rename = "identity")]
    Identity,
}

/// One dense layer: `out[i] = sum_j weights[i][j] * in[j] + biases[i]`,
/// row-major with one row per output neuron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayerRepr", into = "LayerRepr")]
pub struct Layer {
    weights: Vec<Vec<ScaledInteger>>,
    biases: Vec<ScaledInteger>,
    activation: Activation,
}

impl Layer {
    pub fn new(
        weights: Vec<Vec<ScaledInteger>>,
        biases: Vec<ScaledInteger>,
        activation: Activation,
    ) -> Result<Self, NetError> {
        if weights.is_empty() {
            return Err(NetError::InvalidSpec("layer has no output rows".into()));
        }
        if weights.len() != biases.len() {
            return Err(NetError::InvalidSpec(format!(
                "layer has {} weight rows but {} biases",
                weights.len(),
                biases.len()
            )));
        }
        let in_size = weights[0].len();
        if in_size == 0 {
            return Err(NetError::InvalidSpec("layer has no input columns".into()));
        }
        if weights.iter().any(|row| row.len() != in_size) {
            return Err(NetError::InvalidSpec("weight rows have uneven lengths".into()));
        }
        Ok(Layer {
            weights,
            biases,
            activation,
        })
    }

    pub fn out_size(&self) -> usize {
        self.weights.len()
    }

    pub fn in_size(&self) -> usize {
        self.weights[0].len()
    }

    pub fn weights(&self) -> &[Vec<ScaledInteger>] {
        &self.weights
    }

    pub fn biases(&self) -> &[ScaledInteger] {
        &self.biases
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }
}

#[derive(Serialize, Deserialize)]
struct LayerRepr {
    weights: Vec<Vec<ScaledInteger>>,
    biases: Vec<ScaledInteger>,
    activation: Activation,
}

impl TryFrom<LayerRepr> for Layer {
    type Error = NetError;

    fn try_from(repr: LayerRepr) -> Result<Self, Self::Error> {
        Layer::new(repr.weights, repr.biases, repr.activation)
    }
}

impl From<Layer> for LayerRepr {
    fn from(layer: Layer) -> Self {
        LayerRepr {
            weights: layer.weights,
            biases: layer.biases,
            activation: layer.activation,
        }
    }
}

/// A validated network: layers compose, the code layer is a single neuron,
/// and every entry is exactly representable in the spec's format.
///
/// `code_layer_index` counts applied weight layers, so the code value is the
/// output of `layers[code_layer_index - 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NetworkRepr", into = "NetworkRepr")]
pub struct Network {
    spec: NetworkSpec,
    code_layer_index: usize,
    layers: Vec<Layer>,
}

impl Network {
    pub fn new(spec: NetworkSpec, layers: Vec<Layer>, code_layer_index: usize) -> Result<Self, NetError> {
        if layers.is_empty() {
            return Err(NetError::InvalidSpec("network has no layers".into()));
        }
        if layers[0].in_size() != spec.n() as usize {
            return Err(NetError::InvalidSpec(format!(
                "first layer takes {} inputs but the spec has n = {}",
                layers[0].in_size(),
                spec.n()
            )));
        }
        for (i, pair) in layers.windows(2).enumerate() {
            if pair[0].out_size() != pair[1].in_size() {
                return Err(NetError::InvalidSpec(format!(
                    "layer {} produces {} values but layer {} consumes {}",
                    i + 1,
                    pair[0].out_size(),
                    i + 2,
                    pair[1].in_size()
                )));
            }
        }
        if code_layer_index < 1 || code_layer_index > layers.len() {
            return Err(NetError::InvalidSpec(format!(
                "code layer index {} is outside 1..={}",
                code_layer_index,
                layers.len()
            )));
        }
        if layers[code_layer_index - 1].out_size() != 1 {
            return Err(NetError::InvalidSpec(format!(
                "code layer must have one output neuron, found {}",
                layers[code_layer_index - 1].out_size()
            )));
        }
        for (i, layer) in layers.iter().enumerate() {
            for entry in layer.weights.iter().flatten().chain(layer.biases.iter()) {
                entry
                    .to_float(spec.format())
                    .map_err(|e| NetError::InvalidSpec(format!("layer {}: {e}", i + 1)))?;
            }
        }
        Ok(Network {
            spec,
            code_layer_index,
            layers,
        })
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn code_layer_index(&self) -> usize {
        self.code_layer_index
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("network serialization cannot fail");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, NetError> {
        serde_json::from_str(text).map_err(|e| NetError::InvalidSpec(format!("cannot parse network document: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkRepr {
    spec: NetworkSpec,
    code_layer_index: usize,
    layers: Vec<Layer>,
}

impl TryFrom<NetworkRepr> for Network {
    type Error = NetError;

    fn try_from(repr: NetworkRepr) -> Result<Self, Self::Error> {
        Network::new(repr.spec, repr.layers, repr.code_layer_index)
    }
}

impl From<Network> for NetworkRepr {
    fn from(net: Network) -> Self {
        NetworkRepr {
            spec: net.spec,
            code_layer_index: net.code_layer_index,
            layers: net.layers,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::softfloat::Rounding;

    fn fmt(precision: u32) -> FloatFormat {
        FloatFormat::new(2, precision, Rounding::TruncateTowardZero).unwrap()
    }

    #[test]
    fn spec_validates_dimensions() {
        assert!(NetworkSpec::new(0, 3, fmt(10)).is_err());
        assert!(NetworkSpec::new(3, 1, fmt(10)).is_err());
        let spec = NetworkSpec::new(3, 3, fmt(10)).unwrap();
        assert!(spec.is_capacity_safe());
        assert!(!NetworkSpec::new(3, 4, fmt(10)).unwrap().is_capacity_safe());
        // The boundary case n*m == precision is still safe.
        assert!(NetworkSpec::new(5, 2, fmt(10)).unwrap().is_capacity_safe());
    }

    #[test]
    fn spec_serde_is_flat_and_validated() {
        let spec = NetworkSpec::new(3, 3, fmt(10)).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"n":3,"m":3,"radix":2,"precision":10,"rounding":"trunc"}"#);
        assert_eq!(serde_json::from_str::<NetworkSpec>(&json).unwrap(), spec);
        assert!(
            serde_json::from_str::<NetworkSpec>(r#"{"n":0,"m":3,"radix":2,"precision":10,"rounding":"trunc"}"#)
                .is_err()
        );
    }

    #[test]
    fn scaled_integer_serializes_as_decimal_text() {
        let w = ScaledInteger::negative_power(12);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"coefficient":"-1","exponent":12}"#);
        assert_eq!(serde_json::from_str::<ScaledInteger>(&json).unwrap(), w);
        assert!(serde_json::from_str::<ScaledInteger>(r#"{"coefficient":"1.5","exponent":0}"#).is_err());
    }

    #[test]
    fn scaled_integer_refuses_inexact_conversion() {
        let f = fmt(10);
        assert!(ScaledInteger::new(1025, 0).to_float(&f).is_err());
        let v = ScaledInteger::new(1024, -3).to_float(&f).unwrap();
        assert_eq!(v.to_integer(&f).unwrap(), BigInt::from(128));
    }

    #[test]
    fn layer_shape_checks() {
        let rows = vec![
            vec![ScaledInteger::one(), ScaledInteger::zero()],
            vec![ScaledInteger::one()],
        ];
        let biases = vec![ScaledInteger::zero(), ScaledInteger::zero()];
        assert!(Layer::new(rows, biases, Activation::Identity).is_err());
        assert!(Layer::new(vec![], vec![], Activation::Identity).is_err());
    }

    #[test]
    fn network_rejects_broken_composition() {
        let spec = NetworkSpec::new(2, 2, fmt(10)).unwrap();
        let l1 = Layer::new(
            vec![vec![ScaledInteger::one(), ScaledInteger::one()]],
            vec![ScaledInteger::zero()],
            Activation::Identity,
        )
        .unwrap();
        // l2 consumes two values but l1 produces one.
        let l2 = Layer::new(
            vec![vec![ScaledInteger::one(), ScaledInteger::one()]],
            vec![ScaledInteger::zero()],
            Activation::Identity,
        )
        .unwrap();
        assert!(Network::new(spec, vec![l1.clone(), l2], 1).is_err());
        assert!(Network::new(spec, vec![l1.clone()], 2).is_err());
        assert!(Network::new(spec, vec![l1], 1).is_ok());
    }

    #[test]
    fn network_rejects_unrepresentable_entries() {
        let spec = NetworkSpec::new(1, 2, fmt(4)).unwrap();
        let wide = Layer::new(
            vec![vec![ScaledInteger::new(17, 0)]],
            vec![ScaledInteger::zero()],
            Activation::Identity,
        )
        .unwrap();
        let err = Network::new(spec, vec![wide], 1).unwrap_err();
        assert!(matches!(err, NetError::InvalidSpec(_)));
    }
}
