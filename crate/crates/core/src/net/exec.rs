//! Forward execution and tracing. The verifier runs millions of cases, so
//! weights convert to floats once per network and the hot path touches no
//! strings; traces render digits only when a report is requested.

use super::{Activation, NetError, Network, NetworkSpec};
use crate::softfloat::{self, render_value, FloatFormat, FloatValue};
use num_bigint::BigInt;
use serde::Serialize;
use std::fmt::Write;

/// A network with every weight and bias pre-converted to [`FloatValue`].
/// Construction cannot fail: `Network` validation already proved every entry
/// representable.
pub(crate) struct CompiledNetwork {
    format: FloatFormat,
    code_layer_index: usize,
    layers: Vec<CompiledLayer>,
}

struct CompiledLayer {
    weights: Vec<Vec<FloatValue>>,
    biases: Vec<FloatValue>,
    activation: Activation,
}

impl CompiledNetwork {
    pub(crate) fn new(net: &Network) -> CompiledNetwork {
        let fmt = net.spec().format();
        let layers = net
            .layers()
            .iter()
            .map(|layer| CompiledLayer {
                weights: layer
                    .weights()
                    .iter()
                    .map(|row| row.iter().map(|w| w.to_float(fmt).expect("validated entry")).collect())
                    .collect(),
                biases: layer
                    .biases()
                    .iter()
                    .map(|b| b.to_float(fmt).expect("validated entry"))
                    .collect(),
                activation: layer.activation(),
            })
            .collect();
        CompiledNetwork {
            format: *fmt,
            code_layer_index: net.code_layer_index(),
            layers,
        }
    }

    /// Runs the value pipeline: element 0 is the embedded input layer, then
    /// one vector per weight layer. Every multiply and add rounds in the
    /// network's format, in ascending input index order, bias last.
    pub(crate) fn run(&self, inputs: &[FloatValue]) -> Vec<Vec<FloatValue>> {
        let mut values = Vec::with_capacity(self.layers.len() + 1);
        values.push(inputs.to_vec());
        for layer in &self.layers {
            let prev = values.last().expect("seeded with inputs");
            values.push(layer.apply(prev, &self.format));
        }
        values
    }

    /// Value layers up to and including the code neuron.
    pub(crate) fn run_to_code(&self, inputs: &[FloatValue]) -> FloatValue {
        let mut current = inputs.to_vec();
        for layer in &self.layers[..self.code_layer_index] {
            current = layer.apply(&current, &self.format);
        }
        current.into_iter().next().expect("code layer has one neuron")
    }

    pub(crate) fn run_from_code(&self, code: FloatValue) -> Vec<FloatValue> {
        let mut current = vec![code];
        for layer in &self.layers[self.code_layer_index..] {
            current = layer.apply(&current, &self.format);
        }
        current
    }

    pub(crate) fn embed(&self, inputs: &[BigInt]) -> Vec<FloatValue> {
        inputs
            .iter()
            .map(|x| FloatValue::from_signed(x, &self.format))
            .collect()
    }

    pub(crate) fn in_size(&self) -> usize {
        self.layers[0].weights[0].len()
    }
}

impl CompiledLayer {
    fn apply(&self, inputs: &[FloatValue], fmt: &FloatFormat) -> Vec<FloatValue> {
        self.weights
            .iter()
            .zip(&self.biases)
            .map(|(row, bias)| {
                let mut acc = FloatValue::zero();
                for (w, x) in row.iter().zip(inputs) {
                    // Skipping exact-zero terms is bit-identical: mul by zero
                    // is the canonical zero and adding it returns the
                    // accumulator unchanged.
                    if w.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = softfloat::add(&acc, &softfloat::mul(w, x, fmt), fmt);
                }
                if !bias.is_zero() {
                    acc = softfloat::add(&acc, bias, fmt);
                }
                match self.activation {
                    Activation::Identity => acc,
                }
            })
            .collect()
    }
}

/// Every intermediate value of one forward pass, with digit renderings
/// grouped by the spec's block width `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub spec: NetworkSpec,
    /// 1-based value-layer number holding the code (input layer is 1).
    pub code_level: usize,
    pub layers: Vec<LayerTrace>,
}

/// One value layer: `level` is 1-based, `digits` parallels `values`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerTrace {
    pub level: usize,
    pub values: Vec<FloatValue>,
    pub digits: Vec<String>,
}

impl Network {
    pub(crate) fn compile(&self) -> CompiledNetwork {
        CompiledNetwork::new(self)
    }

    /// Full forward pass. Inputs may be any signed integers; out-of-range
    /// values embed (rounding if they must) and flow through, which is
    /// exactly what the verifier needs to observe.
    pub fn forward(&self, inputs: &[BigInt]) -> Result<(Vec<FloatValue>, TraceReport), NetError> {
        let compiled = self.compile();
        if inputs.len() != compiled.in_size() {
            return Err(NetError::ShapeMismatch {
                expected: compiled.in_size(),
                got: inputs.len(),
            });
        }
        let values = compiled.run(&compiled.embed(inputs));
        let outputs = values.last().expect("at least the input layer").clone();
        let report = self.trace_from_values(values);
        Ok((outputs, report))
    }

    fn trace_from_values(&self, values: Vec<Vec<FloatValue>>) -> TraceReport {
        let fmt = self.spec().format();
        let group = self.spec().m();
        let layers = values
            .into_iter()
            .enumerate()
            .map(|(i, layer_values)| {
                let digits = layer_values.iter().map(|v| render_value(v, fmt, group)).collect();
                LayerTrace {
                    level: i + 1,
                    values: layer_values,
                    digits,
                }
            })
            .collect();
        TraceReport {
            spec: *self.spec(),
            code_level: self.code_layer_index() + 1,
            layers,
        }
    }

    /// Runs the encoder half only and returns the code value.
    pub fn encode(&self, inputs: &[BigInt]) -> Result<FloatValue, NetError> {
        let compiled = self.compile();
        if inputs.len() != compiled.in_size() {
            return Err(NetError::ShapeMismatch {
                expected: compiled.in_size(),
                got: inputs.len(),
            });
        }
        Ok(compiled.run_to_code(&compiled.embed(inputs)))
    }

    /// Runs the decoder half from an arbitrary code value.
    pub fn decode(&self, code: &FloatValue) -> Vec<FloatValue> {
        self.compile().run_from_code(code.clone())
    }
}

impl TraceReport {
    /// Stable text layout: a header, one block per value layer with framed
    /// digit strings, then the outputs. Byte-for-byte reproducible for a
    /// given network and input.
    pub fn render_text(&self) -> String {
        let fmt = self.spec.format();
        let mut out = self.header_text();
        out.push('\n');

        let headings = self.headings();
        for (trace, heading) in self.layers.iter().zip(&headings) {
            writeln!(out, "L{} {heading}", trace.level).unwrap();
            for (i, (value, digits)) in trace.values.iter().zip(&trace.digits).enumerate() {
                let label = if trace.level == self.code_level && trace.values.len() == 1 {
                    "c".to_string()
                } else {
                    format!("k={}", i + 1)
                };
                writeln!(
                    out,
                    "  {label}  [{digits}]  {}",
                    crate::softfloat::display_value(value, fmt)
                )
                .unwrap();
            }
        }

        out.push('\n');
        out.push_str(&self.outputs_text());
        out
    }

    /// The `network:` and `capacity-safe:` lines (plus a warning line when a
    /// single block exceeds the precision), shared by traces and summaries.
    pub fn header_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "network: n={} m={} radix={} precision={} rounding={}",
            self.spec.n(),
            self.spec.m(),
            self.spec.radix(),
            self.spec.precision(),
            self.spec.format().rounding()
        )
        .unwrap();
        let packed = u64::from(self.spec.n()) * u64::from(self.spec.m());
        if self.spec.is_capacity_safe() {
            writeln!(out, "capacity-safe: yes ({packed} <= {})", self.spec.precision()).unwrap();
        } else {
            writeln!(out, "capacity-safe: no ({packed} > {})", self.spec.precision()).unwrap();
        }
        if self.spec.m_exceeds_precision() {
            writeln!(
                out,
                "warning: m={} exceeds precision={}; single inputs cannot embed exactly",
                self.spec.m(),
                self.spec.precision()
            )
            .unwrap();
        }
        out
    }

    /// The `outputs:` line with exact values.
    pub fn outputs_text(&self) -> String {
        let fmt = self.spec.format();
        let rendered: Vec<String> = self
            .outputs()
            .iter()
            .map(|v| crate::softfloat::display_value(v, fmt))
            .collect();
        format!("outputs: {}\n", rendered.join(" "))
    }

    /// Per-layer heading lines, recognized structurally so hand-built
    /// networks still trace with sensible generic labels.
    fn headings(&self) -> Vec<String> {
        let widths: Vec<usize> = self.layers.iter().map(|l| l.values.len()).collect();
        let n = self.spec.n() as usize;
        if widths == [n, 1, n, n, n, n] && self.code_level == 2 {
            return vec![
                "inputs embedded in floating-point fields".into(),
                "code: inputs scaled by radix^((k-1)*m) and summed into one value".into(),
                "bias radix^(P-1+(k-1)*m) added; digits beyond the significand drop".into(),
                "bias subtracted; the low (k-1)*m digits are now zeroed".into(),
                "next neuron subtracted; digit block k isolated in place".into(),
                "scaled by radix^(-(k-1)*m); block k moved to the units position".into(),
            ];
        }
        if widths == [2, 1, 2] && self.code_level == 2 {
            return vec![
                "input point (x, y)".into(),
                "code: the x coordinate alone".into(),
                "reconstruction (x, a*x + b)".into(),
            ];
        }
        widths.iter().map(|_| "values".into()).collect()
    }

    /// The code value recorded in the trace.
    pub fn code(&self) -> &FloatValue {
        &self.layers[self.code_level - 1].values[0]
    }

    pub fn outputs(&self) -> &[FloatValue] {
        &self.layers.last().expect("trace has layers").values
    }
}
