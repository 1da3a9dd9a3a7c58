//! Verification of the packing construction against exact integer oracles:
//! exhaustive and sampled round-trip checks, rounding-mode divergence search,
//! and capacity-boundary sweeps.

mod harness;
mod oracle;
mod rng;

pub use harness::{
    capacity_sweep, rounding_divergence, verify_exhaustive, verify_sampled, RoundingDivergence, SweepConfig,
};
pub use oracle::{oracle_pack, oracle_unpack};
pub use rng::SplitMix64;

use crate::net::NetworkSpec;
use crate::softfloat::{FloatValue, Rounding};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Ceiling on enumeration size before exhaustive verification refuses to run.
pub const DEFAULT_CASE_BUDGET: u64 = 10_000_000;

/// Sample count used by sweeps when a cell falls back from exhaustive mode.
pub const DEFAULT_SAMPLE_COUNT: u64 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("{domain} domain for this spec has {cases} cases, over the budget of {budget}; sample instead or raise the budget")]
    BudgetExceeded {
        domain: InputDomain,
        cases: BigUint,
        budget: u64,
    },
    #[error("rounding divergence search requires radix 2, got {0}")]
    RequiresBinaryRadix(u32),
    #[error("{0}")]
    InvalidConfig(String),
}

/// Which tuples a verification run draws from.
///
/// Per coordinate, `LeadingZero` spans `0 <= x < radix^(m-1)` (top digit
/// zero, the domain the construction guarantees) and `FullRange` spans
/// `0 <= x < radix^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputDomain {
    #[serde(rename = "leading-zero")]
    LeadingZero,
    #[serde(rename = "full")]
    FullRange,
}

impl InputDomain {
    /// Exclusive per-coordinate bound for this domain.
    pub fn coordinate_bound(&self, spec: &NetworkSpec) -> BigUint {
        let digits = match self {
            InputDomain::LeadingZero => spec.m() - 1,
            InputDomain::FullRange => spec.m(),
        };
        BigUint::from(spec.radix()).pow(digits)
    }
}

impl fmt::Display for InputDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputDomain::LeadingZero => f.write_str("leading-zero"),
            InputDomain::FullRange => f.write_str("full"),
        }
    }
}

impl FromStr for InputDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "leading-zero" => Ok(InputDomain::LeadingZero),
            "full" => Ok(InputDomain::FullRange),
            other => Err(format!(
                "unknown input domain {other:?} (expected leading-zero or full)"
            )),
        }
    }
}

/// How a report's cases were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

impl fmt::Display for VerifyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyMode::Exhaustive => f.write_str("exhaustive"),
            VerifyMode::Sampled { count, seed } => write!(f, "sampled (count={count}, seed={seed})"),
        }
    }
}

fn serialize_biguints<S: Serializer>(values: &[BigUint], serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_string()))
}

/// The first failing tuple of a run, in the documented enumeration or sample
/// order, localized to the first value layer that leaves the exact-integer
/// oracle's rails.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    #[serde(serialize_with = "serialize_biguints")]
    pub inputs: Vec<BigUint>,
    /// Round-trip target, echoing the inputs.
    #[serde(serialize_with = "serialize_biguints")]
    pub expected: Vec<BigUint>,
    pub actual: Vec<FloatValue>,
    /// 1-based value-layer number; the input layer is 1, the code layer 2.
    pub diverging_layer: usize,
    /// 1-based neuron index within that layer.
    pub diverging_neuron: usize,
}

/// Outcome of one verification run. Deterministic for a given spec, domain,
/// and mode, including the counterexample choice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub spec: NetworkSpec,
    pub domain: InputDomain,
    pub mode: VerifyMode,
    pub total_cases: u64,
    pub failures: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Stable text summary; one screen, exact values.
    pub fn render_text(&self) -> String {
        let fmt = self.spec.format();
        let mut out = format!(
            "verify: n={} m={} radix={} precision={} rounding={}\ndomain: {}\nmode: {}\nresult: {}/{} pass",
            self.spec.n(),
            self.spec.m(),
            self.spec.radix(),
            self.spec.precision(),
            fmt.rounding(),
            self.domain,
            self.mode,
            self.total_cases - self.failures,
            self.total_cases,
        );
        if self.failures > 0 {
            out.push_str(&format!(" ({} failures)", self.failures));
        }
        out.push('\n');
        if let Some(cx) = &self.first_counterexample {
            let join = |xs: &[BigUint]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
            out.push_str("first counterexample:\n");
            out.push_str(&format!("  inputs: {}\n", join(&cx.inputs)));
            out.push_str(&format!("  expected: {}\n", join(&cx.expected)));
            let actual: Vec<String> = cx
                .actual
                .iter()
                .map(|v| crate::softfloat::display_value(v, fmt))
                .collect();
            out.push_str(&format!("  actual: {}\n", actual.join(" ")));
            out.push_str(&format!(
                "  first diverging layer: L{} (neuron k={})\n",
                cx.diverging_layer, cx.diverging_neuron
            ));
        }
        out
    }
}

/// How one sweep cell was verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMethod {
    Exhaustive,
    Sampled,
}

impl fmt::Display for VerifyMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyMethod::Exhaustive => f.write_str("exhaustive"),
            VerifyMethod::Sampled => f.write_str("sampled"),
        }
    }
}

/// One cell of a capacity sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: u32,
    pub m: u32,
    pub radix: u32,
    pub precision: u32,
    pub rounding: Rounding,
    pub capacity_safe: bool,
    pub method: VerifyMethod,
    pub cases: u64,
    pub passes: u64,
}

impl SweepRow {
    pub fn pass_fraction(&self) -> f64 {
        if self.cases == 0 {
            return 1.0;
        }
        self.passes as f64 / self.cases as f64
    }

    /// Fraction column text: exact boundaries print as `1.0` / `0.0`, the
    /// rest as the shortest round-trip decimal of the f64 ratio.
    fn fraction_text(&self) -> String {
        if self.passes == self.cases {
            "1.0".to_string()
        } else if self.passes == 0 {
            "0.0".to_string()
        } else {
            format!("{}", self.pass_fraction())
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            self.radix,
            self.precision,
            self.rounding,
            self.capacity_safe,
            self.method,
            self.cases,
            self.fraction_text()
        )
    }
}

pub const SWEEP_CSV_HEADER: &str = "n,m,radix,precision,rounding,capacity_safe,method,cases,pass_fraction";

/// Full CSV document for a sweep, header first, one line per row.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}
