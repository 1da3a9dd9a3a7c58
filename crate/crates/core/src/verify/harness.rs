//! Runners: enumerate or sample tuples, push them through the synthesized
//! network, and compare every stage against the exact-integer oracle.
//! Parallel workers reconcile to the minimal failing index, so reports do
//! not depend on scheduling.

use super::oracle::{oracle_pack, oracle_trace};
use super::rng::SplitMix64;
use super::{
    serialize_biguints, Counterexample, InputDomain, SweepRow, VerifyError, VerifyMethod, VerifyMode, VerifyReport,
    DEFAULT_CASE_BUDGET, DEFAULT_SAMPLE_COUNT,
};
use crate::net::{synthesize, CompiledNetwork, NetworkSpec};
use crate::softfloat::{FloatValue, Rounding};
use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

/// Tuple at enumeration index `i`: coordinate `k` is digit `k` of `i`
/// written in base `bound`, so `x_1` varies fastest. "First counterexample"
/// always means minimal index in this order.
fn tuple_at(mut index: u64, bound: u64, n: usize) -> Vec<BigUint> {
    (0..n)
        .map(|_| {
            let x = index % bound;
            index /= bound;
            BigUint::from(x)
        })
        .collect()
}

struct Checker {
    spec: NetworkSpec,
    compiled: CompiledNetwork,
    code_index: usize,
}

impl Checker {
    fn new(spec: &NetworkSpec) -> Checker {
        let net = synthesize(spec);
        let code_index = net.code_layer_index();
        Checker {
            spec: *spec,
            compiled: net.compile(),
            code_index,
        }
    }

    fn embed(&self, xs: &[BigUint]) -> Vec<FloatValue> {
        xs.iter()
            .map(|x| FloatValue::from_integer(x, self.spec.format()))
            .collect()
    }

    fn run(&self, xs: &[BigUint]) -> Vec<Vec<FloatValue>> {
        self.compiled.run(&self.embed(xs))
    }

    /// A case passes when the outputs reproduce the inputs exactly and the
    /// code neuron equals the oracle's packed value.
    fn passes(&self, xs: &[BigUint]) -> bool {
        let values = self.run(xs);
        let fmt = self.spec.format();
        let outputs = values.last().expect("run yields layers");
        let round_trip = outputs.iter().zip(xs).all(|(out, x)| {
            out.to_integer(fmt)
                .map(|i| i == BigInt::from(x.clone()))
                .unwrap_or(false)
        });
        if !round_trip {
            return false;
        }
        let code = &values[self.code_index][0];
        code.to_integer(fmt)
            .map(|i| i == BigInt::from(oracle_pack(xs, &self.spec)))
            .unwrap_or(false)
    }

    fn counterexample(&self, xs: Vec<BigUint>) -> Counterexample {
        let values = self.run(&xs);
        let fmt = self.spec.format();
        let oracle = oracle_trace(&xs, &self.spec);
        let mut diverging = None;
        'scan: for (li, (actual_layer, oracle_layer)) in values.iter().zip(&oracle).enumerate() {
            for (ni, (actual, intended)) in actual_layer.iter().zip(oracle_layer).enumerate() {
                let agrees = actual.to_integer(fmt).map(|i| &i == intended).unwrap_or(false);
                if !agrees {
                    diverging = Some((li + 1, ni + 1));
                    break 'scan;
                }
            }
        }
        // A failing round trip must differ from the oracle somewhere, at the
        // latest in the output layer itself.
        let (diverging_layer, diverging_neuron) = diverging.expect("failing tuple diverges from the oracle");
        Counterexample {
            expected: xs.clone(),
            actual: values.last().expect("run yields layers").clone(),
            inputs: xs,
            diverging_layer,
            diverging_neuron,
        }
    }
}

/// Fold/reduce pair counting failures and tracking the minimal failing index.
fn tally<I: ParallelIterator<Item = Option<u64>>>(results: I) -> (u64, Option<u64>) {
    results
        .fold(
            || (0u64, None::<u64>),
            |(count, first), fail| match fail {
                Some(i) => (count + 1, Some(first.map_or(i, |f| f.min(i)))),
                None => (count, first),
            },
        )
        .reduce(
            || (0, None),
            |(c1, f1), (c2, f2)| {
                let first = match (f1, f2) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                (c1 + c2, first)
            },
        )
}

/// Checks every tuple of the domain. Refuses (rather than silently samples)
/// when the enumeration exceeds `budget` cases; see [`DEFAULT_CASE_BUDGET`].
pub fn verify_exhaustive(spec: &NetworkSpec, domain: InputDomain, budget: u64) -> Result<VerifyReport, VerifyError> {
    let bound_big = domain.coordinate_bound(spec);
    let cases_big = bound_big.pow(spec.n());
    if cases_big > BigUint::from(budget) {
        return Err(VerifyError::BudgetExceeded {
            domain,
            cases: cases_big,
            budget,
        });
    }
    let cases = u64::try_from(&cases_big).expect("bounded by budget");
    let bound = u64::try_from(&bound_big).expect("bounded by budget");
    let n = spec.n() as usize;
    let checker = Checker::new(spec);

    let (failures, first_fail) = tally((0..cases).into_par_iter().map(|i| {
        if checker.passes(&tuple_at(i, bound, n)) {
            None
        } else {
            Some(i)
        }
    }));
    let first_counterexample = first_fail.map(|i| checker.counterexample(tuple_at(i, bound, n)));
    Ok(VerifyReport {
        spec: *spec,
        domain,
        mode: VerifyMode::Exhaustive,
        total_cases: cases,
        failures,
        first_counterexample,
    })
}

/// Checks `count` tuples drawn coordinate-by-coordinate from one
/// [`SplitMix64`] stream seeded with `seed` (`x_1` of case 0 first). Fully
/// deterministic; a zero count yields a vacuous passing report.
pub fn verify_sampled(spec: &NetworkSpec, domain: InputDomain, count: u64, seed: u64) -> VerifyReport {
    let bound = domain.coordinate_bound(spec);
    let n = spec.n() as usize;
    let mut rng = SplitMix64::new(seed);
    let tuples: Vec<Vec<BigUint>> = (0..usize::try_from(count).expect("sample count fits memory"))
        .map(|_| (0..n).map(|_| rng.next_below(&bound)).collect())
        .collect();

    let checker = Checker::new(spec);
    let (failures, first_fail) =
        tally(
            tuples
                .par_iter()
                .enumerate()
                .map(|(i, xs)| if checker.passes(xs) { None } else { Some(i as u64) }),
        );
    let first_counterexample = first_fail.map(|i| checker.counterexample(tuples[i as usize].clone()));
    VerifyReport {
        spec: *spec,
        domain,
        mode: VerifyMode::Sampled { count, seed },
        total_cases: count,
        failures,
        first_counterexample,
    }
}

/// The first tuple (and position) where truncation and nearest-even runs of
/// the same spec part ways.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingDivergence {
    #[serde(serialize_with = "serialize_biguints")]
    pub inputs: Vec<BigUint>,
    /// 1-based value-layer number, as in [`Counterexample`].
    pub diverging_layer: usize,
    pub diverging_neuron: usize,
    pub truncate_value: FloatValue,
    pub nearest_even_value: FloatValue,
}

/// Runs every tuple of the domain under both rounding modes and returns the
/// first divergence, or `None` if the modes agree everywhere. Radix 2 only,
/// since nearest-even is undefined elsewhere; the same case budget as
/// [`verify_exhaustive`] applies.
pub fn rounding_divergence(
    spec: &NetworkSpec,
    domain: InputDomain,
    budget: u64,
) -> Result<Option<RoundingDivergence>, VerifyError> {
    if spec.radix() != 2 {
        return Err(VerifyError::RequiresBinaryRadix(spec.radix()));
    }
    let with_mode = |mode: Rounding| -> NetworkSpec {
        let fmt = spec.format().with_rounding(mode).expect("radix 2 supports both modes");
        NetworkSpec::new(spec.n(), spec.m(), fmt).expect("dimensions already validated")
    };
    let truncate = Checker::new(&with_mode(Rounding::TruncateTowardZero));
    let nearest = Checker::new(&with_mode(Rounding::RoundNearestEven));

    let bound_big = domain.coordinate_bound(spec);
    let cases_big = bound_big.pow(spec.n());
    if cases_big > BigUint::from(budget) {
        return Err(VerifyError::BudgetExceeded {
            domain,
            cases: cases_big,
            budget,
        });
    }
    let cases = u64::try_from(&cases_big).expect("bounded by budget");
    let bound = u64::try_from(&bound_big).expect("bounded by budget");
    let n = spec.n() as usize;

    let first = (0..cases)
        .into_par_iter()
        .filter(|&i| {
            let xs = tuple_at(i, bound, n);
            first_differing_position(&truncate.run(&xs), &nearest.run(&xs)).is_some()
        })
        .min();

    Ok(first.map(|i| {
        let xs = tuple_at(i, bound, n);
        let t_values = truncate.run(&xs);
        let r_values = nearest.run(&xs);
        let (layer, neuron) = first_differing_position(&t_values, &r_values).expect("re-run reproduces");
        RoundingDivergence {
            inputs: xs,
            diverging_layer: layer,
            diverging_neuron: neuron,
            truncate_value: t_values[layer - 1][neuron - 1].clone(),
            nearest_even_value: r_values[layer - 1][neuron - 1].clone(),
        }
    }))
}

fn first_differing_position(a: &[Vec<FloatValue>], b: &[Vec<FloatValue>]) -> Option<(usize, usize)> {
    for (li, (la, lb)) in a.iter().zip(b).enumerate() {
        for (ni, (va, vb)) in la.iter().zip(lb).enumerate() {
            if va != vb {
                return Some((li + 1, ni + 1));
            }
        }
    }
    None
}

/// Grid of verification cells for mapping the capacity boundary.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub radix: u32,
    pub n_values: Vec<u32>,
    pub m_values: Vec<u32>,
    pub precisions: Vec<u32>,
    pub roundings: Vec<Rounding>,
    pub domain: InputDomain,
    /// Cells needing more cases than this fall back to sampling.
    pub budget: u64,
    pub sample_count: u64,
    pub seed: u64,
}

impl SweepConfig {
    /// Radix-2 leading-zero grid with the default budget, sample count, and
    /// seed 0.
    pub fn grid(n_values: Vec<u32>, m_values: Vec<u32>, precisions: Vec<u32>, roundings: Vec<Rounding>) -> SweepConfig {
        SweepConfig {
            radix: 2,
            n_values,
            m_values,
            precisions,
            roundings,
            domain: InputDomain::LeadingZero,
            budget: DEFAULT_CASE_BUDGET,
            sample_count: DEFAULT_SAMPLE_COUNT,
            seed: 0,
        }
    }
}

/// Verifies every cell of the grid. Row order is fixed: rounding outermost,
/// then precision, n, m, each in the order given. Cells over the budget use
/// sampled verification with the config's count and seed.
pub fn capacity_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, VerifyError> {
    for (name, len) in [
        ("n", config.n_values.len()),
        ("m", config.m_values.len()),
        ("precision", config.precisions.len()),
        ("rounding", config.roundings.len()),
    ] {
        if len == 0 {
            return Err(VerifyError::InvalidConfig(format!(
                "sweep needs at least one {name} value"
            )));
        }
    }

    let mut rows = Vec::new();
    for &rounding in &config.roundings {
        for &precision in &config.precisions {
            for &n in &config.n_values {
                for &m in &config.m_values {
                    let fmt = crate::softfloat::FloatFormat::new(config.radix, precision, rounding)
                        .map_err(|e| VerifyError::InvalidConfig(e.to_string()))?;
                    let spec = NetworkSpec::new(n, m, fmt).map_err(|e| VerifyError::InvalidConfig(e.to_string()))?;
                    let (method, report) = match verify_exhaustive(&spec, config.domain, config.budget) {
                        Ok(report) => (VerifyMethod::Exhaustive, report),
                        Err(VerifyError::BudgetExceeded { .. }) => (
                            VerifyMethod::Sampled,
                            verify_sampled(&spec, config.domain, config.sample_count, config.seed),
                        ),
                        Err(other) => return Err(other),
                    };
                    rows.push(SweepRow {
                        n,
                        m,
                        radix: config.radix,
                        precision,
                        rounding,
                        capacity_safe: spec.is_capacity_safe(),
                        method,
                        cases: report.total_cases,
                        passes: report.total_cases - report.failures,
                    });
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::sweep_to_csv;
    use super::*;
    use crate::softfloat::FloatFormat;

    fn spec(n: u32, m: u32, precision: u32, rounding: Rounding) -> NetworkSpec {
        let fmt = FloatFormat::new(2, precision, rounding).unwrap();
        NetworkSpec::new(n, m, fmt).unwrap()
    }

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn tuples_enumerate_first_coordinate_fastest() {
        assert_eq!(tuple_at(0, 4, 3), big(&[0, 0, 0]));
        assert_eq!(tuple_at(1, 4, 3), big(&[1, 0, 0]));
        assert_eq!(tuple_at(4, 4, 3), big(&[0, 1, 0]));
        assert_eq!(tuple_at(63, 4, 3), big(&[3, 3, 3]));
    }

    #[test]
    fn capacity_safe_spec_passes_exhaustively() {
        for rounding in [Rounding::TruncateTowardZero, Rounding::RoundNearestEven] {
            let report = verify_exhaustive(&spec(3, 3, 10, rounding), InputDomain::LeadingZero, 1000).unwrap();
            assert_eq!(report.total_cases, 64);
            assert_eq!(report.failures, 0);
            assert!(report.first_counterexample.is_none());
            assert!(report.passed());
        }
    }

    #[test]
    fn smallest_grid_is_two_cases() {
        let report = verify_exhaustive(
            &spec(1, 2, 24, Rounding::TruncateTowardZero),
            InputDomain::LeadingZero,
            100,
        )
        .unwrap();
        assert_eq!(report.total_cases, 2);
        assert_eq!(report.failures, 0);
    }

    // n=3, m=4 packs 12 digits into a 10-digit significand; enumeration
    // order makes (1, 0, 2) the first failure: its biased sum 513 + 512 =
    // 1025 needs 11 bits and truncation deletes a live digit at layer 3.
    #[test]
    fn capacity_violation_is_found_and_localized() {
        let report = verify_exhaustive(
            &spec(3, 4, 10, Rounding::TruncateTowardZero),
            InputDomain::LeadingZero,
            10_000,
        )
        .unwrap();
        assert_eq!(report.total_cases, 512);
        assert!(report.failures > 0);
        let cx = report.first_counterexample.as_ref().unwrap();
        assert_eq!(cx.inputs, big(&[1, 0, 2]));
        assert_eq!(cx.expected, big(&[1, 0, 2]));
        assert_eq!(cx.diverging_layer, 3);
        assert_eq!(cx.diverging_neuron, 1);
        let fmt = report.spec.format();
        let actual: Vec<BigInt> = cx.actual.iter().map(|v| v.to_integer(fmt).unwrap()).collect();
        assert_eq!(actual, vec![BigInt::from(0), BigInt::from(0), BigInt::from(2)]);
    }

    #[test]
    fn budget_refuses_oversized_enumerations() {
        let err = verify_exhaustive(
            &spec(3, 3, 10, Rounding::TruncateTowardZero),
            InputDomain::LeadingZero,
            63,
        )
        .unwrap_err();
        assert_eq!(
            err,
            VerifyError::BudgetExceeded {
                domain: InputDomain::LeadingZero,
                cases: BigUint::from(64u32),
                budget: 63
            }
        );
    }

    #[test]
    fn sampling_is_deterministic_and_passes_when_safe() {
        let s = spec(4, 6, 24, Rounding::TruncateTowardZero);
        assert!(s.is_capacity_safe());
        let a = verify_sampled(&s, InputDomain::LeadingZero, 500, 42);
        let b = verify_sampled(&s, InputDomain::LeadingZero, 500, 42);
        assert_eq!(a, b);
        assert_eq!(a.failures, 0);
        assert_eq!(a.mode, VerifyMode::Sampled { count: 500, seed: 42 });

        let c = verify_sampled(&s, InputDomain::LeadingZero, 500, 43);
        assert_eq!(c.failures, 0);
    }

    #[test]
    fn sampling_finds_failures_past_capacity() {
        let s = spec(3, 4, 10, Rounding::TruncateTowardZero);
        let report = verify_sampled(&s, InputDomain::LeadingZero, 2000, 7);
        assert!(report.failures > 0);
        assert!(report.first_counterexample.is_some());
    }

    // First full-range divergence between the modes: [5, 0, 0]. The layer-3
    // sum 5 + 2^12 = 4101 keeps 0b1000000001 with tail 101 under ten
    // significant bits; truncation drops the tail, nearest-even rounds up.
    #[test]
    fn rounding_divergence_matches_hand_analysis() {
        let s = spec(3, 3, 10, Rounding::TruncateTowardZero);
        let hit = rounding_divergence(&s, InputDomain::FullRange, 10_000)
            .unwrap()
            .unwrap();
        assert_eq!(hit.inputs, big(&[5, 0, 0]));
        assert_eq!(hit.diverging_layer, 3);
        assert_eq!(hit.diverging_neuron, 2);
        let fmt = s.format();
        assert_eq!(hit.truncate_value.to_integer(fmt).unwrap(), BigInt::from(4096));
        assert_eq!(hit.nearest_even_value.to_integer(fmt).unwrap(), BigInt::from(4104));
    }

    #[test]
    fn rounding_modes_agree_on_the_leading_zero_domain() {
        let s = spec(3, 3, 10, Rounding::TruncateTowardZero);
        assert_eq!(rounding_divergence(&s, InputDomain::LeadingZero, 10_000).unwrap(), None);
    }

    #[test]
    fn rounding_divergence_requires_radix_two() {
        let fmt = FloatFormat::new(3, 9, Rounding::TruncateTowardZero).unwrap();
        let s = NetworkSpec::new(2, 3, fmt).unwrap();
        assert_eq!(
            rounding_divergence(&s, InputDomain::FullRange, 100).unwrap_err(),
            VerifyError::RequiresBinaryRadix(3)
        );
    }

    #[test]
    fn sweep_rows_follow_the_documented_order_and_boundary() {
        let mut config = SweepConfig::grid(
            vec![2, 3],
            vec![3, 4],
            vec![10],
            vec![Rounding::TruncateTowardZero, Rounding::RoundNearestEven],
        );
        config.budget = 100_000;
        let rows = capacity_sweep(&config).unwrap();
        assert_eq!(rows.len(), 8);
        let key: Vec<(Rounding, u32, u32, u32)> = rows.iter().map(|r| (r.rounding, r.precision, r.n, r.m)).collect();
        assert_eq!(key[0], (Rounding::TruncateTowardZero, 10, 2, 3));
        assert_eq!(key[1], (Rounding::TruncateTowardZero, 10, 2, 4));
        assert_eq!(key[4], (Rounding::RoundNearestEven, 10, 2, 3));

        for row in &rows {
            assert_eq!(row.capacity_safe, u64::from(row.n) * u64::from(row.m) <= 10);
            if row.capacity_safe {
                assert_eq!(row.passes, row.cases, "safe cell must pass: {row:?}");
            } else {
                assert!(row.passes < row.cases, "unsafe cell must fail somewhere: {row:?}");
            }
        }
    }

    #[test]
    fn sweep_csv_has_the_exact_header_and_fractions() {
        let mut config = SweepConfig::grid(vec![3], vec![3, 4], vec![10], vec![Rounding::TruncateTowardZero]);
        config.budget = 100_000;
        let rows = capacity_sweep(&config).unwrap();
        let csv = sweep_to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "n,m,radix,precision,rounding,capacity_safe,method,cases,pass_fraction"
        );
        assert_eq!(lines[1], "3,3,2,10,trunc,true,exhaustive,64,1.0");
        assert!(lines[2].starts_with("3,4,2,10,trunc,false,exhaustive,512,0."));
    }

    #[test]
    fn sweep_falls_back_to_sampling_over_budget() {
        let mut config = SweepConfig::grid(vec![3], vec![3], vec![10], vec![Rounding::TruncateTowardZero]);
        config.budget = 10;
        config.sample_count = 200;
        config.seed = 5;
        let rows = capacity_sweep(&config).unwrap();
        assert_eq!(rows[0].method, VerifyMethod::Sampled);
        assert_eq!(rows[0].cases, 200);
        assert_eq!(rows[0].passes, 200);
    }
}
