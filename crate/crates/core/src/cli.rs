//! Command-line front end: synthesize networks, run traced forward passes,
//! verify reconstruction over input domains, and sweep capacity grids.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use crate::net::{synthesize, synthesize_line_demo, Network, NetworkSpec, ScaledInteger, TraceReport};
use crate::softfloat::{display_value, FloatFormat, Rounding};
use crate::verify::{
    capacity_sweep, sweep_to_csv, verify_exhaustive, verify_sampled, InputDomain, SweepConfig, DEFAULT_CASE_BUDGET,
    DEFAULT_SAMPLE_COUNT,
};

/// Runs the CLI and returns the process exit code: 0 on success, 1 when a
/// verification or reconstruction check fails, 2 on usage or configuration
/// errors.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "pseudoae",
    version,
    about = "Pseudo-autoencoders that pack integer tuples into one float and unpack them by shaving significand digits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a packing network and write it as JSON
    Synth(SynthArgs),
    /// Run a forward pass, optionally printing the layer-by-layer trace
    Run(RunArgs),
    /// Check reconstruction over an input domain, exhaustively or by sampling
    Verify(VerifyArgs),
    /// Verify a grid of (n, m, precision, rounding) cells and emit a CSV report
    Sweep(SweepArgs),
    /// Two-neuron sanity demo: reconstruct a point on the line y = a*x + b
    DemoLine(DemoLineArgs),
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Number of packed inputs
    #[arg(long)]
    n: u32,
    /// Radix digits reserved per input
    #[arg(long)]
    m: u32,
    /// Floating-point radix
    #[arg(long, default_value_t = 2)]
    radix: u32,
    /// Stored fraction bits; the significand holds z+1 bits (radix 2 only)
    #[arg(long, conflicts_with = "precision")]
    z: Option<u32>,
    /// Significand width in radix digits
    #[arg(long)]
    precision: Option<u32>,
    /// Rounding mode: trunc or rne
    #[arg(long, default_value = "trunc", value_parser = parse_rounding)]
    rounding: Rounding,
}

impl SpecArgs {
    fn resolve(&self) -> Result<NetworkSpec, String> {
        let fmt = build_format(self.radix, self.z, self.precision, self.rounding)?;
        NetworkSpec::new(self.n, self.m, fmt).map_err(|e| e.to_string())
    }
}

/// Same shape as `SpecArgs` but fully optional, for subcommands that can load
/// the network from a file instead.
#[derive(Args, Debug)]
struct OptionalSpecArgs {
    /// Number of packed inputs
    #[arg(long)]
    n: Option<u32>,
    /// Radix digits reserved per input
    #[arg(long)]
    m: Option<u32>,
    /// Floating-point radix
    #[arg(long)]
    radix: Option<u32>,
    /// Stored fraction bits; the significand holds z+1 bits (radix 2 only)
    #[arg(long, conflicts_with = "precision")]
    z: Option<u32>,
    /// Significand width in radix digits
    #[arg(long)]
    precision: Option<u32>,
    /// Rounding mode: trunc or rne
    #[arg(long, value_parser = parse_rounding)]
    rounding: Option<Rounding>,
}

impl OptionalSpecArgs {
    fn resolve(&self) -> Result<NetworkSpec, String> {
        let n = self.n.ok_or("--n is required unless --net is given")?;
        let m = self.m.ok_or("--m is required unless --net is given")?;
        let fmt = build_format(
            self.radix.unwrap_or(2),
            self.z,
            self.precision,
            self.rounding.unwrap_or(Rounding::TruncateTowardZero),
        )?;
        NetworkSpec::new(n, m, fmt).map_err(|e| e.to_string())
    }
}

fn build_format(radix: u32, z: Option<u32>, precision: Option<u32>, rounding: Rounding) -> Result<FloatFormat, String> {
    if z.is_some() && radix != 2 {
        return Err("--z applies only to radix 2; use --precision".into());
    }
    let result = match (z, precision) {
        (Some(z), _) => FloatFormat::binary(z, rounding),
        (None, Some(p)) => FloatFormat::new(radix, p, rounding),
        (None, None) if radix == 2 => FloatFormat::binary(23, rounding),
        (None, None) => return Err(format!("--precision is required for radix {radix}")),
    };
    result.map_err(|e| e.to_string())
}

fn parse_rounding(s: &str) -> Result<Rounding, String> {
    s.parse()
}

fn parse_domain(s: &str) -> Result<InputDomain, String> {
    s.parse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Text,
    Structured,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "text" => Ok(OutputFormat::Text),
        "structured" => Ok(OutputFormat::Structured),
        other => Err(format!("unknown format '{other}' (expected text or structured)")),
    }
}

fn run_command(command: Command) -> Result<i32, String> {
    match command {
        Command::Synth(args) => cmd_synth(args),
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::DemoLine(args) => cmd_demo_line(args),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Write the network document here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Output format: text or structured
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
}

#[derive(Serialize)]
struct SynthOutput<'a> {
    spec: &'a NetworkSpec,
    capacity_safe: bool,
    layer_shapes: Vec<(usize, usize)>,
    written_to: Option<String>,
    network: &'a Network,
}

fn cmd_synth(args: SynthArgs) -> Result<i32, String> {
    let spec = args.spec.resolve()?;
    let network = synthesize(&spec);
    let document = network.to_json();
    if let Some(path) = &args.out {
        write_file(path, &document)?;
    }

    match args.format {
        OutputFormat::Text => {
            let shapes: Vec<String> = std::iter::once(spec.n() as usize)
                .chain(network.layers().iter().map(|l| l.out_size()))
                .map(|s| s.to_string())
                .collect();
            let mut summary = String::new();
            summary.push_str(&format!(
                "network: n={} m={} radix={} precision={} rounding={}\n",
                spec.n(),
                spec.m(),
                spec.radix(),
                spec.precision(),
                spec.format().rounding()
            ));
            summary.push_str(&format!("layers: {}\n", shapes.join(" -> ")));
            let packed = u64::from(spec.n()) * u64::from(spec.m());
            if spec.is_capacity_safe() {
                summary.push_str(&format!("capacity-safe: yes ({packed} <= {})\n", spec.precision()));
            } else {
                summary.push_str(&format!("capacity-safe: no ({packed} > {})\n", spec.precision()));
            }
            if let Some(path) = &args.out {
                summary.push_str(&format!("written: {}\n", path.display()));
                print!("{summary}");
            } else {
                // Keep stdout clean for the document itself so it pipes into
                // `run --net -`-style tooling; the summary goes to stderr.
                eprint!("{summary}");
                print!("{document}");
            }
        }
        OutputFormat::Structured => {
            let output = SynthOutput {
                spec: network.spec(),
                capacity_safe: spec.is_capacity_safe(),
                layer_shapes: network.layers().iter().map(|l| (l.in_size(), l.out_size())).collect(),
                written_to: args.out.as_ref().map(|p| p.display().to_string()),
                network: &network,
            };
            print!("{}", to_pretty_json(&output));
        }
    }
    if spec.m_exceeds_precision() {
        eprintln!(
            "warning: m={} exceeds precision={}; single inputs cannot embed exactly",
            spec.m(),
            spec.precision()
        );
    }
    Ok(0)
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Load the network from a JSON file instead of synthesizing one
    #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "m", "radix", "z", "precision", "rounding"])]
    net: Option<PathBuf>,
    #[command(flatten)]
    spec: OptionalSpecArgs,
    /// Comma-separated integer inputs, one per network input
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    inputs: Vec<BigInt>,
    /// Print the full layer-by-layer trace
    #[arg(long)]
    trace: bool,
    /// Output format: text or structured
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    /// Also write the output here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunOutput<'a> {
    round_trip: bool,
    outputs: Vec<String>,
    trace: &'a TraceReport,
}

fn load_network(path: &Path) -> Result<Network, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    Network::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_run(args: RunArgs) -> Result<i32, String> {
    let network = match &args.net {
        Some(path) => load_network(path)?,
        None => synthesize(&args.spec.resolve()?),
    };
    let (outputs, trace) = network.forward(&args.inputs).map_err(|e| e.to_string())?;
    let fmt = network.spec().format();
    let round_trip = outputs.len() == args.inputs.len()
        && outputs
            .iter()
            .zip(&args.inputs)
            .all(|(out, expected)| out.to_integer(fmt).is_ok_and(|v| v == *expected));

    let text = match args.format {
        OutputFormat::Text => {
            let mut text = if args.trace {
                trace.render_text()
            } else {
                let mut t = trace.header_text();
                t.push_str(&trace.outputs_text());
                t
            };
            if round_trip {
                text.push_str("round-trip: ok\n");
            } else {
                text.push_str("round-trip: MISMATCH (outputs differ from inputs)\n");
            }
            text
        }
        OutputFormat::Structured => {
            let output = RunOutput {
                round_trip,
                outputs: outputs.iter().map(|v| display_value(v, fmt)).collect(),
                trace: &trace,
            };
            to_pretty_json(&output)
        }
    };
    print!("{text}");
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    Ok(if round_trip { 0 } else { 1 })
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Input domain: leading-zero or full
    #[arg(long, default_value = "leading-zero", value_parser = parse_domain)]
    domain: InputDomain,
    /// Verification mode: exhaustive or sampled
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Number of random tuples in sampled mode
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    count: u64,
    /// Seed for sampled mode
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refuse exhaustive runs with more cases than this
    #[arg(long, default_value_t = DEFAULT_CASE_BUDGET)]
    budget: u64,
    /// Output format: text or structured
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    /// Also write the report here
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, String> {
    let spec = args.spec.resolve()?;
    let report = match args.mode.as_str() {
        "exhaustive" => verify_exhaustive(&spec, args.domain, args.budget).map_err(|e| e.to_string())?,
        "sampled" => verify_sampled(&spec, args.domain, args.count, args.seed),
        other => return Err(format!("unknown mode '{other}' (expected exhaustive or sampled)")),
    };
    let text = match args.format {
        OutputFormat::Text => report.render_text(),
        OutputFormat::Structured => to_pretty_json(&report),
    };
    print!("{text}");
    if let Some(path) = &args.out {
        write_file(path, &text)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Tuple lengths: a comma list, a..b range, or both (e.g. 1..4)
    #[arg(long)]
    n: String,
    /// Digits per input: comma list or a..b range
    #[arg(long)]
    m: String,
    /// Floating-point radix shared by every cell
    #[arg(long, default_value_t = 2)]
    radix: u32,
    /// Stored fraction bits, list or range; precision = z+1 (radix 2 only)
    #[arg(long, conflicts_with = "precision")]
    z: Option<String>,
    /// Significand widths, list or range
    #[arg(long)]
    precision: Option<String>,
    /// Rounding modes, comma list of trunc and rne
    #[arg(long, default_value = "trunc")]
    rounding: String,
    /// Input domain: leading-zero or full
    #[arg(long, default_value = "leading-zero", value_parser = parse_domain)]
    domain: InputDomain,
    /// Cells with more cases than this fall back to sampling
    #[arg(long, default_value_t = DEFAULT_CASE_BUDGET)]
    budget: u64,
    /// Number of random tuples when a cell falls back to sampling
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    count: u64,
    /// Seed for sampled cells
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: text (CSV) or structured (JSON)
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn parse_u32_list(flag: &str, text: &str) -> Result<Vec<u32>, String> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|_| format!("--{flag}: bad range start '{lo}'"))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|_| format!("--{flag}: bad range end '{hi}'"))?;
            if lo > hi {
                return Err(format!("--{flag}: empty range {lo}..{hi}"));
            }
            values.extend(lo..=hi);
        } else {
            values.push(part.parse().map_err(|_| format!("--{flag}: bad value '{part}'"))?);
        }
    }
    if values.is_empty() {
        return Err(format!("--{flag}: no values given"));
    }
    Ok(values)
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, String> {
    let n_values = parse_u32_list("n", &args.n)?;
    let m_values = parse_u32_list("m", &args.m)?;
    if args.z.is_some() && args.radix != 2 {
        return Err("--z applies only to radix 2; use --precision".into());
    }
    let precisions = match (&args.z, &args.precision) {
        (Some(z), _) => parse_u32_list("z", z)?
            .into_iter()
            .map(|z| z.checked_add(1).ok_or_else(|| format!("--z: {z} is out of range")))
            .collect::<Result<Vec<u32>, String>>()?,
        (None, Some(p)) => parse_u32_list("precision", p)?,
        (None, None) if args.radix == 2 => vec![24],
        (None, None) => return Err(format!("--precision is required for radix {}", args.radix)),
    };
    let mut roundings = Vec::new();
    for part in args.rounding.split(',') {
        roundings.push(parse_rounding(part.trim())?);
    }

    let mut config = SweepConfig::grid(n_values, m_values, precisions, roundings);
    config.radix = args.radix;
    config.domain = args.domain;
    config.budget = args.budget;
    config.sample_count = args.count;
    config.seed = args.seed;

    let rows = capacity_sweep(&config).map_err(|e| e.to_string())?;
    let text = match args.format {
        OutputFormat::Text => sweep_to_csv(&rows),
        OutputFormat::Structured => to_pretty_json(&rows),
    };
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

#[derive(Args, Debug)]
struct DemoLineArgs {
    /// Slope of the demo line
    #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
    a: i64,
    /// Intercept of the demo line
    #[arg(long, default_value_t = 5, allow_hyphen_values = true)]
    b: i64,
    /// The point to push through, as x,y
    #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
    point: Vec<BigInt>,
    /// Floating-point radix
    #[arg(long, default_value_t = 2)]
    radix: u32,
    /// Stored fraction bits; the significand holds z+1 bits (radix 2 only)
    #[arg(long, conflicts_with = "precision")]
    z: Option<u32>,
    /// Significand width in radix digits
    #[arg(long)]
    precision: Option<u32>,
    /// Rounding mode: trunc or rne
    #[arg(long, default_value = "trunc", value_parser = parse_rounding)]
    rounding: Rounding,
    /// Output format: text or structured
    #[arg(long, default_value = "text", value_parser = parse_format)]
    format: OutputFormat,
    /// Print the full layer-by-layer trace
    #[arg(long)]
    trace: bool,
}

#[derive(Serialize)]
struct DemoLineOutput<'a> {
    a: i64,
    b: i64,
    input: Vec<String>,
    output: Vec<String>,
    round_trip: bool,
    trace: &'a TraceReport,
}

fn cmd_demo_line(args: DemoLineArgs) -> Result<i32, String> {
    if args.point.len() != 2 {
        return Err(format!("--point takes exactly two integers, got {}", args.point.len()));
    }
    let fmt = build_format(args.radix, args.z, args.precision, args.rounding)?;
    let slope = ScaledInteger::new(args.a, 0);
    let intercept = ScaledInteger::new(args.b, 0);
    let network = synthesize_line_demo(&slope, &intercept, &fmt).map_err(|e| e.to_string())?;
    let (outputs, trace) = network.forward(&args.point).map_err(|e| e.to_string())?;
    let round_trip = outputs
        .iter()
        .zip(&args.point)
        .all(|(out, expected)| out.to_integer(&fmt).is_ok_and(|v| v == *expected));

    let rendered: Vec<String> = outputs.iter().map(|v| display_value(v, &fmt)).collect();
    match args.format {
        OutputFormat::Text => {
            if args.trace {
                print!("{}", trace.render_text());
            }
            println!("({},{}) -> ({})", args.point[0], args.point[1], rendered.join(","));
            if !round_trip {
                println!("reconstruction differs from the input point");
            }
        }
        OutputFormat::Structured => {
            let output = DemoLineOutput {
                a: args.a,
                b: args.b,
                input: args.point.iter().map(|v| v.to_string()).collect(),
                output: rendered,
                round_trip,
                trace: &trace,
            };
            print!("{}", to_pretty_json(&output));
        }
    }
    Ok(if round_trip { 0 } else { 1 })
}
