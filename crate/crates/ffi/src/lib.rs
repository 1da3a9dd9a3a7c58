//! C ABI over the packing networks: opaque handles, status codes, and
//! JSON or text documents returned as strings the caller frees with
//! [`pae_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use pseudoae::net::{synthesize, Network, NetworkSpec};
use pseudoae::softfloat::{FloatFormat, Rounding};
use pseudoae::verify::{verify_exhaustive, verify_sampled, InputDomain, VerifyError};

/// Result of every fallible call. Anything other than `Ok` leaves the out
/// parameters untouched; `pae_last_error_message` explains the failure.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaeStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument failed validation (radix, precision, rounding, sizes).
    InvalidArgument = 2,
    /// A JSON document did not describe a valid network.
    InvalidDocument = 3,
    /// The input count does not match the network.
    ShapeMismatch = 4,
    /// Exhaustive verification would exceed the case budget.
    BudgetExceeded = 5,
    /// The library panicked; treat the handle as poisoned.
    Panic = 6,
}

/// A synthesized or loaded network. Created by `pae_network_synthesize` or
/// `pae_network_from_json`, released with `pae_network_free`.
pub struct PaeNetwork {
    inner: Network,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let sanitized = message.into().replace('\0', " ");
    let text = CString::new(sanitized).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn guard(body: impl FnOnce() -> PaeStatus) -> PaeStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            PaeStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PaeStatus> {
    if ptr.is_null() {
        set_error(format!("{what} is null"));
        return Err(PaeStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        PaeStatus::InvalidArgument
    })
}

unsafe fn required_out<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, PaeStatus> {
    if ptr.is_null() {
        set_error(format!("{what} is null"));
        return Err(PaeStatus::NullPointer);
    }
    Ok(&mut *ptr)
}

unsafe fn required_network<'a>(ptr: *const PaeNetwork) -> Result<&'a Network, PaeStatus> {
    if ptr.is_null() {
        set_error("network is null");
        return Err(PaeStatus::NullPointer);
    }
    Ok(&(*ptr).inner)
}

fn build_spec(n: u32, m: u32, radix: u32, precision: u32, rounding: &str) -> Result<NetworkSpec, PaeStatus> {
    let rounding: Rounding = rounding.parse().map_err(|e: String| {
        set_error(e);
        PaeStatus::InvalidArgument
    })?;
    let fmt = FloatFormat::new(radix, precision, rounding).map_err(|e| {
        set_error(e.to_string());
        PaeStatus::InvalidArgument
    })?;
    NetworkSpec::new(n, m, fmt).map_err(|e| {
        set_error(e.to_string());
        PaeStatus::InvalidArgument
    })
}

fn parse_domain(text: &str) -> Result<InputDomain, PaeStatus> {
    text.parse().map_err(|e: String| {
        set_error(e);
        PaeStatus::InvalidArgument
    })
}

unsafe fn read_inputs(inputs: *const i64, count: usize) -> Result<Vec<BigInt>, PaeStatus> {
    if inputs.is_null() && count > 0 {
        set_error("inputs is null");
        return Err(PaeStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(inputs, count)
        .iter()
        .map(|&v| BigInt::from(v))
        .collect())
}

fn export_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " ")).unwrap_or_default().into_raw()
}

/// Returns the library version as a static string; do not free it.
#[no_mangle]
pub extern "C" fn pae_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Returns the message for the most recent failure on this thread as a fresh
/// string (free with `pae_string_free`), or null if nothing failed yet.
#[no_mangle]
pub extern "C" fn pae_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |text| text.clone().into_raw())
    })
}

/// Frees a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `text` must be null or a pointer previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pae_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Builds the packing network for `n` inputs of `m` radix digits each.
/// `rounding` is "trunc" or "rne". On success `*out` owns the network.
///
/// # Safety
/// `rounding` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pae_network_synthesize(
    n: u32,
    m: u32,
    radix: u32,
    precision: u32,
    rounding: *const c_char,
    out: *mut *mut PaeNetwork,
) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let rounding = required_str(rounding, "rounding")?;
            let out = required_out(out, "out")?;
            let spec = build_spec(n, m, radix, precision, rounding)?;
            *out = Box::into_raw(Box::new(PaeNetwork {
                inner: synthesize(&spec),
            }));
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Parses a network document produced by `pae_network_to_json` or the CLI.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pae_network_from_json(json: *const c_char, out: *mut *mut PaeNetwork) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let json = required_str(json, "json")?;
            let out = required_out(out, "out")?;
            let network = Network::from_json(json).map_err(|e| {
                set_error(e.to_string());
                PaeStatus::InvalidDocument
            })?;
            *out = Box::into_raw(Box::new(PaeNetwork { inner: network }));
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Serializes the network as a JSON document (free with `pae_string_free`).
///
/// # Safety
/// `network` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pae_network_to_json(network: *const PaeNetwork, out: *mut *mut c_char) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let network = required_network(network)?;
            let out = required_out(out, "out")?;
            *out = export_string(network.to_json());
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Releases a network handle. Passing null is a no-op.
///
/// # Safety
/// `network` must be null or an unfreed handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pae_network_free(network: *mut PaeNetwork) {
    if !network.is_null() {
        drop(Box::from_raw(network));
    }
}

/// Writes the number of network inputs to `*out`.
///
/// # Safety
/// `network` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pae_network_input_count(network: *const PaeNetwork, out: *mut u32) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let network = required_network(network)?;
            let out = required_out(out, "out")?;
            *out = network.spec().n();
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Writes whether every tuple of the leading-zero domain reconstructs, that
/// is whether n*m fits the significand.
///
/// # Safety
/// `network` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pae_network_capacity_safe(network: *const PaeNetwork, out: *mut bool) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let network = required_network(network)?;
            let out = required_out(out, "out")?;
            *out = network.spec().is_capacity_safe();
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Runs a forward pass and writes the reconstructed integers to `outputs`.
/// `output_count` must equal the input count of the network.
///
/// # Safety
/// `inputs` must point to `input_count` values and `outputs` must have room
/// for `output_count` values.
#[no_mangle]
pub unsafe extern "C" fn pae_network_forward(
    network: *const PaeNetwork,
    inputs: *const i64,
    input_count: usize,
    outputs: *mut i64,
    output_count: usize,
) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let network = required_network(network)?;
            let inputs = read_inputs(inputs, input_count)?;
            if outputs.is_null() {
                set_error("outputs is null");
                return Err(PaeStatus::NullPointer);
            }
            if output_count != network.spec().n() as usize {
                set_error(format!(
                    "output buffer holds {output_count} values, the network produces {}",
                    network.spec().n()
                ));
                return Err(PaeStatus::ShapeMismatch);
            }
            let (values, _) = network.forward(&inputs).map_err(|e| {
                set_error(e.to_string());
                PaeStatus::ShapeMismatch
            })?;
            let fmt = network.spec().format();
            let mut written = Vec::with_capacity(values.len());
            for value in &values {
                let integer = value.to_integer(fmt).map_err(|e| {
                    set_error(e.to_string());
                    PaeStatus::InvalidArgument
                })?;
                written.push(i64::try_from(integer).map_err(|_| {
                    set_error("an output does not fit a 64-bit integer");
                    PaeStatus::InvalidArgument
                })?);
            }
            std::slice::from_raw_parts_mut(outputs, output_count).copy_from_slice(&written);
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Runs a forward pass and returns the layer-by-layer trace as text (free
/// with `pae_string_free`).
///
/// # Safety
/// `inputs` must point to `input_count` values and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn pae_network_trace_text(
    network: *const PaeNetwork,
    inputs: *const i64,
    input_count: usize,
    out: *mut *mut c_char,
) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let network = required_network(network)?;
            let inputs = read_inputs(inputs, input_count)?;
            let out = required_out(out, "out")?;
            let (_, trace) = network.forward(&inputs).map_err(|e| {
                set_error(e.to_string());
                PaeStatus::ShapeMismatch
            })?;
            *out = export_string(trace.render_text());
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Checks every tuple of the domain ("leading-zero" or "full") and returns
/// the verification report as JSON (free with `pae_string_free`).
///
/// # Safety
/// `rounding`, `domain`, and `report_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pae_verify_exhaustive(
    n: u32,
    m: u32,
    radix: u32,
    precision: u32,
    rounding: *const c_char,
    domain: *const c_char,
    budget: u64,
    report_out: *mut *mut c_char,
) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let rounding = required_str(rounding, "rounding")?;
            let domain = parse_domain(required_str(domain, "domain")?)?;
            let report_out = required_out(report_out, "report_out")?;
            let spec = build_spec(n, m, radix, precision, rounding)?;
            let report = verify_exhaustive(&spec, domain, budget).map_err(|e| {
                set_error(e.to_string());
                match e {
                    VerifyError::BudgetExceeded { .. } => PaeStatus::BudgetExceeded,
                    _ => PaeStatus::InvalidArgument,
                }
            })?;
            *report_out = export_string(serde_json::to_string_pretty(&report).expect("report serialization"));
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}

/// Checks `count` seeded random tuples of the domain and returns the
/// verification report as JSON (free with `pae_string_free`).
///
/// # Safety
/// `rounding`, `domain`, and `report_out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pae_verify_sampled(
    n: u32,
    m: u32,
    radix: u32,
    precision: u32,
    rounding: *const c_char,
    domain: *const c_char,
    count: u64,
    seed: u64,
    report_out: *mut *mut c_char,
) -> PaeStatus {
    guard(|| {
        let result = (|| {
            let rounding = required_str(rounding, "rounding")?;
            let domain = parse_domain(required_str(domain, "domain")?)?;
            let report_out = required_out(report_out, "report_out")?;
            let spec = build_spec(n, m, radix, precision, rounding)?;
            let report = verify_sampled(&spec, domain, count, seed);
            *report_out = export_string(serde_json::to_string_pretty(&report).expect("report serialization"));
            Ok(())
        })();
        result.err().unwrap_or(PaeStatus::Ok)
    })
}
