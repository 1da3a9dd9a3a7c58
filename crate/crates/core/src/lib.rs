//! A hand-synthesized "pseudo-autoencoder" that packs a tuple of bounded
//! integers into a single bottleneck value and reconstructs them exactly,
//! using nothing but linear layers and deliberate floating-point truncation.
//!
//! The crate has three layers of machinery:
//!
//! * [`softfloat`]: sign/significand/exponent arithmetic with configurable
//!   radix, precision, and rounding. The network's reconstruction step works
//!   *because* of finite precision, so the engine makes the rounding step
//!   explicit and inspectable instead of hiding it in hardware.
//! * [`net`]: network synthesis and execution. Weights are exact scaled
//!   integers; a forward pass records every intermediate value as a framed
//!   digit string so the digit movement is visible layer by layer.
//! * [`verify`]: exact-integer oracles plus exhaustive, sampled, and sweep
//!   verification of the round-trip property and the capacity boundary.

pub mod cli;
pub mod net;
pub mod softfloat;
pub mod verify;

pub use net::{synthesize, synthesize_line_demo, Network, NetworkSpec, ScaledInteger, TraceReport};
pub use softfloat::{FloatFormat, FloatValue, Rounding, Sign};
pub use verify::{verify_exhaustive, verify_sampled, InputDomain, VerifyReport};
