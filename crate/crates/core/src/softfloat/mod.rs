//! Floating-point arithmetic with a configurable radix, a configurable
//! significand width, and no exponent limits.
//!
//! A value is `sign * significand * radix^exponent`. The significand holds at
//! most `precision` significant radix digits; the exponent is an ordinary
//! machine integer that never saturates, so there are no infinities, NaNs, or
//! subnormals. The only lossy step anywhere is rounding the significand after
//! an operation, which is exactly the effect the packing network exploits.

mod arith;
pub(crate) mod digits;
mod render;
mod value;

pub use arith::{add, mul, power_of_radix, sub};
pub(crate) use render::display_value;
pub use render::{render_digits, render_value};
pub use value::{FloatValue, Sign};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Digit alphabet limit for [`render_digits`]: `'0'..'9'` then `'a'..'z'`.
pub const MAX_RENDER_RADIX: u32 = 36;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(u32),
    #[error("precision must be at least 1 significant digit, got {0}")]
    InvalidPrecision(u32),
    #[error("round-to-nearest-even is only defined for radix 2, got radix {0}")]
    RoundingUnsupported(u32),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValueError {
    #[error("value has digits below the radix point and is not an integer")]
    NotAnInteger,
    #[error("value is negative")]
    NegativeValue,
    #[error("radix {0} exceeds the digit alphabet (max {MAX_RENDER_RADIX})")]
    UnrenderableRadix(u32),
}

/// How a significand that exceeds the precision is cut back down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rounding {
    /// Drop excess digits outright. Defined for every radix.
    #[serde(rename = "trunc")]
    TruncateTowardZero,
    /// IEEE-style nearest with ties to an even significand. Radix 2 only.
    #[serde(rename = "rne")]
    RoundNearestEven,
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rounding::TruncateTowardZero => f.write_str("trunc"),
            Rounding::RoundNearestEven => f.write_str("rne"),
        }
    }
}

impl FromStr for Rounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trunc" => Ok(Rounding::TruncateTowardZero),
            "rne" => Ok(Rounding::RoundNearestEven),
            other => Err(format!("unknown rounding mode {other:?} (expected trunc or rne)")),
        }
    }
}

/// Radix, significand width, and rounding mode for a family of values.
///
/// Values do not carry their format; every operation takes the format as an
/// argument, and mixing values from different formats is a caller bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FormatRepr", into = "FormatRepr")]
pub struct FloatFormat {
    radix: u32,
    precision: u32,
    rounding: Rounding,
}

impl FloatFormat {
    pub fn new(radix: u32, precision: u32, rounding: Rounding) -> Result<Self, FormatError> {
        if radix < 2 {
            return Err(FormatError::InvalidRadix(radix));
        }
        if precision < 1 {
            return Err(FormatError::InvalidPrecision(precision));
        }
        if rounding == Rounding::RoundNearestEven && radix != 2 {
            return Err(FormatError::RoundingUnsupported(radix));
        }
        Ok(FloatFormat {
            radix,
            precision,
            rounding,
        })
    }

    /// Binary format with `z` stored mantissa digits, i.e. `z + 1` significant
    /// bits under the hidden-bit convention. `binary(23, RoundNearestEven)`
    /// matches IEEE binary32 for values in its normal range.
    pub fn binary(z: u32, rounding: Rounding) -> Result<Self, FormatError> {
        let precision = z.checked_add(1).ok_or(FormatError::InvalidPrecision(u32::MAX))?;
        FloatFormat::new(2, precision, rounding)
    }

    /// Same radix and precision with a different rounding mode.
    pub fn with_rounding(self, rounding: Rounding) -> Result<Self, FormatError> {
        FloatFormat::new(self.radix, self.precision, rounding)
    }

    pub fn radix(&self) -> u32 {
        self.radix
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rounding(&self) -> Rounding {
        self.rounding
    }
}

#[derive(Serialize, Deserialize)]
struct FormatRepr {
    radix: u32,
    precision: u32,
    rounding: Rounding,
}

impl TryFrom<FormatRepr> for FloatFormat {
    type Error = FormatError;

    fn try_from(repr: FormatRepr) -> Result<Self, Self::Error> {
        FloatFormat::new(repr.radix, repr.precision, repr.rounding)
    }
}

impl From<FloatFormat> for FormatRepr {
    fn from(fmt: FloatFormat) -> Self {
        FormatRepr {
            radix: fmt.radix,
            precision: fmt.precision,
            rounding: fmt.rounding,
        }
    }
}
