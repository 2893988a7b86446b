//! Scalar arithmetic contract shared by every numeric kernel in this crate.
//!
//! The same generic code (the A-sequence recurrence, iteration steps, jets)
//! runs over four realizations:
//!
//! * [`MpReal`] — configurable-precision real (MPFR-backed),
//! * [`MpComplex`] — configurable-precision complex built on [`MpReal`],
//! * [`Rat`] — exact rational, used by the equivalence oracle,
//! * [`crate::poly::Polynomial`] — polynomial coefficients, used by the
//!   symbolic identity checks.
//!
//! Division by an exact zero is always an error, never a silent infinity.

use std::fmt;

mod complex;
mod rational;
mod real;

pub use complex::MpComplex;
pub use rational::Rat;
pub use real::MpReal;

/// Binary mantissa precision for the configurable-precision realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Precision {
    bits: u32,
}

impl Precision {
    /// Smallest supported mantissa size.
    pub const MIN_BITS: u32 = 24;
    /// Default working precision.
    pub const DEFAULT_BITS: u32 = 256;
    /// Profile used for reproducing the published residual tables.
    pub const TABLE_BITS: u32 = 10000;

    pub fn new(bits: u32) -> Result<Self, ScalarError> {
        if bits < Self::MIN_BITS {
            Err(ScalarError::PrecisionTooLow(bits))
        } else {
            Ok(Self { bits })
        }
    }

    /// `new` for callers that have already validated the bit count.
    pub fn of(bits: u32) -> Self {
        Self::new(bits).expect("precision below the supported minimum")
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    /// Decimal digits that round-trip this precision (with a small margin).
    pub fn decimal_digits(self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            bits: Self::DEFAULT_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by exact zero")]
    DivisionByZero,
    #[error("inexact division in an exact domain")]
    InexactDivision,
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
    #[error("precision must be at least 24 bits, got {0}")]
    PrecisionTooLow(u32),
}

/// Arithmetic capability set required by the generic kernels.
///
/// `Ctx` carries whatever construction state a realization needs (a
/// [`Precision`] for the floating realizations, `()` for exact ones), so
/// generic code can mint constants compatible with its operands.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + PartialEq + 'static {
    type Ctx: Clone;

    /// Construction context of this value (e.g. its precision).
    fn context(&self) -> Self::Ctx;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    /// Parse a decimal string such as `-1.25e-3`.
    fn from_decimal(ctx: &Self::Ctx, text: &str) -> Result<Self, ScalarError>;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division; an exact-zero divisor is rejected.
    fn div(&self, rhs: &Self) -> Result<Self, ScalarError>;

    /// Exact-zero test (not a tolerance test).
    fn is_zero(&self) -> bool;

    /// Mantissa bits when the representation rounds, `None` when exact.
    fn precision_bits(&self) -> Option<u32>;

    /// Decimal form carrying enough digits to round-trip the value.
    fn to_decimal(&self) -> String;
}

/// Ordered scalars with a real magnitude, enough for tolerance logic.
pub trait RealScalar: Scalar + PartialOrd {
    fn abs(&self) -> Self;
    /// Lossy conversion; may overflow to infinity.
    fn to_f64(&self) -> f64;
    /// `log2` of a positive value as `f64`, computed from mantissa and
    /// exponent so it stays finite even when the value itself overflows
    /// `f64`. Returns `-inf` for zero.
    fn log2_f64(&self) -> f64;
}

/// Scalars with a magnitude usable in stopping rules and basin tests.
pub trait NormedScalar: Scalar {
    type Mag: RealScalar;
    fn magnitude(&self) -> Self::Mag;
}
