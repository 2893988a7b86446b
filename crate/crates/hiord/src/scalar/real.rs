//! Configurable-precision real scalar backed by MPFR.

use rug::float::Round;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::{NormedScalar, Precision, RealScalar, Scalar, ScalarError};

/// Arbitrary-precision real number. Every value knows its own mantissa
/// size; binary operations produce the larger of the operand precisions.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct MpReal {
    f: Float,
}

impl MpReal {
    pub fn with_precision(prec: Precision, value: f64) -> Self {
        Self {
            f: Float::with_val(prec.bits(), value),
        }
    }

    pub fn from_integer(prec: Precision, n: &Integer) -> Self {
        Self {
            f: Float::with_val(prec.bits(), n),
        }
    }

    pub fn from_rational(prec: Precision, r: &Rational) -> Self {
        Self {
            f: Float::with_val(prec.bits(), r),
        }
    }

    pub fn precision(&self) -> Precision {
        Precision::of(self.f.prec())
    }

    /// The same value re-rounded to another working precision.
    pub fn to_precision(&self, prec: Precision) -> Self {
        Self {
            f: Float::with_val(prec.bits(), &self.f),
        }
    }

    fn bits(&self) -> u32 {
        self.f.prec()
    }

    fn join_bits(&self, rhs: &Self) -> u32 {
        self.bits().max(rhs.bits())
    }

    pub fn as_float(&self) -> &Float {
        &self.f
    }

    pub fn into_float(self) -> Float {
        self.f
    }

    pub fn sqrt(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), self.f.sqrt_ref()),
        }
    }

    /// Natural log; requires a positive argument.
    pub fn ln(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), self.f.ln_ref()),
        }
    }

    pub fn log2(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), self.f.log2_ref()),
        }
    }

    pub fn exp(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), self.f.exp_ref()),
        }
    }

    /// `self` raised to an arbitrary real power.
    pub fn pow(&self, exponent: &Self) -> Self {
        Self {
            f: Float::with_val(self.join_bits(exponent), (&self.f).pow(&exponent.f)),
        }
    }

    pub fn pow_i(&self, exponent: i32) -> Self {
        Self {
            f: Float::with_val(self.bits(), (&self.f).pow(exponent)),
        }
    }

    pub fn hypot(&self, other: &Self) -> Self {
        Self {
            f: Float::with_val(self.join_bits(other), self.f.hypot_ref(&other.f)),
        }
    }

    pub fn is_sign_negative(&self) -> bool {
        self.f.is_sign_negative() && !self.f.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.f.is_finite()
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// 2^exp at the given precision.
    pub fn exp2(prec: Precision, exp: i32) -> Self {
        let mut f = Float::with_val(prec.bits(), 1);
        f <<= exp;
        Self { f }
    }
}

impl std::fmt::Display for MpReal {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(&self.to_decimal())
    }
}

impl From<Float> for MpReal {
    fn from(f: Float) -> Self {
        Self { f }
    }
}

impl Scalar for MpReal {
    type Ctx = Precision;

    fn context(&self) -> Precision {
        self.precision()
    }

    fn zero(ctx: &Precision) -> Self {
        Self {
            f: Float::with_val(ctx.bits(), 0),
        }
    }

    fn one(ctx: &Precision) -> Self {
        Self {
            f: Float::with_val(ctx.bits(), 1),
        }
    }

    fn from_i64(ctx: &Precision, n: i64) -> Self {
        Self {
            f: Float::with_val(ctx.bits(), n),
        }
    }

    fn from_decimal(ctx: &Precision, text: &str) -> Result<Self, ScalarError> {
        let parsed = Float::parse(text.trim()).map_err(|_| ScalarError::Parse(text.into()))?;
        Ok(Self {
            f: Float::with_val(ctx.bits(), parsed),
        })
    }

    fn add(&self, rhs: &Self) -> Self {
        Self {
            f: Float::with_val(self.join_bits(rhs), &self.f + &rhs.f),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            f: Float::with_val(self.join_bits(rhs), &self.f - &rhs.f),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self {
            f: Float::with_val(self.join_bits(rhs), &self.f * &rhs.f),
        }
    }

    fn neg(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), -&self.f),
        }
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.f.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self {
            f: Float::with_val(self.join_bits(rhs), &self.f / &rhs.f),
        })
    }

    fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    fn precision_bits(&self) -> Option<u32> {
        Some(self.bits())
    }

    fn to_decimal(&self) -> String {
        if !self.f.is_finite() {
            return if self.f.is_nan() {
                "nan".into()
            } else if self.f.is_sign_negative() {
                "-inf".into()
            } else {
                "inf".into()
            };
        }
        // Full round-trip digit count, then normalize "x.yyye5" notation.
        let (sign, digits, exp) = self.f.to_sign_string_exp_round(10, None, Round::Nearest);
        format_decimal(sign, &digits, exp)
    }
}

impl RealScalar for MpReal {
    fn abs(&self) -> Self {
        Self {
            f: Float::with_val(self.bits(), self.f.abs_ref()),
        }
    }

    fn to_f64(&self) -> f64 {
        self.f.to_f64()
    }

    fn log2_f64(&self) -> f64 {
        if self.f.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.f.is_sign_negative() {
            return f64::NAN;
        }
        let (mantissa, exp) = self.f.to_f64_exp();
        mantissa.log2() + exp as f64
    }
}

impl NormedScalar for MpReal {
    type Mag = MpReal;

    fn magnitude(&self) -> MpReal {
        RealScalar::abs(self)
    }
}

/// Renders MPFR's (sign, digit-string, decimal-exponent) triple as a plain
/// decimal with an `e` exponent only when far from 1.
fn format_decimal(negative: bool, digits: &str, exp: Option<i32>) -> String {
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        return "0".into();
    }
    let exp = exp.unwrap_or(0);
    let sign = if negative { "-" } else { "" };
    let body = if exp <= 0 && exp > -6 {
        format!("0.{}{}", "0".repeat(-exp as usize), digits)
    } else if exp > 0 && (exp as usize) <= digits.len() {
        let (int, frac) = digits.split_at(exp as usize);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else if exp > 0 && (exp as usize) <= digits.len() + 6 {
        format!("{}{}", digits, "0".repeat(exp as usize - digits.len()))
    } else {
        // Scientific: d.ddd e (exp-1).
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{head}e{}", exp - 1)
        } else {
            format!("{head}.{tail}e{}", exp - 1)
        }
    };
    format!("{sign}{body}")
}
