//! Exact rational scalar, the arithmetic of the equivalence oracle.

use rug::ops::Pow as _;
use rug::{Float, Integer, Rational};

use super::{NormedScalar, RealScalar, Scalar, ScalarError};

/// Exact rational number; all operations are exact, division by zero is
/// the only failure mode.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Rat {
    r: Rational,
}

impl Rat {
    pub fn from_integer(n: i64) -> Self {
        Self {
            r: Rational::from(n),
        }
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self {
            r: Rational::from((num, den)),
        }
    }

    pub fn as_rational(&self) -> &Rational {
        &self.r
    }

    pub fn numerator(&self) -> &Integer {
        self.r.numer()
    }

    pub fn denominator(&self) -> &Integer {
        self.r.denom()
    }

    pub fn is_integer(&self) -> bool {
        *self.r.denom() == 1
    }

    /// Exact nonnegative gcd: gcd(a/b, c/d) = gcd(a·d, c·b)/(b·d).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return RealScalar::abs(other);
        }
        if other.is_zero() {
            return RealScalar::abs(self);
        }
        let num = Integer::from(self.r.numer() * other.r.denom())
            .gcd(&Integer::from(other.r.numer() * self.r.denom()));
        let den = Integer::from(self.r.denom() * other.r.denom());
        Self {
            r: Rational::from((num, den)),
        }
    }
}

impl From<Rational> for Rat {
    fn from(r: Rational) -> Self {
        Self { r }
    }
}

impl std::fmt::Display for Rat {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(&self.to_decimal())
    }
}

/// Parses a plain decimal such as `-12.875e-2` into an exact rational.
fn decimal_to_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().ok()?),
        None => (text, 0),
    };
    let (mantissa, neg) = match mantissa.strip_prefix('-') {
        Some(rest) => (rest, true),
        None => (mantissa.strip_prefix('+').unwrap_or(mantissa), false),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num = Integer::from_str_radix(&digits, 10).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let mut r = Rational::from(num);
    let pow = Integer::from(10).pow(u32::try_from(scale.unsigned_abs()).ok()?);
    if scale >= 0 {
        r *= &pow;
    } else {
        r /= &pow;
    }
    Some(r)
}

impl Scalar for Rat {
    type Ctx = ();

    fn context(&self) {}

    fn zero(_: &()) -> Self {
        Self {
            r: Rational::new(),
        }
    }

    fn one(_: &()) -> Self {
        Self::from_integer(1)
    }

    fn from_i64(_: &(), n: i64) -> Self {
        Self::from_integer(n)
    }

    /// Accepts `p/q` fractions and plain decimals; both parse exactly.
    fn from_decimal(_: &(), text: &str) -> Result<Self, ScalarError> {
        let text = text.trim();
        if text.contains('/') {
            return text
                .parse::<Rational>()
                .map(|r| Self { r })
                .map_err(|_| ScalarError::Parse(text.into()));
        }
        decimal_to_rational(text)
            .map(|r| Self { r })
            .ok_or_else(|| ScalarError::Parse(text.into()))
    }

    fn add(&self, rhs: &Self) -> Self {
        Self {
            r: Rational::from(&self.r + &rhs.r),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            r: Rational::from(&self.r - &rhs.r),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Self {
            r: Rational::from(&self.r * &rhs.r),
        }
    }

    fn neg(&self) -> Self {
        Self {
            r: Rational::from(-&self.r),
        }
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self {
            r: Rational::from(&self.r / &rhs.r),
        })
    }

    fn is_zero(&self) -> bool {
        self.r == 0
    }

    fn precision_bits(&self) -> Option<u32> {
        None
    }

    fn to_decimal(&self) -> String {
        if self.is_integer() {
            self.r.numer().to_string()
        } else {
            self.r.to_string()
        }
    }
}

impl RealScalar for Rat {
    fn abs(&self) -> Self {
        Self {
            r: Rational::from(self.r.abs_ref()),
        }
    }

    fn to_f64(&self) -> f64 {
        self.r.to_f64()
    }

    fn log2_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if self.r < 0 {
            return f64::NAN;
        }
        let (mantissa, exp) = Float::with_val(64, &self.r).to_f64_exp();
        mantissa.log2() + exp as f64
    }
}

impl NormedScalar for Rat {
    type Mag = Rat;

    fn magnitude(&self) -> Rat {
        RealScalar::abs(self)
    }
}
