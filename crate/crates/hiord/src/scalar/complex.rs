//! Configurable-precision complex scalar built as a pair of [`MpReal`]s.

use super::{MpReal, NormedScalar, Precision, Scalar, ScalarError};

/// Complex number with MPFR-backed parts. Both parts share one precision.
#[derive(Debug, Clone, PartialEq)]
pub struct MpComplex {
    re: MpReal,
    im: MpReal,
}

impl MpComplex {
    pub fn new(re: MpReal, im: MpReal) -> Self {
        // Keep both parts at the wider of the two precisions.
        let bits = re.precision().bits().max(im.precision().bits());
        let ctx = Precision::of(bits);
        Self {
            re: re.add(&MpReal::zero(&ctx)),
            im: im.add(&MpReal::zero(&ctx)),
        }
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        Self {
            re: MpReal::with_precision(prec, re),
            im: MpReal::with_precision(prec, im),
        }
    }

    pub fn from_real(re: MpReal) -> Self {
        let ctx = re.precision();
        Self {
            re,
            im: MpReal::zero(&ctx),
        }
    }

    pub fn re(&self) -> &MpReal {
        &self.re
    }

    pub fn im(&self) -> &MpReal {
        &self.im
    }

    pub fn precision(&self) -> Precision {
        self.re.precision()
    }

    pub fn conjugate(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }
}

impl std::fmt::Display for MpComplex {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(&self.to_decimal())
    }
}

impl Scalar for MpComplex {
    type Ctx = Precision;

    fn context(&self) -> Precision {
        self.precision()
    }

    fn zero(ctx: &Precision) -> Self {
        Self::from_f64(*ctx, 0.0, 0.0)
    }

    fn one(ctx: &Precision) -> Self {
        Self::from_f64(*ctx, 1.0, 0.0)
    }

    fn from_i64(ctx: &Precision, n: i64) -> Self {
        Self {
            re: MpReal::from_i64(ctx, n),
            im: MpReal::zero(ctx),
        }
    }

    /// Accepts `re` or `re,im` where each part is a decimal string.
    fn from_decimal(ctx: &Precision, text: &str) -> Result<Self, ScalarError> {
        match text.split_once(',') {
            None => Ok(Self::from_real(MpReal::from_decimal(ctx, text)?)),
            Some((re, im)) => Ok(Self {
                re: MpReal::from_decimal(ctx, re)?,
                im: MpReal::from_decimal(ctx, im)?,
            }),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        Self { re, im }
    }

    fn neg(&self) -> Self {
        Self {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // (a+bi)/(c+di) = (a+bi)(c-di) / (c²+d²)
        let norm = rhs.re.mul(&rhs.re).add(&rhs.im.mul(&rhs.im));
        let num = self.mul(&rhs.conjugate());
        Ok(Self {
            re: num.re.div(&norm)?,
            im: num.im.div(&norm)?,
        })
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn precision_bits(&self) -> Option<u32> {
        Some(self.precision().bits())
    }

    fn to_decimal(&self) -> String {
        if self.im.is_zero() {
            self.re.to_decimal()
        } else {
            format!("{},{}", self.re.to_decimal(), self.im.to_decimal())
        }
    }
}

impl NormedScalar for MpComplex {
    type Mag = MpReal;

    fn magnitude(&self) -> MpReal {
        self.re.hypot(&self.im)
    }
}
