//! Dense univariate polynomials, generic over the scalar realization.
//!
//! `Polynomial<S>` also implements [`Scalar`] itself (with exact division
//! as the only fallible operation), so the generic recurrence kernels can
//! run with polynomial coefficients and yield symbolic identities.

use crate::scalar::{Rat, Scalar, ScalarError};

/// Coefficients ascending by degree. Canonical form: no trailing zero
/// coefficients, except the zero polynomial which is the single entry `[0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<S: Scalar> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// Builds from ascending coefficients; `coeffs` must be nonempty.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "coefficient list must be nonempty");
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map_or(false, S::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero(ctx: &S::Ctx) -> Self {
        Self {
            coeffs: vec![S::zero(ctx)],
        }
    }

    pub fn constant(value: S) -> Self {
        Self {
            coeffs: vec![value],
        }
    }

    /// The monomial `x`.
    pub fn identity(ctx: &S::Ctx) -> Self {
        Self::new(vec![S::zero(ctx), S::one(ctx)])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the stored degree.
    pub fn coeff(&self, i: usize) -> S {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| S::zero(&self.scalar_ctx()))
    }

    pub fn scalar_ctx(&self) -> S::Ctx {
        self.coeffs[0].context()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> &S {
        self.coeffs.last().expect("canonical form is nonempty")
    }

    /// Horner evaluation.
    pub fn evaluate(&self, x: &S) -> S {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let ctx = self.scalar_ctx();
        if self.coeffs.len() == 1 {
            return Self::zero(&ctx);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&S::from_i64(&ctx, i as i64)))
            .collect();
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(factor)).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(S::one(&self.scalar_ctx()));
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self), ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let ctx = self.scalar_ctx();
        let mut rem = self.clone();
        let mut quot = Self::zero(&ctx);
        let d = rhs.degree().expect("nonzero divisor");
        while let Some(n) = rem.degree() {
            if n < d {
                break;
            }
            let factor = rem.leading().div(rhs.leading())?;
            let mut shifted = vec![S::zero(&ctx); n - d];
            shifted.push(factor.clone());
            let term = Self::new(shifted);
            quot = quot.add(&term);
            rem = rem.sub(&rhs.mul(&term));
        }
        Ok((quot, rem))
    }
}

impl Polynomial<Rat> {
    /// Nonnegative rational content: the gcd of all coefficients.
    pub fn content(&self) -> Rat {
        let mut acc = Rat::zero(&());
        for c in &self.coeffs {
            acc = acc.gcd(c);
        }
        acc
    }
}

impl<S: Scalar> std::fmt::Display for Polynomial<S> {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return out.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                out.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(out, "({c})")?,
                1 => write!(out, "({c})·x")?,
                _ => write!(out, "({c})·x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Scalar for Polynomial<S> {
    type Ctx = S::Ctx;

    fn context(&self) -> S::Ctx {
        self.scalar_ctx()
    }

    fn zero(ctx: &S::Ctx) -> Self {
        Polynomial::zero(ctx)
    }

    fn one(ctx: &S::Ctx) -> Self {
        Polynomial::constant(S::one(ctx))
    }

    fn from_i64(ctx: &S::Ctx, n: i64) -> Self {
        Polynomial::constant(S::from_i64(ctx, n))
    }

    fn from_decimal(ctx: &S::Ctx, text: &str) -> Result<Self, ScalarError> {
        Ok(Polynomial::constant(S::from_decimal(ctx, text)?))
    }

    fn add(&self, rhs: &Self) -> Self {
        let ctx = self.scalar_ctx();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(&ctx));
                let b = rhs.coeffs.get(i).cloned().unwrap_or_else(|| S::zero(&ctx));
                a.add(&b)
            })
            .collect();
        Self::new(coeffs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let ctx = self.scalar_ctx();
        let mut coeffs = vec![S::zero(&ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::new(coeffs)
    }

    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(S::neg).collect())
    }

    /// Exact division; a nonzero remainder is an error.
    fn div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ScalarError::InexactDivision)
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    fn precision_bits(&self) -> Option<u32> {
        self.coeffs[0].precision_bits()
    }

    fn to_decimal(&self) -> String {
        self.to_string()
    }
}

/// Parses a comma-separated ascending coefficient list such as `-2,0,1`.
pub fn parse_coeffs<S: Scalar>(ctx: &S::Ctx, text: &str) -> Result<Vec<S>, ScalarError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ScalarError::Parse(text.into()));
    }
    trimmed
        .split(',')
        .map(|tok| S::from_decimal(ctx, tok))
        .collect()
}
