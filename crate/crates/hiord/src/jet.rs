//! Jets — a function's value and raw derivatives at one expansion point —
//! and the model abstraction that supplies them.
//!
//! Derivatives are stored raw (`f⁽ʲ⁾`, factorials not divided out), since
//! every consumer formula carries its own explicit `1/l!` factors.

use serde_json::{json, Value};

use crate::poly::Polynomial;
use crate::scalar::{NormedScalar, RealScalar, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JetError {
    #[error("a jet needs order at least 1")]
    OrderTooLow,
    #[error("empty coefficient list")]
    EmptyCoefficients,
    #[error("jet of order {have} cannot serve a request of order {need}")]
    OrderBelow { need: usize, have: usize },
    #[error("evaluation failed at {point}: {reason}")]
    Evaluation { point: String, reason: String },
    #[error("point at or beyond a domain boundary where derivatives are unbounded")]
    OutsideDomain,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Value and derivatives `f(x), f′(x), …, f⁽ᴷ⁾(x)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet<S: Scalar> {
    point: S,
    derivs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    /// `derivs[j]` must hold the raw j-th derivative; at least `[f, f′]`.
    pub fn new(point: S, derivs: Vec<S>) -> Result<Self, JetError> {
        if derivs.len() < 2 {
            return Err(JetError::OrderTooLow);
        }
        Ok(Self { point, derivs })
    }

    pub fn point(&self) -> &S {
        &self.point
    }

    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn derivs(&self) -> &[S] {
        &self.derivs
    }

    /// Raw j-th derivative; panics beyond the stored order.
    pub fn deriv(&self, j: usize) -> &S {
        &self.derivs[j]
    }

    pub fn require_order(&self, need: usize) -> Result<(), JetError> {
        if self.order() < need {
            Err(JetError::OrderBelow {
                need,
                have: self.order(),
            })
        } else {
            Ok(())
        }
    }

    /// The same jet cut down to a lower order.
    pub fn truncated(&self, order: usize) -> Result<Self, JetError> {
        self.require_order(order)?;
        Jet::new(self.point.clone(), self.derivs[..=order].to_vec())
    }

    /// `{"point": "...", "derivs": ["...", ...]}` with decimal strings.
    pub fn to_json(&self) -> Value {
        json!({
            "point": self.point.to_decimal(),
            "derivs": self.derivs.iter().map(S::to_decimal).collect::<Vec<_>>(),
        })
    }
}

/// Supplier of jets along an iteration path.
pub trait FunctionModel<S: Scalar> {
    fn name(&self) -> &str;
    fn jet(&self, point: &S, order: usize) -> Result<Jet<S>, JetError>;
    /// Known roots, for test fixtures and basin labeling.
    fn known_roots(&self) -> Vec<S> {
        Vec::new()
    }
}

/// Exact derivatives of a polynomial at a point; entries beyond the
/// polynomial degree are zero.
pub fn polynomial_jet<S: Scalar>(
    coeffs: &[S],
    point: &S,
    order: usize,
) -> Result<Jet<S>, JetError> {
    if coeffs.is_empty() {
        return Err(JetError::EmptyCoefficients);
    }
    if order < 1 {
        return Err(JetError::OrderTooLow);
    }
    let mut p = Polynomial::new(coeffs.to_vec());
    let mut derivs = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        derivs.push(p.evaluate(point));
        p = p.derivative();
    }
    Jet::new(point.clone(), derivs)
}

/// A polynomial as a [`FunctionModel`], with optional known roots.
#[derive(Debug, Clone)]
pub struct PolynomialModel<S: Scalar> {
    poly: Polynomial<S>,
    name: String,
    roots: Vec<S>,
}

impl<S: Scalar> PolynomialModel<S> {
    pub fn new(coeffs: Vec<S>, name: impl Into<String>) -> Self {
        Self {
            poly: Polynomial::new(coeffs),
            name: name.into(),
            roots: Vec::new(),
        }
    }

    pub fn with_roots(mut self, roots: Vec<S>) -> Self {
        self.roots = roots;
        self
    }

    pub fn polynomial(&self) -> &Polynomial<S> {
        &self.poly
    }
}

impl<S: Scalar> FunctionModel<S> for PolynomialModel<S> {
    fn name(&self) -> &str {
        &self.name
    }

    fn jet(&self, point: &S, order: usize) -> Result<Jet<S>, JetError> {
        polynomial_jet(self.poly.coeffs(), point, order)
    }

    fn known_roots(&self) -> Vec<S> {
        self.roots.clone()
    }
}

/// Central finite differences as a guard on supplied derivatives.
///
/// Each `f⁽ʲ⁾` from the model's jet is compared against the order-j central
/// stencil built purely from order-0 evaluations at spacing `h`; the largest
/// relative deviation `|jet − stencil| / max(|stencil|, 1)` is returned.
/// This is a guard, not a derivative source: one fixed spacing, no
/// Richardson refinement.
pub fn validate_jet<S: NormedScalar>(
    model: &dyn FunctionModel<S>,
    point: &S,
    order: usize,
    h: &S,
) -> Result<S::Mag, JetError> {
    if h.is_zero() {
        return Err(ScalarError::DivisionByZero.into());
    }
    let jet = model.jet(point, order)?;
    let ctx = point.context();
    let two = S::from_i64(&ctx, 2);
    let half_h = h.div(&two)?;
    let mag_ctx = jet.deriv(0).magnitude().context();
    let unit = <S::Mag as Scalar>::one(&mag_ctx);
    let mut worst = <S::Mag as Scalar>::zero(&mag_ctx);

    for j in 1..=order {
        // f⁽ʲ⁾(x) ≈ h⁻ʲ Σ_{i=0..j} (−1)ⁱ C(j,i) f(x + (j/2 − i)h)
        let mut acc = S::zero(&ctx);
        for i in 0..=j {
            let mut weight = binomial(j as u64, i as u64) as i64;
            if i % 2 == 1 {
                weight = -weight;
            }
            // offset (j − 2i)·h/2
            let steps = S::from_i64(&ctx, j as i64 - 2 * i as i64);
            let x_i = point.add(&steps.mul(&half_h));
            let f_i = model.jet(&x_i, 1)?.deriv(0).clone();
            acc = acc.add(&f_i.mul(&S::from_i64(&ctx, weight)));
        }
        let mut stencil = acc;
        for _ in 0..j {
            stencil = stencil.div(h)?;
        }
        let denom = max_mag(&stencil.magnitude(), &unit);
        let rel = jet.deriv(j).sub(&stencil).magnitude().div(&denom)?;
        worst = max_mag(&worst, &rel);
    }
    Ok(worst)
}

fn max_mag<M: RealScalar>(a: &M, b: &M) -> M {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
