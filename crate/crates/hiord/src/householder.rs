//! Exact rational-function calculus over exact rationals: an independent
//! implementation of Householder's iteration and machine verification that
//! its reciprocal derivatives match the A-sequence.
//!
//! The bridge identity is `(1/f)⁽ᵏ⁾ = B_k / f^{k+1}` with
//! `B_k = (−1)ᵏ·k!·A_k`; the denominator is kept in the factored form
//! `f^{k+1}` (power tracked as an integer) so the numerator IS `B_k`, with
//! no expansion or polynomial-gcd reduction obscuring it.

use rug::Integer;

use crate::ak::compute_a;
use crate::jet::Jet;
use crate::poly::Polynomial;
use crate::scalar::{Rat, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HouseholderError {
    #[error("the zero polynomial has no reciprocal")]
    ZeroPolynomial,
    #[error("order k must be at least 1")]
    OrderTooLow,
    #[error("evaluation at a pole of the rational function")]
    Pole,
    #[error("denominator value is zero; the step is degenerate at this point")]
    DegeneratePoint,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Quotient of polynomials with the denominator kept as `base^pow`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial<Rat>,
    den_base: Polynomial<Rat>,
    den_pow: u32,
}

impl RationalFunction {
    /// General quotient; reduces by the gcd of the integer contents.
    pub fn new(num: Polynomial<Rat>, den: Polynomial<Rat>) -> Result<Self, HouseholderError> {
        if den.is_zero() {
            return Err(HouseholderError::ZeroPolynomial);
        }
        let g = num.content().gcd(&den.content());
        let (num, den) = if g.is_zero() || g == Rat::from_integer(1) {
            (num, den)
        } else {
            let inv = Rat::from_integer(1).div(&g)?;
            (num.scale(&inv), den.scale(&inv))
        };
        Ok(Self {
            num,
            den_base: den,
            den_pow: 1,
        })
    }

    /// `1/f` with the denominator kept literally as `f`, so repeated
    /// differentiation yields denominators `f^{k+1}` exactly.
    pub fn reciprocal(f: &Polynomial<Rat>) -> Result<Self, HouseholderError> {
        if f.is_zero() {
            return Err(HouseholderError::ZeroPolynomial);
        }
        Ok(Self {
            num: Polynomial::one(&()),
            den_base: f.clone(),
            den_pow: 1,
        })
    }

    pub fn numerator(&self) -> &Polynomial<Rat> {
        &self.num
    }

    pub fn denominator_base(&self) -> &Polynomial<Rat> {
        &self.den_base
    }

    pub fn denominator_power(&self) -> u32 {
        self.den_pow
    }

    /// The expanded denominator `base^pow`.
    pub fn denominator(&self) -> Polynomial<Rat> {
        self.den_base.pow(self.den_pow)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Quotient rule. With the denominator factored as `base^p` the common
    /// `base^{p−1}` cancels structurally:
    /// `(num/base^p)′ = (num′·base − p·num·base′) / base^{p+1}`.
    pub fn differentiate(&self) -> Self {
        let p = Rat::from_integer(self.den_pow as i64);
        let num = self
            .num
            .derivative()
            .mul(&self.den_base)
            .sub(&self.num.scale(&p).mul(&self.den_base.derivative()));
        Self {
            num,
            den_base: self.den_base.clone(),
            den_pow: self.den_pow + 1,
        }
    }

    pub fn evaluate(&self, x: &Rat) -> Result<Rat, HouseholderError> {
        let den = self.den_base.evaluate(x);
        if den.is_zero() {
            return Err(HouseholderError::Pole);
        }
        let mut value = self.num.evaluate(x);
        for _ in 0..self.den_pow {
            value = value.div(&den)?;
        }
        Ok(value)
    }
}

impl std::fmt::Display for RationalFunction {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(out, "({}) / ({})^{}", self.num, self.den_base, self.den_pow)
    }
}

/// `(1/f)⁽ᵏ⁾` by repeated exact differentiation; the result's denominator
/// is `f^{k+1}` and its numerator is `B_k`.
pub fn reciprocal_derivative(
    f: &Polynomial<Rat>,
    k: usize,
) -> Result<RationalFunction, HouseholderError> {
    let mut r = RationalFunction::reciprocal(f)?;
    for _ in 0..k {
        r = r.differentiate();
    }
    debug_assert_eq!(r.den_pow as usize, k + 1);
    Ok(r)
}

/// One Householder iteration `x + k·(1/f)⁽ᵏ⁻¹⁾(x) / (1/f)⁽ᵏ⁾(x)`, exactly.
pub fn householder_step(
    f: &Polynomial<Rat>,
    x: &Rat,
    k: usize,
) -> Result<Rat, HouseholderError> {
    if k < 1 {
        return Err(HouseholderError::OrderTooLow);
    }
    if f.evaluate(x).is_zero() {
        return Err(HouseholderError::DegeneratePoint);
    }
    let mut r = RationalFunction::reciprocal(f)?;
    for _ in 0..k - 1 {
        r = r.differentiate();
    }
    let previous = r.evaluate(x)?;
    let current = r.differentiate().evaluate(x)?;
    if current.is_zero() {
        return Err(HouseholderError::DegeneratePoint);
    }
    let ratio = previous.div(&current)?;
    Ok(x.add(&Rat::from_integer(k as i64).mul(&ratio)))
}

#[derive(Debug, Clone)]
pub struct Lemma5Entry {
    pub k: usize,
    pub pass: bool,
}

/// Per-k outcome of checking `B_k = (−1)ᵏ·k!·A_k` as a polynomial identity.
#[derive(Debug, Clone)]
pub struct Lemma5Report {
    pub polynomial: String,
    pub entries: Vec<Lemma5Entry>,
}

impl Lemma5Report {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }
}

/// Builds the jet of `f` with polynomial entries: the point is the
/// indeterminate itself and `derivs[j]` is the polynomial `f⁽ʲ⁾`.
pub fn symbolic_jet(f: &Polynomial<Rat>, order: usize) -> Jet<Polynomial<Rat>> {
    let mut derivs = Vec::with_capacity(order + 1);
    let mut p = f.clone();
    for _ in 0..=order {
        derivs.push(p.clone());
        p = p.derivative();
    }
    Jet::new(Polynomial::identity(&()), derivs).expect("order >= 1")
}

/// Checks `B_k = (−1)ᵏ·k!·A_k` for `1 ≤ k ≤ k_max`, where the two sides
/// come from disjoint code paths: repeated exact quotient-rule
/// differentiation versus the generic recurrence run over polynomial
/// coefficients.
pub fn verify_lemma5(
    f: &Polynomial<Rat>,
    k_max: usize,
) -> Result<Lemma5Report, HouseholderError> {
    assert!(k_max >= 2, "k_max must be at least 2");
    let jet = symbolic_jet(f, k_max);
    let seq = compute_a(&jet, k_max).expect("symbolic jet has the requested order");
    let mut r = RationalFunction::reciprocal(f)?;
    let mut entries = Vec::new();
    for k in 1..=k_max {
        r = r.differentiate();
        let factorial = Rat::from(rug::Rational::from(Integer::from(Integer::factorial(
            k as u32,
        ))));
        let mut expect = seq.a()[k].scale(&factorial);
        if k % 2 == 1 {
            expect = expect.neg();
        }
        entries.push(Lemma5Entry {
            k,
            pass: *r.numerator() == expect,
        });
    }
    Ok(Lemma5Report {
        polynomial: f.to_string(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ak::step;
    use crate::jet::polynomial_jet;

    fn rat(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    fn rp(coeffs: &[i64]) -> Polynomial<Rat> {
        Polynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    fn quadratic() -> Polynomial<Rat> {
        rp(&[-2, 0, 1])
    }

    #[test]
    fn first_derivative_of_reciprocal() {
        // d/dx 1/(x²−2) = −2x/(x²−2)²
        let r = reciprocal_derivative(&quadratic(), 1).unwrap();
        assert_eq!(r.numerator(), &rp(&[0, -2]));
        assert_eq!(r.denominator_base(), &quadratic());
        assert_eq!(r.denominator_power(), 2);
        assert_eq!(r.denominator(), quadratic().mul(&quadratic()));
    }

    #[test]
    fn derivative_of_constant_quotient_is_zero() {
        let c = RationalFunction::new(rp(&[3]), rp(&[7])).unwrap();
        assert!(c.differentiate().is_zero());
    }

    #[test]
    fn third_reciprocal_derivative_value() {
        // (1/f)‴ at 1 for f = x²−2 → −72
        let r = reciprocal_derivative(&quadratic(), 3).unwrap();
        assert_eq!(r.evaluate(&rat(1)).unwrap(), rat(-72));
        // And the k = 0 case is 1/f itself.
        let r0 = reciprocal_derivative(&quadratic(), 0).unwrap();
        assert_eq!(r0.evaluate(&rat(1)).unwrap(), rat(-1));
    }

    #[test]
    fn second_reciprocal_derivative_value() {
        // (1/f)″ at 1 for f = x²−2 → −10
        let r = reciprocal_derivative(&quadratic(), 2).unwrap();
        assert_eq!(r.evaluate(&rat(1)).unwrap(), rat(-10));
    }

    #[test]
    fn content_reduction_on_construction() {
        let r = RationalFunction::new(rp(&[4, 8]), rp(&[6, 2])).unwrap();
        assert_eq!(r.numerator(), &rp(&[2, 4]));
        assert_eq!(r.denominator_base(), &rp(&[3, 1]));
    }

    #[test]
    fn pole_evaluation_rejected() {
        let r = reciprocal_derivative(&rp(&[0, 1]), 1).unwrap();
        assert_eq!(r.evaluate(&rat(0)).unwrap_err(), HouseholderError::Pole);
    }

    #[test]
    fn householder_step_for_quadratic_order_three() {
        // 1 + 3·(−10)/(−72) = 17/12
        let got = householder_step(&quadratic(), &rat(1), 3).unwrap();
        assert_eq!(got, Rat::from_fraction(17, 12));
    }

    #[test]
    fn order_one_is_newton() {
        for x in [1i64, 3, -4] {
            let got = householder_step(&quadratic(), &rat(x), 1).unwrap();
            // x − f/f′ for f = x²−2
            let f = quadratic().evaluate(&rat(x));
            let fp = quadratic().derivative().evaluate(&rat(x));
            assert_eq!(got, rat(x).sub(&f.div(&fp).unwrap()));
        }
    }

    #[test]
    fn step_at_root_is_degenerate() {
        // f = x² − 1 at x = 1.
        assert_eq!(
            householder_step(&rp(&[-1, 0, 1]), &rat(1), 2).unwrap_err(),
            HouseholderError::DegeneratePoint
        );
        assert_eq!(
            householder_step(&quadratic(), &rat(1), 0).unwrap_err(),
            HouseholderError::OrderTooLow
        );
    }

    #[test]
    fn lemma5_holds_for_fixture_polynomials() {
        for f in [
            quadratic(),
            rp(&[2, -2, 0, 1]),
            rp(&[1, -1, 0, 0, 0, 0, 1]),
            rp(&[-1, 3, 0, -2, 1]),
            rp(&[5, 0, 0, 1]),
        ] {
            let report = verify_lemma5(&f, 8).unwrap();
            assert!(report.all_pass(), "failed for {f}");
        }
    }

    #[test]
    fn lemma5_linear_case_is_geometric() {
        // f = 3x + 1: B_k = (−1)ᵏ·k!·3ᵏ.
        let f = rp(&[1, 3]);
        let report = verify_lemma5(&f, 5).unwrap();
        assert!(report.all_pass());
        let b3 = reciprocal_derivative(&f, 3).unwrap();
        assert_eq!(b3.numerator(), &rp(&[-162]));
    }

    #[test]
    fn step_equality_with_the_recurrence_engine() {
        let fixtures = [
            quadratic(),
            rp(&[2, -2, 0, 1]),
            rp(&[1, -1, 0, 0, 0, 0, 1]),
            rp(&[-1, 3, 0, -2, 1]),
            rp(&[5, 0, 0, 1]),
        ];
        let points: Vec<Rat> = (1..=20)
            .map(|i| Rat::from_fraction(2 * i + 1, 7))
            .collect();
        for f in &fixtures {
            for k in 1..=8 {
                for x in &points {
                    if f.evaluate(x).is_zero() {
                        continue;
                    }
                    let oracle = match householder_step(f, x, k) {
                        Ok(v) => v,
                        Err(HouseholderError::DegeneratePoint) => continue,
                        Err(e) => panic!("unexpected error: {e}"),
                    };
                    let jet = polynomial_jet(f.coeffs(), x, k).unwrap();
                    let engine = step(&jet, k).unwrap();
                    assert_eq!(engine, oracle, "f={f}, k={k}, x={x}");
                }
            }
        }
    }
}
