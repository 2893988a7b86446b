//! Explicit convergence factors for orders 2 through 6, plus empirical
//! order/factor estimation from solve traces.
//!
//! The order-(k+1) iteration obeys `|x_{n+1} − α| ≤ C_{k+1}|x_n − α|^{k+1}`
//! near a simple root. `C_2` and `C_3` are the classical Newton and Halley
//! error constants; `C_4`, `C_5 = λ_5/μ_5`, and `C_6 = λ_6/μ_6` are
//! evaluated from their explicit published expressions, transcribed term
//! for term without simplification (including the bare `−180f⁗` leading
//! term of `λ_5`, which the empirical check is expected to flag — see
//! [`factor`]). Orders beyond 6 have no published closed form and are
//! rejected.

use crate::ak::IterationTrace;
use crate::jet::{Jet, JetError};
use crate::scalar::{NormedScalar, RealScalar, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FactorError {
    #[error("factor order must be at least 2")]
    OrderTooLow,
    #[error("factors of order 7 and above are not implemented (no closed form)")]
    NotImplemented,
    #[error("denominator is zero at this point; the factor is undefined")]
    Undefined,
    #[error("too few usable steps to estimate order and factor")]
    InsufficientSteps,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A convergence factor `C = λ/μ` evaluated at one jet.
#[derive(Debug, Clone)]
pub struct ConvergenceFactor<S: Scalar> {
    order: usize,
    lambda: S,
    mu: S,
    value: S,
}

impl<S: Scalar> ConvergenceFactor<S> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn mu(&self) -> &S {
        &self.mu
    }

    pub fn value(&self) -> &S {
        &self.value
    }
}

/// Builds signed products `(num/den)·Π f⁽ⁱ⁾^pow` over a jet's derivatives.
struct Terms<'a, S: Scalar> {
    ctx: S::Ctx,
    jet: &'a Jet<S>,
}

impl<'a, S: Scalar> Terms<'a, S> {
    fn new(jet: &'a Jet<S>) -> Self {
        Self {
            ctx: jet.point().context(),
            jet,
        }
    }

    fn t(&self, num: i64, powers: &[(usize, u32)]) -> S {
        self.frac(num, 1, powers)
    }

    fn frac(&self, num: i64, den: i64, powers: &[(usize, u32)]) -> S {
        let mut acc = S::from_i64(&self.ctx, num)
            .div(&S::from_i64(&self.ctx, den))
            .expect("nonzero literal denominator");
        for &(idx, pow) in powers {
            for _ in 0..pow {
                acc = acc.mul(self.jet.deriv(idx));
            }
        }
        acc
    }
}

fn sum<S: Scalar>(terms: Vec<S>) -> S {
    let mut it = terms.into_iter();
    let first = it.next().expect("at least one term");
    it.fold(first, |acc, t| acc.add(&t))
}

/// Evaluates the explicit convergence factor of the given order (2..=6)
/// at a jet. The jet must carry derivatives through `f⁽⁶⁾` (unused ones
/// may be zero). A zero denominator reports the factor as undefined.
pub fn factor<S: Scalar>(jet: &Jet<S>, order: usize) -> Result<ConvergenceFactor<S>, FactorError> {
    if order < 2 {
        return Err(FactorError::OrderTooLow);
    }
    if order > 6 {
        return Err(FactorError::NotImplemented);
    }
    jet.require_order(6)?;
    let b = Terms::new(jet);

    let (lambda, mu) = match order {
        // Newton: C₂ = f″ / (2f′)
        2 => (b.t(1, &[(2, 1)]), b.t(2, &[(1, 1)])),
        // Halley: C₃ = (3(f″)² − 2f′f‴) / (12(f′)²)
        3 => (
            sum(vec![b.t(3, &[(2, 2)]), b.t(-2, &[(1, 1), (3, 1)])]),
            b.t(12, &[(1, 2)]),
        ),
        4 => (
            sum(vec![
                b.t(18, &[(1, 1), (2, 3)]),
                b.t(-24, &[(1, 2), (2, 1), (3, 1)]),
                b.t(4, &[(0, 1), (1, 1), (3, 2)]),
                b.t(6, &[(1, 3), (4, 1)]),
                b.t(-3, &[(0, 1), (1, 1), (2, 1), (4, 1)]),
            ]),
            sum(vec![
                b.t(144, &[(1, 4)]),
                b.t(-144, &[(0, 1), (1, 2), (2, 1)]),
                b.t(24, &[(0, 2), (1, 1), (3, 1)]),
            ]),
        ),
        5 => (
            sum(vec![
                b.t(-180, &[(4, 1)]),
                b.t(360, &[(1, 1), (2, 1), (3, 1)]),
                b.t(-80, &[(1, 2), (3, 2)]),
                b.t(-80, &[(0, 1), (2, 1), (3, 2)]),
                b.t(-120, &[(1, 2), (2, 1), (4, 1)]),
                b.t(60, &[(0, 1), (2, 2), (4, 1)]),
                b.t(40, &[(0, 1), (1, 1), (3, 1), (4, 1)]),
                b.t(-5, &[(0, 2), (4, 2)]),
                b.t(24, &[(1, 3), (5, 1)]),
                b.t(-24, &[(0, 1), (1, 1), (2, 1), (5, 1)]),
                b.t(4, &[(0, 2), (3, 1), (5, 1)]),
            ]),
            sum(vec![
                b.t(720, &[(1, 4)]),
                b.t(-1080, &[(0, 1), (1, 2), (2, 1)]),
                b.t(180, &[(0, 2), (2, 2)]),
                b.t(240, &[(0, 2), (1, 1), (3, 1)]),
                b.t(-30, &[(0, 3), (4, 1)]),
            ]),
        ),
        6 => (
            sum(vec![
                b.t(540, &[(2, 5)]),
                b.t(-1440, &[(1, 1), (2, 3), (3, 1)]),
                b.t(720, &[(1, 2), (2, 1), (3, 2)]),
                b.t(360, &[(0, 1), (2, 2), (3, 2)]),
                b.t(-160, &[(0, 1), (1, 1), (3, 3)]),
                b.t(540, &[(1, 2), (2, 2), (4, 1)]),
                b.t(-270, &[(0, 1), (2, 3), (4, 1)]),
                b.t(-240, &[(1, 3), (3, 1), (4, 1)]),
                b.t(-120, &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)]),
                b.t(20, &[(0, 2), (3, 2), (4, 1)]),
                b.t(30, &[(0, 1), (1, 2), (4, 2)]),
                b.t(30, &[(0, 2), (2, 1), (4, 2)]),
                b.t(-144, &[(1, 3), (2, 1), (5, 1)]),
                b.t(144, &[(0, 1), (1, 1), (2, 2), (5, 1)]),
                b.t(48, &[(0, 1), (1, 2), (3, 1), (5, 1)]),
                b.t(-48, &[(0, 2), (2, 1), (3, 1), (5, 1)]),
                b.t(-12, &[(0, 2), (1, 1), (4, 1), (5, 1)]),
                b.frac(6, 5, &[(0, 3), (5, 2)]),
                b.t(24, &[(1, 4), (6, 1)]),
                b.t(-36, &[(0, 1), (1, 2), (2, 1), (6, 1)]),
                b.t(6, &[(0, 2), (2, 2), (6, 1)]),
                b.t(8, &[(0, 2), (1, 1), (3, 1), (6, 1)]),
                b.t(-1, &[(0, 3), (4, 1), (6, 1)]),
            ]),
            sum(vec![
                b.t(17280, &[(1, 5)]),
                b.t(-34560, &[(0, 1), (1, 3), (2, 1)]),
                b.t(12960, &[(0, 2), (1, 1), (2, 2)]),
                b.t(8640, &[(0, 2), (0, 1), (1, 2), (3, 1)]),
                b.t(-2880, &[(0, 3), (2, 1), (3, 1)]),
                b.t(-1440, &[(0, 3), (1, 1), (4, 1)]),
                b.t(144, &[(0, 4), (5, 1)]),
            ]),
        ),
        _ => unreachable!(),
    };

    if mu.is_zero() {
        return Err(FactorError::Undefined);
    }
    let value = lambda.div(&mu)?;
    Ok(ConvergenceFactor {
        order,
        lambda,
        mu,
        value,
    })
}

/// Least-squares estimate of convergence order and factor from a trace.
///
/// Errors `e_n = |x_n − α|` are usable when below 0.1 and above ten times
/// the arithmetic's round-off at the root's scale (exact arithmetic has no
/// lower cutoff). The slope of `log e_{n+1}` against `log e_n` over
/// consecutive usable pairs is the order estimate; the factor estimate is
/// the geometric mean of `e_{n+1}/e_n^round(order)`.
pub fn empirical_order_and_factor<S: NormedScalar>(
    trace: &IterationTrace<S>,
    true_root: &S,
) -> Result<(f64, f64), FactorError> {
    let scale_log2 = true_root.magnitude().log2_f64().max(0.0);
    let lower_log2 = match true_root.precision_bits() {
        Some(bits) => 10f64.log2() - bits as f64 + scale_log2,
        None => f64::NEG_INFINITY,
    };
    let upper_log2 = 0.1f64.log2();

    let logs: Vec<Option<f64>> = trace
        .steps()
        .iter()
        .map(|s| {
            let l = s.x.sub(true_root).magnitude().log2_f64();
            (l.is_finite() && l > lower_log2 && l < upper_log2).then_some(l)
        })
        .collect();

    let mut pairs = Vec::new();
    for w in logs.windows(2) {
        if let (Some(a), Some(b)) = (w[0], w[1]) {
            pairs.push((a, b));
        }
    }
    if pairs.len() < 2 {
        return Err(FactorError::InsufficientSteps);
    }

    let n = pairs.len() as f64;
    let mean_x = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FactorError::InsufficientSteps);
    }
    let sxy: f64 = pairs
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    let slope = sxy / sxx;

    let rounded = slope.round().max(1.0);
    let mean_log_factor = pairs
        .iter()
        .map(|(a, b)| b - rounded * a)
        .sum::<f64>()
        / n;
    Ok((slope, mean_log_factor.exp2()))
}
