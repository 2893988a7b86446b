//! The A-sequence recurrence, the iteration step `x − f·A_{k−1}/A_k`, and
//! the solve loop built on it.
//!
//! The sequence is defined by
//!
//! ```text
//! A_0 = 1,  A_1 = f′,  A_2 = (f′)² − ½·f″·f,
//! A_{j+1} = f′·A_j − f·Â_j,
//! Â_j = Σ_{l=2}^{j+1} (1/l!)·(−f)^{l−2}·f⁽ˡ⁾·A_{j+1−l},
//! ```
//!
//! and one iteration of the order-(k+1) method maps `x` to
//! `x − f·A_{k−1}/A_k`.
//!
//! All kernels are generic over the scalar realization, so the identical
//! code path serves floats, complex numbers, exact rationals, and
//! polynomial coefficients (for the symbolic identity checks).

use std::io::Write;

use serde_json::json;

use crate::jet::{FunctionModel, Jet, JetError};
use crate::scalar::{NormedScalar, RealScalar, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AkError {
    #[error("order k must be at least 1")]
    OrderTooLow,
    #[error("profile needs k_max of at least 3")]
    ProfileTooShort,
    #[error("A_k is exactly zero at this point")]
    DerivativeDegenerate,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// The computed `A_0..A_k`, the intermediate `Â_2..Â_{k−1}`, and the
/// number of scalar operations spent producing them.
#[derive(Debug, Clone)]
pub struct AkSequence<S: Scalar> {
    a: Vec<S>,
    a_hat: Vec<S>,
    order: usize,
    op_count: u64,
}

impl<S: Scalar> AkSequence<S> {
    /// `A_0..A_k`, ascending.
    pub fn a(&self) -> &[S] {
        &self.a
    }

    /// `Â_j` for `2 ≤ j ≤ k−1`.
    pub fn a_hat(&self, j: usize) -> Option<&S> {
        if j < 2 {
            return None;
        }
        self.a_hat.get(j - 2)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Scalar multiplications, additions, and divisions performed.
    pub fn op_count(&self) -> u64 {
        self.op_count
    }
}

/// Evaluates `A_0..A_k` from a jet of order at least `k`.
///
/// The summation is evaluated term by term exactly as written: each term
/// rebuilds its `(−f)^{l−2}` power and its `l!` from scratch. `op_count`
/// reports every scalar multiplication, addition/subtraction, and division
/// this performs, which makes the count grow as `k³/3` — the complexity
/// signature of the scheme.
pub fn compute_a<S: Scalar>(jet: &Jet<S>, k: usize) -> Result<AkSequence<S>, AkError> {
    if k < 1 {
        return Err(AkError::OrderTooLow);
    }
    jet.require_order(k)?;
    let ctx = jet.point().context();
    let one = S::one(&ctx);
    let f = jet.deriv(0).clone();
    let fp = jet.deriv(1).clone();
    let minus_f = f.neg();
    let mut ops: u64 = 0;

    let mut a = Vec::with_capacity(k + 1);
    a.push(one.clone());
    a.push(fp.clone());

    if k >= 2 {
        // A_2 = (f′)² − ½·f″·f
        let two = S::from_i64(&ctx, 2);
        let sq = fp.mul(&fp);
        let half_ff = jet.deriv(2).mul(&f).div(&two)?;
        a.push(sq.sub(&half_ff));
        ops += 4;
    }

    let mut a_hat = Vec::new();
    for j in 2..k {
        // Â_j = Σ_{l=2}^{j+1} (1/l!)·(−f)^{l−2}·f⁽ˡ⁾·A_{j+1−l}
        let mut acc: Option<S> = None;
        for l in 2..=j + 1 {
            let mut pow = one.clone();
            for _ in 0..l - 2 {
                pow = pow.mul(&minus_f);
                ops += 1;
            }
            let mut fact = one.clone();
            for m in 2..=l {
                fact = fact.mul(&S::from_i64(&ctx, m as i64));
                ops += 1;
            }
            let term = pow.mul(jet.deriv(l)).mul(&a[j + 1 - l]).div(&fact)?;
            ops += 3;
            acc = Some(match acc {
                None => term,
                Some(prev) => {
                    ops += 1;
                    prev.add(&term)
                }
            });
        }
        let hat = acc.expect("summation has at least one term");
        // A_{j+1} = f′·A_j − f·Â_j
        let next = fp.mul(&a[j]).sub(&f.mul(&hat));
        ops += 3;
        a.push(next);
        a_hat.push(hat);
    }

    Ok(AkSequence {
        a,
        a_hat,
        order: k,
        op_count: ops,
    })
}

/// One iteration: `x − f·A_{k−1}/A_k`. Fails if `A_k` is exactly zero.
pub fn step<S: Scalar>(jet: &Jet<S>, k: usize) -> Result<S, AkError> {
    let seq = compute_a(jet, k)?;
    step_with_sequence(jet, &seq, k)
}

fn step_with_sequence<S: Scalar>(
    jet: &Jet<S>,
    seq: &AkSequence<S>,
    j: usize,
) -> Result<S, AkError> {
    let a = seq.a();
    if a[j].is_zero() {
        return Err(AkError::DerivativeDegenerate);
    }
    let delta = jet.deriv(0).mul(&a[j - 1]).div(&a[j])?;
    Ok(jet.point().sub(&delta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
    DerivativeDegenerate,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIterations => "max-iterations",
            SolveStatus::DerivativeDegenerate => "derivative-degenerate",
        })
    }
}

/// Stopping configuration for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveConfig<M: RealScalar> {
    k: usize,
    max_iterations: usize,
    residual_tolerance: M,
    stagnation_tolerance: M,
}

impl<M: RealScalar> SolveConfig<M> {
    pub fn new(
        k: usize,
        max_iterations: usize,
        residual_tolerance: M,
        stagnation_tolerance: M,
    ) -> Result<Self, AkError> {
        if k < 1 {
            return Err(AkError::OrderTooLow);
        }
        assert!(max_iterations > 0, "max_iterations must be positive");
        let zero = M::zero(&residual_tolerance.context());
        assert!(
            residual_tolerance > zero,
            "residual tolerance must be positive"
        );
        assert!(
            stagnation_tolerance >= zero,
            "stagnation tolerance must be nonnegative"
        );
        Ok(Self {
            k,
            max_iterations,
            residual_tolerance,
            stagnation_tolerance,
        })
    }

    pub fn order_k(&self) -> usize {
        self.k
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    pub fn residual_tolerance(&self) -> &M {
        &self.residual_tolerance
    }

    pub fn stagnation_tolerance(&self) -> &M {
        &self.stagnation_tolerance
    }
}

/// One recorded iterate.
#[derive(Debug, Clone)]
pub struct TraceStep<S: NormedScalar> {
    pub x: S,
    pub f: S,
    pub abs_f: S::Mag,
    /// `|f|/|f′|`, the first-order distance-to-root estimate; absent where
    /// `f′` is exactly zero.
    pub error_estimate: Option<S::Mag>,
}

/// Full record of a solve: every evaluated iterate plus the stop reason.
#[derive(Debug, Clone)]
pub struct IterationTrace<S: NormedScalar> {
    steps: Vec<TraceStep<S>>,
    status: SolveStatus,
}

impl<S: NormedScalar> IterationTrace<S> {
    /// Assembles a trace directly, for callers that resolve an answer
    /// without iterating (e.g. exact endpoint shortcuts).
    pub fn from_steps(steps: Vec<TraceStep<S>>, status: SolveStatus) -> Self {
        assert!(
            !steps.is_empty(),
            "a trace records at least its starting point"
        );
        Self { steps, status }
    }

    pub fn steps(&self) -> &[TraceStep<S>] {
        &self.steps
    }

    pub fn status(&self) -> SolveStatus {
        self.status
    }

    /// Steps actually taken (the starting point is record zero).
    pub fn iterations(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn final_step(&self) -> Option<&TraceStep<S>> {
        self.steps.last()
    }

    /// One JSON object per line, then a closing `{"status": …}` line.
    pub fn write_json_lines(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (n, s) in self.steps.iter().enumerate() {
            let line = json!({
                "n": n,
                "x": s.x.to_decimal(),
                "f": s.f.to_decimal(),
                "abs_f": s.abs_f.to_decimal(),
                "err_est": s.error_estimate.as_ref().map(|e| e.to_decimal()),
            });
            writeln!(out, "{line}")?;
        }
        writeln!(out, "{}", json!({ "status": self.status.to_string() }))
    }

    /// CSV with columns `n,x,f,abs_f,err_est`.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "n,x,f,abs_f,err_est")?;
        for (n, s) in self.steps.iter().enumerate() {
            writeln!(
                out,
                "{n},{},{},{},{}",
                s.x.to_decimal(),
                s.f.to_decimal(),
                s.abs_f.to_decimal(),
                s.error_estimate
                    .as_ref()
                    .map(|e| e.to_decimal())
                    .unwrap_or_default(),
            )?;
        }
        Ok(())
    }
}

/// Iterates [`step`] until the residual or stagnation tolerance is met or
/// the iteration budget runs out. Every evaluated iterate is recorded; a
/// degenerate step (all of `A_1..A_k` exactly zero) ends the trace with
/// [`SolveStatus::DerivativeDegenerate`] rather than discarding it.
///
/// When `A_k` alone is zero, the step falls back to the largest `j < k`
/// with `A_j ≠ 0` for that single step.
pub fn solve<S: NormedScalar>(
    model: &dyn FunctionModel<S>,
    x0: &S,
    cfg: &SolveConfig<S::Mag>,
) -> IterationTrace<S> {
    solve_with(model, x0, cfg, None)
}

/// [`solve`] with a post-step hook, used e.g. to clamp iterates into the
/// model's domain.
pub fn solve_with<S: NormedScalar>(
    model: &dyn FunctionModel<S>,
    x0: &S,
    cfg: &SolveConfig<S::Mag>,
    post_step: Option<&dyn Fn(&S) -> S>,
) -> IterationTrace<S> {
    let mut steps = Vec::new();
    let mut x = x0.clone();
    let mut taken = 0usize;
    let mut stop_after_record: Option<SolveStatus> = None;

    let status = loop {
        let jet = match model.jet(&x, cfg.k) {
            Ok(jet) => jet,
            Err(_) => break SolveStatus::DerivativeDegenerate,
        };
        let f = jet.deriv(0).clone();
        let abs_f = f.magnitude();
        let fp = jet.deriv(1);
        let error_estimate = if fp.is_zero() {
            None
        } else {
            abs_f.div(&fp.magnitude()).ok()
        };
        steps.push(TraceStep {
            x: x.clone(),
            f,
            abs_f: abs_f.clone(),
            error_estimate,
        });

        if abs_f <= cfg.residual_tolerance {
            break SolveStatus::Converged;
        }
        if let Some(status) = stop_after_record {
            break status;
        }
        if taken >= cfg.max_iterations {
            break SolveStatus::MaxIterations;
        }

        let seq = match compute_a(&jet, cfg.k) {
            Ok(seq) => seq,
            Err(_) => break SolveStatus::DerivativeDegenerate,
        };
        let fallback_j = (1..=cfg.k).rev().find(|&j| !seq.a()[j].is_zero());
        let Some(j) = fallback_j else {
            break SolveStatus::DerivativeDegenerate;
        };
        let mut next = match step_with_sequence(&jet, &seq, j) {
            Ok(next) => next,
            Err(_) => break SolveStatus::DerivativeDegenerate,
        };
        if let Some(clamp) = post_step {
            next = clamp(&next);
        }
        if next.sub(&x).magnitude() <= cfg.stagnation_tolerance {
            stop_after_record = Some(SolveStatus::Converged);
        }
        x = next;
        taken += 1;
    };

    IterationTrace { steps, status }
}

/// Measured cost of [`compute_a`] for `k = 3..=k_max` on a fixed sextic
/// fixture; the counts depend only on `k`, not on the fixture's values.
pub fn op_count_profile(k_max: usize) -> Result<Vec<(usize, u64)>, AkError> {
    use crate::scalar::{MpReal, Precision};
    if k_max < 3 {
        return Err(AkError::ProfileTooShort);
    }
    let prec = Precision::default();
    let coeffs: Vec<MpReal> = [1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0]
        .iter()
        .map(|&c| MpReal::with_precision(prec, c))
        .collect();
    let point = MpReal::with_precision(prec, 0.5);
    let jet = crate::jet::polynomial_jet(&coeffs, &point, k_max)?;
    (3..=k_max)
        .map(|k| Ok((k, compute_a(&jet, k)?.op_count())))
        .collect()
}
