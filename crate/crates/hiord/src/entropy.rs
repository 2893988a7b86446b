//! q-ary entropy: evaluation with closed-form derivative jets, initial-guess
//! strategies from the Topsøe bounds, the inverse solver on `[0, (q−1)/q]`,
//! and the Gilbert–Varshamov distance.
//!
//! `H_q(x) = x·log_q(q−1) − x·log_q x − (1−x)·log_q(1−x)`, strictly
//! increasing on `[0, (q−1)/q]` with `H_q(0) = 0` and `H_q((q−1)/q) = 1`.

use rug::Integer;

use crate::ak::{solve_with, IterationTrace, SolveConfig, SolveStatus, TraceStep};
use crate::jet::{FunctionModel, Jet, JetError};
use crate::scalar::{MpReal, Precision, RealScalar, Scalar, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error("alphabet size q must be at least 2")]
    AlphabetTooSmall,
    #[error("{what} must lie in [0, 1]")]
    OutsideUnitInterval { what: &'static str },
    #[error("derivatives are unbounded at and beyond the interval endpoints")]
    AtBoundary,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Alphabet size `q ≥ 2` (arbitrary magnitude, e.g. `2¹²⁷ − 1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyParams {
    q: Integer,
}

impl EntropyParams {
    pub fn new(q: Integer) -> Result<Self, EntropyError> {
        if q < 2 {
            return Err(EntropyError::AlphabetTooSmall);
        }
        Ok(Self { q })
    }

    pub fn from_u64(q: u64) -> Result<Self, EntropyError> {
        Self::new(Integer::from(q))
    }

    pub fn q(&self) -> &Integer {
        &self.q
    }

    pub fn is_binary(&self) -> bool {
        self.q == 2
    }

    /// `(q−1)/q`, the argument of the entropy maximum.
    pub fn uniform_point(&self, prec: Precision) -> MpReal {
        let q = MpReal::from_integer(prec, &self.q);
        let one = MpReal::with_precision(prec, 1.0);
        q.sub(&one).div(&q).expect("q >= 2")
    }

    fn ln_q(&self, prec: Precision) -> MpReal {
        MpReal::from_integer(prec, &self.q).ln()
    }

    fn ln_q_minus_1(&self, prec: Precision) -> MpReal {
        MpReal::from_integer(prec, &Integer::from(&self.q - 1)).ln()
    }

    pub fn log2_q(&self, prec: Precision) -> MpReal {
        MpReal::from_integer(prec, &self.q).log2()
    }
}

/// Where the first iterate comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuessStrategy {
    /// Invert the lower bound `f(x) = 4x(1−x)`.
    LowerF,
    /// Invert the upper bound `g(x) = (4x(1−x))^{1/ln 4}`.
    UpperG,
    /// `x₀ = y` (large-q regime where `H_q(x) ≈ x`).
    Identity,
}

impl std::fmt::Display for GuessStrategy {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.write_str(match self {
            GuessStrategy::LowerF => "f",
            GuessStrategy::UpperG => "g",
            GuessStrategy::Identity => "id",
        })
    }
}

impl std::str::FromStr for GuessStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "f" | "lower-f" => Ok(GuessStrategy::LowerF),
            "g" | "upper-g" => Ok(GuessStrategy::UpperG),
            "id" | "identity" => Ok(GuessStrategy::Identity),
            other => Err(format!("unknown guess strategy {other:?} (expected f, g, or id)")),
        }
    }
}

/// The best observed default: the tighter upper bound for the binary case,
/// the identity for very large alphabets, the quadratic lower bound
/// otherwise.
pub fn default_strategy(params: &EntropyParams) -> GuessStrategy {
    if params.is_binary() {
        GuessStrategy::UpperG
    } else if params.q.significant_bits() >= 65 {
        // q ≥ 2⁶⁴, i.e. log₂ q ≥ 64.
        GuessStrategy::Identity
    } else {
        GuessStrategy::LowerF
    }
}

/// `H_q(x)` with the limit convention `0·log 0 = 0` at the endpoints.
pub fn h_q(params: &EntropyParams, x: &MpReal) -> Result<MpReal, EntropyError> {
    let prec = x.precision();
    let zero = MpReal::with_precision(prec, 0.0);
    let one = MpReal::with_precision(prec, 1.0);
    if *x < zero || *x > one {
        return Err(EntropyError::OutsideUnitInterval { what: "x" });
    }
    let ln_q = params.ln_q(prec);
    let omx = one.sub(x);
    let mut value = x.mul(&params.ln_q_minus_1(prec));
    if !x.is_zero() {
        value = value.sub(&x.mul(&x.ln()));
    }
    if !omx.is_zero() {
        value = value.sub(&omx.mul(&omx.ln()));
    }
    Ok(value.div(&ln_q)?)
}

/// Value and derivatives of `H_q` at an interior point, by closed form:
/// `H_q′ = [ln(q−1) + ln((1−x)/x)]/ln q` and for `j ≥ 2`
/// `H_q⁽ʲ⁾ = −(j−2)!·[(−1)ʲ·x^{1−j} + (1−x)^{1−j}]/ln q`.
pub fn h_q_jet(
    params: &EntropyParams,
    x: &MpReal,
    order: usize,
) -> Result<Jet<MpReal>, EntropyError> {
    if order < 1 {
        return Err(EntropyError::Jet(JetError::OrderTooLow));
    }
    let prec = x.precision();
    let zero = MpReal::with_precision(prec, 0.0);
    let one = MpReal::with_precision(prec, 1.0);
    if *x <= zero || *x >= one {
        return Err(EntropyError::AtBoundary);
    }
    let ln_q = params.ln_q(prec);
    let omx = one.sub(x);

    let mut derivs = Vec::with_capacity(order + 1);
    derivs.push(h_q(params, x)?);
    let slope = params
        .ln_q_minus_1(prec)
        .add(&omx.div(x)?.ln())
        .div(&ln_q)?;
    derivs.push(slope);
    for j in 2..=order {
        let fact = MpReal::from_integer(prec, &Integer::from(Integer::factorial(j as u32 - 2)));
        let power = 1 - j as i32;
        let mut term = x.pow_i(power);
        if j % 2 == 1 {
            term = term.neg();
        }
        term = term.add(&omx.pow_i(power));
        derivs.push(fact.mul(&term).div(&ln_q)?.neg());
    }
    Ok(Jet::new(x.clone(), derivs)?)
}

/// `f(x) = 4x(1−x)` and `g(x) = (4x(1−x))^{1/ln 4}`, the two bounds with
/// `f ≤ H_2 ≤ g` on `[0, 0.5]`.
pub fn lower_bound_f(x: &MpReal) -> MpReal {
    let prec = x.precision();
    let one = MpReal::with_precision(prec, 1.0);
    let four = MpReal::with_precision(prec, 4.0);
    four.mul(x).mul(&one.sub(x))
}

pub fn upper_bound_g(x: &MpReal) -> MpReal {
    let prec = x.precision();
    let base = lower_bound_f(x);
    if base.is_zero() {
        return base;
    }
    let ln4 = MpReal::with_precision(prec, 4.0).ln();
    let one = MpReal::with_precision(prec, 1.0);
    base.pow(&one.div(&ln4).expect("ln 4 != 0"))
}

/// `x·log_q(q−1) + φ(x)/log₂ q`: the bound `φ` lifted from the binary case
/// to alphabet size `q` the same way `H_q` decomposes over `H_2`.
fn surrogate(params: &EntropyParams, upper: bool, x: &MpReal) -> MpReal {
    let prec = x.precision();
    let phi = if upper {
        upper_bound_g(x)
    } else {
        lower_bound_f(x)
    };
    let ln_q = params.ln_q(prec);
    let linear = x.mul(&params.ln_q_minus_1(prec)).div(&ln_q).expect("q >= 2");
    let ln2 = MpReal::with_precision(prec, 2.0).ln();
    linear.add(&phi.mul(&ln2).div(&ln_q).expect("q >= 2"))
}

/// Inverts the lifted bound by bisection on its increasing segment.
///
/// The surrogate is strictly concave on `[0, (q−1)/q]` (linear part plus a
/// concave bound), so its maximum is located by ternary search and the
/// bisection bracket `[0, peak]` is monotone. Targets above the achievable
/// maximum clamp to the peak. Absolute tolerance 1e−8 — the result only
/// needs to land inside the convergence basin.
fn invert_surrogate(params: &EntropyParams, upper: bool, y: &MpReal) -> MpReal {
    let prec = y.precision();
    let two = MpReal::with_precision(prec, 2.0);
    let three = MpReal::with_precision(prec, 3.0);
    let mut lo = MpReal::with_precision(prec, 0.0);
    let mut hi = params.uniform_point(prec);
    for _ in 0..90 {
        let width = hi.sub(&lo).div(&three).expect("3 != 0");
        let m1 = lo.add(&width);
        let m2 = hi.sub(&width);
        if surrogate(params, upper, &m1) < surrogate(params, upper, &m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let peak = lo.add(&hi).div(&two).expect("2 != 0");
    if surrogate(params, upper, &peak) <= *y {
        return peak;
    }
    let tol = MpReal::with_precision(prec, 1e-8);
    let mut lo = MpReal::with_precision(prec, 0.0);
    let mut hi = peak;
    while hi.sub(&lo) > tol {
        let mid = lo.add(&hi).div(&two).expect("2 != 0");
        if surrogate(params, upper, &mid) < *y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.add(&hi).div(&two).expect("2 != 0")
}

/// First iterate for `H_q(x) = y`.
///
/// For `q = 2` the bound inverses have closed forms
/// `f⁻¹(y) = ½(1−√(1−y))` and `g⁻¹(y) = ½(1−√(1−y^{ln 4}))`; for larger
/// alphabets the lifted bounds are inverted numerically. The identity
/// strategy returns `y` clamped to `[0, (q−1)/q]`.
pub fn initial_guess(
    params: &EntropyParams,
    y: &MpReal,
    strategy: GuessStrategy,
) -> Result<MpReal, EntropyError> {
    let prec = y.precision();
    let zero = MpReal::with_precision(prec, 0.0);
    let one = MpReal::with_precision(prec, 1.0);
    if *y < zero || *y > one {
        return Err(EntropyError::OutsideUnitInterval { what: "y" });
    }
    match strategy {
        GuessStrategy::Identity => Ok(y.max(&zero).min(&params.uniform_point(prec))),
        GuessStrategy::LowerF if params.is_binary() => {
            let half = MpReal::with_precision(prec, 0.5);
            Ok(half.mul(&one.sub(&one.sub(y).sqrt())))
        }
        GuessStrategy::UpperG if params.is_binary() => {
            let half = MpReal::with_precision(prec, 0.5);
            let ln4 = MpReal::with_precision(prec, 4.0).ln();
            Ok(half.mul(&one.sub(&one.sub(&y.pow(&ln4)).sqrt())))
        }
        GuessStrategy::LowerF => Ok(invert_surrogate(params, false, y)),
        GuessStrategy::UpperG => Ok(invert_surrogate(params, true, y)),
    }
}

/// `H_q(x) − y` as a jet supplier for the iteration engine.
pub struct EntropyModel {
    params: EntropyParams,
    target: MpReal,
}

impl EntropyModel {
    pub fn new(params: EntropyParams, target: MpReal) -> Self {
        Self { params, target }
    }

    pub fn params(&self) -> &EntropyParams {
        &self.params
    }

    pub fn target(&self) -> &MpReal {
        &self.target
    }
}

impl FunctionModel<MpReal> for EntropyModel {
    fn name(&self) -> &str {
        "q-ary-entropy-minus-target"
    }

    fn jet(&self, point: &MpReal, order: usize) -> Result<Jet<MpReal>, JetError> {
        let jet = h_q_jet(&self.params, point, order).map_err(|err| match err {
            EntropyError::AtBoundary => JetError::OutsideDomain,
            EntropyError::Jet(inner) => inner,
            other => JetError::Evaluation {
                point: point.to_decimal(),
                reason: other.to_string(),
            },
        })?;
        let mut derivs = jet.derivs().to_vec();
        derivs[0] = derivs[0].sub(&self.target);
        Jet::new(point.clone(), derivs)
    }
}

/// Outcome of [`solve_inverse`].
#[derive(Debug, Clone)]
pub struct EntropySolveResult {
    pub root: MpReal,
    pub trace: IterationTrace<MpReal>,
    pub guess_used: MpReal,
    /// `|H_q(root) − y|`.
    pub residual: MpReal,
    /// First-order distance-to-root estimate `|H_q(root) − y| / |H_q′(root)|`
    /// (zero where the slope vanishes).
    pub error_estimate: MpReal,
}

/// Solves `H_q(x) = y` on `[0, (q−1)/q]`.
///
/// Endpoint targets short-circuit to the exact answers `x = 0` and
/// `x = (q−1)/q`. Otherwise iterates run through the recurrence engine with
/// every iterate clamped into `[δ, (q−1)/q]`, `δ = 2^{−precision/2}`,
/// because the derivatives blow up at 0 and a high-order step from a poor
/// guess can overshoot. Non-convergence is reported in the trace status,
/// not as an error.
pub fn solve_inverse(
    params: &EntropyParams,
    y: &MpReal,
    strategy: GuessStrategy,
    cfg: &SolveConfig<MpReal>,
) -> Result<EntropySolveResult, EntropyError> {
    let prec = y.precision();
    let zero = MpReal::with_precision(prec, 0.0);
    let one = MpReal::with_precision(prec, 1.0);
    if *y < zero || *y > one {
        return Err(EntropyError::OutsideUnitInterval { what: "y" });
    }

    if y.is_zero() || *y == one {
        let root = if y.is_zero() {
            zero.clone()
        } else {
            params.uniform_point(prec)
        };
        let f = h_q(params, &root)?.sub(y);
        let steps = vec![TraceStep {
            x: root.clone(),
            f: f.clone(),
            abs_f: f.abs(),
            error_estimate: None,
        }];
        return Ok(EntropySolveResult {
            root: root.clone(),
            trace: IterationTrace::from_steps(steps, SolveStatus::Converged),
            guess_used: root,
            residual: f.abs(),
            error_estimate: zero,
        });
    }

    let guess = initial_guess(params, y, strategy)?;
    let delta = MpReal::exp2(prec, -((prec.bits() / 2) as i32));
    let upper = params.uniform_point(prec);
    let clamp = {
        let delta = delta.clone();
        let upper = upper.clone();
        move |x: &MpReal| x.max(&delta).min(&upper)
    };
    let x0 = clamp(&guess);
    let model = EntropyModel::new(params.clone(), y.clone());
    let trace = solve_with(&model, &x0, cfg, Some(&clamp));
    let last = trace.final_step().expect("trace is never empty").clone();
    let estimate = last
        .error_estimate
        .clone()
        .unwrap_or_else(|| MpReal::with_precision(prec, 0.0));
    Ok(EntropySolveResult {
        root: last.x.clone(),
        trace,
        guess_used: guess,
        residual: last.abs_f.clone(),
        error_estimate: estimate,
    })
}

/// The Gilbert–Varshamov distance: the unique `x ∈ [0, (q−1)/q]` with
/// `H_q(x) = 1 − R`.
pub fn gv_distance(
    params: &EntropyParams,
    rate: &MpReal,
    cfg: &SolveConfig<MpReal>,
) -> Result<MpReal, EntropyError> {
    let prec = rate.precision();
    let zero = MpReal::with_precision(prec, 0.0);
    let one = MpReal::with_precision(prec, 1.0);
    if *rate < zero || *rate > one {
        return Err(EntropyError::OutsideUnitInterval { what: "R" });
    }
    let y = one.sub(rate);
    Ok(solve_inverse(params, &y, default_strategy(params), cfg)?.root)
}

/// Numerically checked constants behind the guess strategies.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// Measured `sup_{y∈[0,1]} (f⁻¹(y) − g⁻¹(y))` (≈ 0.039989).
    pub sup_inverse_gap: MpReal,
    /// The closed-form bound on that gap,
    /// `(σ − σ^{ln4}) / (2(√(1−0.5^{ln4}) + √0.5))` with
    /// `σ = ln4^{1/(1−ln4)}` (≈ 0.04007).
    pub analytic_gap_bound: MpReal,
    /// Argmax of `g − f`: `η = ½(1 − (1 − ln4^{ln4/(1−ln4)})^{1/2})`.
    pub eta: MpReal,
    /// `ε = |f(η) − g(η)|` (≈ 0.1196), the sup-norm gap between the bounds.
    pub epsilon: MpReal,
    /// `ε / log₂(q−1)`: how far a lifted-bound guess can sit from the true
    /// root; absent for q = 2 where the denominator vanishes.
    pub guess_gap_bound: Option<MpReal>,
    /// `2 / log₂ q`: sup of `|H_q(x) − x|`, the identity-guess error.
    pub identity_gap_bound: MpReal,
}

/// Computes the guess-quality constants at the given precision.
pub fn bound_report(params: &EntropyParams, prec: Precision) -> BoundReport {
    let one = MpReal::with_precision(prec, 1.0);
    let two = MpReal::with_precision(prec, 2.0);
    let half = MpReal::with_precision(prec, 0.5);
    let ln4 = MpReal::with_precision(prec, 4.0).ln();

    let inverse_gap = |y: &MpReal| -> MpReal {
        let f_inv = half.mul(&one.sub(&one.sub(y).sqrt()));
        let g_inv = half.mul(&one.sub(&one.sub(&y.pow(&ln4)).sqrt()));
        f_inv.sub(&g_inv)
    };
    // Coarse grid locates the maximum, ternary search sharpens it.
    let grid = 512;
    let mut best_i = 0usize;
    let mut best = MpReal::with_precision(prec, 0.0);
    for i in 0..=grid {
        let y = MpReal::with_precision(prec, i as f64 / grid as f64);
        let gap = inverse_gap(&y);
        if gap > best {
            best = gap;
            best_i = i;
        }
    }
    let mut lo = MpReal::with_precision(prec, (best_i.saturating_sub(1)) as f64 / grid as f64);
    let mut hi = MpReal::with_precision(prec, ((best_i + 1).min(grid)) as f64 / grid as f64);
    let three = MpReal::with_precision(prec, 3.0);
    for _ in 0..120 {
        let width = hi.sub(&lo).div(&three).expect("3 != 0");
        let m1 = lo.add(&width);
        let m2 = hi.sub(&width);
        if inverse_gap(&m1) < inverse_gap(&m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let sup_inverse_gap = inverse_gap(&lo.add(&hi).div(&two).expect("2 != 0"));

    // σ = ln4^{1/(1−ln4)}; analytic bound (σ − σ^{ln4}) / (2(√(1−0.5^{ln4}) + √0.5)).
    let one_minus_ln4 = one.sub(&ln4);
    let sigma = ln4.pow(&one.div(&one_minus_ln4).expect("ln 4 != 1"));
    let denom = two.mul(
        &one.sub(&half.pow(&ln4))
            .sqrt()
            .add(&half.sqrt()),
    );
    let analytic_gap_bound = sigma
        .sub(&sigma.pow(&ln4))
        .div(&denom)
        .expect("denominator positive");

    // η = ½(1 − (1 − ln4^{ln4/(1−ln4)})^{1/2}); ε = |f(η) − g(η)|.
    let eta = half.mul(
        &one.sub(
            &one.sub(&ln4.pow(&ln4.div(&one_minus_ln4).expect("ln 4 != 1")))
                .sqrt(),
        ),
    );
    let epsilon = lower_bound_f(&eta).sub(&upper_bound_g(&eta)).abs();

    let log2_q = params.log2_q(prec);
    let guess_gap_bound = if params.is_binary() {
        None
    } else {
        let log2_qm1 = MpReal::from_integer(prec, &Integer::from(params.q() - 1)).log2();
        Some(epsilon.div(&log2_qm1).expect("q > 2"))
    };
    let identity_gap_bound = two.div(&log2_q).expect("q >= 2");

    BoundReport {
        sup_inverse_gap,
        analytic_gap_bound,
        eta,
        epsilon,
        guess_gap_bound,
        identity_gap_bound,
    }
}
