//! High-order root finding from Taylor jets, with an exact
//! reciprocal-derivative oracle, explicit convergence factors, q-ary
//! entropy inversion, and basin-of-attraction rendering.
//!
//! The center of the crate is a recurrence on jet coefficients:
//! `A_0 = 1`, `A_1 = f′`, `A_{j+1} = f′·A_j − f·Â_j`, whose ratio drives
//! the iteration `x ← x − f·A_{k−1}/A_k` with convergence order `k + 1`.
//! The same numbers arise as the reciprocal derivatives
//! `(1/f)⁽ᵏ⁾ = (−1)ᵏ·k!·A_k / f^{k+1}`, so the classical
//! reciprocal-derivative iteration is computable without symbolic
//! differentiation — and the exact-rational implementation of that
//! iteration doubles as an independent oracle for the engine.

pub mod ak;
pub mod basins;
pub mod cli;
pub mod entropy;
pub mod factors;
pub mod growth;
pub mod householder;
pub mod jet;
pub mod poly;
pub mod scalar;

pub use ak::{compute_a, solve, solve_with, AkSequence, IterationTrace, SolveConfig, SolveStatus};
pub use jet::{polynomial_jet, FunctionModel, Jet, PolynomialModel};
pub use poly::Polynomial;
pub use scalar::{MpComplex, MpReal, Precision, Rat};
