//! Python bindings for the hiord root-finding toolkit.
//!
//! High-precision values cross the boundary as decimal strings (Python
//! floats would silently truncate them); exact rational results are
//! returned as `"p/q"` strings. Polynomials are ascending coefficient
//! lists, so `["-2", "0", "1"]` is x² − 2.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hiord::ak::{self, SolveConfig};
use hiord::basins::{self, GridSpec, RootSet, DEFAULT_ESCAPE_RADIUS, DEFAULT_MATCH_TOLERANCE};
use hiord::entropy::{
    default_strategy, gv_distance as gv_distance_core, h_q, solve_inverse, EntropyParams,
};
use hiord::factors;
use hiord::householder::{self, verify_lemma5};
use hiord::jet::polynomial_jet;
use hiord::poly::Polynomial;
use hiord::scalar::{RealScalar, Scalar};
use hiord::{solve as solve_core, MpComplex, MpReal, PolynomialModel, Precision, Rat};
use rug::Integer;

fn bad<E: std::fmt::Display>(err: E) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn prec_of(bits: u32) -> PyResult<Precision> {
    Precision::new(bits).map_err(bad)
}

fn parse_real(prec: Precision, text: &str) -> PyResult<MpReal> {
    MpReal::from_decimal(&prec, text).map_err(bad)
}

fn parse_reals(prec: Precision, items: &[String]) -> PyResult<Vec<MpReal>> {
    items.iter().map(|s| parse_real(prec, s)).collect()
}

fn parse_rat(text: &str) -> PyResult<Rat> {
    Rat::from_decimal(&(), text).map_err(bad)
}

fn parse_rat_poly(items: &[String]) -> PyResult<Polynomial<Rat>> {
    let coeffs = items
        .iter()
        .map(|s| parse_rat(s))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Polynomial::new(coeffs))
}

/// Plain decimal digits or the shorthand forms B^N, B^N+M, B^N-M.
fn parse_alphabet(text: &str) -> PyResult<EntropyParams> {
    use rug::ops::Pow;
    let t = text.trim();
    let cannot = || bad(format!("cannot parse {text:?} as an alphabet size"));
    let value = if let Some((base, rest)) = t.split_once('^') {
        let base = Integer::from_str_radix(base.trim(), 10).map_err(|_| cannot())?;
        let (exp_str, offset) = if let Some((e, m)) = rest.split_once('+') {
            (e, Some((m, false)))
        } else if let Some((e, m)) = rest.split_once('-') {
            (e, Some((m, true)))
        } else {
            (rest, None)
        };
        let exp: u32 = exp_str.trim().parse().map_err(|_| cannot())?;
        let mut v = Integer::from(base.pow(exp));
        if let Some((m, negative)) = offset {
            let m = Integer::from_str_radix(m.trim(), 10).map_err(|_| cannot())?;
            if negative {
                v -= m;
            } else {
                v += m;
            }
        }
        v
    } else {
        Integer::from_str_radix(t, 10).map_err(|_| cannot())?
    };
    EntropyParams::new(value).map_err(bad)
}

/// Convergence order (as exposed to users) to the recurrence index k.
fn order_to_k(order: usize) -> PyResult<usize> {
    if order < 2 {
        return Err(bad("order is the convergence order and must be at least 2"));
    }
    Ok(order - 1)
}

fn real_config(
    prec: Precision,
    k: usize,
    max_iter: usize,
    residual_scale: i32,
    stagnation_scale: i32,
) -> PyResult<SolveConfig<MpReal>> {
    let bits = prec.bits() as i32;
    SolveConfig::new(
        k,
        max_iter,
        MpReal::exp2(prec, residual_scale - bits),
        MpReal::exp2(prec, stagnation_scale - bits),
    )
    .map_err(bad)
}

/// Iterate x − f·A_{k−1}/A_k on a real polynomial from a decimal starting
/// point. Returns a dict with the final iterate, stop reason, iteration
/// count, and last residual, all high-precision values as decimal strings.
#[pyfunction]
#[pyo3(signature = (coeffs, x0, order = 3, precision = 256, max_iter = 64))]
fn solve_polynomial(
    py: Python<'_>,
    coeffs: Vec<String>,
    x0: String,
    order: usize,
    precision: u32,
    max_iter: usize,
) -> PyResult<Py<PyDict>> {
    let prec = prec_of(precision)?;
    let k = order_to_k(order)?;
    let model = PolynomialModel::new(parse_reals(prec, &coeffs)?, "python polynomial");
    let start = parse_real(prec, &x0)?;
    let cfg = real_config(prec, k, max_iter, 24, 8)?;
    let trace = solve_core(&model, &start, &cfg);
    let last = trace.final_step().expect("trace is never empty");

    let out = PyDict::new_bound(py);
    out.set_item("root", last.x.to_decimal())?;
    out.set_item("status", trace.status().to_string())?;
    out.set_item("iterations", trace.iterations())?;
    out.set_item("residual", last.abs_f.to_decimal())?;
    out.set_item(
        "error_estimate",
        last.error_estimate.as_ref().map(|e| e.to_decimal()),
    )?;
    Ok(out.unbind())
}

/// The exact sequence A_0..A_k for a rational polynomial at a rational
/// point, as `"p/q"` strings. Coefficients and the point accept decimals
/// or fractions.
#[pyfunction]
fn ak_sequence(coeffs: Vec<String>, x: String, k: usize) -> PyResult<Vec<String>> {
    if k < 1 {
        return Err(bad("k must be at least 1"));
    }
    let poly = parse_rat_poly(&coeffs)?;
    let point = parse_rat(&x)?;
    let jet = polynomial_jet(poly.coeffs(), &point, k + 1).map_err(bad)?;
    let seq = ak::compute_a(&jet, k).map_err(bad)?;
    Ok(seq.a().iter().map(|a| a.to_string()).collect())
}

/// One exact step x − f·A_{k−1}/A_k over the rationals.
#[pyfunction]
fn householder_step(coeffs: Vec<String>, x: String, k: usize) -> PyResult<String> {
    let poly = parse_rat_poly(&coeffs)?;
    let point = parse_rat(&x)?;
    let next = householder::householder_step(&poly, &point, k).map_err(bad)?;
    Ok(next.to_string())
}

/// Checks the exact identities tying the recurrence to derivatives of 1/f
/// ((1/f)^(k) = B_k/f^{k+1} with B_k = (−1)^k k! A_k) for 1 ≤ k ≤ k_max.
#[pyfunction]
#[pyo3(signature = (coeffs, k_max = 8))]
fn verify_identities(coeffs: Vec<String>, k_max: usize) -> PyResult<bool> {
    let poly = parse_rat_poly(&coeffs)?;
    let report = verify_lemma5(&poly, k_max).map_err(bad)?;
    Ok(report.all_pass())
}

/// The asymptotic one-step error factor C of the given convergence order
/// (2..6) for a polynomial at a root, as a decimal string.
#[pyfunction]
#[pyo3(signature = (coeffs, root, order, precision = 2048))]
fn convergence_factor(
    coeffs: Vec<String>,
    root: String,
    order: usize,
    precision: u32,
) -> PyResult<String> {
    let prec = prec_of(precision)?;
    let reals = parse_reals(prec, &coeffs)?;
    let point = parse_real(prec, &root)?;
    let jet = polynomial_jet(&reals, &point, 6).map_err(bad)?;
    let factor = factors::factor(&jet, order).map_err(bad)?;
    Ok(factor.value().to_decimal())
}

/// H_q(x), the q-ary entropy, as a decimal string. `q` accepts decimal
/// digits or the shorthand B^N±M (e.g. "2^127-1").
#[pyfunction]
#[pyo3(signature = (q, x, precision = 256))]
fn entropy(q: String, x: String, precision: u32) -> PyResult<String> {
    let prec = prec_of(precision)?;
    let params = parse_alphabet(&q)?;
    let point = parse_real(prec, &x)?;
    h_q(&params, &point).map(|v| v.to_decimal()).map_err(bad)
}

/// Solves H_q(x) = y on [0, (q−1)/q]. Returns a dict with the root, the
/// residual |H_q(root) − y|, the first-order error estimate, the initial
/// guess used, and the iteration count.
#[pyfunction]
#[pyo3(signature = (q, y, precision = 256, order = 6, max_iter = 200))]
fn entropy_inverse(
    py: Python<'_>,
    q: String,
    y: String,
    precision: u32,
    order: usize,
    max_iter: usize,
) -> PyResult<Py<PyDict>> {
    let prec = prec_of(precision)?;
    let params = parse_alphabet(&q)?;
    let target = parse_real(prec, &y)?;
    let k = order_to_k(order)?;
    let cfg = real_config(prec, k, max_iter, 40, 16)?;
    let result = solve_inverse(&params, &target, default_strategy(&params), &cfg).map_err(bad)?;

    let out = PyDict::new_bound(py);
    out.set_item("root", result.root.to_decimal())?;
    out.set_item("status", result.trace.status().to_string())?;
    out.set_item("iterations", result.trace.iterations())?;
    out.set_item("initial_guess", result.guess_used.to_decimal())?;
    out.set_item("residual", result.residual.to_decimal())?;
    out.set_item("error_estimate", result.error_estimate.to_decimal())?;
    Ok(out.unbind())
}

/// The Gilbert–Varshamov relative distance δ with H_q(δ) = 1 − R, as a
/// decimal string.
#[pyfunction]
#[pyo3(signature = (q, rate, precision = 256, order = 6, max_iter = 200))]
fn gv_distance(
    q: String,
    rate: String,
    precision: u32,
    order: usize,
    max_iter: usize,
) -> PyResult<String> {
    let prec = prec_of(precision)?;
    let params = parse_alphabet(&q)?;
    let r = parse_real(prec, &rate)?;
    let k = order_to_k(order)?;
    let cfg = real_config(prec, k, max_iter, 40, 16)?;
    gv_distance_core(&params, &r, &cfg)
        .map(|v| v.to_decimal())
        .map_err(bad)
}

/// Renders basins of attraction for a real-coefficient polynomial over a
/// square complex window. Returns a dict with the roots found (as
/// [re, im] float pairs), the grid labels as row-major nested lists
/// (root index, or -1 where the iteration diverged), and the iteration
/// counts in the same layout.
#[pyfunction]
#[pyo3(signature = (coeffs, size = 100, lo = -1.5, hi = 1.5, order = 3, precision = 128, max_iter = 80))]
fn render_basins(
    py: Python<'_>,
    coeffs: Vec<String>,
    size: usize,
    lo: f64,
    hi: f64,
    order: usize,
    precision: u32,
    max_iter: u32,
) -> PyResult<Py<PyDict>> {
    let prec = prec_of(precision)?;
    let k = order_to_k(order)?;
    let complex_coeffs = coeffs
        .iter()
        .map(|s| MpReal::from_decimal(&prec, s).map(MpComplex::from_real))
        .collect::<Result<Vec<_>, _>>()
        .map_err(bad)?;
    let roots = RootSet::of_polynomial(
        &complex_coeffs,
        prec,
        MpReal::with_precision(prec, DEFAULT_MATCH_TOLERANCE),
    )
    .map_err(bad)?;
    let model = PolynomialModel::new(complex_coeffs.clone(), "python polynomial");
    let spec = GridSpec::square(prec, lo, hi, size).map_err(bad)?;
    let escape = MpReal::with_precision(prec, DEFAULT_ESCAPE_RADIUS);
    let grid = basins::render(&model, &spec, k, &roots, max_iter, &escape);

    let root_list: Vec<(f64, f64)> = roots
        .roots()
        .iter()
        .map(|z| (z.re().to_f64(), z.im().to_f64()))
        .collect();
    let mut labels: Vec<Vec<i64>> = Vec::with_capacity(size);
    let mut iterations: Vec<Vec<u32>> = Vec::with_capacity(size);
    for row in 0..size {
        let mut label_row = Vec::with_capacity(size);
        let mut iter_row = Vec::with_capacity(size);
        for col in 0..size {
            let cell = grid.cell(col, row);
            label_row.push(match cell.label {
                basins::CellLabel::Root(i) => i as i64,
                basins::CellLabel::Diverged => -1,
            });
            iter_row.push(cell.iterations);
        }
        labels.push(label_row);
        iterations.push(iter_row);
    }

    let out = PyDict::new_bound(py);
    out.set_item("roots", root_list)?;
    out.set_item("labels", labels)?;
    out.set_item("iterations", iterations)?;
    Ok(out.unbind())
}

#[pymodule]
fn hiord_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(solve_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(ak_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(householder_step, m)?)?;
    m.add_function(wrap_pyfunction!(verify_identities, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_factor, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(gv_distance, m)?)?;
    m.add_function(wrap_pyfunction!(render_basins, m)?)?;
    Ok(())
}
