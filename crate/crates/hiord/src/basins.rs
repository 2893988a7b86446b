//! Basins of attraction on complex-plane grids and real intervals, plus the
//! cross-method comparison that checks both iterations carve the plane
//! identically.
//!
//! Each grid cell starts one iteration at the cell center and is labeled by
//! the root it reaches (or as diverged). Labels index into a root list
//! sorted by (real part, imaginary part) so renders are reproducible.

use std::io::Write;

use serde_json::{json, Value};

use crate::ak::step;
use crate::householder::reciprocal_derivative;
use crate::jet::{polynomial_jet, FunctionModel};
use crate::poly::Polynomial;
use crate::scalar::{MpComplex, MpReal, NormedScalar, Precision, Rat, RealScalar, Scalar};

pub const DEFAULT_ESCAPE_RADIUS: f64 = 1e6;
pub const DEFAULT_MAX_ITER: u32 = 100;
pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-8;

/// Fixed label palette (RGB); label i uses entry i mod 12. Diverged cells
/// are black.
pub const PALETTE: [[u8; 3]; 12] = [
    [230, 57, 70],
    [69, 123, 157],
    [241, 143, 1],
    [106, 76, 147],
    [87, 166, 57],
    [255, 202, 58],
    [25, 130, 196],
    [255, 89, 94],
    [138, 201, 38],
    [123, 44, 191],
    [255, 146, 139],
    [82, 182, 154],
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BasinError {
    #[error("root finding needs a polynomial of degree at least 1")]
    DegreeTooLow,
    #[error("root set entries must be separated by more than twice the match tolerance")]
    RootsTooClose,
    #[error("root refinement did not stabilize")]
    RootsNotConverged,
    #[error("grid dimensions must be at least 1x1 with nonempty ranges")]
    BadGrid,
}

/// Discrete solution set with the tolerance used to snap iterates to it.
#[derive(Debug, Clone)]
pub struct RootSet {
    roots: Vec<MpComplex>,
    match_tolerance: MpReal,
}

impl RootSet {
    /// Sorts the roots by (re, im) and checks pairwise separation
    /// `> 2·match_tolerance` so a point can match at most one root.
    pub fn new(mut roots: Vec<MpComplex>, match_tolerance: MpReal) -> Result<Self, BasinError> {
        if roots.is_empty() {
            return Err(BasinError::DegreeTooLow);
        }
        roots.sort_by(|a, b| {
            a.re()
                .partial_cmp(b.re())
                .unwrap()
                .then(a.im().partial_cmp(b.im()).unwrap())
        });
        let two = MpReal::with_precision(match_tolerance.precision(), 2.0);
        let limit = two.mul(&match_tolerance);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if roots[i].sub(&roots[j]).magnitude() <= limit {
                    return Err(BasinError::RootsTooClose);
                }
            }
        }
        Ok(Self {
            roots,
            match_tolerance,
        })
    }

    /// All complex roots of the polynomial by the Durand–Kerner sweep with
    /// the deterministic starting spray `(0.4 + 0.9i)^i`. Intended for
    /// separable polynomials (the fixture family used throughout).
    pub fn of_polynomial(
        coeffs: &[MpComplex],
        prec: Precision,
        match_tolerance: MpReal,
    ) -> Result<Self, BasinError> {
        let roots = durand_kerner(coeffs, prec)?;
        Self::new(roots, match_tolerance)
    }

    pub fn roots(&self) -> &[MpComplex] {
        &self.roots
    }

    pub fn match_tolerance(&self) -> &MpReal {
        &self.match_tolerance
    }

    /// Index of the root within `match_tolerance` of `z`, if any.
    pub fn classify(&self, z: &MpComplex) -> Option<usize> {
        self.roots
            .iter()
            .position(|root| z.sub(root).magnitude() <= self.match_tolerance)
    }
}

fn durand_kerner(coeffs: &[MpComplex], prec: Precision) -> Result<Vec<MpComplex>, BasinError> {
    let poly = Polynomial::new(coeffs.to_vec());
    let Some(degree) = poly.degree() else {
        return Err(BasinError::DegreeTooLow);
    };
    if degree < 1 {
        return Err(BasinError::DegreeTooLow);
    }
    let leading = poly.leading().clone();
    let monic: Vec<MpComplex> = poly
        .coeffs()
        .iter()
        .map(|c| c.div(&leading).expect("leading coefficient nonzero"))
        .collect();
    let monic = Polynomial::new(monic);

    let seed = MpComplex::from_f64(prec, 0.4, 0.9);
    let mut zs = Vec::with_capacity(degree);
    let mut acc = MpComplex::from_f64(prec, 1.0, 0.0);
    for _ in 0..degree {
        zs.push(acc.clone());
        acc = acc.mul(&seed);
    }

    let stop = MpReal::exp2(prec, 8 - prec.bits() as i32);
    for _ in 0..500 {
        let mut largest_move = MpReal::with_precision(prec, 0.0);
        for i in 0..degree {
            let mut denom = MpComplex::from_f64(prec, 1.0, 0.0);
            for j in 0..degree {
                if j != i {
                    denom = denom.mul(&zs[i].sub(&zs[j]));
                }
            }
            let Ok(delta) = monic.evaluate(&zs[i]).div(&denom) else {
                // Colliding iterates: nudge and keep sweeping.
                zs[i] = zs[i].add(&MpComplex::from_f64(prec, 1e-3, 2e-3));
                continue;
            };
            let moved = delta.magnitude();
            if moved > largest_move {
                largest_move = moved;
            }
            zs[i] = zs[i].sub(&delta);
        }
        if largest_move <= stop {
            return Ok(zs);
        }
    }
    Err(BasinError::RootsNotConverged)
}

/// Cell outcome: either the index of the reached root or divergence
/// (escape, iteration budget, or a degenerate step — there is no fallback
/// order here).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellLabel {
    Root(usize),
    Diverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub label: CellLabel,
    pub iterations: u32,
}

/// Rectangular window and resolution of a render.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub x_min: MpReal,
    pub x_max: MpReal,
    pub y_min: MpReal,
    pub y_max: MpReal,
    pub width: usize,
    pub height: usize,
}

impl GridSpec {
    pub fn new(
        x_min: MpReal,
        x_max: MpReal,
        y_min: MpReal,
        y_max: MpReal,
        width: usize,
        height: usize,
    ) -> Result<Self, BasinError> {
        if width < 1 || height < 1 || x_min >= x_max || y_min >= y_max {
            return Err(BasinError::BadGrid);
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
        })
    }

    /// Square window `[lo, hi]²` at `size × size` cells.
    pub fn square(prec: Precision, lo: f64, hi: f64, size: usize) -> Result<Self, BasinError> {
        Self::new(
            MpReal::with_precision(prec, lo),
            MpReal::with_precision(prec, hi),
            MpReal::with_precision(prec, lo),
            MpReal::with_precision(prec, hi),
            size,
            size,
        )
    }

    /// Center of cell (col, row); row 0 is the top of the image.
    fn center(&self, col: usize, row: usize) -> MpComplex {
        let prec = self.x_min.precision();
        let fract = |i: usize, n: usize| {
            MpReal::with_precision(prec, i as f64 + 0.5)
                .div(&MpReal::with_precision(prec, n as f64))
                .expect("dimension >= 1")
        };
        let x = self
            .x_min
            .add(&self.x_max.sub(&self.x_min).mul(&fract(col, self.width)));
        let y = self
            .y_max
            .sub(&self.y_max.sub(&self.y_min).mul(&fract(row, self.height)));
        MpComplex::new(x, y)
    }
}

/// Labeled render result.
#[derive(Debug, Clone)]
pub struct BasinGrid {
    spec: GridSpec,
    cells: Vec<Cell>,
}

impl BasinGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, col: usize, row: usize) -> &Cell {
        &self.cells[row * self.spec.width + col]
    }

    /// Distinct root labels that appear in the render.
    pub fn root_labels_used(&self) -> Vec<usize> {
        let mut seen = std::collections::BTreeSet::new();
        for cell in &self.cells {
            if let CellLabel::Root(i) = cell.label {
                seen.insert(i);
            }
        }
        seen.into_iter().collect()
    }
}

fn classify_with(
    step_fn: &dyn Fn(&MpComplex) -> Option<MpComplex>,
    z0: &MpComplex,
    roots: &RootSet,
    max_iter: u32,
    escape_radius: &MpReal,
) -> (CellLabel, u32) {
    let mut z = z0.clone();
    for iter in 0..=max_iter {
        if let Some(idx) = roots.classify(&z) {
            return (CellLabel::Root(idx), iter);
        }
        if z.magnitude() > *escape_radius {
            return (CellLabel::Diverged, iter);
        }
        if iter == max_iter {
            break;
        }
        match step_fn(&z) {
            Some(next) => z = next,
            None => return (CellLabel::Diverged, iter),
        }
    }
    (CellLabel::Diverged, max_iter)
}

fn recurrence_step_fn<'m>(
    model: &'m dyn FunctionModel<MpComplex>,
    k: usize,
) -> impl Fn(&MpComplex) -> Option<MpComplex> + 'm {
    move |z: &MpComplex| {
        let jet = model.jet(z, k).ok()?;
        step(&jet, k).ok()
    }
}

/// Runs the iteration from `z0` and labels the outcome. The root check
/// happens before each step, so a starting point on a root reports zero
/// iterations; a degenerate step (the order-k denominator vanishes) labels
/// the cell diverged rather than retrying at lower order.
pub fn classify_point(
    model: &dyn FunctionModel<MpComplex>,
    z0: &MpComplex,
    k: usize,
    roots: &RootSet,
    max_iter: u32,
    escape_radius: &MpReal,
) -> (CellLabel, u32) {
    classify_with(&recurrence_step_fn(model, k), z0, roots, max_iter, escape_radius)
}

/// Classifies every cell center. Deterministic: cells are pure functions of
/// their coordinates.
pub fn render(
    model: &dyn FunctionModel<MpComplex>,
    spec: &GridSpec,
    k: usize,
    roots: &RootSet,
    max_iter: u32,
    escape_radius: &MpReal,
) -> BasinGrid {
    let step_fn = recurrence_step_fn(model, k);
    let mut cells = Vec::with_capacity(spec.width * spec.height);
    for row in 0..spec.height {
        for col in 0..spec.width {
            let z0 = spec.center(col, row);
            let (label, iterations) =
                classify_with(&step_fn, &z0, roots, max_iter, escape_radius);
            cells.push(Cell { label, iterations });
        }
    }
    BasinGrid {
        spec: spec.clone(),
        cells,
    }
}

/// Labels evenly spaced points of a real interval after exactly
/// `iterations` steps: `true` where the first-order error estimate
/// `|f|/|f′|` lands at or under `threshold`. Zero iterations gives the raw
/// initial-residual picture.
pub fn render_real_line(
    model: &dyn FunctionModel<MpReal>,
    lo: &MpReal,
    hi: &MpReal,
    points: usize,
    k: usize,
    iterations: usize,
    threshold: &MpReal,
) -> Vec<bool> {
    let prec = lo.precision();
    let span = hi.sub(lo);
    let n = MpReal::with_precision(prec, points as f64);
    let mut labels = Vec::with_capacity(points);
    for i in 0..points {
        let offset = MpReal::with_precision(prec, i as f64 + 0.5)
            .div(&n)
            .expect("points >= 1");
        let mut x = lo.add(&span.mul(&offset));
        for _ in 0..iterations {
            let Ok(jet) = model.jet(&x, k) else { break };
            let Ok(next) = step(&jet, k) else { break };
            x = next;
        }
        let converged = match model.jet(&x, 1) {
            Ok(jet) => {
                let f_mag = jet.deriv(0).abs();
                if jet.deriv(1).is_zero() {
                    f_mag.is_zero()
                } else {
                    f_mag.div(&jet.deriv(1).abs()).map(|e| e <= *threshold) == Ok(true)
                }
            }
            Err(_) => false,
        };
        labels.push(converged);
    }
    labels
}

/// Renders the same grid with the recurrence step and with the classical
/// reciprocal-derivative step `z + k·B_{k−1}(z)·f(z)/B_k(z)` (numerators
/// taken exactly over rationals, then evaluated in complex floats) and
/// counts cells whose labels differ. The identity behind both methods makes
/// any mismatch a defect, so evaluation runs at 128-bit precision minimum.
pub fn compare(
    poly: &Polynomial<Rat>,
    spec: &GridSpec,
    k: usize,
    roots: &RootSet,
    max_iter: u32,
    escape_radius: &MpReal,
) -> Result<usize, BasinError> {
    assert!(k >= 1, "order k must be at least 1");
    let prec = Precision::of(spec.x_min.precision().bits().max(128));
    let lift = |p: &Polynomial<Rat>| -> Polynomial<MpComplex> {
        Polynomial::new(
            p.coeffs()
                .iter()
                .map(|c| MpComplex::from_real(MpReal::from_rational(prec, c.as_rational())))
                .collect(),
        )
    };
    let f_complex = lift(poly);
    let b_prev = lift(
        reciprocal_derivative(poly, k - 1)
            .expect("nonzero polynomial")
            .numerator(),
    );
    let b_curr = lift(
        reciprocal_derivative(poly, k)
            .expect("nonzero polynomial")
            .numerator(),
    );
    let k_scalar = MpComplex::from_f64(prec, k as f64, 0.0);

    let oracle_step = move |z: &MpComplex| -> Option<MpComplex> {
        let denom = b_curr.evaluate(z);
        if denom.is_zero() {
            return None;
        }
        let num = b_prev.evaluate(z).mul(&f_complex.evaluate(z));
        Some(z.add(&k_scalar.mul(&num).div(&denom).ok()?))
    };

    let coeffs: Vec<MpComplex> = poly
        .coeffs()
        .iter()
        .map(|c| MpComplex::from_real(MpReal::from_rational(prec, c.as_rational())))
        .collect();
    let engine_step = move |z: &MpComplex| -> Option<MpComplex> {
        let jet = polynomial_jet(&coeffs, z, k).ok()?;
        step(&jet, k).ok()
    };

    let mut mismatches = 0usize;
    for row in 0..spec.height {
        for col in 0..spec.width {
            let z0 = {
                // Recompute the center at the comparison precision.
                let raw = spec.center(col, row);
                MpComplex::new(raw.re().to_precision(prec), raw.im().to_precision(prec))
            };
            let (engine_label, _) =
                classify_with(&engine_step, &z0, roots, max_iter, escape_radius);
            let (oracle_label, _) =
                classify_with(&oracle_step, &z0, roots, max_iter, escape_radius);
            if engine_label != oracle_label {
                mismatches += 1;
            }
        }
    }
    Ok(mismatches)
}

fn brightness(iterations: u32) -> u32 {
    255 - (iterations * 6).min(160)
}

/// Binary PPM (P6) color label map: palette color per root label, darkened
/// with iteration count; diverged cells black.
pub fn write_ppm(grid: &BasinGrid, out: &mut dyn Write) -> std::io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", grid.spec.width, grid.spec.height)?;
    let mut row = Vec::with_capacity(grid.spec.width * 3);
    for (i, cell) in grid.cells.iter().enumerate() {
        match cell.label {
            CellLabel::Root(idx) => {
                let base = PALETTE[idx % PALETTE.len()];
                let scale = brightness(cell.iterations);
                for channel in base {
                    row.push((u32::from(channel) * scale / 255) as u8);
                }
            }
            CellLabel::Diverged => row.extend_from_slice(&[0, 0, 0]),
        }
        if (i + 1) % grid.spec.width == 0 {
            out.write_all(&row)?;
            row.clear();
        }
    }
    Ok(())
}

/// Binary PGM (P5) iteration-count map (counts clip at 255).
pub fn write_pgm(grid: &BasinGrid, out: &mut dyn Write) -> std::io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", grid.spec.width, grid.spec.height)?;
    let bytes: Vec<u8> = grid
        .cells
        .iter()
        .map(|cell| cell.iterations.min(255) as u8)
        .collect();
    out.write_all(&bytes)
}

/// Sidecar JSON describing a render: window, resolution, roots, palette,
/// and iteration parameters.
pub fn sidecar(
    grid: &BasinGrid,
    roots: &RootSet,
    k: usize,
    max_iter: u32,
    escape_radius: &MpReal,
) -> Value {
    let palette: Vec<String> = PALETTE
        .iter()
        .map(|c| format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]))
        .collect();
    json!({
        "grid": {
            "x_min": grid.spec.x_min.to_decimal(),
            "x_max": grid.spec.x_max.to_decimal(),
            "y_min": grid.spec.y_min.to_decimal(),
            "y_max": grid.spec.y_max.to_decimal(),
            "width": grid.spec.width,
            "height": grid.spec.height,
        },
        "roots": roots.roots().iter().map(MpComplex::to_decimal).collect::<Vec<_>>(),
        "match_tolerance": roots.match_tolerance().to_decimal(),
        "palette": palette,
        "diverged_color": "#000000",
        "order_k": k,
        "max_iterations": max_iter,
        "escape_radius": escape_radius.to_decimal(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::PolynomialModel;

    fn prec() -> Precision {
        Precision::default()
    }

    fn complex(re: f64, im: f64) -> MpComplex {
        MpComplex::from_f64(prec(), re, im)
    }

    /// z⁶ − z + 1.
    fn sextic_coeffs() -> Vec<MpComplex> {
        [1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0]
            .iter()
            .map(|&c| complex(c, 0.0))
            .collect()
    }

    fn sextic_roots() -> RootSet {
        RootSet::of_polynomial(
            &sextic_coeffs(),
            prec(),
            MpReal::with_precision(prec(), DEFAULT_MATCH_TOLERANCE),
        )
        .unwrap()
    }

    fn sextic_model() -> PolynomialModel<MpComplex> {
        PolynomialModel::new(sextic_coeffs(), "sextic")
    }

    fn escape() -> MpReal {
        MpReal::with_precision(prec(), DEFAULT_ESCAPE_RADIUS)
    }

    #[test]
    fn solver_recovers_known_quadratic_roots() {
        let coeffs: Vec<MpComplex> = [-2.0, 0.0, 1.0].iter().map(|&c| complex(c, 0.0)).collect();
        let set = RootSet::of_polynomial(&coeffs, prec(), MpReal::with_precision(prec(), 1e-8))
            .unwrap();
        assert_eq!(set.roots().len(), 2);
        let sqrt2 = MpReal::with_precision(prec(), 2.0).sqrt();
        // Sorted by real part: −√2 first.
        assert!(set.roots()[0].add(&MpComplex::from_real(sqrt2.clone())).magnitude()
            < MpReal::exp2(prec(), -200));
        assert!(set.roots()[1].sub(&MpComplex::from_real(sqrt2)).magnitude()
            < MpReal::exp2(prec(), -200));
    }

    #[test]
    fn sextic_roots_verify_against_the_polynomial() {
        let set = sextic_roots();
        assert_eq!(set.roots().len(), 6);
        let poly = Polynomial::new(sextic_coeffs());
        for root in set.roots() {
            assert!(poly.evaluate(root).magnitude() < MpReal::exp2(prec(), -200));
        }
        // Sorted ascending by real part (ties by imaginary part).
        for pair in set.roots().windows(2) {
            assert!(
                pair[0].re() < pair[1].re()
                    || (pair[0].re() == pair[1].re() && pair[0].im() <= pair[1].im())
            );
        }
    }

    #[test]
    fn close_roots_rejected() {
        let roots = vec![complex(0.0, 0.0), complex(1e-9, 0.0)];
        let err = RootSet::new(roots, MpReal::with_precision(prec(), 1e-8)).unwrap_err();
        assert_eq!(err, BasinError::RootsTooClose);
    }

    #[test]
    fn starting_on_a_root_takes_zero_iterations() {
        let set = sextic_roots();
        let model = sextic_model();
        for (idx, root) in set.roots().iter().enumerate() {
            let (label, iters) = classify_point(&model, root, 3, &set, 100, &escape());
            assert_eq!(label, CellLabel::Root(idx));
            assert_eq!(iters, 0);
        }
    }

    #[test]
    fn newton_classification_is_deterministic() {
        // z⁶ − z + 1 has no real roots (its minimum over ℝ is ≈ 0.418 > 0), and a
        // Newton step of a real-coefficient polynomial maps the real axis to
        // itself, so a start exactly on the real axis can never converge: the
        // origin must come out Diverged, deterministically. An off-axis start
        // converges to one specific root, also deterministically.
        let set = sextic_roots();
        let model = sextic_model();
        let (origin, origin_iters) =
            classify_point(&model, &complex(0.0, 0.0), 1, &set, 100, &escape());
        assert_eq!(origin, CellLabel::Diverged);
        let start = complex(0.1, 0.3);
        let (first, iters) = classify_point(&model, &start, 1, &set, 100, &escape());
        assert!(matches!(first, CellLabel::Root(_)));
        assert!(iters > 0);
        for _ in 0..3 {
            let (again, again_iters) = classify_point(&model, &start, 1, &set, 100, &escape());
            assert_eq!(first, again);
            assert_eq!(iters, again_iters);
            let (origin_again, origin_again_iters) =
                classify_point(&model, &complex(0.0, 0.0), 1, &set, 100, &escape());
            assert_eq!(origin, origin_again);
            assert_eq!(origin_iters, origin_again_iters);
        }
    }

    #[test]
    fn single_cell_grid_centered_on_root() {
        let set = sextic_roots();
        let model = sextic_model();
        let root = &set.roots()[0];
        let eps = MpReal::with_precision(prec(), 1e-3);
        let spec = GridSpec::new(
            root.re().sub(&eps),
            root.re().add(&eps),
            root.im().sub(&eps),
            root.im().add(&eps),
            1,
            1,
        )
        .unwrap();
        let grid = render(&model, &spec, 4, &set, 100, &escape());
        assert_eq!(grid.cells().len(), 1);
        assert_eq!(grid.cell(0, 0).label, CellLabel::Root(0));
    }

    #[test]
    fn renders_are_reproducible() {
        let set = sextic_roots();
        let model = sextic_model();
        let spec = GridSpec::square(prec(), -1.5, 1.5, 16).unwrap();
        let first = render(&model, &spec, 3, &set, 100, &escape());
        let second = render(&model, &spec, 3, &set, 100, &escape());
        assert_eq!(first.cells(), second.cells());
        assert!(first.root_labels_used().len() >= 2);
    }

    #[test]
    fn degenerate_step_labels_diverged() {
        // f = x³ + 1 at z = 0: A_1 = f′(0) = 0, A_2 = −½·f″·f = 0, A_3 = 0 —
        // with no fallback the cell is diverged immediately.
        let coeffs: Vec<MpComplex> = [1.0, 0.0, 0.0, 1.0]
            .iter()
            .map(|&c| complex(c, 0.0))
            .collect();
        let set = RootSet::of_polynomial(&coeffs, prec(), MpReal::with_precision(prec(), 1e-8))
            .unwrap();
        let model = PolynomialModel::new(coeffs, "cubic");
        let (label, _) = classify_point(&model, &complex(0.0, 0.0), 1, &set, 100, &escape());
        assert_eq!(label, CellLabel::Diverged);
    }

    #[test]
    fn methods_agree_on_a_small_grid() {
        let poly = Polynomial::new(
            [1i64, -1, 0, 0, 0, 0, 1]
                .iter()
                .map(|&c| Rat::from_integer(c))
                .collect::<Vec<_>>(),
        );
        let set = sextic_roots();
        let spec = GridSpec::square(prec(), -1.5, 1.5, 12).unwrap();
        for k in [1usize, 2, 3] {
            let mismatches = compare(&poly, &spec, k, &set, 100, &escape()).unwrap();
            assert_eq!(mismatches, 0, "k = {k}");
        }
    }

    #[test]
    fn real_line_labels_detect_the_root() {
        // x² − 2 on [1, 2]: after a couple of iterations every point near the
        // root converges.
        let coeffs: Vec<MpReal> = [-2.0, 0.0, 1.0]
            .iter()
            .map(|&c| MpReal::with_precision(prec(), c))
            .collect();
        let model = PolynomialModel::new(coeffs, "quadratic");
        let lo = MpReal::with_precision(prec(), 1.0);
        let hi = MpReal::with_precision(prec(), 2.0);
        let threshold = MpReal::with_precision(prec(), 1e-30);
        let labels = render_real_line(&model, &lo, &hi, 64, 3, 3, &threshold);
        assert_eq!(labels.len(), 64);
        assert!(labels.iter().any(|&c| c));
        // Zero iterations: nothing within 1e−30 of the root on this grid.
        let raw = render_real_line(&model, &lo, &hi, 64, 3, 0, &threshold);
        assert!(raw.iter().all(|&c| !c));
        // A single point placed on the root converges immediately.
        let sqrt2 = MpReal::with_precision(prec(), 2.0).sqrt();
        let eps = MpReal::with_precision(prec(), 1e-40);
        let at_root = render_real_line(
            &model,
            &sqrt2.sub(&eps),
            &sqrt2.add(&eps),
            1,
            3,
            0,
            &MpReal::with_precision(prec(), 1e-35),
        );
        assert_eq!(at_root, vec![true]);
    }

    #[test]
    fn image_writers_emit_valid_headers() {
        let set = sextic_roots();
        let model = sextic_model();
        let spec = GridSpec::square(prec(), -1.5, 1.5, 8).unwrap();
        let grid = render(&model, &spec, 3, &set, 100, &escape());

        let mut ppm = Vec::new();
        write_ppm(&grid, &mut ppm).unwrap();
        assert!(ppm.starts_with(b"P6\n8 8\n255\n"));
        assert_eq!(ppm.len(), 11 + 8 * 8 * 3);

        let mut pgm = Vec::new();
        write_pgm(&grid, &mut pgm).unwrap();
        assert!(pgm.starts_with(b"P5\n8 8\n255\n"));
        assert_eq!(pgm.len(), 11 + 8 * 8);

        let meta = sidecar(&grid, &set, 3, 100, &escape());
        assert_eq!(meta["grid"]["width"], 8);
        assert_eq!(meta["roots"].as_array().unwrap().len(), 6);
        assert_eq!(meta["palette"].as_array().unwrap().len(), 12);
    }
}
