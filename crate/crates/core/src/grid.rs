//! Uniform grids, trapezoidal quadrature, sampled signals, and thresholded
//! support measures.
//!
//! Every integral in the toolkit is a trapezoidal sum over a uniform grid:
//! the endpoint weights are `spacing / 2` and the interior weights `spacing`.
//! Inner products are the quadrature form of `⟨f, g⟩ = ∫ f(t) conj(g(t)) dt`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QupError;

/// A uniform grid of `n` nodes on the closed interval `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Left endpoint.
    pub a: f64,
    /// Right endpoint.
    pub b: f64,
    /// Number of nodes (at least 2).
    pub n: usize,
    /// Node spacing `(b - a) / (n - 1)`.
    pub spacing: f64,
}

/// Build a uniform grid on `[a, b]` with `n` nodes.
///
/// Fails when the endpoints are not finite, the interval has non-positive
/// length, or fewer than two nodes are requested.
pub fn make_grid(a: f64, b: f64, n: usize) -> Result<Grid, QupError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(QupError::DegenerateGrid(format!(
            "endpoints must be finite, got [{a}, {b}]"
        )));
    }
    if b <= a {
        return Err(QupError::DegenerateGrid(format!(
            "interval [{a}, {b}] has non-positive length"
        )));
    }
    if n < 2 {
        return Err(QupError::DegenerateGrid(format!(
            "need at least 2 nodes, got {n}"
        )));
    }
    Ok(Grid {
        a,
        b,
        n,
        spacing: (b - a) / (n - 1) as f64,
    })
}

impl Grid {
    /// The `i`-th node `a + i * spacing`.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.b
        } else {
            self.a + i as f64 * self.spacing
        }
    }

    /// All nodes in order.
    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Trapezoidal weight of the `i`-th node.
    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.n {
            self.spacing / 2.0
        } else {
            self.spacing
        }
    }

    /// All trapezoidal weights in order; they sum to `b - a`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.weight(i)).collect()
    }

    /// Total length `b - a` of the interval.
    #[inline]
    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Whether `t` lies inside `[a, b]` (with a half-spacing tolerance).
    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        t >= self.a - 0.5 * self.spacing && t <= self.b + 0.5 * self.spacing
    }
}

/// A complex-valued signal sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    /// The sampling grid.
    pub grid: Grid,
    /// One complex value per grid node.
    pub values: Vec<Complex64>,
}

impl Signal {
    /// Wrap sampled values; the length must match the grid.
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self, QupError> {
        if values.len() != grid.n {
            return Err(QupError::ShapeMismatch(format!(
                "grid has {} nodes but {} values were supplied",
                grid.n,
                values.len()
            )));
        }
        Ok(Signal { grid, values })
    }

    /// Sample a closure at every grid node.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = (0..grid.n).map(|i| f(grid.node(i))).collect();
        Signal { grid, values }
    }

    /// Sample a real-valued closure at every grid node.
    pub fn from_real_fn(grid: Grid, mut f: impl FnMut(f64) -> f64) -> Self {
        Signal::from_fn(grid, |t| Complex64::new(f(t), 0.0))
    }

    /// The all-zero signal on `grid`.
    pub fn zeros(grid: Grid) -> Self {
        Signal {
            grid,
            values: vec![Complex64::ZERO; grid.n],
        }
    }

    /// Evaluate at an arbitrary point by linear interpolation between nodes;
    /// zero outside the sampled interval.
    pub fn eval(&self, t: f64) -> Complex64 {
        let g = &self.grid;
        if t < g.a || t > g.b {
            return Complex64::ZERO;
        }
        let x = (t - g.a) / g.spacing;
        let i = (x.floor() as usize).min(g.n - 2);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Quadrature norm `sqrt(∫ |f|^2)`.
    pub fn norm(&self) -> f64 {
        inner(self, self).re.max(0.0).sqrt()
    }

    /// Largest modulus over the grid.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise scaling by a complex constant.
    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Pointwise difference `self - other` (same grid required).
    pub fn sub(&self, other: &Signal) -> Result<Signal, QupError> {
        if self.grid != other.grid {
            return Err(QupError::ShapeMismatch(
                "signals live on different grids".into(),
            ));
        }
        Ok(Signal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x - y)
                .collect(),
        })
    }

    /// Pointwise sum `self + other` (same grid required).
    pub fn add(&self, other: &Signal) -> Result<Signal, QupError> {
        if self.grid != other.grid {
            return Err(QupError::ShapeMismatch(
                "signals live on different grids".into(),
            ));
        }
        Ok(Signal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }
}

/// Quadrature inner product `∫ f(t) conj(g(t)) dt` (linear in `f`,
/// conjugate-linear in `g`). Panics on mismatched grids only through the
/// returned error of [`Signal::sub`]-style helpers; here the grids must agree.
pub fn inner(f: &Signal, g: &Signal) -> Complex64 {
    assert_eq!(
        f.grid, g.grid,
        "inner product requires both signals on the same grid"
    );
    let mut acc = Complex64::ZERO;
    for i in 0..f.grid.n {
        acc += f.values[i] * g.values[i].conj() * f.grid.weight(i);
    }
    acc
}

/// Result of a thresholded support measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SupportReport {
    /// Quadrature measure of `{ t : |f(t)| > threshold }`.
    pub measure: f64,
    /// The absolute threshold actually applied, `eps_rel * max |f|`.
    pub threshold: f64,
    /// Largest modulus of the signal over the grid.
    pub max_abs: f64,
    /// Number of grid nodes above the threshold.
    pub nodes_above: usize,
}

/// Measure the essential support of `f` at relative level `eps_rel`:
/// the quadrature measure of the nodes where `|f| > eps_rel * max |f|`.
///
/// `eps_rel` must lie in `(0, 1)`. The zero signal has measure zero.
pub fn support_measure(f: &Signal, eps_rel: f64) -> Result<SupportReport, QupError> {
    if !(eps_rel > 0.0 && eps_rel < 1.0) {
        return Err(QupError::InvalidInput(format!(
            "relative support threshold must lie in (0, 1), got {eps_rel}"
        )));
    }
    let max_abs = f.max_abs();
    let threshold = eps_rel * max_abs;
    let mut measure = 0.0;
    let mut nodes_above = 0;
    if max_abs > 0.0 {
        for i in 0..f.grid.n {
            if f.values[i].norm() > threshold {
                measure += f.grid.weight(i);
                nodes_above += 1;
            }
        }
    }
    Ok(SupportReport {
        measure,
        threshold,
        max_abs,
        nodes_above,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(make_grid(0.0, 1.0, 1).is_err());
        assert!(make_grid(1.0, 1.0, 8).is_err());
        assert!(make_grid(2.0, 1.0, 8).is_err());
        assert!(make_grid(f64::NAN, 1.0, 8).is_err());
    }

    #[test]
    fn trapezoid_weights_sum_to_length() {
        let g = make_grid(-3.0, 5.0, 129).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert_relative_eq!(total, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_integrates_smooth_functions() {
        // ∫_0^π sin t dt = 2 exactly; trapezoid on 2001 nodes is ~1e-7 close.
        let g = make_grid(0.0, std::f64::consts::PI, 2001).unwrap();
        let f = Signal::from_real_fn(g, f64::sin);
        let one = Signal::from_real_fn(g, |_| 1.0);
        assert_relative_eq!(inner(&f, &one).re, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn gaussian_norm_matches_closed_form() {
        // ∫ exp(-t^2) dt = sqrt(pi); the tails beyond |t| = 10 are negligible.
        let g = make_grid(-10.0, 10.0, 4001).unwrap();
        let f = Signal::from_real_fn(g, |t| (-t * t / 2.0).exp());
        assert_relative_eq!(f.norm(), std::f64::consts::PI.sqrt().sqrt(), epsilon = 1e-8);
    }

    #[test]
    fn interpolation_is_exact_on_nodes_and_zero_outside() {
        let g = make_grid(0.0, 1.0, 11).unwrap();
        let f = Signal::from_real_fn(g, |t| 3.0 * t + 1.0);
        assert_relative_eq!(f.eval(0.35).re, 2.05, epsilon = 1e-12);
        assert_eq!(f.eval(-0.2), Complex64::ZERO);
        assert_eq!(f.eval(1.2), Complex64::ZERO);
    }

    #[test]
    fn support_of_indicator_recovers_its_length() {
        let g = make_grid(-2.0, 2.0, 4001).unwrap();
        let f = Signal::from_real_fn(g, |t| if t.abs() <= 0.5 { 1.0 } else { 0.0 });
        let rep = support_measure(&f, 1e-3).unwrap();
        assert_relative_eq!(rep.measure, 1.0, epsilon = 3.0 * g.spacing);
    }

    #[test]
    fn support_of_zero_signal_is_zero() {
        let g = make_grid(0.0, 1.0, 64).unwrap();
        let rep = support_measure(&Signal::zeros(g), 0.5).unwrap();
        assert_eq!(rep.measure, 0.0);
        assert_eq!(rep.nodes_above, 0);
    }

    #[test]
    fn support_rejects_bad_threshold() {
        let g = make_grid(0.0, 1.0, 8).unwrap();
        let f = Signal::from_real_fn(g, |_| 1.0);
        assert!(support_measure(&f, 0.0).is_err());
        assert!(support_measure(&f, 1.0).is_err());
    }
}
