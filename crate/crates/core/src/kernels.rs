//! Integral kernels `K(omega, t)`, their discretization, and the induced
//! operators `f ↦ f~(omega) = ∫ K(omega, t) f(t) dt`.
//!
//! A [`KernelSpec`] is a symbolic kernel description; [`discretize`] samples
//! it on an `omega × t` product grid into a dense [`DiscreteOperator`] whose
//! application includes the `t`-quadrature weights. Frame (Riesz) bounds of
//! the induced operator come from the extreme eigenvalues of the
//! symmetrically weighted frame matrix `W_t^{1/2} K^H W_ω K W_t^{1/2}`.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QupError;
use crate::grid::{Grid, Signal};
use crate::independence::BivariateKernel;
use crate::io;
use crate::linalg;

/// One term `λ · ψ(ω) · φ(t)` of a separable (finite-rank) kernel.
#[derive(Debug, Clone)]
pub struct SeparableTerm {
    /// Singular value / weight of the term.
    pub lambda: f64,
    /// ω-side factor, sampled on an ω-grid.
    pub psi: Signal,
    /// t-side factor, sampled on a t-grid.
    pub phi: Signal,
}

/// Symbolic kernel descriptor.
#[derive(Debug, Clone)]
pub enum KernelSpec {
    /// `K(ω, t) = e^{-iωt}` (the non-unitary forward Fourier kernel).
    Fourier,
    /// `K(ω, t) = e^{iωt}`.
    InverseFourier,
    /// Windowed-exponential kernel `K(ω, x) = φ(x - u) e^{-iωx}` with the
    /// window `φ` held at a fixed translation `u`.
    Gabor { window: Signal, translation: f64 },
    /// Scale-indexed wavelet kernel `K(s, t) = s^{-1/2} conj(φ((t - u)/s))`
    /// with a fixed translation `u`; the ω-axis carries the scale `s > 0`.
    Wavelet { mother: Signal, translation: f64 },
    /// `K(ω, t) = φ(t - ω)`.
    TranslationInvariant { phi: Signal },
    /// Bandlimited reproducing kernel `sin(Ω(ω - t)) / (π(ω - t))`, value
    /// `Ω/π` on the diagonal.
    SincReproducing { bandlimit: f64 },
    /// Finite-rank kernel `Σ_i λ_i ψ_i(ω) φ_i(t)`.
    SeparableRank { terms: Vec<SeparableTerm> },
    /// `K(ω, t) = H_n(t)` for `ω` in the `n`-th cell `[b_n, b_{n+1})`;
    /// zero outside the covered ω-range.
    PiecewiseIndicator {
        breakpoints: Vec<f64>,
        basis: Vec<Signal>,
    },
    /// Explicitly tabulated kernel values on a product grid, interpolated
    /// bilinearly in between.
    Tabulated {
        omega_grid: Grid,
        t_grid: Grid,
        values: DMatrix<Complex64>,
    },
}

impl KernelSpec {
    /// Check structural invariants of the variant.
    pub fn validate(&self) -> Result<(), QupError> {
        match self {
            KernelSpec::SincReproducing { bandlimit } => {
                if !(*bandlimit > 0.0 && bandlimit.is_finite()) {
                    return Err(QupError::InvalidInput(format!(
                        "sinc kernel needs a positive finite bandlimit, got {bandlimit}"
                    )));
                }
            }
            KernelSpec::SeparableRank { terms } => {
                if terms.is_empty() {
                    return Err(QupError::InvalidInput(
                        "separable kernel needs at least one term".into(),
                    ));
                }
            }
            KernelSpec::PiecewiseIndicator { breakpoints, basis } => {
                if breakpoints.len() != basis.len() + 1 {
                    return Err(QupError::ShapeMismatch(format!(
                        "{} breakpoints define {} cells but {} basis functions were given",
                        breakpoints.len(),
                        breakpoints.len().saturating_sub(1),
                        basis.len()
                    )));
                }
                if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(QupError::InvalidInput(
                        "breakpoints must be strictly increasing".into(),
                    ));
                }
            }
            KernelSpec::Tabulated {
                omega_grid,
                t_grid,
                values,
            } => {
                if values.nrows() != omega_grid.n || values.ncols() != t_grid.n {
                    return Err(QupError::ShapeMismatch(format!(
                        "tabulated matrix is {}x{} but grids are {}x{}",
                        values.nrows(),
                        values.ncols(),
                        omega_grid.n,
                        t_grid.n
                    )));
                }
                if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                    return Err(QupError::InvalidInput(
                        "tabulated kernel has non-finite entries".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The ω-interval on which the kernel is naturally defined, when bounded.
    /// `None` means the whole real line.
    pub fn omega_domain(&self) -> Option<(f64, f64)> {
        match self {
            KernelSpec::Wavelet { .. } => Some((f64::MIN_POSITIVE, f64::INFINITY)),
            KernelSpec::PiecewiseIndicator { breakpoints, .. } => Some((
                *breakpoints.first().unwrap_or(&0.0),
                *breakpoints.last().unwrap_or(&0.0),
            )),
            KernelSpec::Tabulated { omega_grid, .. } => Some((omega_grid.a, omega_grid.b)),
            KernelSpec::SeparableRank { terms } => {
                let g = terms[0].psi.grid;
                Some((g.a, g.b))
            }
            _ => None,
        }
    }

    /// Kernel value `K(omega, t)`.
    pub fn evaluate(&self, omega: f64, t: f64) -> Result<Complex64, QupError> {
        match self {
            KernelSpec::Fourier => Ok(Complex64::new(0.0, -omega * t).exp()),
            KernelSpec::InverseFourier => Ok(Complex64::new(0.0, omega * t).exp()),
            KernelSpec::Gabor { window, translation } => {
                Ok(window.eval(t - translation) * Complex64::new(0.0, -omega * t).exp())
            }
            KernelSpec::Wavelet { mother, translation } => {
                if omega <= 0.0 {
                    return Err(QupError::EvaluationDomain(format!(
                        "wavelet scale must be positive, got s = {omega}"
                    )));
                }
                Ok(mother.eval((t - translation) / omega).conj() / omega.sqrt())
            }
            KernelSpec::TranslationInvariant { phi } => Ok(phi.eval(t - omega)),
            KernelSpec::SincReproducing { bandlimit } => {
                let x = omega - t;
                if x.abs() < 1e-12 {
                    Ok(Complex64::new(bandlimit / std::f64::consts::PI, 0.0))
                } else {
                    Ok(Complex64::new(
                        (bandlimit * x).sin() / (std::f64::consts::PI * x),
                        0.0,
                    ))
                }
            }
            KernelSpec::SeparableRank { terms } => {
                let mut acc = Complex64::ZERO;
                for term in terms {
                    acc += term.psi.eval(omega) * term.phi.eval(t) * term.lambda;
                }
                Ok(acc)
            }
            KernelSpec::PiecewiseIndicator { breakpoints, basis } => {
                // Half-open cells [b_n, b_{n+1}); the final breakpoint closes
                // the last cell so the right endpoint is usable.
                for (n, h) in basis.iter().enumerate() {
                    let lo = breakpoints[n];
                    let hi = breakpoints[n + 1];
                    let last = n + 1 == basis.len();
                    if omega >= lo && (omega < hi || (last && omega <= hi)) {
                        return Ok(h.eval(t));
                    }
                }
                Ok(Complex64::ZERO)
            }
            KernelSpec::Tabulated {
                omega_grid,
                t_grid,
                values,
            } => {
                if omega < omega_grid.a || omega > omega_grid.b || t < t_grid.a || t > t_grid.b {
                    return Ok(Complex64::ZERO);
                }
                let x = (omega - omega_grid.a) / omega_grid.spacing;
                let y = (t - t_grid.a) / t_grid.spacing;
                let i = (x.floor() as usize).min(omega_grid.n - 2);
                let j = (y.floor() as usize).min(t_grid.n - 2);
                let fx = x - i as f64;
                let fy = y - j as f64;
                Ok(values[(i, j)] * (1.0 - fx) * (1.0 - fy)
                    + values[(i + 1, j)] * fx * (1.0 - fy)
                    + values[(i, j + 1)] * (1.0 - fx) * fy
                    + values[(i + 1, j + 1)] * fx * fy)
            }
        }
    }
}

impl BivariateKernel for KernelSpec {
    fn eval(&self, omega: f64, t: f64) -> Complex64 {
        self.evaluate(omega, t).unwrap_or(Complex64::ZERO)
    }

    fn mixed_partial(&self, dt: u32, domega: u32, omega: f64, t: f64) -> Complex64 {
        match self {
            // ∂_ω^b e^{∓iωt} = (∓it)^b e^{∓iωt}; then Leibniz in t against
            // the polynomial factor (∓it)^b.
            KernelSpec::Fourier => exp_kernel_partial(-1.0, dt, domega, omega, t),
            KernelSpec::InverseFourier => exp_kernel_partial(1.0, dt, domega, omega, t),
            _ => default_mixed_partial(self, dt, domega, omega, t),
        }
    }
}

/// Closed-form mixed partial of `e^{i s ω t}` with `s = ±1`.
fn exp_kernel_partial(sign: f64, dt: u32, domega: u32, omega: f64, t: f64) -> Complex64 {
    let i_s = Complex64::new(0.0, sign);
    let base = (i_s * omega * t).exp();
    let b = domega;
    let mut acc = Complex64::ZERO;
    for k in 0..=dt.min(b) {
        let mut binom = 1.0;
        for r in 0..k {
            binom *= (dt - r) as f64 / (r + 1) as f64;
        }
        let mut falling = 1.0;
        for r in 0..k {
            falling *= (b - r) as f64;
        }
        let poly = i_s.powu(b) * falling * t.powi((b - k) as i32);
        acc += poly * binom * (i_s * omega).powu(dt - k);
    }
    acc * base
}

/// Central-difference fallback shared with the trait's default method; kept
/// as a free function so variants with closed forms can mix both.
fn default_mixed_partial(
    kernel: &KernelSpec,
    dt: u32,
    domega: u32,
    omega: f64,
    t: f64,
) -> Complex64 {
    struct Fallback<'a>(&'a KernelSpec);
    impl BivariateKernel for Fallback<'_> {
        fn eval(&self, omega: f64, t: f64) -> Complex64 {
            self.0.evaluate(omega, t).unwrap_or(Complex64::ZERO)
        }
    }
    Fallback(kernel).mixed_partial(dt, domega, omega, t)
}

/// A kernel sampled on an `omega × t` product grid. Entry `(j, i)` is
/// `K(ω_j, t_i)`; application multiplies by the `t`-quadrature weights.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    /// Output (ω) grid.
    pub omega_grid: Grid,
    /// Input (t) grid.
    pub t_grid: Grid,
    /// Sampled kernel values, ω-rows by t-columns.
    pub entries: DMatrix<Complex64>,
}

/// Frame (Riesz) bounds of an operator or function system.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrameBounds {
    /// Lower bound `A ≥ 0`.
    pub lower: f64,
    /// Upper bound `B ≥ A`.
    pub upper: f64,
}

impl FrameBounds {
    /// Condition-style ratio `A / B`, zero when `B = 0`.
    pub fn ratio(&self) -> f64 {
        if self.upper > 0.0 {
            self.lower / self.upper
        } else {
            0.0
        }
    }
}

/// Sample a kernel on a product grid.
pub fn discretize(
    kernel: &KernelSpec,
    omega_grid: Grid,
    t_grid: Grid,
) -> Result<DiscreteOperator, QupError> {
    kernel.validate()?;
    let mut entries = DMatrix::zeros(omega_grid.n, t_grid.n);
    for j in 0..omega_grid.n {
        let omega = omega_grid.node(j);
        for i in 0..t_grid.n {
            entries[(j, i)] = kernel.evaluate(omega, t_grid.node(i))?;
        }
    }
    Ok(DiscreteOperator {
        omega_grid,
        t_grid,
        entries,
    })
}

/// Sample kernel rows at arbitrary ω values (used for non-interval
/// neighborhoods such as the two-sided window around infinity).
pub fn sample_rows(
    kernel: &KernelSpec,
    omegas: &[f64],
    t_grid: Grid,
) -> Result<DMatrix<Complex64>, QupError> {
    kernel.validate()?;
    let mut entries = DMatrix::zeros(omegas.len(), t_grid.n);
    for (j, &omega) in omegas.iter().enumerate() {
        for i in 0..t_grid.n {
            entries[(j, i)] = kernel.evaluate(omega, t_grid.node(i))?;
        }
    }
    Ok(entries)
}

/// Apply the operator: `f~(ω_j) = Σ_i w_i K(ω_j, t_i) f(t_i)`.
pub fn apply(op: &DiscreteOperator, f: &Signal) -> Result<Signal, QupError> {
    if f.grid != op.t_grid {
        return Err(QupError::ShapeMismatch(
            "signal grid does not match the operator's t-grid".into(),
        ));
    }
    let mut values = vec![Complex64::ZERO; op.omega_grid.n];
    for j in 0..op.omega_grid.n {
        let mut acc = Complex64::ZERO;
        for i in 0..op.t_grid.n {
            acc += op.entries[(j, i)] * f.values[i] * op.t_grid.weight(i);
        }
        values[j] = acc;
    }
    Signal::new(op.omega_grid, values)
}

/// Frame bounds of the induced continuous-frame inequality
/// `A‖f‖² ≤ ∫ |f~(ω)|² dω ≤ B‖f‖²`: extreme eigenvalues of
/// `W_t^{1/2} K^H W_ω K W_t^{1/2}`.
pub fn frame_operator_bounds(op: &DiscreteOperator) -> Result<FrameBounds, QupError> {
    let w_omega = op.omega_grid.weights();
    let w_t = op.t_grid.weights();
    let weighted = linalg::weight_scaled(&op.entries, &w_omega, &w_t)?;
    let frame_matrix = weighted.adjoint() * &weighted;
    let (lo, hi) = linalg::hermitian_extremes(&frame_matrix);
    Ok(FrameBounds {
        lower: lo.max(0.0),
        upper: hi.max(0.0),
    })
}

// ---------------------------------------------------------------------------
// JSON loading
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct GridSpecJson {
    a: f64,
    b: f64,
    n: usize,
}

#[derive(Deserialize)]
struct SeparableTermJson {
    lambda: f64,
    psi_file: String,
    phi_file: String,
}

/// On-disk kernel description. Signals are referenced by CSV file path
/// (relative paths resolve against the JSON file's directory).
#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum KernelSpecJson {
    Fourier,
    InverseFourier,
    Gabor {
        window_file: String,
        #[serde(default)]
        translation: f64,
    },
    Wavelet {
        mother_file: String,
        #[serde(default)]
        translation: f64,
    },
    TranslationInvariant {
        phi_file: String,
    },
    SincReproducing {
        bandlimit: f64,
    },
    SeparableRank {
        terms: Vec<SeparableTermJson>,
    },
    PiecewiseIndicator {
        breakpoints: Vec<f64>,
        basis_file: String,
    },
    Tabulated {
        omega_grid: GridSpecJson,
        t_grid: GridSpecJson,
        matrix_file: String,
    },
}

impl KernelSpec {
    /// Parse a kernel from its JSON description, resolving referenced CSV
    /// files relative to `base_dir`.
    pub fn from_json_str(json: &str, base_dir: &Path) -> Result<KernelSpec, QupError> {
        let parsed: KernelSpecJson = serde_json::from_str(json)
            .map_err(|e| QupError::InvalidInput(format!("bad kernel JSON: {e}")))?;
        let load = |rel: &str| -> Result<Signal, QupError> {
            io::read_signal_file(&base_dir.join(rel))
        };
        let spec = match parsed {
            KernelSpecJson::Fourier => KernelSpec::Fourier,
            KernelSpecJson::InverseFourier => KernelSpec::InverseFourier,
            KernelSpecJson::Gabor {
                window_file,
                translation,
            } => KernelSpec::Gabor {
                window: load(&window_file)?,
                translation,
            },
            KernelSpecJson::Wavelet {
                mother_file,
                translation,
            } => KernelSpec::Wavelet {
                mother: load(&mother_file)?,
                translation,
            },
            KernelSpecJson::TranslationInvariant { phi_file } => KernelSpec::TranslationInvariant {
                phi: load(&phi_file)?,
            },
            KernelSpecJson::SincReproducing { bandlimit } => {
                KernelSpec::SincReproducing { bandlimit }
            }
            KernelSpecJson::SeparableRank { terms } => KernelSpec::SeparableRank {
                terms: terms
                    .into_iter()
                    .map(|t| {
                        Ok(SeparableTerm {
                            lambda: t.lambda,
                            psi: load(&t.psi_file)?,
                            phi: load(&t.phi_file)?,
                        })
                    })
                    .collect::<Result<_, QupError>>()?,
            },
            KernelSpecJson::PiecewiseIndicator {
                breakpoints,
                basis_file,
            } => KernelSpec::PiecewiseIndicator {
                breakpoints,
                basis: io::read_family_file(&base_dir.join(&basis_file))?,
            },
            KernelSpecJson::Tabulated {
                omega_grid,
                t_grid,
                matrix_file,
            } => {
                let og = crate::grid::make_grid(omega_grid.a, omega_grid.b, omega_grid.n)?;
                let tg = crate::grid::make_grid(t_grid.a, t_grid.b, t_grid.n)?;
                let values = read_matrix_csv(&base_dir.join(&matrix_file), og.n, tg.n)?;
                KernelSpec::Tabulated {
                    omega_grid: og,
                    t_grid: tg,
                    values,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Load a kernel JSON file; relative CSV references resolve against the
    /// file's own directory.
    pub fn from_json_file(path: &Path) -> Result<KernelSpec, QupError> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        KernelSpec::from_json_str(&text, base)
    }
}

/// Read a complex matrix from CSV: one row per ω node, columns alternating
/// `re,im` per t node.
fn read_matrix_csv(path: &Path, nrows: usize, ncols: usize) -> Result<DMatrix<Complex64>, QupError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(std::fs::File::open(path)?);
    let mut out = DMatrix::zeros(nrows, ncols);
    let mut row = 0usize;
    for record in rdr.records() {
        let record = record.map_err(|e| QupError::InvalidInput(format!("bad CSV record: {e}")))?;
        if record.len() != 2 * ncols {
            return Err(QupError::ShapeMismatch(format!(
                "matrix row {row}: expected {} fields, got {}",
                2 * ncols,
                record.len()
            )));
        }
        if row >= nrows {
            return Err(QupError::ShapeMismatch(format!(
                "matrix has more than {nrows} rows"
            )));
        }
        for c in 0..ncols {
            let re: f64 = record[2 * c].parse().map_err(|_| {
                QupError::InvalidInput(format!("row {row}: bad number {:?}", &record[2 * c]))
            })?;
            let im: f64 = record[2 * c + 1].parse().map_err(|_| {
                QupError::InvalidInput(format!("row {row}: bad number {:?}", &record[2 * c + 1]))
            })?;
            out[(row, c)] = Complex64::new(re, im);
        }
        row += 1;
    }
    if row != nrows {
        return Err(QupError::ShapeMismatch(format!(
            "matrix has {row} rows, expected {nrows}"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use approx::assert_relative_eq;

    #[test]
    fn fourier_entries_match_formula() {
        let og = make_grid(-5.0, 5.0, 11).unwrap();
        let tg = make_grid(-1.0, 1.0, 5).unwrap();
        let op = discretize(&KernelSpec::Fourier, og, tg).unwrap();
        let omega = og.node(3);
        let t = tg.node(2);
        let expected = Complex64::new(0.0, -omega * t).exp();
        assert!((op.entries[(3, 2)] - expected).norm() < 1e-15);
    }

    #[test]
    fn sinc_diagonal_takes_limit_value() {
        let g = make_grid(-2.0, 2.0, 9).unwrap();
        let op = discretize(&KernelSpec::SincReproducing { bandlimit: 1.0 }, g, g).unwrap();
        assert_relative_eq!(
            op.entries[(4, 4)].re,
            1.0 / std::f64::consts::PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn wavelet_rejects_nonpositive_scale() {
        let mg = make_grid(-4.0, 4.0, 65).unwrap();
        let mother = Signal::from_real_fn(mg, |t| (1.0 - t * t) * (-t * t / 2.0).exp());
        let kernel = KernelSpec::Wavelet {
            mother,
            translation: 0.0,
        };
        let sg = make_grid(0.0, 2.0, 5).unwrap(); // includes s = 0
        let tg = make_grid(-1.0, 1.0, 5).unwrap();
        assert!(matches!(
            discretize(&kernel, sg, tg),
            Err(QupError::EvaluationDomain(_))
        ));
    }

    #[test]
    fn fourier_of_box_at_zero_is_its_integral() {
        let og = make_grid(-1.0, 1.0, 3).unwrap(); // includes ω = 0
        let tg = make_grid(-2.0, 2.0, 4001).unwrap();
        let op = discretize(&KernelSpec::Fourier, og, tg).unwrap();
        let f = Signal::from_real_fn(tg, |t| if t.abs() <= 1.0 { 1.0 } else { 0.0 });
        let out = apply(&op, &f).unwrap();
        // The indicator's jump sits on grid nodes, so trapezoid quadrature
        // carries a half-cell error at each edge.
        assert_relative_eq!(out.values[1].re, 2.0, epsilon = 2.0 * tg.spacing);
        assert_relative_eq!(out.values[1].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn rank_one_separable_kernel_projects() {
        let og = make_grid(-1.0, 1.0, 41).unwrap();
        let tg = make_grid(-6.0, 6.0, 1201).unwrap();
        // φ normalized Gaussian, ψ arbitrary smooth profile.
        let mut phi = Signal::from_real_fn(tg, |t| (-t * t / 2.0).exp());
        let n = phi.norm();
        phi = phi.scaled(Complex64::new(1.0 / n, 0.0));
        let psi = Signal::from_real_fn(og, |w| 1.0 + w * w);
        let kernel = KernelSpec::SeparableRank {
            terms: vec![SeparableTerm {
                lambda: 1.0,
                psi: psi.clone(),
                phi: phi.clone(),
            }],
        };
        let op = discretize(&kernel, og, tg).unwrap();
        let out = apply(&op, &phi).unwrap();
        for j in 0..og.n {
            assert!((out.values[j] - psi.values[j]).norm() < 1e-8);
        }
    }

    #[test]
    fn sinc_kernel_reproduces_bandlimited_signal() {
        // f(t) = sin(t)/t is bandlimited to Ω = 1; the reproducing identity
        // f(ω) = ∫ sin(ω - t)/(π(ω - t)) f(t) dt holds on the real line. The
        // domain is truncated where f and the kernel tails have decayed.
        // The Fejér-style signal (sin(t/2)/(t/2))² is bandlimited to Ω = 1
        // and decays like 1/t², so the truncated-tail error at |t| > 100 is
        // far below the 1e-4 target (the plain sinc decays too slowly).
        let domain = make_grid(-100.0, 100.0, 4001).unwrap();
        let og = make_grid(-2.0, 2.0, 21).unwrap();
        let op = discretize(&KernelSpec::SincReproducing { bandlimit: 1.0 }, og, domain).unwrap();
        let fejer = |t: f64| {
            if t.abs() < 1e-12 {
                1.0
            } else {
                let x = t / 2.0;
                (x.sin() / x).powi(2)
            }
        };
        let f = Signal::from_real_fn(domain, fejer);
        let out = apply(&op, &f).unwrap();
        for j in 0..og.n {
            let w = og.node(j);
            let expect = fejer(w);
            assert!(
                (out.values[j].re - expect).abs() < 1e-4,
                "at ω = {w}: {} vs {expect}",
                out.values[j].re
            );
        }
    }

    #[test]
    fn fourier_frame_bounds_reach_parseval_constant_on_wide_band() {
        // At a band matching the grid Nyquist rate (W ≈ π/spacing) the frame
        // matrix is nearly 2π·diag(weights)/spacing: B sits at the Parseval
        // constant 2π, while A saturates at π because the two endpoint nodes
        // carry trapezoid half-weights. The 2π constant itself is verified
        // below with a smooth, well-in-band probe.
        let tg = make_grid(-1.0, 1.0, 40).unwrap();
        let nyquist = std::f64::consts::PI / tg.spacing;
        let og = make_grid(-nyquist, nyquist, 1601).unwrap();
        let op = discretize(&KernelSpec::Fourier, og, tg).unwrap();
        let fb = frame_operator_bounds(&op).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((fb.upper - two_pi).abs() < 0.05 * two_pi, "B = {}", fb.upper);
        assert!(fb.lower > 0.45 * two_pi, "A = {}", fb.lower);

        let f = Signal::from_real_fn(tg, |t| (-8.0 * t * t).exp());
        let fhat = apply(&op, &f).unwrap();
        let ratio = fhat.norm().powi(2) / (two_pi * f.norm().powi(2));
        assert!((ratio - 1.0).abs() < 5e-3, "Parseval ratio {ratio}");
    }

    #[test]
    fn narrowband_fourier_frame_collapses() {
        let tg = make_grid(-1.0, 1.0, 40).unwrap();
        let og = make_grid(-1.0, 1.0, 101).unwrap();
        let op = discretize(&KernelSpec::Fourier, og, tg).unwrap();
        let fb = frame_operator_bounds(&op).unwrap();
        assert!(fb.ratio() < 1e-6, "A/B = {}", fb.ratio());
    }

    #[test]
    fn zero_kernel_has_zero_bounds() {
        let g = make_grid(0.0, 1.0, 8).unwrap();
        let kernel = KernelSpec::Tabulated {
            omega_grid: g,
            t_grid: g,
            values: DMatrix::zeros(8, 8),
        };
        let op = discretize(&kernel, g, g).unwrap();
        let fb = frame_operator_bounds(&op).unwrap();
        assert_eq!(fb.lower, 0.0);
        assert_eq!(fb.upper, 0.0);
    }

    #[test]
    fn application_is_linear() {
        let og = make_grid(-3.0, 3.0, 31).unwrap();
        let tg = make_grid(-1.0, 1.0, 101).unwrap();
        let op = discretize(&KernelSpec::Fourier, og, tg).unwrap();
        let f = Signal::from_fn(tg, |t| Complex64::new(t.cos(), t));
        let g = Signal::from_fn(tg, |t| Complex64::new(t * t, -t.sin()));
        let a = Complex64::new(0.7, -0.3);
        let b = Complex64::new(-1.1, 0.2);
        let combo = f.scaled(a).add(&g.scaled(b)).unwrap();
        let lhs = apply(&op, &combo).unwrap();
        let rhs = apply(&op, &f)
            .unwrap()
            .scaled(a)
            .add(&apply(&op, &g).unwrap().scaled(b))
            .unwrap();
        let scale = lhs.norm().max(1e-30);
        assert!(lhs.sub(&rhs).unwrap().norm() / scale < 1e-12);
    }

    #[test]
    fn exponential_kernel_mixed_partials_match_finite_differences() {
        let k = KernelSpec::Fourier;
        let (w0, t0) = (0.9, 0.35);
        let analytic = k.mixed_partial(1, 1, w0, t0);
        let fallback = default_mixed_partial(&k, 1, 1, w0, t0);
        assert!((analytic - fallback).norm() < 1e-5, "{analytic} vs {fallback}");
    }

    #[test]
    fn kernel_json_round_trip_for_fourier_and_sinc() {
        let dir = Path::new(".");
        let k = KernelSpec::from_json_str(r#"{"variant":"fourier"}"#, dir).unwrap();
        assert!(matches!(k, KernelSpec::Fourier));
        let k = KernelSpec::from_json_str(
            r#"{"variant":"sinc_reproducing","bandlimit":2.5}"#,
            dir,
        )
        .unwrap();
        match k {
            KernelSpec::SincReproducing { bandlimit } => assert_eq!(bandlimit, 2.5),
            _ => panic!("wrong variant"),
        }
    }
}
