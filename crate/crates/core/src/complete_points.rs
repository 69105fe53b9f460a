//! Local completeness analysis of integral kernels around a frequency.
//!
//! For a kernel `K(ω, t)` define the neighborhood family
//! `V_r(ω0) = { K(ω, ·) : |ω − ω0| < r }` (for the point at infinity,
//! `V_r(∞) = { K(ω, ·) : |ω| > r }` truncated at a configurable `Ω_max`).
//! A point is *complete* when every neighborhood family still spans the
//! kernel's whole (numerical) range; it is *regular* when the kernel is
//! norm-continuous in ω there, and *stable* when the neighborhood family is a
//! continuous frame with non-collapsing bounds.
//!
//! The frame-eigenvalue test alone cannot certify completeness of
//! infinite-dimensional analytic kernels (the restricted spectrum decays like
//! prolate eigenvalues, far below any fixed floor), so [`classify_point`]
//! combines it with the bivariate-Wronskian derivative criterion: a
//! nonvanishing mixed-derivative determinant up to the tracked order also
//! certifies completeness for ω-smooth kernels.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::QupError;
use crate::grid::{Grid, Signal};
#[cfg(test)]
use crate::grid::make_grid;
use crate::independence::{cfs_wronskian_rank, FunctionFamily};
use crate::kernels::{self, KernelSpec};
use crate::linalg;

pub use crate::kernels::FrameBounds;

/// A frequency to classify: a finite ω or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OmegaPoint {
    /// A finite frequency.
    Real(f64),
    /// The point at infinity (two-sided tail `|ω| > r`).
    Infinity,
}

/// Numerical policy for [`classify_point`].
#[derive(Debug, Clone)]
pub struct CpConfig {
    /// Truncation radius for unbounded ω-windows; `None` = `200 / (b - a)`
    /// of the t-grid.
    pub omega_max: Option<f64>,
    /// ω-nodes used to sample the full kernel when computing its range.
    pub n_omega_full: usize,
    /// ω-nodes per restricted neighborhood.
    pub n_omega_radius: usize,
    /// Relative singular-value cutoff for the kernel's numerical range.
    pub range_rel_tol: f64,
    /// Relative eigenvalue floor below which a restricted frame fails.
    pub frame_floor: f64,
    /// A/B ratio under which a complete point is declared unstable.
    pub stability_floor: f64,
    /// Relative ε for the thresholded support used by the trivial-CP flag.
    pub support_eps: f64,
    /// Maximum order probed by the bivariate-Wronskian completeness rescue.
    pub wronskian_nmax: usize,
}

impl Default for CpConfig {
    fn default() -> Self {
        CpConfig {
            omega_max: None,
            n_omega_full: 401,
            n_omega_radius: 129,
            range_rel_tol: 1e-6,
            frame_floor: 1e-9,
            stability_floor: 1e-6,
            support_eps: 1e-3,
            wronskian_nmax: 4,
        }
    }
}

/// Frame bounds and effective dimension measured on one neighborhood radius.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RadiusEvidence {
    /// Neighborhood radius.
    pub r: f64,
    /// Smallest eigenvalue of the restricted frame matrix projected onto the
    /// kernel's numerical range, relative to each range direction's
    /// full-window weight (a generalized frame bound, dimensionless).
    pub lower: f64,
    /// Largest eigenvalue of the same normalized matrix.
    pub upper: f64,
    /// Numerical rank of the restricted analysis operator.
    pub dim: usize,
}

/// Completeness verdict for a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Complete,
    NotComplete,
    Inconclusive,
}

/// Norm-continuity of the kernel at the point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularity {
    Regular,
    Singular,
}

/// Frame stability of the neighborhoods (reported only for complete points).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    Stable,
    Unstable,
    Untested,
}

/// Which criterion certified completeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletenessCriterion {
    /// All restricted frame matrices passed the eigenvalue floor.
    FrameBounds,
    /// The bivariate-Wronskian derivative test certified the point.
    DerivativeWronskian,
    /// Neither applied (verdict is not `Complete`).
    None,
}

/// Full classification of one frequency.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompletePointReport {
    /// The classified point.
    pub point: OmegaPoint,
    /// Completeness verdict.
    pub verdict: Verdict,
    /// Norm-continuity at the point.
    pub regularity: Regularity,
    /// Frame stability (untested unless complete).
    pub stability: Stability,
    /// Whether the point is a trivial complete point: images stay nonzero on
    /// every neighborhood yet vanish on a positive-measure subset.
    pub trivial: bool,
    /// Which criterion certified completeness.
    pub criterion: CompletenessCriterion,
    /// Per-radius frame evidence, in schedule order.
    pub evidence: Vec<RadiusEvidence>,
    /// ω-truncation used for unbounded windows.
    pub omega_max: f64,
}

/// Concentration (prolate) analysis of the band `[-r, r]`.
#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    /// Band radius.
    pub band_radius: f64,
    /// Largest concentration eigenvalue, in `[0, 1)`.
    pub lambda0: f64,
    /// Guaranteed tail fraction `1 - λ0`: for any `f` on the grid,
    /// `‖f̂·χ_{|ω|>r}‖² / (2π‖f‖²) ≥ 1 − λ0`.
    pub tail_lower_bound: f64,
    /// The top concentration mode.
    pub mode: Signal,
}

/// Finite-difference jet of the curve `ω ↦ K(ω, ·)` in quadrature-weighted
/// coordinates (`vector[i] = sqrt(w_i) · value at t_i`).
#[derive(Debug, Clone)]
pub struct CurveJet {
    /// Expansion point.
    pub omega0: f64,
    /// Highest derivative order.
    pub order: usize,
    /// Finite-difference step.
    pub h: f64,
    /// `vectors[k]` holds `γ^{(k+1)}(omega0)`.
    pub vectors: Vec<DVector<Complex64>>,
}

/// Frenet frame and generalized curvatures at a point of the kernel curve.
#[derive(Debug, Clone)]
pub struct CurvatureProfile {
    /// Generalized curvatures `λ_1 .. λ_{m-1}`.
    pub curvatures: Vec<f64>,
    /// Orthonormal Frenet frame vectors `e_1 .. e_m` (real-stacked
    /// coordinates: real parts then imaginary parts, each weighted).
    pub frame: Vec<DVector<f64>>,
    /// Norm of the first derivative at the center point.
    pub speed: f64,
}

/// Verdict of the curve-determinant completeness test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveVerdict {
    /// Whether the determinant stays away from zero at `ω0` and `ω0 ± h`.
    pub complete: bool,
    /// `|det|` normalized by the product of jet-column norms, at
    /// `ω0 - h, ω0, ω0 + h`.
    pub normalized_dets: [f64; 3],
}

fn default_omega_max(t_grid: Grid) -> f64 {
    200.0 / t_grid.length()
}

fn clamp_window(kernel: &KernelSpec, lo: f64, hi: f64) -> Option<(f64, f64)> {
    let (dlo, dhi) = kernel.omega_domain().unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let a = lo.max(dlo);
    let b = hi.min(dhi);
    if b > a {
        Some((a, b))
    } else {
        None
    }
}

/// Uniformly sample `[lo, hi]` with `n` nodes, returning nodes and
/// trapezoidal weights.
fn segment_nodes(lo: f64, hi: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let n = n.max(2);
    let h = (hi - lo) / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| lo + i as f64 * h).collect();
    let weights: Vec<f64> = (0..n)
        .map(|i| if i == 0 || i + 1 == n { h / 2.0 } else { h })
        .collect();
    (nodes, weights)
}

/// ω-nodes and weights of the neighborhood `V_r(point)` clamped to the
/// kernel's domain and the truncation `Ω_max`.
fn neighborhood_nodes(
    kernel: &KernelSpec,
    point: OmegaPoint,
    r: f64,
    omega_max: f64,
    n: usize,
) -> Result<(Vec<f64>, Vec<f64>), QupError> {
    match point {
        OmegaPoint::Real(w0) => {
            let (lo, hi) = clamp_window(kernel, w0 - r, w0 + r).ok_or_else(|| {
                QupError::EvaluationDomain(format!(
                    "neighborhood of ω0 = {w0} at radius {r} leaves the kernel's ω-domain"
                ))
            })?;
            Ok(segment_nodes(lo, hi, n))
        }
        OmegaPoint::Infinity => {
            let mut nodes = Vec::new();
            let mut weights = Vec::new();
            for (lo, hi) in [(-omega_max, -r), (r, omega_max)] {
                if let Some((a, b)) = clamp_window(kernel, lo, hi) {
                    let (mut ns, mut ws) = segment_nodes(a, b, n / 2);
                    nodes.append(&mut ns);
                    weights.append(&mut ws);
                }
            }
            if nodes.is_empty() {
                return Err(QupError::EvaluationDomain(format!(
                    "tail neighborhood |ω| > {r} is empty inside the kernel domain (Ω_max = {omega_max})"
                )));
            }
            Ok((nodes, weights))
        }
    }
}

/// Weighted analysis matrix `W_ω^{1/2} K W_t^{1/2}` for given ω nodes.
fn weighted_rows(
    kernel: &KernelSpec,
    omegas: &[f64],
    w_omega: &[f64],
    t_grid: Grid,
) -> Result<DMatrix<Complex64>, QupError> {
    let raw = kernels::sample_rows(kernel, omegas, t_grid)?;
    linalg::weight_scaled(&raw, w_omega, &t_grid.weights())
}

/// Frame bounds of the kernel restricted to `ω ∈ (ω0 - r, ω0 + r)`.
pub fn local_frame_bounds(
    kernel: &KernelSpec,
    omega0: f64,
    r: f64,
    t_grid: Grid,
    n_omega: usize,
) -> Result<FrameBounds, QupError> {
    if !(r > 0.0) {
        return Err(QupError::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let (lo, hi) = clamp_window(kernel, omega0 - r, omega0 + r).ok_or_else(|| {
        QupError::EvaluationDomain(format!(
            "neighborhood of ω0 = {omega0} at radius {r} leaves the kernel's ω-domain"
        ))
    })?;
    let (nodes, weights) = segment_nodes(lo, hi, n_omega.max(2));
    let a_r = weighted_rows(kernel, &nodes, &weights, t_grid)?;
    let s = linalg::singular_values(&a_r);
    // Frame bounds within the kernel's numerical range: a rank-deficient
    // kernel is a frame only of its span, so eigenvalues below the rank
    // cutoff are excluded rather than reported as A = 0.
    let rank = linalg::numerical_rank(&s, linalg::RANK_REL_TOL);
    if rank == 0 {
        return Ok(FrameBounds {
            lower: 0.0,
            upper: 0.0,
        });
    }
    Ok(FrameBounds {
        lower: s[rank - 1] * s[rank - 1],
        upper: s[0] * s[0],
    })
}

/// Classify a point with the default numerical policy.
pub fn classify_point(
    kernel: &KernelSpec,
    point: OmegaPoint,
    radii: &[f64],
    t_grid: Grid,
) -> Result<CompletePointReport, QupError> {
    classify_point_with(kernel, point, radii, t_grid, &CpConfig::default())
}

/// Classify a point: completeness of every neighborhood in the radii
/// schedule relative to the kernel's numerical range, regularity
/// (norm-continuity), stability, and the trivial-CP flag.
pub fn classify_point_with(
    kernel: &KernelSpec,
    point: OmegaPoint,
    radii: &[f64],
    t_grid: Grid,
    config: &CpConfig,
) -> Result<CompletePointReport, QupError> {
    if radii.is_empty() {
        return Err(QupError::InvalidInput("radii schedule is empty".into()));
    }
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(QupError::InvalidInput(
            "radii must be strictly decreasing and positive".into(),
        ));
    }
    let omega_max = config.omega_max.unwrap_or_else(|| default_omega_max(t_grid));

    // Numerical range of the full kernel over its (truncated) ω-window.
    let center = match point {
        OmegaPoint::Real(w0) => w0,
        OmegaPoint::Infinity => 0.0,
    };
    let (flo, fhi) = clamp_window(kernel, center - omega_max, center + omega_max)
        .ok_or_else(|| {
            QupError::EvaluationDomain("kernel ω-domain does not meet the full window".into())
        })?;
    let (full_nodes, full_weights) = segment_nodes(flo, fhi, config.n_omega_full);
    let full = weighted_rows(kernel, &full_nodes, &full_weights, t_grid)?;
    let svd = full.clone().svd(false, true);
    let mut svals: Vec<f64> = svd.singular_values.iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let rank = linalg::numerical_rank(&svals, config.range_rel_tol);
    if rank == 0 {
        return Err(QupError::RankDeficientFamily(
            "kernel is numerically zero on the full window".into(),
        ));
    }
    let v_t = svd.v_t.expect("requested V^T");
    // Range basis in t-coordinates: columns of V for the top `rank` values,
    // matching the descending order of `svals`.
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    // Range basis scaled by 1/σ_k: the restricted frame bounds are then
    // measured relative to each direction's full-window weight (generalized
    // eigenvalues against the full frame operator). Without this
    // normalization an absolute floor is unsatisfiable whenever the range
    // spans more than half the floor's decades in σ.
    let v = DMatrix::from_fn(t_grid.n, rank, |i, c| {
        v_t[(order[c], i)].conj() / svals[c]
    });

    // Per-radius restricted frame evidence.
    let mut evidence = Vec::with_capacity(radii.len());
    let mut frame_pass = true;
    let mut stable = true;
    for &r in radii {
        let (nodes, weights) = neighborhood_nodes(kernel, point, r, omega_max, config.n_omega_radius)?;
        let a_r = weighted_rows(kernel, &nodes, &weights, t_grid)?;
        let projected = &a_r * &v;
        let frame_matrix = projected.adjoint() * &projected;
        let (lo, hi) = linalg::hermitian_extremes(&frame_matrix);
        let s = linalg::singular_values(&a_r);
        let dim = linalg::numerical_rank(&s, config.range_rel_tol);
        let lo = lo.max(0.0);
        if !(hi > 0.0) || lo <= config.frame_floor * hi {
            frame_pass = false;
        }
        if !(hi > 0.0) || lo < config.stability_floor * hi {
            stable = false;
        }
        evidence.push(RadiusEvidence {
            r,
            lower: lo,
            upper: hi.max(0.0),
            dim,
        });
    }

    // Derivative (bivariate-Wronskian) rescue for ω-smooth kernels at finite
    // points: the frame spectrum of an analytic infinite-dimensional kernel
    // decays below any fixed floor even though every neighborhood is
    // complete, so a nonvanishing mixed-derivative determinant up to the
    // probed order also certifies the point.
    let mut criterion = if frame_pass {
        CompletenessCriterion::FrameBounds
    } else {
        CompletenessCriterion::None
    };
    let mut complete = frame_pass;
    if !complete {
        if let OmegaPoint::Real(w0) = point {
            let nmax = rank.min(config.wronskian_nmax).max(1);
            // Avoid symmetric special points of the t-interval.
            let t0 = t_grid.a + 0.618_033_988_75 * t_grid.length();
            if cfs_wronskian_rank(kernel, w0, t0, nmax) == nmax {
                complete = true;
                criterion = CompletenessCriterion::DerivativeWronskian;
            }
        }
    }
    let verdict = if complete {
        Verdict::Complete
    } else {
        Verdict::NotComplete
    };

    // Regularity: two-scale modulus of continuity on the tightest
    // neighborhood. A norm-continuous kernel's pair-sup shrinks with the
    // scale; a jump keeps it constant.
    let regularity = match point {
        OmegaPoint::Infinity => Regularity::Singular,
        OmegaPoint::Real(w0) => {
            let r_min = *radii.last().unwrap();
            let sup1 = pair_sup(kernel, w0, r_min, t_grid)?;
            let sup2 = pair_sup(kernel, w0, r_min / 4.0, t_grid)?;
            let scale = row_norm(kernel, w0, t_grid)
                .unwrap_or(0.0)
                .max(sup1);
            if sup1 <= 1e-3 * scale || sup2 <= 0.5 * sup1 + 1e-12 * scale {
                Regularity::Regular
            } else {
                Regularity::Singular
            }
        }
    };

    let stability = if complete {
        if stable {
            Stability::Stable
        } else {
            Stability::Unstable
        }
    } else {
        Stability::Untested
    };

    // Trivial-CP flag: the point is complete and regular, yet some range
    // witness maps to an image that vanishes on > 10% of the tightest
    // neighborhood.
    let mut trivial = false;
    if complete && regularity == Regularity::Regular {
        let r_min = *radii.last().unwrap();
        let (nodes, weights) =
            neighborhood_nodes(kernel, point, r_min, omega_max, config.n_omega_radius)?;
        let raw = kernels::sample_rows(kernel, &nodes, t_grid)?;
        let w_t = t_grid.weights();
        let window_measure: f64 = weights.iter().sum();
        for c in 0..rank.min(8) {
            // Witness in t-space: unweight the range basis column.
            let witness: Vec<Complex64> = (0..t_grid.n)
                .map(|i| v[(i, c)] / w_t[i].sqrt())
                .collect();
            let image: Vec<Complex64> = (0..nodes.len())
                .map(|j| {
                    (0..t_grid.n)
                        .map(|i| raw[(j, i)] * witness[i] * w_t[i])
                        .sum()
                })
                .collect();
            let max_abs = image.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if max_abs == 0.0 {
                continue;
            }
            let support: f64 = image
                .iter()
                .zip(&weights)
                .filter(|(z, _)| z.norm() > config.support_eps * max_abs)
                .map(|(_, w)| w)
                .sum();
            if support < 0.9 * window_measure {
                trivial = true;
                break;
            }
        }
    }

    Ok(CompletePointReport {
        point,
        verdict,
        regularity,
        stability,
        trivial,
        criterion,
        evidence,
        omega_max,
    })
}

/// Largest weighted-L² distance between kernel rows sampled inside
/// `(ω0 - r, ω0 + r)`.
fn pair_sup(kernel: &KernelSpec, w0: f64, r: f64, t_grid: Grid) -> Result<f64, QupError> {
    let (lo, hi) = match clamp_window(kernel, w0 - r, w0 + r) {
        Some(x) => x,
        None => return Ok(0.0),
    };
    let (nodes, _) = segment_nodes(lo, hi, 17);
    let raw = kernels::sample_rows(kernel, &nodes, t_grid)?;
    let w_t = t_grid.weights();
    let mut sup: f64 = 0.0;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let mut acc = 0.0;
            for k in 0..t_grid.n {
                acc += (raw[(i, k)] - raw[(j, k)]).norm_sqr() * w_t[k];
            }
            sup = sup.max(acc.sqrt());
        }
    }
    Ok(sup)
}

fn row_norm(kernel: &KernelSpec, w0: f64, t_grid: Grid) -> Result<f64, QupError> {
    let row = kernels::sample_rows(kernel, &[w0], t_grid)?;
    let w_t = t_grid.weights();
    let mut acc = 0.0;
    for k in 0..t_grid.n {
        acc += row[(0, k)].norm_sqr() * w_t[k];
    }
    Ok(acc.sqrt())
}

/// Singular values of the analysis operator restricted to
/// `ω ∈ (ω0 - r, ω0 + r)`, reported at the requested subspace dimensions
/// (1-indexed; zero beyond the spectrum).
pub fn stability_decay(
    kernel: &KernelSpec,
    omega0: f64,
    r: f64,
    dims: &[usize],
    t_grid: Grid,
) -> Result<Vec<f64>, QupError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(QupError::InvalidInput(format!("radius must be positive and finite, got {r}")));
    }
    let max_dim = dims.iter().copied().max().unwrap_or(1);
    let (lo, hi) = clamp_window(kernel, omega0 - r, omega0 + r).ok_or_else(|| {
        QupError::EvaluationDomain("neighborhood leaves the kernel's ω-domain".into())
    })?;
    let n_omega = (4 * max_dim).max(257);
    let (nodes, weights) = segment_nodes(lo, hi, n_omega);
    let a_r = weighted_rows(kernel, &nodes, &weights, t_grid)?;
    let s = linalg::singular_values(&a_r);
    Ok(dims
        .iter()
        .map(|&d| if d >= 1 && d <= s.len() { s[d - 1] } else { 0.0 })
        .collect())
}

/// Concentration analysis: largest eigenvalue of the time- and band-limiting
/// operator with kernel `sin(r(t-s)) / (π(t-s))` on the grid, under the
/// non-unitary Fourier convention (`∫|f̂|² = 2π‖f‖²`). Only the Fourier-type
/// kernels are norm-preserving in that sense, so others are rejected.
pub fn tail_completeness(
    kernel: &KernelSpec,
    r: f64,
    t_grid: Grid,
) -> Result<ConcentrationReport, QupError> {
    match kernel {
        KernelSpec::Fourier | KernelSpec::InverseFourier => {}
        _ => {
            return Err(QupError::EvaluationDomain(
                "the tail bound requires the norm-preserving Fourier kernel".into(),
            ))
        }
    }
    if !(r > 0.0) {
        return Err(QupError::InvalidInput(format!("band radius must be positive, got {r}")));
    }
    let n = t_grid.n;
    let mut q = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = t_grid.node(i) - t_grid.node(j);
            let val = if d.abs() < 1e-14 {
                r / std::f64::consts::PI
            } else {
                (r * d).sin() / (std::f64::consts::PI * d)
            };
            q[(i, j)] = Complex64::new(val, 0.0);
        }
    }
    let w = t_grid.weights();
    let sym = linalg::weight_scaled(&q, &w, &w)?;
    let (vals, vecs) = linalg::hermitian_eigen(&sym);
    let lambda0 = vals.last().copied().unwrap_or(0.0).clamp(0.0, 1.0 - 1e-12);
    let top = vecs.column(vals.len() - 1);
    let mode_values: Vec<Complex64> = (0..n).map(|i| top[i] / w[i].sqrt()).collect();
    let mode = Signal::new(t_grid, mode_values)?;
    Ok(ConcentrationReport {
        band_radius: r,
        lambda0,
        tail_lower_bound: 1.0 - lambda0,
        mode,
    })
}

/// Independent radius `I(ω0)`: the smallest `r` (to grid resolution) at
/// which the family restricted to `(ω0 - r, ω0 + r)` becomes numerically
/// independent; `0` when independent at the smallest resolvable radius.
pub fn independent_radius(
    family: &FunctionFamily,
    omega0: f64,
    tol: f64,
) -> Result<f64, QupError> {
    let grid = family.grid();
    if !grid.contains(omega0) {
        return Err(QupError::EvaluationDomain(format!(
            "ω0 = {omega0} lies outside the family's grid [{}, {}]",
            grid.a, grid.b
        )));
    }
    let m = family.len();
    let coords = family.coordinate_matrix();
    let w = grid.weights();

    let independent_at = |r: f64| -> bool {
        let mut rows: Vec<usize> = Vec::new();
        for i in 0..grid.n {
            if (grid.node(i) - omega0).abs() < r {
                rows.push(i);
            }
        }
        if rows.len() < m {
            return false;
        }
        let sub = DMatrix::from_fn(rows.len(), m, |ri, c| {
            coords[(rows[ri], c)] * w[rows[ri]].sqrt()
        });
        let gram = sub.adjoint() * &sub;
        let (lo, hi) = linalg::hermitian_extremes(&gram);
        hi > 0.0 && lo / hi > tol
    };

    let r_min = 2.0 * grid.spacing;
    if independent_at(r_min) {
        return Ok(0.0);
    }
    let r_max = (omega0 - grid.a).max(grid.b - omega0) + grid.spacing;
    if !independent_at(r_max) {
        return Err(QupError::NeverIndependent(format!(
            "family stays numerically dependent (tol {tol}) on every neighborhood of ω0 = {omega0}"
        )));
    }
    let (mut lo, mut hi) = (r_min, r_max);
    while hi - lo > 0.5 * grid.spacing {
        let mid = 0.5 * (lo + hi);
        if independent_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Central finite-difference stencils of second-order accuracy for
/// derivative orders 1..=5: (offsets, coefficients).
fn stencil(order: usize) -> Option<(&'static [i32], &'static [f64])> {
    match order {
        1 => Some((&[-1, 1], &[-0.5, 0.5])),
        2 => Some((&[-1, 0, 1], &[1.0, -2.0, 1.0])),
        3 => Some((&[-2, -1, 1, 2], &[-0.5, 1.0, -1.0, 0.5])),
        4 => Some((&[-2, -1, 0, 1, 2], &[1.0, -4.0, 6.0, -4.0, 1.0])),
        5 => Some((&[-3, -2, -1, 1, 2, 3], &[-0.5, 2.0, -2.5, 2.5, -2.0, 0.5])),
        _ => None,
    }
}

/// Jet of the kernel curve at `omega0`: derivatives `γ^{(1)} .. γ^{(m)}` of
/// `ω ↦ K(ω, ·)` by central differences with step `h`, in weighted
/// coordinates.
pub fn curve_jet(
    kernel: &KernelSpec,
    omega0: f64,
    m: usize,
    h: f64,
    t_grid: Grid,
) -> Result<CurveJet, QupError> {
    if m < 1 || m > 5 {
        return Err(QupError::InvalidInput(format!(
            "jet order must lie in 1..=5, got {m}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(QupError::InvalidInput(format!("step must be positive, got {h}")));
    }
    // Sample the needed ω-offsets once.
    let max_off = 3i32;
    let omegas: Vec<f64> = (-max_off..=max_off)
        .map(|k| omega0 + k as f64 * h)
        .collect();
    let raw = kernels::sample_rows(kernel, &omegas, t_grid)?;
    let w = t_grid.weights();
    let mut vectors = Vec::with_capacity(m);
    for order in 1..=m {
        let (offs, coefs) = stencil(order).unwrap();
        let mut vec = DVector::<Complex64>::zeros(t_grid.n);
        for (&off, &c) in offs.iter().zip(coefs) {
            let row = (off + max_off) as usize;
            for i in 0..t_grid.n {
                vec[i] += raw[(row, i)] * c;
            }
        }
        let scale = Complex64::new(1.0 / h.powi(order as i32), 0.0);
        for i in 0..t_grid.n {
            vec[i] = vec[i] * scale * w[i].sqrt();
        }
        vectors.push(vec);
    }
    Ok(CurveJet {
        omega0,
        order: m,
        h,
        vectors,
    })
}

/// Real-stack a complex coordinate vector (`[Re; Im]`).
fn real_stack(v: &DVector<Complex64>) -> DVector<f64> {
    let n = v.len();
    DVector::from_fn(2 * n, |i, _| if i < n { v[i].re } else { v[i - n].im })
}

/// Gram–Schmidt the real-stacked jet into an orthonormal frame. Fails with
/// the achieved order when the jet is not regular of its full order.
fn frenet_frame(jet: &CurveJet) -> Result<Vec<DVector<f64>>, QupError> {
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(jet.order);
    for (k, v) in jet.vectors.iter().enumerate() {
        let mut r = real_stack(v);
        let norm_in = r.norm();
        for e in &frame {
            let c = e.dot(&r);
            r -= e * c;
        }
        let rn = r.norm();
        if !(rn > 1e-8 * norm_in.max(1e-300)) {
            return Err(QupError::RankDeficientFamily(format!(
                "jet loses rank at derivative order {} (achieved frame order {k})",
                k + 1
            )));
        }
        frame.push(r / rn);
    }
    Ok(frame)
}

/// Generalized curvatures from three jets at `ω0 - δ, ω0, ω0 + δ`:
/// Gram–Schmidt each jet into a Frenet frame, differentiate the frames
/// centrally, and set `λ_i = ⟨e_i', e_{i+1}⟩ / ‖γ'‖`.
pub fn frenet_curvatures(
    jet_minus: &CurveJet,
    jet_center: &CurveJet,
    jet_plus: &CurveJet,
) -> Result<CurvatureProfile, QupError> {
    let m = jet_center.order;
    if m < 2 {
        return Err(QupError::InvalidInput("curvatures need jet order ≥ 2".into()));
    }
    if jet_minus.order != m || jet_plus.order != m {
        return Err(QupError::ShapeMismatch("jets have mismatched orders".into()));
    }
    let delta_plus = jet_plus.omega0 - jet_center.omega0;
    let delta_minus = jet_center.omega0 - jet_minus.omega0;
    if delta_plus <= 0.0 || (delta_plus - delta_minus).abs() > 1e-12 * delta_plus.abs().max(1.0) {
        return Err(QupError::InvalidInput(
            "jets must be centered at ω0 - δ, ω0, ω0 + δ".into(),
        ));
    }
    let center = frenet_frame(jet_center)?;
    let mut minus = frenet_frame(jet_minus)?;
    let mut plus = frenet_frame(jet_plus)?;
    // Gram–Schmidt fixes each basis vector only up to sign; align the
    // neighbors with the center frame before differentiating.
    for i in 0..m {
        if minus[i].dot(&center[i]) < 0.0 {
            minus[i] = -&minus[i];
        }
        if plus[i].dot(&center[i]) < 0.0 {
            plus[i] = -&plus[i];
        }
    }
    let speed = real_stack(&jet_center.vectors[0]).norm();
    if speed <= 0.0 {
        return Err(QupError::RankDeficientFamily("curve has zero speed".into()));
    }
    let mut curvatures = Vec::with_capacity(m - 1);
    for i in 0..m - 1 {
        let de = (&plus[i] - &minus[i]) / (2.0 * delta_plus);
        curvatures.push(de.dot(&center[i + 1]) / speed);
    }
    Ok(CurvatureProfile {
        curvatures,
        frame: center,
        speed,
    })
}

/// Curve-determinant completeness test: with `n` the kernel's span
/// dimension, the point is complete iff `|det(γ^{(1)} … γ^{(n)})|`, expressed
/// in a basis of the span, stays away from zero at `ω0` and `ω0 ± h`.
pub fn curve_wronskian_test(
    kernel: &KernelSpec,
    omega0: f64,
    n: usize,
    h: f64,
    t_grid: Grid,
) -> Result<CurveVerdict, QupError> {
    if n < 1 {
        return Err(QupError::InvalidInput("span dimension must be ≥ 1".into()));
    }
    // Span basis from the full kernel window.
    let omega_max = default_omega_max(t_grid);
    let (flo, fhi) = clamp_window(kernel, omega0 - omega_max, omega0 + omega_max)
        .ok_or_else(|| QupError::EvaluationDomain("kernel ω-domain is empty".into()))?;
    let (nodes, weights) = segment_nodes(flo, fhi, 401);
    let full = weighted_rows(kernel, &nodes, &weights, t_grid)?;
    let svd = full.clone().svd(false, true);
    let mut svals: Vec<f64> = svd.singular_values.iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let rank = linalg::numerical_rank(&svals, 1e-8);
    if rank != n {
        return Err(QupError::ShapeMismatch(format!(
            "kernel span has numerical dimension {rank}, expected {n}"
        )));
    }
    let v_t = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let v = DMatrix::from_fn(t_grid.n, n, |i, c| v_t[(order[c], i)].conj());

    let mut dets = [0.0; 3];
    for (slot, w) in [omega0 - h, omega0, omega0 + h].into_iter().enumerate() {
        let jet = curve_jet(kernel, w, n, h, t_grid)?;
        let mut jmat = DMatrix::<Complex64>::zeros(t_grid.n, n);
        let mut scale = 1.0;
        for (c, vec) in jet.vectors.iter().enumerate() {
            let nn = vec.norm();
            scale *= nn.max(1e-300);
            for i in 0..t_grid.n {
                jmat[(i, c)] = vec[i];
            }
        }
        let m = v.adjoint() * &jmat;
        dets[slot] = linalg::det(&m).norm() / scale;
    }
    Ok(CurveVerdict {
        complete: dets.iter().all(|&d| d > 1e-9),
        normalized_dets: dets,
    })
}
