//! Perturbation stability of bases, frames, and adapted complete function
//! point systems.
//!
//! The Paley–Wiener criterion: if `‖Σ c_n(φ_n − ψ_n)‖ ≤ λ‖Σ c_n φ_n‖` for
//! all coefficients with some `λ < 1`, then `{ψ_n}` is a basis equivalent to
//! `{φ_n}`. At finite dimension the optimal `λ` is the largest generalized
//! singular value of the difference map against the base family.
//!
//! The Christensen-style bound: with frame bounds `(A, B)` and constants
//! `λ, d ≥ 0` such that the mixed inequality holds, the criterion
//! `λ + d/√A < 1` yields new bounds `A(1 − (λ + d/√A))²` and
//! `B(1 + (λ + d/√B))²`. A second classical form uses the operator norm `λ`
//! of the difference frame operator: the frame survives when `λ < A`, with
//! new lower bound `A(1 − √(λ/A))²`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::density::PointSet;
use crate::error::QupError;
use crate::grid::Grid;
use crate::independence::FunctionFamily;
use crate::kernels::{self, KernelSpec};
use crate::linalg;

/// Whether a perturbation provably preserves the structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbVerdict {
    Preserved,
    NotGuaranteed,
}

/// Report of a perturbation test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationVerdict {
    /// Randomized estimate of the perturbation constant λ (max over trials).
    pub lambda_estimate: f64,
    /// Exact λ (largest generalized singular value) when the dimension
    /// permits; the verdict uses this value when present.
    pub lambda_exact: Option<f64>,
    /// The `d` constant of the mixed criterion (zero for pure tests).
    pub d_estimate: f64,
    /// Value the verdict thresholds against (λ, or λ + d/√A).
    pub criterion: f64,
    pub verdict: PerturbVerdict,
    /// New lower frame bound, when the criterion grants one.
    pub new_lower: Option<f64>,
    /// New upper frame bound (plus-sign form, the one consistent with a
    /// perturbation enlarging the frame).
    pub new_upper: Option<f64>,
    /// Minus-sign variant of the upper bound found in some statements of
    /// the theorem; it falls below `B` and cannot bound an enlarged frame.
    /// Reported verbatim for comparison, never used for the verdict.
    pub new_upper_minus_variant: Option<f64>,
}

fn family_matrices(
    base: &FunctionFamily,
    perturbed: &FunctionFamily,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>, Vec<f64>), QupError> {
    if base.len() != perturbed.len() {
        return Err(QupError::ShapeMismatch(format!(
            "families have {} and {} members",
            base.len(),
            perturbed.len()
        )));
    }
    if base.grid() != perturbed.grid() {
        return Err(QupError::ShapeMismatch(
            "families are sampled on different grids".into(),
        ));
    }
    let b = base.coordinate_matrix();
    let p = perturbed.coordinate_matrix();
    Ok((&b - &p, b, base.grid().weights()))
}

/// Paley–Wiener equivalence test: estimates
/// `λ = sup ‖Σ c(φ − ψ)‖ / ‖Σ c φ‖` over random unit coefficient vectors
/// (seeded, reproducible) and, for dimensions ≤ 256, computes it exactly as
/// the largest generalized singular value. Preserved iff `λ < 1`.
pub fn paley_wiener_test(
    base: &FunctionFamily,
    perturbed: &FunctionFamily,
    trials: usize,
    seed: u64,
) -> Result<PerturbationVerdict, QupError> {
    let (diff, b_mat, w) = family_matrices(base, perturbed)?;
    let n = base.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lambda_estimate = 0.0f64;
    for _ in 0..trials {
        let mut c = DMatrix::<Complex64>::zeros(n, 1);
        for i in 0..n {
            c[(i, 0)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let norm_c = c.norm();
        if norm_c == 0.0 {
            continue;
        }
        let num = weighted_norm(&(&diff * &c), &w);
        let den = weighted_norm(&(&b_mat * &c), &w);
        if den > 0.0 {
            lambda_estimate = lambda_estimate.max(num / den);
        }
    }
    let lambda_exact = if n <= 256 {
        Some(linalg::largest_generalized_ratio(&diff, &b_mat, &w)?)
    } else {
        None
    };
    let lambda = lambda_exact.unwrap_or(lambda_estimate);
    Ok(PerturbationVerdict {
        lambda_estimate,
        lambda_exact,
        d_estimate: 0.0,
        criterion: lambda,
        verdict: if lambda < 1.0 {
            PerturbVerdict::Preserved
        } else {
            PerturbVerdict::NotGuaranteed
        },
        new_lower: None,
        new_upper: None,
        new_upper_minus_variant: None,
    })
}

fn weighted_norm(col: &DMatrix<Complex64>, w: &[f64]) -> f64 {
    (0..col.nrows())
        .map(|i| col[(i, 0)].norm_sqr() * w[i])
        .sum::<f64>()
        .sqrt()
}

/// Mixed perturbation criterion for frames: given bounds `(A, B)` and
/// constants `λ, d`, returns `(criterion, newA, newB)` with
/// `criterion = λ + d/√A`, `newA = A(1 − criterion)²`,
/// `newB = B(1 + λ + d/√B)²`. Errors when the criterion is ≥ 1.
pub fn christensen_bounds(
    a: f64,
    b: f64,
    lambda: f64,
    d: f64,
) -> Result<(f64, f64, f64), QupError> {
    if !(a > 0.0) || b < a {
        return Err(QupError::InvalidInput(format!(
            "frame bounds must satisfy 0 < A ≤ B, got A = {a}, B = {b}"
        )));
    }
    if lambda < 0.0 || d < 0.0 {
        return Err(QupError::InvalidInput(format!(
            "perturbation constants must be nonnegative, got λ = {lambda}, d = {d}"
        )));
    }
    let criterion = lambda + d / a.sqrt();
    if criterion >= 1.0 {
        return Err(QupError::CriterionFailed(format!(
            "λ + d/√A = {criterion} ≥ 1, no guarantee"
        )));
    }
    let new_a = a * (1.0 - criterion).powi(2);
    let new_b = b * (1.0 + lambda + d / b.sqrt()).powi(2);
    Ok((criterion, new_a, new_b))
}

/// Frame-operator perturbation test: `λ` is the operator norm of
/// `f ↦ Σ ⟨f, φ_n − ψ_n⟩ (φ_n − ψ_n)`, i.e. the largest eigenvalue of the
/// weighted Gram matrix of the differences. Preserved iff `λ < A`, with new
/// lower bound `A(1 − √(λ/A))²`.
pub fn frame_perturb_test(
    base: &FunctionFamily,
    perturbed: &FunctionFamily,
    a: f64,
    b: f64,
) -> Result<PerturbationVerdict, QupError> {
    if !(a > 0.0) || b < a {
        return Err(QupError::InvalidInput(format!(
            "frame bounds must satisfy 0 < A ≤ B, got A = {a}, B = {b}"
        )));
    }
    let (diff, _, w) = family_matrices(base, perturbed)?;
    let gram = linalg::weighted_gram(&diff, &w)?;
    let (_, lambda) = linalg::hermitian_extremes(&gram);
    // Strict inequality with a relative guard: λ within rounding of A is the
    // boundary case and carries no guarantee.
    let preserved = lambda < a * (1.0 - 1e-9);
    let (new_lower, new_upper, minus) = if preserved {
        (
            Some(a * (1.0 - (lambda / a).sqrt()).powi(2)),
            Some(b * (1.0 + (lambda / b).sqrt()).powi(2)),
            Some(b * (1.0 - (lambda / b).sqrt()).powi(2)),
        )
    } else {
        (None, None, None)
    };
    Ok(PerturbationVerdict {
        lambda_estimate: lambda,
        lambda_exact: Some(lambda),
        d_estimate: 0.0,
        criterion: lambda,
        verdict: if preserved {
            PerturbVerdict::Preserved
        } else {
            PerturbVerdict::NotGuaranteed
        },
        new_lower,
        new_upper,
        new_upper_minus_variant: minus,
    })
}

const ACFPS_RANK_TOL: f64 = 1e-10;

fn neighborhood_rows(
    kernel: &KernelSpec,
    centers: &[f64],
    radius: f64,
    t_grid: Grid,
) -> Result<DMatrix<Complex64>, QupError> {
    let per = 9usize;
    let mut omegas = Vec::with_capacity(centers.len() * per);
    for &c in centers {
        for k in 0..per {
            omegas.push(c - radius + 2.0 * radius * k as f64 / (per - 1) as f64);
        }
    }
    kernels::sample_rows(kernel, &omegas, t_grid)
}

fn weighted_rank(rows: &DMatrix<Complex64>, w: &[f64]) -> usize {
    let mut scaled = rows.clone();
    for j in 0..scaled.ncols() {
        let s = Complex64::new(w[j].sqrt(), 0.0);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= s;
        }
    }
    let svals = linalg::singular_values(&scaled);
    linalg::numerical_rank(&svals, ACFPS_RANK_TOL)
}

/// Perturbation test for adapted complete point systems of a
/// finite-dimensional kernel: verifies that the union of neighborhoods of
/// the source set spans the kernel's range (else `SourceNotComplete`), then
/// checks the perturbed set by the generalized-ratio criterion `λ < 1`
/// between the per-point kernel functions — falling back to the best match
/// inside each perturbed neighborhood when the centers alone fail.
pub fn acfps_perturb_test(
    kernel: &KernelSpec,
    omega_set: &PointSet,
    omega_set_prime: &PointSet,
    radii: &[f64],
    t_grid: Grid,
) -> Result<PerturbVerdict, QupError> {
    let n_pts = omega_set.points.len();
    if omega_set_prime.points.len() != n_pts {
        return Err(QupError::ShapeMismatch(format!(
            "point sets have {} and {} points",
            n_pts,
            omega_set_prime.points.len()
        )));
    }
    let radius = match radii {
        [] => return Err(QupError::InvalidInput("empty radius list".into())),
        [r] => {
            if !(*r > 0.0) {
                return Err(QupError::InvalidInput("radius must be positive".into()));
            }
            *r
        }
        _ => {
            return Err(QupError::InvalidInput(
                "per-point radii are not supported; supply one radius".into(),
            ))
        }
    };
    let w = t_grid.weights();
    // Kernel dimension: rank over a wide ω sweep covering both point sets.
    let (dlo, dhi) = kernel
        .omega_domain()
        .unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    let lo = (omega_set.points[0].min(omega_set_prime.points[0]) - radius).max(dlo);
    let hi = (omega_set.points[n_pts - 1].max(omega_set_prime.points[n_pts - 1]) + radius)
        .min(dhi);
    let sweep: Vec<f64> = (0..64)
        .map(|k| lo + (hi - lo) * k as f64 / 63.0)
        .collect();
    let dim = weighted_rank(&kernels::sample_rows(kernel, &sweep, t_grid)?, &w);
    // Source must be an adapted complete system: its neighborhood union
    // reaches the full range.
    let src_rows = neighborhood_rows(kernel, &omega_set.points, radius, t_grid)?;
    if weighted_rank(&src_rows, &w) < dim {
        return Err(QupError::SourceNotComplete(format!(
            "neighborhoods of the source set span {} of {} dimensions",
            weighted_rank(&src_rows, &w),
            dim
        )));
    }
    let base = kernels::sample_rows(kernel, &omega_set.points, t_grid)?;
    if weighted_rank(&base, &w) < n_pts.min(dim) {
        return Err(QupError::SourceNotComplete(
            "kernel functions at the source points are dependent".into(),
        ));
    }
    let lambda_of = |cand: &DMatrix<Complex64>| -> Result<f64, QupError> {
        linalg::largest_generalized_ratio(&(&base.transpose() - &cand.transpose()), &base.transpose(), &w)
    };
    // Centers first.
    let centers = kernels::sample_rows(kernel, &omega_set_prime.points, t_grid)?;
    if weighted_rank(&centers, &w) == n_pts.min(dim) && lambda_of(&centers)? < 1.0 {
        return Ok(PerturbVerdict::Preserved);
    }
    // Fall back to the best match within each perturbed neighborhood.
    let per = 9usize;
    let mut best = DMatrix::<Complex64>::zeros(n_pts, t_grid.n);
    for (j, &c) in omega_set_prime.points.iter().enumerate() {
        let mut best_dist = f64::INFINITY;
        for k in 0..per {
            let omega = c - radius + 2.0 * radius * k as f64 / (per - 1) as f64;
            let row = kernels::sample_rows(kernel, &[omega], t_grid)?;
            let dist: f64 = (0..t_grid.n)
                .map(|i| (row[(0, i)] - base[(j, i)]).norm_sqr() * w[i])
                .sum();
            if dist < best_dist {
                best_dist = dist;
                best.set_row(j, &row.row(0));
            }
        }
    }
    if weighted_rank(&best, &w) < n_pts.min(dim) {
        return Ok(PerturbVerdict::NotGuaranteed);
    }
    if lambda_of(&best)? < 1.0 {
        Ok(PerturbVerdict::Preserved)
    } else {
        Ok(PerturbVerdict::NotGuaranteed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Signal};
    use std::f64::consts::PI;

    fn exponentials(shift: f64) -> FunctionFamily {
        let g = make_grid(-PI, PI, 513).unwrap();
        let members = (-16..=16)
            .map(|n| {
                Signal::from_fn(g, |t| {
                    Complex64::new(0.0, (n as f64 + shift) * t).exp()
                        / Complex64::new((2.0 * PI).sqrt(), 0.0)
                })
            })
            .collect();
        FunctionFamily::from_signals(members).unwrap()
    }

    #[test]
    fn identity_perturbation_has_zero_lambda() {
        let base = exponentials(0.0);
        let v = paley_wiener_test(&base, &base, 20, 1).unwrap();
        assert!(v.lambda_exact.unwrap() < 1e-10);
        assert_eq!(v.verdict, PerturbVerdict::Preserved);
    }

    #[test]
    fn small_frequency_shift_is_preserved() {
        let v = paley_wiener_test(&exponentials(0.0), &exponentials(0.1), 50, 2).unwrap();
        assert!(v.lambda_exact.unwrap() < 1.0, "{v:?}");
        assert_eq!(v.verdict, PerturbVerdict::Preserved);
    }

    #[test]
    fn large_frequency_shift_is_not_guaranteed() {
        let v = paley_wiener_test(&exponentials(0.0), &exponentials(0.6), 50, 3).unwrap();
        assert!(v.lambda_exact.unwrap() >= 1.0, "{v:?}");
        assert_eq!(v.verdict, PerturbVerdict::NotGuaranteed);
    }

    #[test]
    fn small_perturbation_verdict_is_symmetric() {
        let a = exponentials(0.0);
        let b = exponentials(0.1);
        let fwd = paley_wiener_test(&a, &b, 20, 4).unwrap();
        let bwd = paley_wiener_test(&b, &a, 20, 4).unwrap();
        assert!(fwd.lambda_exact.unwrap() < 0.5);
        assert_eq!(fwd.verdict, bwd.verdict);
    }

    #[test]
    fn randomized_estimate_is_reproducible() {
        let a = exponentials(0.0);
        let b = exponentials(0.1);
        let v1 = paley_wiener_test(&a, &b, 30, 99).unwrap();
        let v2 = paley_wiener_test(&a, &b, 30, 99).unwrap();
        assert_eq!(v1.lambda_estimate.to_bits(), v2.lambda_estimate.to_bits());
        assert!(v1.lambda_estimate <= v1.lambda_exact.unwrap() + 1e-12);
    }

    #[test]
    fn mixed_criterion_bounds() {
        let (crit, new_a, new_b) = christensen_bounds(1.0, 2.0, 0.1, 0.1).unwrap();
        assert!((crit - 0.2).abs() < 1e-12);
        assert!((new_a - 0.64).abs() < 1e-12);
        let expected_b = 2.0 * (1.0 + 0.1 + 0.1 / 2.0_f64.sqrt()).powi(2);
        assert!((new_b - expected_b).abs() < 1e-10);
        assert!((new_b - 2.74113).abs() < 1e-4);

        let (crit, new_a, new_b) = christensen_bounds(1.0, 2.0, 0.0, 0.0).unwrap();
        assert_eq!((crit, new_a, new_b), (0.0, 1.0, 2.0));

        assert!(matches!(
            christensen_bounds(1.0, 2.0, 0.9, 0.2),
            Err(QupError::CriterionFailed(_))
        ));
    }

    #[test]
    fn mixed_criterion_bound_ordering() {
        for &(a, b, l, d) in &[(1.0, 2.0, 0.1, 0.1), (0.5, 3.0, 0.3, 0.05), (2.0, 2.0, 0.0, 0.5)]
        {
            if let Ok((_, new_a, new_b)) = christensen_bounds(a, b, l, d) {
                assert!(new_a <= a && a <= b && b <= new_b, "{a} {b} {l} {d}");
            }
        }
    }

    fn orthonormal_fourier_basis() -> FunctionFamily {
        let g = make_grid(-PI, PI, 513).unwrap();
        let members = (0..8)
            .map(|n| {
                Signal::from_fn(g, |t| {
                    Complex64::new(0.0, n as f64 * t).exp()
                        / Complex64::new((2.0 * PI).sqrt(), 0.0)
                })
            })
            .collect();
        FunctionFamily::from_signals(members).unwrap()
    }

    #[test]
    fn shrinking_one_frame_element_keeps_the_frame() {
        let base = orthonormal_fourier_basis();
        let mut members = base.members().to_vec();
        members[0] = members[0].scaled(Complex64::new(0.9, 0.0));
        let perturbed = FunctionFamily::from_signals(members).unwrap();
        let v = frame_perturb_test(&base, &perturbed, 1.0, 1.0).unwrap();
        assert!((v.criterion - 0.01).abs() < 1e-6, "{v:?}");
        assert_eq!(v.verdict, PerturbVerdict::Preserved);
        assert!((v.new_lower.unwrap() - 0.81).abs() < 1e-6);
        assert!(v.new_upper.unwrap() >= 1.0);
        assert!(v.new_upper_minus_variant.unwrap() <= 1.0);
    }

    #[test]
    fn deleting_a_frame_element_is_not_guaranteed() {
        let base = orthonormal_fourier_basis();
        let mut members = base.members().to_vec();
        members[0] = Signal::zeros(members[0].grid);
        let perturbed = FunctionFamily::from_signals(members).unwrap();
        let v = frame_perturb_test(&base, &perturbed, 1.0, 1.0).unwrap();
        assert!((v.criterion - 1.0).abs() < 1e-6, "{v:?}");
        assert_eq!(v.verdict, PerturbVerdict::NotGuaranteed);
    }

    fn two_dim_kernel(g: Grid) -> KernelSpec {
        // K(ω, t) = ψ₁(ω) φ₁(t) + ψ₂(ω) φ₂(t) with smooth envelopes.
        let phi1 = Signal::from_real_fn(g, |t| (-t * t).exp());
        let phi2 = Signal::from_real_fn(g, |t| t * (-t * t).exp());
        let og = make_grid(-2.0, 4.0, 601).unwrap();
        KernelSpec::SeparableRank {
            terms: vec![
                crate::kernels::SeparableTerm {
                    lambda: 1.0,
                    psi: Signal::from_real_fn(og, |_| 1.0),
                    phi: phi1,
                },
                crate::kernels::SeparableTerm {
                    lambda: 1.0,
                    psi: Signal::from_real_fn(og, |w| w),
                    phi: phi2,
                },
            ],
        }
    }

    #[test]
    fn identical_point_sets_are_preserved() {
        let g = make_grid(-4.0, 4.0, 129).unwrap();
        let kernel = two_dim_kernel(g);
        let omega = PointSet::new(vec![0.0, 1.0], 2.0).unwrap();
        let v = acfps_perturb_test(&kernel, &omega, &omega, &[0.2], g).unwrap();
        assert_eq!(v, PerturbVerdict::Preserved);
    }

    #[test]
    fn small_point_shift_is_preserved() {
        let g = make_grid(-4.0, 4.0, 129).unwrap();
        let kernel = two_dim_kernel(g);
        let omega = PointSet::new(vec![0.0, 1.0], 2.0).unwrap();
        let shifted = PointSet::new(vec![0.01, 1.01], 2.0).unwrap();
        let v = acfps_perturb_test(&kernel, &omega, &shifted, &[0.2], g).unwrap();
        assert_eq!(v, PerturbVerdict::Preserved);
    }

    #[test]
    fn collapsed_neighborhoods_are_not_preserved() {
        // Piecewise-constant kernel: both perturbed points land in the same
        // cell, so their neighborhood functions span one dimension.
        let g = make_grid(-4.0, 4.0, 129).unwrap();
        let b1 = Signal::from_real_fn(g, |t| (-t * t).exp());
        let b2 = Signal::from_real_fn(g, |t| t * (-t * t).exp());
        let kernel = KernelSpec::PiecewiseIndicator {
            breakpoints: vec![0.0, 1.0, 2.0],
            basis: vec![b1, b2],
        };
        let omega = PointSet::new(vec![0.5, 1.5], 2.0).unwrap();
        let collapsed = PointSet::new(vec![0.2, 0.3], 2.0).unwrap();
        let v = acfps_perturb_test(&kernel, &omega, &collapsed, &[0.1], g).unwrap();
        assert_eq!(v, PerturbVerdict::NotGuaranteed);
    }

    #[test]
    fn dependent_source_set_is_rejected() {
        let g = make_grid(-4.0, 4.0, 129).unwrap();
        let b1 = Signal::from_real_fn(g, |t| (-t * t).exp());
        let b2 = Signal::from_real_fn(g, |t| t * (-t * t).exp());
        let kernel = KernelSpec::PiecewiseIndicator {
            breakpoints: vec![0.0, 1.0, 2.0],
            basis: vec![b1, b2],
        };
        // Both source points in one cell: their neighborhoods span 1 < 2.
        let omega = PointSet::new(vec![0.2, 0.3], 2.0).unwrap();
        let prime = PointSet::new(vec![0.5, 1.5], 2.0).unwrap();
        assert!(matches!(
            acfps_perturb_test(&kernel, &omega, &prime, &[0.1], g),
            Err(QupError::SourceNotComplete(_))
        ));
    }
}
