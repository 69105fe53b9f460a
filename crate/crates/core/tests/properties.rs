//! Randomized property tests for invariants that must hold on every input,
//! not just on curated examples: support-measure monotonicity, Parseval's
//! identity, density invariances, frame-bound ordering under perturbation,
//! and monotone pursuit residuals.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

use qup_lab::density::{beurling_densities, PointSet};
use qup_lab::grid::{make_grid, support_measure, Signal};
use qup_lab::op_family::{matching_pursuit, AtomGenerator, Dictionary};
use qup_lab::perturb::christensen_bounds;
use qup_lab::qup::fourier_on;

/// A smooth signal from bounded trigonometric coefficients under a Gaussian
/// envelope; never identically zero because the envelope carries the
/// constant coefficient.
fn smooth_signal(coeffs: &[(f64, f64)]) -> Signal {
    let g = make_grid(-8.0, 8.0, 257).unwrap();
    let coeffs = coeffs.to_vec();
    Signal::from_real_fn(g, move |t| {
        let mut s = 1.0;
        for (k, (a, b)) in coeffs.iter().enumerate() {
            s += a * ((k + 1) as f64 * t).cos() + b * ((k + 1) as f64 * t).sin();
        }
        s * (-0.25 * t * t).exp()
    })
}

fn coeff() -> impl Strategy<Value = (f64, f64)> {
    (-1.0..1.0f64, -1.0..1.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Shrinking the relative threshold can only enlarge the ε-support, and
    /// the support never exceeds the grid's length.
    #[test]
    fn support_measure_is_monotone_in_the_threshold(
        coeffs in proptest::collection::vec(coeff(), 1..5),
        e1 in 1e-6..0.5f64,
        e2 in 1e-6..0.5f64,
    ) {
        let f = smooth_signal(&coeffs);
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let m_lo = support_measure(&f, lo).unwrap().measure;
        let m_hi = support_measure(&f, hi).unwrap().measure;
        prop_assert!(m_hi <= m_lo + 1e-12, "higher threshold grew support: {m_hi} > {m_lo}");
        prop_assert!(m_lo <= f.grid.length() + 1e-12);
    }

    /// Parseval for the non-unitary transform: ∫|f̂|² = 2π‖f‖² once the
    /// ω-window is wide enough to hold the spectrum.
    #[test]
    fn parseval_holds_on_a_wide_window(
        coeffs in proptest::collection::vec(coeff(), 1..4),
    ) {
        let f = smooth_signal(&coeffs);
        let wg = make_grid(-20.0, 20.0, 1001).unwrap();
        let fh = fourier_on(&f, wg).unwrap();
        let lhs = fh.norm().powi(2);
        let rhs = 2.0 * PI * f.norm().powi(2);
        prop_assert!((lhs - rhs).abs() <= 1e-3 * rhs, "{lhs} vs {rhs}");
    }

    /// Beurling densities are translation invariant and scale inversely
    /// under dilation.
    #[test]
    fn densities_respect_translation_and_dilation(
        shift in -5.0..5.0f64,
        scale in 0.5..2.0f64,
    ) {
        let points: Vec<f64> = (-60..=60).map(|k| k as f64).collect();
        let sched = [10.0, 20.0, 40.0];
        let base = beurling_densities(
            &PointSet::new(points.clone(), 60.0).unwrap(), &sched).unwrap();

        // Rounding can move a window endpoint across a lattice point, which
        // changes a count by one; allow a one-point-per-window slack.
        let slack = 1.5 / 40.0;
        // Keep the shifted lattice on the same symmetric support, so the
        // densities compare like for like.
        let shifted: Vec<f64> = (-70..=70)
            .map(|k| k as f64 + shift)
            .filter(|x| x.abs() <= 60.0)
            .collect();
        let s = beurling_densities(&PointSet::new(shifted, 60.0).unwrap(), &sched).unwrap();
        prop_assert!((s.d_minus - base.d_minus).abs() <= slack);
        prop_assert!((s.d_plus - base.d_plus).abs() <= slack);

        let dilated: Vec<f64> = points.iter().map(|x| x * scale).collect();
        let d = beurling_densities(
            &PointSet::new(dilated, 60.0 * scale).unwrap(),
            &[10.0 * scale, 20.0 * scale, 40.0 * scale],
        ).unwrap();
        prop_assert!((d.d_minus - base.d_minus / scale).abs() <= slack / scale);
        prop_assert!((d.d_plus - base.d_plus / scale).abs() <= slack / scale);
    }

    /// When the perturbation criterion is met, the new frame bounds bracket
    /// the old ones: newA ≤ A ≤ B ≤ newB, with all quantities positive.
    #[test]
    fn perturbed_frame_bounds_bracket_the_originals(
        a in 0.1..2.0f64,
        width in 0.0..3.0f64,
        lambda in 0.0..0.6f64,
        d in 0.0..0.2f64,
    ) {
        let b = a + width;
        prop_assume!(lambda + d / a.sqrt() < 1.0);
        let (crit, new_a, new_b) = christensen_bounds(a, b, lambda, d).unwrap();
        prop_assert!(crit < 1.0);
        prop_assert!(new_a > 0.0);
        prop_assert!(new_a <= a + 1e-12, "new lower {new_a} above A = {a}");
        prop_assert!(new_b >= b - 1e-12, "new upper {new_b} below B = {b}");
    }

    /// Greedy pursuit residuals never increase, and the final residual never
    /// exceeds the signal's norm.
    #[test]
    fn pursuit_residuals_are_monotone(
        coeffs in proptest::collection::vec(coeff(), 1..4),
        n_atoms in 1usize..5,
    ) {
        let g = make_grid(-8.0, 8.0, 257).unwrap();
        let coeffs2 = coeffs.clone();
        let f = Signal::from_fn(g, move |t| {
            let mut s = Complex64::new(0.0, 0.0);
            for (k, (a, b)) in coeffs2.iter().enumerate() {
                s += Complex64::new(*a, *b) * Complex64::new(0.0, (k as f64 - 1.5) * t).exp();
            }
            s
        });
        prop_assume!(f.norm() > 1e-9);
        let dict = Dictionary::new(vec![AtomGenerator::fourier_range(-4.0, 4.0, 41)]).unwrap();
        let dec = matching_pursuit(&f, &dict, n_atoms, 1e-12).unwrap();
        for w in dec.residual_norms.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "residuals increased: {:?}", dec.residual_norms);
        }
        if let Some(last) = dec.residual_norms.last() {
            prop_assert!(*last <= f.norm() * (1.0 + 1e-9));
        }
    }
}
