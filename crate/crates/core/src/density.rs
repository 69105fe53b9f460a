//! Beurling densities, nonuniform exponential frames, sampling expansions,
//! and zero-density bounds.
//!
//! For a separated point set Λ the upper/lower uniform (Beurling) densities
//! are `D^±(Λ) = lim_{r→∞} n^±(r)/r`, where `n^+(r)` (resp. `n^-(r)`) is the
//! largest (smallest) number of points of Λ in any interval of length `r`.
//! Finite windows only support extrapolation, so every report records the
//! radius actually used.
//!
//! The classical frame criterion for `E(Λ) = {e^{iωt} : ω ∈ Λ}` on `L²(I)`
//! compares `D^-(Λ)` with `|I|/(2π)`; numerically we project the frame
//! operator onto a trigonometric test basis and watch the lower bound across
//! two truncation levels, since any single finite section of an incomplete
//! system still leaks a tiny positive minimum.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::QupError;
use crate::grid::Signal;
use crate::kernels::{self, FrameBounds, KernelSpec};
use crate::linalg;

/// A finite, strictly increasing set of real points together with the
/// symmetric window `[-window, window]` it samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSet {
    pub points: Vec<f64>,
    pub window: f64,
}

impl PointSet {
    /// Validates sortedness, distinctness, and containment in the window.
    pub fn new(points: Vec<f64>, window: f64) -> Result<Self, QupError> {
        if !(window > 0.0) || !window.is_finite() {
            return Err(QupError::InvalidInput(format!(
                "point-set window must be positive and finite, got {window}"
            )));
        }
        if points.is_empty() {
            return Err(QupError::InvalidInput("point set is empty".into()));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(QupError::InvalidInput(format!(
                    "points must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if points[0] < -window || *points.last().unwrap() > window {
            return Err(QupError::InvalidInput(
                "points fall outside the declared window".into(),
            ));
        }
        Ok(PointSet { points, window })
    }

    /// Parses the text format: one real per line, `#` starts a comment,
    /// blank lines ignored. The window defaults to the largest |point|.
    pub fn from_lines(text: &str) -> Result<Self, QupError> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let x: f64 = body.parse().map_err(|_| {
                QupError::InvalidInput(format!("line {}: cannot parse {body:?}", lineno + 1))
            })?;
            points.push(x);
        }
        points.sort_by(|a, b| a.total_cmp(b));
        let window = points
            .iter()
            .fold(0.0_f64, |m, &x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        PointSet::new(points, window)
    }

    /// Smallest gap between consecutive points.
    pub fn separation(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// The `n` points closest to the origin, sorted.
    pub fn nearest_origin(&self, n: usize) -> Vec<f64> {
        let mut by_abs: Vec<f64> = self.points.clone();
        by_abs.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        by_abs.truncate(n);
        by_abs.sort_by(|a, b| a.total_cmp(b));
        by_abs
    }
}

/// Extrapolated Beurling densities from a finite window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReport {
    pub d_minus: f64,
    pub d_plus: f64,
    pub separation: f64,
    pub r_max: f64,
}

/// Extreme counts of points in a sliding interval of length `r` inside the
/// window. Interval start positions that matter are exactly the points
/// themselves (for maxima) and positions just past a point (for minima).
fn sliding_counts(points: &[f64], window: f64, r: f64) -> (usize, usize) {
    let count_from = |x: f64| -> usize {
        let lo = points.partition_point(|&p| p < x);
        let hi = points.partition_point(|&p| p <= x + r);
        hi - lo
    };
    let mut n_plus = 0usize;
    let mut n_minus = usize::MAX;
    let eps = 1e-9 * r.max(1.0);
    let mut starts: Vec<f64> = Vec::with_capacity(2 * points.len() + 2);
    starts.push(-window);
    starts.push(window - r);
    for &p in points {
        if p <= window - r {
            starts.push(p - eps);
        }
        if p + eps <= window - r {
            starts.push(p + eps);
        }
        if p - r >= -window {
            starts.push(p - r + eps);
        }
    }
    for x in starts {
        if x < -window || x > window - r {
            continue;
        }
        let c = count_from(x);
        n_plus = n_plus.max(c);
        n_minus = n_minus.min(c);
    }
    (n_plus, n_minus.min(points.len()))
}

/// Upper/lower uniform densities via sliding intervals; the reported values
/// use the largest radius in the schedule.
pub fn beurling_densities(
    lambda: &PointSet,
    r_schedule: &[f64],
) -> Result<DensityReport, QupError> {
    if r_schedule.is_empty() {
        return Err(QupError::InvalidInput("empty radius schedule".into()));
    }
    let r_max = r_schedule.iter().fold(0.0_f64, |m, &r| m.max(r));
    if !(r_max > 0.0) {
        return Err(QupError::InvalidInput("radii must be positive".into()));
    }
    if 2.0 * lambda.window < r_max {
        return Err(QupError::InvalidInput(format!(
            "window length {} is smaller than the largest radius {r_max}",
            2.0 * lambda.window
        )));
    }
    let (n_plus, n_minus) = sliding_counts(&lambda.points, lambda.window, r_max);
    Ok(DensityReport {
        d_minus: n_minus as f64 / r_max,
        d_plus: n_plus as f64 / r_max,
        separation: lambda.separation(),
        r_max,
    })
}

/// Two-level verdict of the exponential frame test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameVerdict {
    FrameLikely,
    NotFrameLikely,
    Inconclusive,
}

/// Projected frame operator of `{e^{iωt} : ω}` on `L²(a, b)`, expressed in
/// the orthonormal trigonometric basis `e^{ikβt}/√(b-a)`, `β = 2π/(b-a)`,
/// `|k| ≤ m`. Entries are analytic integrals, no quadrature.
fn projected_frame_operator(
    omegas: &[f64],
    interval: (f64, f64),
    m: usize,
) -> DMatrix<Complex64> {
    let (a, b) = interval;
    let beta = 2.0 * PI / (b - a);
    let dim = 2 * m + 1;
    // C[(k, n)] = ⟨u_k, e^{iω_n t}⟩ = ∫_a^b e^{i(ω_n - kβ)t} dt / √(b-a)
    let mut c = DMatrix::<Complex64>::zeros(dim, omegas.len());
    let scale = 1.0 / (b - a).sqrt();
    for (row, kk) in (-(m as i64)..=m as i64).enumerate() {
        let k_freq = kk as f64 * beta;
        for (n, &omega) in omegas.iter().enumerate() {
            let theta = omega - k_freq;
            let integral = if theta.abs() < 1e-12 {
                Complex64::new(b - a, 0.0)
            } else {
                (Complex64::new(0.0, theta * b).exp() - Complex64::new(0.0, theta * a).exp())
                    / Complex64::new(0.0, theta)
            };
            c[(row, n)] = integral * scale;
        }
    }
    // S = C Cᴴ is the frame operator compressed to the test space.
    &c * c.adjoint()
}

/// Frame test for the exponential system `E(Λ)` on `L²(interval)`: lower
/// and upper bounds of the frame operator projected onto a trigonometric
/// test space, compared across the truncation levels `n/2` and `n` (points
/// nearest the origin). Stable positive lower bound → frame-likely; a
/// collapse (below `1e-6·B`) or a ≥ 10× decay → not-frame-likely.
pub fn exponential_frame_test(
    lambda: &PointSet,
    interval: (f64, f64),
    truncation: usize,
) -> Result<(FrameBounds, FrameVerdict), QupError> {
    let (a, b) = interval;
    if !(b > a) {
        return Err(QupError::InvalidInput(format!(
            "interval ({a}, {b}) is empty"
        )));
    }
    if truncation < 8 {
        return Err(QupError::InvalidInput(
            "truncation must be at least 8".into(),
        ));
    }
    if lambda.points.len() < truncation {
        return Err(QupError::InvalidInput(format!(
            "point set has {} points, fewer than the truncation {truncation}",
            lambda.points.len()
        )));
    }
    let level = |n_pts: usize| -> (f64, f64) {
        let omegas = lambda.nearest_origin(n_pts);
        let reach = omegas
            .iter()
            .fold(f64::INFINITY, |m, &w| m.min(w.abs().max(1e-12)))
            .max(omegas[0].abs())
            .max(omegas[omegas.len() - 1].abs());
        // Test modes must stay well inside the sampled frequency range.
        let beta = 2.0 * PI / (b - a);
        let m = ((0.5 * reach / beta).floor() as usize).max(2);
        let s = projected_frame_operator(&omegas, interval, m);
        linalg::hermitian_extremes(&s)
    };
    let (a_low, _) = level(truncation / 2);
    let (a_top, b_top) = level(truncation);
    let bounds = FrameBounds {
        lower: a_top,
        upper: b_top,
    };
    let collapsed = a_top <= 1e-6 * b_top;
    let decayed = a_low > 0.0 && a_top < 0.1 * a_low;
    let stable = a_top > 1e-6 * b_top && a_top > 0.8 * a_low;
    let verdict = if collapsed || decayed {
        FrameVerdict::NotFrameLikely
    } else if stable {
        FrameVerdict::FrameLikely
    } else {
        FrameVerdict::Inconclusive
    };
    Ok((bounds, verdict))
}

/// Sampling-expansion coefficients and the frame inequality they satisfy.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleExpansion {
    /// `f̃(ω_n) = ∫ K(ω_n, t) f(t) dt`.
    pub coefficients: Vec<Complex64>,
    /// Riesz/frame bounds of the sample family on its span.
    pub lower: f64,
    pub upper: f64,
    /// `Σ |f̃(ω_n)|²`.
    pub coefficient_energy: f64,
    /// `‖f‖²`.
    pub signal_energy: f64,
}

/// Samples the kernel at the given frequencies, computes the sampling
/// coefficients of `f`, and verifies `A‖f‖² ≤ Σ|f̃(ω_n)|² ≤ B‖f‖²` with the
/// measured Gram extremes. Errors with rank-deficiency when the inequality
/// fails — the sample set then cannot be a frame for the space containing
/// `f` (slack tolerance `1e-8` relative).
pub fn sample_expansion(
    kernel: &KernelSpec,
    omegas: &[f64],
    f: &Signal,
) -> Result<SampleExpansion, QupError> {
    if omegas.is_empty() {
        return Err(QupError::InvalidInput("no sampling frequencies".into()));
    }
    let rows = kernels::sample_rows(kernel, omegas, f.grid)?;
    let gram = linalg::weighted_gram(&rows.adjoint(), &f.grid.weights())?;
    let (lo, hi) = linalg::hermitian_extremes(&gram);
    if !(lo > 1e-10 * hi.max(f64::MIN_POSITIVE)) {
        return Err(QupError::RankDeficientFamily(
            "sample family is numerically dependent, no frame bounds on its span".into(),
        ));
    }
    let mut coefficients = Vec::with_capacity(omegas.len());
    let mut energy = 0.0;
    for n in 0..omegas.len() {
        let mut acc = Complex64::ZERO;
        for i in 0..f.grid.n {
            acc += rows[(n, i)] * f.values[i] * f.grid.weight(i);
        }
        energy += acc.norm_sqr();
        coefficients.push(acc);
    }
    let sig = f.norm().powi(2);
    let slack = 1e-8 * (hi * sig).max(1.0);
    if energy + slack < lo * sig || energy - slack > hi * sig {
        return Err(QupError::RankDeficientFamily(format!(
            "sampling inequality fails: {energy:.6e} outside [{:.6e}, {:.6e}] — \
             the samples are not a frame for the signal's space",
            lo * sig,
            hi * sig
        )));
    }
    Ok(SampleExpansion {
        coefficients,
        lower: lo,
        upper: hi,
        coefficient_energy: energy,
        signal_energy: sig,
    })
}

/// Outcome of the Fourier-tail dispersal check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    /// Largest `|f̂(n)|` with `N/2 ≤ |n| ≤ N` for `N ∈ {64, 128, 256}`.
    pub block_max: Vec<f64>,
    /// Every dyadic block contains a coefficient above `1e-12·max`.
    pub pass: bool,
}

/// Checks that the Fourier coefficients of a signal supported on a proper
/// subinterval of `(-π, π)` never terminate: each dyadic block
/// `N/2 ≤ |n| ≤ N`, `N ∈ {64, 128, 256}`, must contain a coefficient above
/// `1e-12` of the largest. Errors when the signal's ε-support fills the
/// whole period, where termination is allowed.
pub fn fourier_tail_check(f: &Signal) -> Result<TailReport, QupError> {
    if f.norm() <= 0.0 {
        return Err(QupError::InvalidInput("zero signal".into()));
    }
    let support = crate::grid::support_measure(f, 1e-9)?.measure;
    if support >= 2.0 * PI - 0.01 {
        return Err(QupError::FullSupportInput(format!(
            "signal occupies measure {support:.4} of the period — no spectral gap is forced"
        )));
    }
    let n_max = 256i64;
    let mut coeff = vec![0.0f64; (2 * n_max + 1) as usize];
    let mut max_abs = 0.0f64;
    for (idx, n) in (-n_max..=n_max).enumerate() {
        let mut acc = Complex64::ZERO;
        for i in 0..f.grid.n {
            let t = f.grid.node(i);
            acc += f.values[i] * Complex64::new(0.0, -(n as f64) * t).exp() * f.grid.weight(i);
        }
        let a = acc.norm();
        coeff[idx] = a;
        max_abs = max_abs.max(a);
    }
    let mut block_max = Vec::new();
    let mut pass = true;
    for block_top in [64i64, 128, 256] {
        let lo = block_top / 2;
        let mut m = 0.0f64;
        for n in -n_max..=n_max {
            if n.abs() >= lo && n.abs() <= block_top {
                m = m.max(coeff[(n + n_max) as usize]);
            }
        }
        pass &= m > 1e-12 * max_abs;
        block_max.push(m);
    }
    Ok(TailReport { block_max, pass })
}

/// Density of real zeros of a sampled signal on its grid `[-R, R]`: counts
/// sign changes of the real part confirmed by a modulus dip (to exclude
/// complex signals of constant modulus) plus isolated tangential dips below
/// `1e-10·max`, divided by the grid length.
pub fn zero_density(f: &Signal) -> Result<f64, QupError> {
    let max = f.max_abs();
    if max <= 0.0 {
        return Err(QupError::InvalidInput("zero signal".into()));
    }
    let g = f.grid;
    let mut count = 0usize;
    let mut i = 0;
    while i + 1 < g.n {
        let (z0, z1) = (f.values[i], f.values[i + 1]);
        let crossing = z0.re * z1.re < 0.0;
        // Near a genuine zero the modulus is comparable to the step of the
        // real part; constant-modulus oscillations fail this by far.
        let dip = z0.norm().min(z1.norm()) <= 2.0 * (z0.re - z1.re).abs();
        if crossing && dip {
            count += 1;
            i += 1;
        } else if z0.norm() <= 1e-10 * max
            && (i == 0 || f.values[i - 1].norm() > z0.norm())
            && z1.norm() > z0.norm()
        {
            // Tangential zero: isolated modulus minimum at the floor.
            count += 1;
        }
        i += 1;
    }
    Ok(count as f64 / g.length())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn lattice(step: f64, window: f64) -> PointSet {
        let k_max = (window / step).floor() as i64;
        let points = (-k_max..=k_max).map(|k| k as f64 * step).collect();
        PointSet::new(points, window).unwrap()
    }

    #[test]
    fn lattice_densities() {
        let sched = [10.0, 20.0, 40.0];
        let r = beurling_densities(&lattice(1.0, 50.0), &sched).unwrap();
        assert!((r.d_minus - 1.0).abs() < 0.05 && (r.d_plus - 1.0).abs() < 0.05, "{r:?}");
        assert_eq!(r.separation, 1.0);

        let r = beurling_densities(&lattice(2.0, 50.0), &sched).unwrap();
        assert!((r.d_minus - 0.5).abs() < 0.05 && (r.d_plus - 0.5).abs() < 0.05, "{r:?}");

        // Z ∪ (Z + 0.5) has density 2.
        let mut pts: Vec<f64> = (-50..=50).map(|k| k as f64).collect();
        pts.extend((-50..50).map(|k| k as f64 + 0.5));
        pts.sort_by(|a, b| a.total_cmp(b));
        let r =
            beurling_densities(&PointSet::new(pts, 50.0).unwrap(), &sched).unwrap();
        assert!((r.d_minus - 2.0).abs() < 0.1 && (r.d_plus - 2.0).abs() < 0.1, "{r:?}");
    }

    #[test]
    fn density_translation_and_dilation_invariance() {
        let base = lattice(1.0, 50.0);
        let sched = [40.0];
        let r0 = beurling_densities(&base, &sched).unwrap();
        // Translation by 0.3.
        let shifted: Vec<f64> = base.points.iter().map(|p| p + 0.3).collect();
        let rs = beurling_densities(&PointSet::new(shifted, 51.0).unwrap(), &sched).unwrap();
        assert!((rs.d_minus - r0.d_minus).abs() <= 1.0 / 40.0 + 1e-12);
        assert!((rs.d_plus - r0.d_plus).abs() <= 1.0 / 40.0 + 1e-12);
        // Dilation by α = 2 halves both densities.
        let dilated: Vec<f64> = base.points.iter().map(|p| 2.0 * p).collect();
        let rd = beurling_densities(&PointSet::new(dilated, 100.0).unwrap(), &[80.0]).unwrap();
        assert!((rd.d_minus - 0.5 * r0.d_minus).abs() < 0.05, "{rd:?}");
        assert!((rd.d_plus - 0.5 * r0.d_plus).abs() < 0.05, "{rd:?}");
    }

    #[test]
    fn density_validation_errors() {
        assert!(PointSet::new(vec![1.0, 1.0], 2.0).is_err());
        assert!(PointSet::new(vec![3.0], 2.0).is_err());
        let p = lattice(1.0, 5.0);
        assert!(beurling_densities(&p, &[100.0]).is_err());
        assert!(beurling_densities(&p, &[]).is_err());
    }

    #[test]
    fn point_set_parsing() {
        let p = PointSet::from_lines("# lattice\n1.0\n-1.0\n0.0  # origin\n\n2.5\n").unwrap();
        assert_eq!(p.points, vec![-1.0, 0.0, 1.0, 2.5]);
        assert!(PointSet::from_lines("abc\n").is_err());
    }

    #[test]
    fn integer_lattice_is_an_orthogonal_frame() {
        let (bounds, verdict) =
            exponential_frame_test(&lattice(1.0, 64.0), (-PI, PI), 32).unwrap();
        assert_eq!(verdict, FrameVerdict::FrameLikely);
        assert!((bounds.lower - 2.0 * PI).abs() < 0.05 * 2.0 * PI, "{bounds:?}");
        assert!((bounds.upper - 2.0 * PI).abs() < 0.05 * 2.0 * PI, "{bounds:?}");
    }

    #[test]
    fn sparse_lattice_is_not_a_frame() {
        let (bounds, verdict) =
            exponential_frame_test(&lattice(2.0, 128.0), (-PI, PI), 32).unwrap();
        assert_eq!(verdict, FrameVerdict::NotFrameLikely, "{bounds:?}");
    }

    #[test]
    fn dense_lattice_is_a_frame() {
        let (bounds, verdict) =
            exponential_frame_test(&lattice(0.5, 32.0), (-PI, PI), 32).unwrap();
        assert_eq!(verdict, FrameVerdict::FrameLikely, "{bounds:?}");
        assert!(bounds.lower > 0.0);
    }

    #[test]
    fn fourier_sampling_recovers_a_pure_tone() {
        let g = make_grid(-PI, PI, 801).unwrap();
        let f = Signal::from_fn(g, |t| Complex64::new(0.0, 3.0 * t).exp());
        let omegas: Vec<f64> = (-8..=8).map(|n| n as f64).collect();
        let exp = sample_expansion(&KernelSpec::Fourier, &omegas, &f).unwrap();
        for (n, c) in exp.coefficients.iter().enumerate() {
            let freq = n as f64 - 8.0;
            if (freq - 3.0).abs() < 0.5 {
                assert!((c.re - 2.0 * PI).abs() < 1e-6 && c.im.abs() < 1e-6, "{c}");
            } else {
                assert!(c.norm() < 1e-6, "spurious coefficient at {freq}: {c}");
            }
        }
    }

    #[test]
    fn random_mixture_satisfies_sampling_inequality() {
        let g = make_grid(-PI, PI, 801).unwrap();
        let f = Signal::from_fn(g, |t| {
            Complex64::new(0.0, 2.0 * t).exp() * 0.7
                + Complex64::new(0.0, -5.0 * t).exp() * Complex64::new(0.3, 0.4)
        });
        let omegas: Vec<f64> = (-8..=8).map(|n| n as f64).collect();
        let exp = sample_expansion(&KernelSpec::Fourier, &omegas, &f).unwrap();
        assert!(exp.coefficient_energy >= exp.lower * exp.signal_energy - 1e-8);
        assert!(exp.coefficient_energy <= exp.upper * exp.signal_energy + 1e-8);
    }

    #[test]
    fn sparse_samples_miss_a_frequency() {
        let g = make_grid(-PI, PI, 801).unwrap();
        let f = Signal::from_fn(g, |t| Complex64::new(0.0, t).exp());
        let omegas: Vec<f64> = (-4..=4).map(|n| 2.0 * n as f64).collect();
        assert!(matches!(
            sample_expansion(&KernelSpec::Fourier, &omegas, &f),
            Err(QupError::RankDeficientFamily(_))
        ));
    }

    #[test]
    fn indicator_tail_never_terminates() {
        let g = make_grid(-PI, PI, 2001).unwrap();
        let f = Signal::from_real_fn(g, |t| if (0.0..=1.0).contains(&t) { 1.0 } else { 0.0 });
        let rep = fourier_tail_check(&f).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn triangle_bump_tail_never_terminates() {
        let g = make_grid(-PI, PI, 2001).unwrap();
        let f = Signal::from_real_fn(g, |t| {
            let u = (t - 0.25) / 0.25;
            if u.abs() <= 1.0 {
                1.0 - u.abs()
            } else {
                0.0
            }
        });
        let rep = fourier_tail_check(&f).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn full_support_tone_is_rejected() {
        let g = make_grid(-PI, PI, 2001).unwrap();
        let f = Signal::from_fn(g, |t| Complex64::new(0.0, 3.0 * t).exp());
        assert!(matches!(
            fourier_tail_check(&f),
            Err(QupError::FullSupportInput(_))
        ));
    }

    #[test]
    fn sinc_zero_density_is_one_over_pi() {
        let g = make_grid(-200.0, 200.0, 40001).unwrap();
        let f = Signal::from_real_fn(g, |t| if t == 0.0 { 1.0 } else { t.sin() / t });
        let d = zero_density(&f).unwrap();
        assert!((d - 1.0 / PI).abs() < 0.02, "density = {d}");
        // Bandlimit Ω = 1: Corollary-style bound density ≤ Ω/π + slack.
        assert!(d <= 1.0 / PI + 0.1);
    }

    #[test]
    fn pure_tone_has_no_real_zeros() {
        let g = make_grid(-200.0, 200.0, 40001).unwrap();
        let f = Signal::from_fn(g, |t| Complex64::new(0.0, t).exp());
        assert_eq!(zero_density(&f).unwrap(), 0.0);
    }

    #[test]
    fn sine_meets_the_density_bound_with_equality() {
        let g = make_grid(-200.0, 200.0, 40001).unwrap();
        let f = Signal::from_real_fn(g, f64::sin);
        let d = zero_density(&f).unwrap();
        assert!((d - 1.0 / PI).abs() < 0.02, "density = {d}");
    }
}
