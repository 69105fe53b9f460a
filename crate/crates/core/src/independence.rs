//! Linear-independence diagnostics for finite function families.
//!
//! A family `{K_1, ..., K_n}` sampled on one grid can be probed for
//! independence in several ways:
//!
//! - the Wronskian determinant `det [ K_j^{(i-1)}(t0) ]` for smooth families;
//! - the mollified (general) Wronskian `det [ (K_j * g^{(i-1)})(t0) ]` with a
//!   truncated-Gaussian mollifier `g`, which only needs the family itself to
//!   be integrable;
//! - sampling matrices `Ψ_{ij} = K_i(t_j)` over abscissa sets, with a greedy
//!   search for abscissae that keep the matrix well conditioned;
//! - the dimension of the span plus pointwise interpolants that reconstruct
//!   every member from its values at finitely many abscissae;
//! - a bivariate (mixed-partial) Wronskian rank for two-variable kernels
//!   `K(omega, t)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::QupError;
use crate::grid::{Grid, Signal};
use crate::linalg;

/// Analytic derivative rule: `(member, order, t) -> K_member^{(order)}(t)`.
pub type DerivativeRule = Arc<dyn Fn(usize, u32, f64) -> Complex64 + Send + Sync>;

/// A finite family of functions sampled on a common grid, optionally with an
/// analytic derivative rule for exact Wronskians.
#[derive(Clone)]
pub struct FunctionFamily {
    members: Vec<Signal>,
    derivative_rule: Option<DerivativeRule>,
}

impl fmt::Debug for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionFamily")
            .field("members", &self.members.len())
            .field("grid", &self.grid())
            .field("analytic_derivatives", &self.derivative_rule.is_some())
            .finish()
    }
}

impl FunctionFamily {
    /// Build from sampled members; all grids must agree.
    pub fn from_signals(members: Vec<Signal>) -> Result<Self, QupError> {
        let first = members
            .first()
            .ok_or_else(|| QupError::InvalidInput("family must have at least one member".into()))?;
        let grid = first.grid;
        for m in &members {
            if m.grid != grid {
                return Err(QupError::ShapeMismatch(
                    "family members live on different grids".into(),
                ));
            }
        }
        Ok(FunctionFamily {
            members,
            derivative_rule: None,
        })
    }

    /// Sample closures on `grid`.
    pub fn from_fns(
        grid: Grid,
        fns: &[&dyn Fn(f64) -> Complex64],
    ) -> Result<Self, QupError> {
        let members = fns.iter().map(|f| Signal::from_fn(grid, f)).collect();
        FunctionFamily::from_signals(members)
    }

    /// Attach an analytic derivative rule (order 0 must reproduce the member).
    pub fn with_derivative_rule(mut self, rule: DerivativeRule) -> Self {
        self.derivative_rule = Some(rule);
        self
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Whether the family is empty (never true after construction).
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The shared sampling grid.
    pub fn grid(&self) -> Grid {
        self.members[0].grid
    }

    /// The sampled members.
    pub fn members(&self) -> &[Signal] {
        &self.members
    }

    /// Evaluate member `j` at `t` (linear interpolation).
    pub fn eval(&self, j: usize, t: f64) -> Complex64 {
        self.members[j].eval(t)
    }

    /// Derivative of member `j` of the given order at `t`. Uses the analytic
    /// rule when present, otherwise nested fourth-order central differences
    /// on the interpolated samples.
    pub fn derivative(&self, j: usize, order: u32, t: f64) -> Result<Complex64, QupError> {
        if let Some(rule) = &self.derivative_rule {
            return Ok(rule(j, order, t));
        }
        if order == 0 {
            return Ok(self.eval(j, t));
        }
        let grid = self.grid();
        let h = 2.0 * grid.spacing;
        let reach = 2.0 * h * order as f64;
        if t - reach < grid.a || t + reach > grid.b {
            return Err(QupError::DerivativeUnavailable(format!(
                "order-{order} stencil at t = {t} leaves the sampled interval [{}, {}]",
                grid.a, grid.b
            )));
        }
        let member = &self.members[j];
        let f: &dyn Fn(f64) -> Complex64 = &|x| member.eval(x);
        Ok(central_derivative(f, order, t, h))
    }

    /// Coordinate matrix: entry `(i, j)` is member `j` at grid node `i`.
    pub fn coordinate_matrix(&self) -> DMatrix<Complex64> {
        let grid = self.grid();
        DMatrix::from_fn(grid.n, self.members.len(), |i, j| self.members[j].values[i])
    }
}

/// Nested fourth-order central first-derivative stencil, applied `order`
/// times with step `h`.
fn central_derivative(f: &dyn Fn(f64) -> Complex64, order: u32, x: f64, h: f64) -> Complex64 {
    if order == 0 {
        return f(x);
    }
    let g = |y: f64| central_derivative(f, order - 1, y, h);
    (-g(x + 2.0 * h) + g(x + h) * 8.0 - g(x - h) * 8.0 + g(x - 2.0 * h)) / (12.0 * h)
}

/// Wronskian matrix `W_{ij} = K_j^{(i)}(t0)` for `i, j = 0..n-1`.
pub fn wronskian_matrix(
    family: &FunctionFamily,
    t0: f64,
) -> Result<DMatrix<Complex64>, QupError> {
    let n = family.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = family.derivative(j, i as u32, t0)?;
        }
    }
    Ok(m)
}

/// Wronskian determinant of the family at `t0`. A nonzero value certifies
/// linear independence of the family near `t0`.
pub fn wronskian_det(family: &FunctionFamily, t0: f64) -> Result<Complex64, QupError> {
    Ok(linalg::det(&wronskian_matrix(family, t0)?))
}

/// Truncated-Gaussian mollifier with standard deviation `sigma`, supported on
/// `[-cut * sigma, cut * sigma]` and normalized to unit integral.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    /// Gaussian width parameter.
    pub sigma: f64,
    /// Support half-width in units of `sigma`.
    pub cut: f64,
    norm: f64,
}

impl Mollifier {
    /// Standard mollifier with support `[-6σ, 6σ]` (tail mass ~2e-9 before
    /// renormalization).
    pub fn new(sigma: f64) -> Result<Self, QupError> {
        Mollifier::with_cut(sigma, 6.0)
    }

    /// Mollifier with a custom support half-width `cut * sigma`.
    pub fn with_cut(sigma: f64, cut: f64) -> Result<Self, QupError> {
        if !(sigma > 0.0 && sigma.is_finite()) || !(cut > 0.0 && cut.is_finite()) {
            return Err(QupError::InvalidInput(format!(
                "mollifier needs positive finite sigma and cut, got sigma = {sigma}, cut = {cut}"
            )));
        }
        let mut m = Mollifier { sigma, cut, norm: 1.0 };
        // Normalize numerically so the truncated density integrates to 1.
        let nodes = 8001;
        let span = 2.0 * cut * sigma;
        let h = span / (nodes - 1) as f64;
        let mut total = 0.0;
        for i in 0..nodes {
            let x = -cut * sigma + i as f64 * h;
            let w = if i == 0 || i == nodes - 1 { h / 2.0 } else { h };
            total += m.raw(x) * w;
        }
        m.norm = 1.0 / total;
        Ok(m)
    }

    fn raw(&self, x: f64) -> f64 {
        if x.abs() > self.cut * self.sigma {
            0.0
        } else {
            (-(x * x) / (2.0 * self.sigma * self.sigma)).exp()
                / (self.sigma * (2.0 * std::f64::consts::PI).sqrt())
        }
    }

    /// Density value at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.norm * self.raw(x)
    }

    /// `m`-th derivative of the density at `x`, via the Hermite-polynomial
    /// form `g^(m)(x) = (-1)^m (σ√2)^{-m} H_m(x / (σ√2)) g(x)`.
    pub fn derivative(&self, m: u32, x: f64) -> f64 {
        if x.abs() > self.cut * self.sigma {
            return 0.0;
        }
        let s = self.sigma * std::f64::consts::SQRT_2;
        let u = x / s;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sign * hermite_phys(m, u) / s.powi(m as i32) * self.eval(x)
    }
}

/// Physicists' Hermite polynomial `H_m(u)` by the three-term recurrence.
fn hermite_phys(m: u32, u: f64) -> f64 {
    let mut h0 = 1.0;
    if m == 0 {
        return h0;
    }
    let mut h1 = 2.0 * u;
    for k in 1..m {
        let h2 = 2.0 * u * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Mollified Wronskian matrix: entry `(i, j)` is `(K_j * g^{(i)})(t0)`,
/// computed by quadrature over the family grid. Only integrability of the
/// members is needed; all smoothness is carried by the mollifier.
pub fn general_wronskian_matrix(
    family: &FunctionFamily,
    t0: f64,
    mollifier: &Mollifier,
) -> Result<DMatrix<Complex64>, QupError> {
    let n = family.len();
    let grid = family.grid();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        // Precompute g^{(i)}(t0 - s) at every grid node.
        let kernel_vals: Vec<f64> = (0..grid.n)
            .map(|k| mollifier.derivative(i as u32, t0 - grid.node(k)))
            .collect();
        for j in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..grid.n {
                acc += family.members[j].values[k] * kernel_vals[k] * grid.weight(k);
            }
            m[(i, j)] = acc;
        }
    }
    Ok(m)
}

/// Mollified (general) Wronskian determinant at `t0`.
pub fn general_wronskian_det(
    family: &FunctionFamily,
    t0: f64,
    mollifier: &Mollifier,
) -> Result<Complex64, QupError> {
    Ok(linalg::det(&general_wronskian_matrix(family, t0, mollifier)?))
}

/// A family evaluated on a finite abscissa set: `matrix[(i, j)] = K_i(t_j)`.
#[derive(Debug, Clone)]
pub struct SamplingMatrix {
    /// The abscissae, in the order of the matrix columns.
    pub points: Vec<f64>,
    /// Entry `(i, j) = K_i(points[j])`.
    pub matrix: DMatrix<Complex64>,
    /// Singular values of the matrix, decreasing.
    pub singular_values: Vec<f64>,
}

/// Evaluate the family on the given abscissae.
pub fn sampling_matrix(family: &FunctionFamily, points: &[f64]) -> Result<SamplingMatrix, QupError> {
    let grid = family.grid();
    for &p in points {
        if !grid.contains(p) {
            return Err(QupError::EvaluationDomain(format!(
                "abscissa {p} lies outside the sampled interval [{}, {}]",
                grid.a, grid.b
            )));
        }
    }
    let matrix = DMatrix::from_fn(family.len(), points.len(), |i, j| family.eval(i, points[j]));
    let singular_values = linalg::singular_values(&matrix);
    Ok(SamplingMatrix {
        points: points.to_vec(),
        matrix,
        singular_values,
    })
}

/// Greedily grow an abscissa set of size `n = family.len()` whose sampling
/// matrix stays as well-conditioned as possible: at each step the candidate
/// grid node maximizing the smallest singular value of the running matrix is
/// appended. Fails with `RankDeficientFamily` when the final matrix has
/// condition worse than `1e8` (the family itself is numerically dependent).
pub fn find_full_rank_samples(family: &FunctionFamily) -> Result<SamplingMatrix, QupError> {
    find_samples_for(family, family.len())
}

/// Greedy abscissa search for an arbitrary target point count.
pub fn find_samples_for(family: &FunctionFamily, count: usize) -> Result<SamplingMatrix, QupError> {
    let grid = family.grid();
    // Cap the candidate pool so the greedy SVD loop stays cheap.
    let max_candidates = 257;
    let stride = grid.n.div_ceil(max_candidates).max(1);
    let candidates: Vec<f64> = (0..grid.n).step_by(stride).map(|i| grid.node(i)).collect();
    let mut chosen: Vec<f64> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(f64, f64)> = None; // (sigma_min, point)
        for &c in &candidates {
            if chosen.iter().any(|&p| (p - c).abs() < 0.5 * grid.spacing) {
                continue;
            }
            let mut pts = chosen.clone();
            pts.push(c);
            let m = DMatrix::from_fn(family.len(), pts.len(), |i, j| family.eval(i, pts[j]));
            let s = linalg::singular_values(&m);
            let smin = *s.last().unwrap_or(&0.0);
            if best.map_or(true, |(bs, _)| smin > bs) {
                best = Some((smin, c));
            }
        }
        let (_, point) = best.ok_or_else(|| {
            QupError::RankDeficientFamily("no candidate abscissae remain".into())
        })?;
        chosen.push(point);
    }
    let result = sampling_matrix(family, &chosen)?;
    let smax = result.singular_values.first().copied().unwrap_or(0.0);
    let smin = result.singular_values.last().copied().unwrap_or(0.0);
    if smax <= 0.0 || smin / smax < 1e-8 {
        return Err(QupError::RankDeficientFamily(format!(
            "best abscissa set still has relative smallest singular value {:.3e}",
            if smax > 0.0 { smin / smax } else { 0.0 }
        )));
    }
    Ok(result)
}

/// Span dimension of a family plus pointwise interpolants.
#[derive(Debug, Clone)]
pub struct DfsReport {
    /// Numerical dimension `m` of the span.
    pub rank: usize,
    /// Indices of the `m` members chosen as a basis.
    pub basis_members: Vec<usize>,
    /// The `m` abscissae carrying the reconstruction.
    pub points: Vec<f64>,
    /// Interpolants `S_j` with `K_i(t) = Σ_j K_i(t_j) S_j(t)` for every
    /// member of the family (basis or not).
    pub interpolants: Vec<Signal>,
    /// Largest relative reconstruction error over all members.
    pub max_relative_error: f64,
}

/// Compute the span dimension of the family in weighted L², select a basis
/// sub-family and abscissae, and build interpolants that reconstruct every
/// member from its values at those abscissae.
pub fn dfs_rank_and_interpolants(family: &FunctionFamily) -> Result<DfsReport, QupError> {
    let grid = family.grid();
    let weights = grid.weights();
    let coords = family.coordinate_matrix();
    let weighted = linalg::weight_scaled(&coords, &weights, &vec![1.0; family.len()])?;
    let svals = linalg::singular_values(&weighted);
    let rank = linalg::numerical_rank(&svals, linalg::RANK_REL_TOL);
    if rank == 0 {
        return Err(QupError::RankDeficientFamily(
            "the family is numerically zero".into(),
        ));
    }

    // Greedy basis selection by Gram-Schmidt residual in weighted L².
    let mut basis_members: Vec<usize> = Vec::with_capacity(rank);
    let mut ortho: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(rank);
    let columns: Vec<nalgebra::DVector<Complex64>> =
        (0..family.len()).map(|j| weighted.column(j).into_owned()).collect();
    for _ in 0..rank {
        let mut best: Option<(f64, usize, nalgebra::DVector<Complex64>)> = None;
        for (j, col) in columns.iter().enumerate() {
            if basis_members.contains(&j) {
                continue;
            }
            let mut r = col.clone();
            for q in &ortho {
                let c = q.dotc(&r);
                r -= q * c;
            }
            let rn = r.norm();
            if best.as_ref().map_or(true, |(bn, _, _)| rn > *bn) {
                best = Some((rn, j, r));
            }
        }
        let (rn, j, r) = best.ok_or_else(|| {
            QupError::RankDeficientFamily("ran out of members during basis selection".into())
        })?;
        if rn <= 0.0 {
            return Err(QupError::RankDeficientFamily(
                "residuals vanished before reaching the computed rank".into(),
            ));
        }
        basis_members.push(j);
        ortho.push(r / Complex64::new(rn, 0.0));
    }

    // Abscissae that keep the basis sub-family's sampling matrix invertible.
    let basis_family = FunctionFamily::from_signals(
        basis_members.iter().map(|&j| family.members[j].clone()).collect(),
    )?;
    let samples = find_full_rank_samples(&basis_family)?;
    let points = samples.points.clone();

    // Interpolants: S(t) = Ψ^{-1} · [K_basis(t)], so that
    // K_basis_i(t) = Σ_j Ψ_{ij} S_j(t) holds by construction.
    let lu = samples.matrix.clone().lu();
    let mut interp_values = vec![vec![Complex64::ZERO; grid.n]; rank];
    for node in 0..grid.n {
        let rhs = nalgebra::DVector::from_fn(rank, |i, _| basis_family.members[i].values[node]);
        let sol = lu.solve(&rhs).ok_or_else(|| {
            QupError::RankDeficientFamily("sampling matrix was singular during solve".into())
        })?;
        for j in 0..rank {
            interp_values[j][node] = sol[j];
        }
    }
    let interpolants: Vec<Signal> = interp_values
        .into_iter()
        .map(|v| Signal::new(grid, v))
        .collect::<Result<_, _>>()?;

    // Verify the pointwise reconstruction on every member, basis or not.
    let mut max_relative_error: f64 = 0.0;
    for member in &family.members {
        let norm = member.norm();
        if norm == 0.0 {
            continue;
        }
        let samples_at_points: Vec<Complex64> = points.iter().map(|&p| member.eval(p)).collect();
        let mut recon = Signal::zeros(grid);
        for (j, s) in interpolants.iter().enumerate() {
            for node in 0..grid.n {
                recon.values[node] += samples_at_points[j] * s.values[node];
            }
        }
        let err = member.sub(&recon)?.norm() / norm;
        max_relative_error = max_relative_error.max(err);
    }

    Ok(DfsReport {
        rank,
        basis_members,
        points,
        interpolants,
        max_relative_error,
    })
}

/// A two-variable kernel that can report mixed partial derivatives
/// `∂_t^i ∂_ω^j K(ω, t)`; the default falls back to nested central
/// differences on [`BivariateKernel::eval`].
pub trait BivariateKernel {
    /// Kernel value `K(omega, t)`.
    fn eval(&self, omega: f64, t: f64) -> Complex64;

    /// Mixed partial `∂_t^{dt} ∂_ω^{domega} K(omega, t)`.
    fn mixed_partial(&self, dt: u32, domega: u32, omega: f64, t: f64) -> Complex64 {
        let h_t = 1e-3;
        let h_w = 1e-3;
        let f_t: &dyn Fn(f64) -> Complex64 = &|tt| {
            let f_w: &dyn Fn(f64) -> Complex64 = &|ww| self.eval(ww, tt);
            central_derivative(f_w, domega, omega, h_w)
        };
        central_derivative(f_t, dt, t, h_t)
    }
}

/// Bivariate Wronskian matrix of order `n` at `(omega0, t0)`: entry `(i, j)`
/// is the mixed partial of `t`-order `i` and `ω`-order `j`.
pub fn cfs_wronskian_matrix<K: BivariateKernel + ?Sized>(
    kernel: &K,
    omega0: f64,
    t0: f64,
    n: usize,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| {
        kernel.mixed_partial(i as u32, j as u32, omega0, t0)
    })
}

/// Largest order `n <= nmax` for which the bivariate Wronskian determinant at
/// `(omega0, t0)` stays away from zero (relative to the matrix scale).
/// Returns 0 when even the 1x1 determinant, the kernel value itself,
/// vanishes.
pub fn cfs_wronskian_rank<K: BivariateKernel + ?Sized>(
    kernel: &K,
    omega0: f64,
    t0: f64,
    nmax: usize,
) -> usize {
    let mut rank = 0;
    for n in 1..=nmax {
        let m = cfs_wronskian_matrix(kernel, omega0, t0, n);
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            break;
        }
        let d = linalg::det(&m).norm();
        if d > 1e-10 * scale.powi(n as i32) {
            rank = n;
        } else {
            break;
        }
    }
    rank
}
