//! Dense linear-algebra helpers shared across the toolkit.
//!
//! Everything works on `nalgebra::DMatrix<Complex64>`; quadrature weights
//! enter through symmetric `W^{1/2} · M · W^{1/2}` scalings so that Euclidean
//! spectra of the scaled matrices match the weighted-L² quantities.

use nalgebra::{Cholesky, DMatrix, Dyn};
use num_complex::Complex64;

use crate::error::QupError;

/// Relative singular-value cutoff used for numerical ranks throughout.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Singular values of `m`, sorted in decreasing order.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank: number of singular values above `rel_tol * s_max`.
pub fn numerical_rank(svals: &[f64], rel_tol: f64) -> usize {
    match svals.first() {
        Some(&smax) if smax > 0.0 => svals.iter().filter(|&&s| s > rel_tol * smax).count(),
        _ => 0,
    }
}

/// Eigen-decomposition of a Hermitian matrix. Returns eigenvalues in
/// increasing order together with the matching eigenvector columns.
/// The input is symmetrized as `(M + M^H) / 2` first to shed roundoff.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub fn hermitian_extremes(m: &DMatrix<Complex64>) -> (f64, f64) {
    let (vals, _) = hermitian_eigen(m);
    (*vals.first().unwrap_or(&0.0), *vals.last().unwrap_or(&0.0))
}

/// Determinant of a square complex matrix.
pub fn det(m: &DMatrix<Complex64>) -> Complex64 {
    m.clone().lu().determinant()
}

/// Scale a matrix symmetrically by diagonal weights: returns
/// `diag(sqrt(w_row)) · M · diag(sqrt(w_col))`.
pub fn weight_scaled(
    m: &DMatrix<Complex64>,
    w_row: &[f64],
    w_col: &[f64],
) -> Result<DMatrix<Complex64>, QupError> {
    if m.nrows() != w_row.len() || m.ncols() != w_col.len() {
        return Err(QupError::ShapeMismatch(format!(
            "matrix is {}x{} but weights have lengths {} and {}",
            m.nrows(),
            m.ncols(),
            w_row.len(),
            w_col.len()
        )));
    }
    let mut out = m.clone();
    for i in 0..out.nrows() {
        let sr = w_row[i].sqrt();
        for j in 0..out.ncols() {
            out[(i, j)] *= sr * w_col[j].sqrt();
        }
    }
    Ok(out)
}

/// Weighted Gram matrix `G_{ij} = Σ_k w_k · conj(M_{ki}) · M_{kj}` of the
/// columns of `M`, i.e. `M^H diag(w) M`. Hermitian positive semidefinite.
pub fn weighted_gram(m: &DMatrix<Complex64>, w: &[f64]) -> Result<DMatrix<Complex64>, QupError> {
    if m.nrows() != w.len() {
        return Err(QupError::ShapeMismatch(format!(
            "matrix has {} rows but {} weights were supplied",
            m.nrows(),
            w.len()
        )));
    }
    let mut scaled = m.clone();
    for i in 0..scaled.nrows() {
        let s = Complex64::new(w[i].sqrt(), 0.0);
        for j in 0..scaled.ncols() {
            scaled[(i, j)] *= s;
        }
    }
    Ok(scaled.adjoint() * &scaled)
}

/// Largest generalized ratio `max_c ||D c||_W / ||B c||_W` over nonzero
/// coefficient vectors `c`, where columns of `D` and `B` are sampled
/// functions and `w` holds quadrature weights on the sample axis.
///
/// Solves the Hermitian pencil `(D^H W D, B^H W B)` via a Cholesky factor of
/// the base Gram matrix; fails with `IllConditioned` when the base family is
/// numerically degenerate.
pub fn largest_generalized_ratio(
    d: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    w: &[f64],
) -> Result<f64, QupError> {
    if d.ncols() != b.ncols() {
        return Err(QupError::ShapeMismatch(format!(
            "difference map has {} columns, base map has {}",
            d.ncols(),
            b.ncols()
        )));
    }
    let gd = weighted_gram(d, w)?;
    let gb = weighted_gram(b, w)?;
    let chol: Cholesky<Complex64, Dyn> = Cholesky::new(gb).ok_or_else(|| {
        QupError::IllConditioned(
            "base family Gram matrix is not positive definite; the base system is numerically dependent"
                .into(),
        )
    })?;
    let l = chol.l();
    // M = L^{-1} · Gd · L^{-H}, Hermitian with the pencil's eigenvalues.
    let z = l.solve_lower_triangular(&gd).ok_or_else(|| {
        QupError::IllConditioned("triangular solve failed on base Gram factor".into())
    })?;
    let m_t = l.solve_lower_triangular(&z.adjoint()).ok_or_else(|| {
        QupError::IllConditioned("triangular solve failed on base Gram factor".into())
    })?;
    let m = m_t.adjoint();
    let (vals, _) = hermitian_eigen(&m);
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}

/// Eigenvalues (as complex numbers) of a square complex matrix via its Schur
/// form. Used for companion-matrix root finding.
pub fn complex_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>, QupError> {
    let schur = m.clone().try_schur(1e-12, 10_000).ok_or_else(|| {
        QupError::IllConditioned("Schur iteration failed to converge".into())
    })?;
    // For a complex matrix the Schur form is upper triangular, so the
    // eigenvalues sit on its diagonal.
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rank_of_outer_product_is_one() {
        let u = DMatrix::from_fn(5, 1, |i, _| cx(i as f64 + 1.0, 0.3 * i as f64));
        let m = &u * u.adjoint();
        let s = singular_values(&m);
        assert_eq!(numerical_rank(&s, RANK_REL_TOL), 1);
    }

    #[test]
    fn hermitian_extremes_of_diagonal() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cx(3.0, 0.0),
            cx(-1.0, 0.0),
            cx(0.5, 0.0),
        ]));
        let (lo, hi) = hermitian_extremes(&m);
        assert_relative_eq!(lo, -1.0, epsilon = 1e-12);
        assert_relative_eq!(hi, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn determinant_of_known_complex_matrix() {
        // det [[1, i], [i, 1]] = 1 - i^2 = 2.
        let m = DMatrix::from_row_slice(2, 2, &[cx(1.0, 0.0), cx(0.0, 1.0), cx(0.0, 1.0), cx(1.0, 0.0)]);
        let d = det(&m);
        assert_relative_eq!(d.re, 2.0, epsilon = 1e-12);
        assert_relative_eq!(d.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn generalized_ratio_matches_hand_computation() {
        // Base = identity columns, difference = 0.25 * base: ratio 0.25.
        let b = DMatrix::identity(4, 4);
        let d = &b * cx(0.25, 0.0);
        let w = vec![1.0; 4];
        let r = largest_generalized_ratio(&d, &b, &w).unwrap();
        assert_relative_eq!(r, 0.25, epsilon = 1e-10);
    }

    #[test]
    fn companion_eigenvalues_recover_roots() {
        // z^2 - 3z + 2 = (z - 1)(z - 2): companion [[0, -2], [1, 3]].
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[cx(0.0, 0.0), cx(-2.0, 0.0), cx(1.0, 0.0), cx(3.0, 0.0)],
        );
        let mut roots = complex_eigenvalues(&m).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_relative_eq!(roots[0].re, 1.0, epsilon = 1e-9);
        assert_relative_eq!(roots[1].re, 2.0, epsilon = 1e-9);
    }
}
