//! Dense complex matrix helpers.
//!
//! Everything here works on `nalgebra::DMatrix<Complex64>`; the supported envelope is
//! `d ≤ 64`, so no attempt is made at blocking or sparse storage.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Below this dimension `largest_eigenpair` always uses the full decomposition.
const POWER_ITERATION_MIN_DIM: usize = 24;
const POWER_ITERATION_MAX_STEPS: usize = 10_000;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(d: usize) -> CMatrix {
    CMatrix::zeros(d, d)
}

/// `|v⟩⟨v|`.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// `max_ij |A_ij − conj(A_ji)|`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Returns an error if `m` is not square or not Hermitian within `tol`.
pub fn check_hermitian(m: &CMatrix, tol: f64, what: impl FnOnce() -> String) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(format!("{} is {}x{}, not square", what(), m.nrows(), m.ncols())));
    }
    let residual = hermitian_residual(m);
    if residual > tol {
        return Err(Error::NotHermitian { what: what(), residual });
    }
    Ok(())
}

/// Symmetrizes `(A + A†)/2`; used before handing nearly-Hermitian sums to the eigensolver.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    eigenvalues(m).first().copied().unwrap_or(0.0)
}

pub fn max_eigenvalue(m: &CMatrix) -> f64 {
    max_eigenvalue_with_tol(m, tol::EIGEN)
}

/// Largest eigenvalue; `tol` is the power-iteration convergence threshold for large `m`.
pub fn max_eigenvalue_with_tol(m: &CMatrix, tol: f64) -> f64 {
    if m.nrows() < POWER_ITERATION_MIN_DIM {
        return eigenvalues(m).last().copied().unwrap_or(0.0);
    }
    largest_eigenpair_with_tol(m, tol).0
}

/// Positive semidefinite within `tol` (smallest eigenvalue ≥ −tol).
pub fn check_psd(m: &CMatrix, tol: f64, what: impl FnOnce() -> String) -> Result<()> {
    let min_eigenvalue = min_eigenvalue(m);
    if min_eigenvalue < -tol {
        return Err(Error::NotPositive { what: what(), min_eigenvalue });
    }
    Ok(())
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix.
///
/// Small matrices go through the dense Hermitian solver. Larger ones use power iteration
/// on `X + shift·I` (the shift makes the spectrum nonnegative so the dominant eigenvalue is
/// the largest one), and fall back to the dense solver if the iteration stagnates.
pub fn largest_eigenpair(m: &CMatrix) -> (f64, CVector) {
    largest_eigenpair_with_tol(m, tol::EIGEN)
}

pub fn largest_eigenpair_with_tol(m: &CMatrix, tol: f64) -> (f64, CVector) {
    let n = m.nrows();
    if n == 0 {
        return (0.0, CVector::zeros(0));
    }
    if n >= POWER_ITERATION_MIN_DIM {
        if let Some(pair) = power_iteration(m, tol) {
            return pair;
        }
    }
    dense_largest_eigenpair(m)
}

fn dense_largest_eigenpair(m: &CMatrix) -> (f64, CVector) {
    let eig = hermitian_part(m).symmetric_eigen();
    let (idx, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("nonempty spectrum");
    (value, eig.eigenvectors.column(idx).into_owned())
}

fn power_iteration(m: &CMatrix, tol: f64) -> Option<(f64, CVector)> {
    let n = m.nrows();
    let h = hermitian_part(m);
    // Gershgorin row bound gives a shift making every eigenvalue of h + shift·I nonnegative.
    let shift = (0..n).map(|i| h.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let shifted = &h + identity(n).scale(shift);
    // Deterministic, generic start vector.
    let mut v = CVector::from_fn(n, |i, _| c(1.0 + 0.1 * i as f64, 0.05 * (i % 3) as f64));
    v /= c(v.norm(), 0.0);
    let mut estimate = f64::NAN;
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        let w = &shifted * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return None;
        }
        let next = w / c(norm, 0.0);
        let rayleigh = (next.adjoint() * &h * &next)[(0, 0)].re;
        let converged = (rayleigh - estimate).abs() <= tol * rayleigh.abs().max(1.0);
        estimate = rayleigh;
        v = next;
        if converged {
            let residual = (&h * &v - &v * c(estimate, 0.0)).norm();
            if residual <= 1e-6 * shift.max(1.0) {
                return Some((estimate, v));
            }
        }
    }
    None
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = c(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Real part of `Tr(AB)` after checking the imaginary residue is below `tol`.
pub fn real_trace_product(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<f64> {
    let t = trace_product(a, b);
    if t.im.abs() > tol {
        return Err(Error::NonHermitianResidue(t.im.abs()));
    }
    Ok(t.re)
}

pub fn real_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

/// `max_ij |A_ij − B_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `Tr_A[X]` for `X` acting on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace_first(x: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_b, d_b, |i, j| (0..d_a).map(|k| x[(k * d_b + i, k * d_b + j)]).sum())
}

/// `Tr_B[X]` for `X` acting on `C^{d_a} ⊗ C^{d_b}`.
pub fn partial_trace_second(x: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    CMatrix::from_fn(d_a, d_a, |i, j| (0..d_b).map(|k| x[(i * d_b + k, j * d_b + k)]).sum())
}

/// Row-major `[re, im]` pairs, one inner vector per row.
pub fn to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("row {bad} has {} entries, expected {n}", rows[bad].len())));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

pub fn vector_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}
