use crate::linalg::{c, CMatrix};

/// Generalized Gell-Mann matrices normalized to `Tr(B_i B_j) = δ_ij`.
///
/// Ordering: for each pair `j < k` the symmetric then the antisymmetric element, followed by
/// the `d − 1` diagonal elements.
pub fn gell_mann_basis(d: usize) -> Vec<CMatrix> {
    let mut basis = Vec::with_capacity(d * d - 1);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = c(r, 0.0);
            sym[(k, j)] = c(r, 0.0);
            basis.push(sym);
            let mut anti = CMatrix::zeros(d, d);
            anti[(j, k)] = c(0.0, -r);
            anti[(k, j)] = c(0.0, r);
            basis.push(anti);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for i in 0..l {
            diag[(i, i)] = c(norm, 0.0);
        }
        diag[(l, l)] = c(-(l as f64) * norm, 0.0);
        basis.push(diag);
    }
    basis
}

/// The `M − 1` Helmert rows: an orthonormal basis of the sum-zero subspace of `R^M`.
pub fn helmert_rows(m: usize) -> Vec<Vec<f64>> {
    (1..m)
        .map(|j| {
            let norm = 1.0 / ((j * (j + 1)) as f64).sqrt();
            (0..m)
                .map(|k| match k.cmp(&j) {
                    std::cmp::Ordering::Less => norm,
                    std::cmp::Ordering::Equal => -(j as f64) * norm,
                    std::cmp::Ordering::Greater => 0.0,
                })
                .collect()
        })
        .collect()
}

/// Maps `M − 1` orthonormal operators onto the `M` unit vertices of a regular simplex:
/// `Ĝ_k = Σ_j h_j[k] B_j / √(1 − 1/M)`.
pub fn simplex_from_orthonormal(ops: &[CMatrix]) -> Vec<CMatrix> {
    let m = ops.len() + 1;
    let d = ops[0].nrows();
    let rows = helmert_rows(m);
    let norm = 1.0 / (1.0 - 1.0 / m as f64).sqrt();
    (0..m)
        .map(|k| {
            rows.iter().zip(ops).fold(CMatrix::zeros(d, d), |acc, (h, b)| acc + b.scale(h[k] * norm))
        })
        .collect()
}
