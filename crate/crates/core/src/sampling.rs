//! Random states, operators and response strategies for property checks.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::linalg::{self, c, CMatrix, CVector};
use crate::steering::LhsStrategy;

/// Complex Ginibre matrix with independent standard normal real and imaginary parts.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Random positive semidefinite `d×d` matrix of the given rank (`G G†`).
pub fn random_psd<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> CMatrix {
    let g = ginibre(rng, d, rank);
    linalg::hermitian_part(&(&g * g.adjoint()))
}

/// Random density matrix (Hilbert–Schmidt measure for full rank).
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let m = random_psd(rng, dim, dim);
    let t = linalg::real_trace(&m);
    m.scale(1.0 / t)
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let n = v.norm();
    v / c(n, 0.0)
}

/// Uniform point on the probability simplex with `m` vertices.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Stochastic response strategy with independent uniform rows.
pub fn random_strategy<R: Rng + ?Sized>(rng: &mut R, outcomes: &[usize]) -> LhsStrategy {
    let rows = outcomes.iter().map(|&m| random_distribution(rng, m)).collect();
    LhsStrategy::new(rows).expect("simplex samples are valid rows")
}

pub fn random_deterministic_strategy<R: Rng + ?Sized>(rng: &mut R, outcomes: &[usize]) -> LhsStrategy {
    let choice: Vec<usize> = outcomes.iter().map(|&m| rng.random_range(0..m)).collect();
    LhsStrategy::deterministic(&choice, outcomes).expect("choices are in range")
}

/// Random `m`-outcome POVM on `C^d`: `P_k = S^{-1/2} G_k S^{-1/2}` with `S = Σ_k G_k`.
pub fn random_povm<R: Rng + ?Sized>(rng: &mut R, d: usize, m: usize) -> Vec<CMatrix> {
    let raw: Vec<CMatrix> = (0..m).map(|_| random_psd(rng, d, d)).collect();
    let sum = raw.iter().fold(linalg::zeros(d), |acc, g| acc + g);
    let eig = sum.symmetric_eigen();
    let inv_sqrt = CVector::from_iterator(d, eig.eigenvalues.iter().map(|&l| c(1.0 / l.sqrt(), 0.0)));
    let s = &eig.eigenvectors * CMatrix::from_diagonal(&inv_sqrt) * eig.eigenvectors.adjoint();
    raw.iter().map(|g| linalg::hermitian_part(&(&s * g * &s))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn povm_resolves_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let povm = random_povm(&mut rng, 4, 6);
        let sum = povm.iter().fold(linalg::zeros(4), |acc, p| acc + p);
        assert!(linalg::max_abs_diff(&sum, &linalg::identity(4)) < 1e-12);
        assert!(povm.iter().all(|p| linalg::min_eigenvalue(p) > -1e-12));
    }

    #[test]
    fn density_matrix_has_unit_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density_matrix(&mut rng, 6);
        assert!((linalg::real_trace(&rho) - 1.0).abs() < 1e-13);
        assert!(linalg::min_eigenvalue(&rho) > -1e-13);
    }
}
