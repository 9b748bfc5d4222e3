//! Numerical tolerances shared across the crate.

/// Absolute slack for scalar parameter constraints (weight sums, `b_α` window upper edge).
pub const CONSTRAINT: f64 = 1e-9;
/// Margin that keeps the open lower edge `b_α > 1/d` meaningful in floating point.
pub const PURITY_FLOOR: f64 = 1e-12;
/// Entrywise `‖A − A†‖_max` accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite (eigensolver noise).
pub const PSD: f64 = 1e-9;
/// Entrywise residual of `Σ_k P_{α,k} = γ_α I`.
pub const RESOLUTION: f64 = 1e-9;
/// Entrywise nonsignaling residual between normalized marginals.
pub const NONSIGNALING: f64 = 1e-8;
/// Row-sum slack for response distributions.
pub const STRATEGY_ROW: f64 = 1e-12;
/// Imaginary part tolerated (then dropped) in traces of Hermitian products.
pub const IMAGINARY: f64 = 1e-10;
/// Convergence threshold for power iteration.
pub const EIGEN: f64 = 1e-12;

/// Overridable tolerance set, used where callers (the CLI in particular) need control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub constraint: f64,
    pub hermitian: f64,
    pub psd: f64,
    pub relation: f64,
    pub eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { constraint: CONSTRAINT, hermitian: HERMITIAN, psd: PSD, relation: RESOLUTION, eig: EIGEN }
    }
}
