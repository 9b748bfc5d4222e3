//! Eigenvalue windows for the response operator.
//!
//! For a Hermitian `d×d` matrix `X` with `m = Tr X / d` and
//! `s² = (Tr X² − d m²)/(d − 1)`, every eigenvalue lies in `m ± s (d − 1)/√d`.
//!
//! For `X = Y_λ = Σ_{α,k} p(k|α) P_{α,k}` built from a GEAM, `Tr Y = A = Σ_α a_α` and
//! `Tr Y² = A² f + Σ_α a_α² (f − c_α)(M_α C_α − 1)` with `C_α` the index of coincidence of
//! row `α`. Since `C_α ≤ 1`, replacing `C_α` by one gives a strategy-independent window
//! whose edges are `ξ± = (1/d)[A ± √((d − 1) Σ_α a_α² (d b_α − 1))]`.

use serde::Serialize;

use crate::error::{Constraint, Error, Result};
use crate::geam::SettingsView;
use crate::linalg::{self, CMatrix};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralWindow {
    pub mean: f64,
    pub spread: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Generalized Samuelson window containing every eigenvalue of `x`.
pub fn samuelson_bounds(x: &CMatrix) -> Result<SpectralWindow> {
    linalg::check_hermitian(x, tol::HERMITIAN, || "X".into())?;
    let d = x.nrows();
    if d < 2 {
        return Err(Error::ShapeMismatch(format!("window needs d >= 2, got {d}")));
    }
    let d_f = d as f64;
    let mean = linalg::real_trace(x) / d_f;
    let square = linalg::trace_product(x, x).re;
    let mut variance = (square - d_f * mean * mean) / (d_f - 1.0);
    if variance < 0.0 {
        if variance < -tol::IMAGINARY * square.max(1.0) {
            return Err(Error::NegativeVariance(variance));
        }
        variance = 0.0;
    }
    let spread = variance.sqrt();
    let half_width = spread * (d_f - 1.0) / d_f.sqrt();
    Ok(SpectralWindow { mean, spread, lower: mean - half_width, upper: mean + half_width })
}

/// `ξ±` and the quantities they are assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XiBounds {
    pub minus: f64,
    pub plus: f64,
    /// `A = Σ_α a_α`
    pub trace_sum: f64,
    /// `s̃ = √(Σ_α a_α² (b_α − 1/d) / (d − 1))`
    pub spread_bound: f64,
}

/// Analytic bounds on `η_max(Y_λ)` valid for every response strategy over the view's settings.
pub fn xi_bounds(view: &SettingsView) -> XiBounds {
    let d = view.d() as f64;
    let trace_sum = view.trace_sum();
    let weighted: f64 = view.settings().iter().map(|s| s.trace_scale.powi(2) * (d * s.purity - 1.0)).sum();
    let root = ((d - 1.0) * weighted).max(0.0).sqrt();
    let spread_bound = (weighted / d / (d - 1.0)).max(0.0).sqrt();
    XiBounds { minus: (trace_sum - root) / d, plus: (trace_sum + root) / d, trace_sum, spread_bound }
}

/// Closed forms of `(Tr Y, Tr Y²)` given per-setting coincidence indices.
pub fn trace_moments_closed_form(view: &SettingsView, coincidence: &[f64]) -> Result<(f64, f64)> {
    if coincidence.len() != view.len() {
        return Err(Error::ShapeMismatch(format!("{} indices for {} settings", coincidence.len(), view.len())));
    }
    let f = view.cross();
    let trace_sum = view.trace_sum();
    let mut square = trace_sum * trace_sum * f;
    for (s, &c) in view.settings().iter().zip(coincidence) {
        let m = s.outcomes as f64;
        if !(c >= 1.0 / m - tol::CONSTRAINT && c <= 1.0 + tol::CONSTRAINT) {
            return Err(Error::admissibility(
                Constraint::CoincidenceRange,
                format!("C = {c} outside [1/{}, 1] for setting {}", s.outcomes, s.index + 1),
            ));
        }
        square += s.trace_scale * s.trace_scale * (f - s.offdiag) * (m * c - 1.0);
    }
    Ok((trace_sum, square))
}
