use serde::Serialize;

use super::lhs::{lhs_value, LhsOptions};
use super::spectral::xi_bounds;
use crate::error::{Error, Result};
use crate::geam::{SettingSelection, SettingsView};
use crate::linalg::{self, vector_to_pairs};
use crate::operators::MeasurementFamily;
use crate::tol;

/// Largest bipartite dimension `d²` for which [`physical_quantum_value`] is computed.
pub const PHYSICAL_VALUE_MAX_DIM: usize = 256;

/// `S_Q = Σ_α γ_α` over the selected settings, attained by `σ_{α,k} = I/d`.
pub fn quantum_value(view: &SettingsView) -> f64 {
    view.total_weight()
}

/// Best value of the functional `F = {P_{α,k}}` over assemblages produced when Alice measures
/// the normalized family `{P_{α,k}/γ_α}` on a shared state:
/// `max_ρ Σ_{α,k} Tr[(P_{α,k}/γ_α ⊗ P_{α,k}) ρ] = λ_max(Σ_{α,k} P_{α,k} ⊗ P_{α,k} / γ_α)`.
///
/// Returns `None` when `d²` exceeds [`PHYSICAL_VALUE_MAX_DIM`].
pub fn physical_quantum_value(fam: &MeasurementFamily) -> Option<f64> {
    let d = fam.d();
    if d * d > PHYSICAL_VALUE_MAX_DIM {
        return None;
    }
    let mut total = linalg::zeros(d * d);
    for (ops, &g) in fam.settings().iter().zip(fam.weights()) {
        for p in ops {
            total += linalg::kron(&p.scale(1.0 / g), p);
        }
    }
    Some(linalg::max_eigenvalue(&total))
}

/// Bounds, exact LHS value and violation ratio for one setting selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub d: usize,
    /// One-based setting indices.
    pub selection: Vec<usize>,
    pub subnormalized: bool,
    /// `A = Σ_α a_α`
    pub a_sum: f64,
    pub s_tilde: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub exact_lhs: Option<f64>,
    /// False when `exact_lhs` is only a heuristic lower bound.
    pub lhs_exact: bool,
    /// One-based outcome chosen per setting by the maximizing deterministic strategy.
    pub strategy: Option<Vec<usize>>,
    /// Top eigenvector of the maximizing `Y_λ` as `[re, im]` pairs.
    pub certificate: Option<Vec<[f64; 2]>>,
    pub strategy_count: u128,
    pub quantum_value: f64,
    pub physical_quantum_value: Option<f64>,
    /// `S_Q / S_LHS` when the LHS value is exact.
    pub violation: Option<f64>,
    /// `S_Q / ξ+`, a lower bound on the violation.
    pub violation_guarantee: f64,
    pub steering_certified: bool,
    /// `ξ+ − S_LHS`
    pub gap: Option<f64>,
    /// `S_LHS ≤ ξ+ + 1e−9`
    pub within_bound: Option<bool>,
}

impl BoundsReport {
    /// Report with the analytic quantities only.
    pub fn analytic(view: &SettingsView, selection: &SettingSelection) -> Self {
        let xi = xi_bounds(view);
        let s_q = quantum_value(view);
        let guarantee = s_q / xi.plus;
        Self {
            d: view.d(),
            selection: selection.one_based(),
            subnormalized: view.is_subnormalized(),
            a_sum: xi.trace_sum,
            s_tilde: xi.spread_bound,
            xi_minus: xi.minus,
            xi_plus: xi.plus,
            exact_lhs: None,
            lhs_exact: false,
            strategy: None,
            certificate: None,
            strategy_count: view.outcomes().iter().fold(1u128, |acc, &m| acc.saturating_mul(m as u128)),
            quantum_value: s_q,
            physical_quantum_value: None,
            violation: None,
            violation_guarantee: guarantee,
            steering_certified: guarantee > 1.0 + tol::CONSTRAINT,
            gap: None,
            within_bound: None,
        }
    }
}

/// Full report for the selected settings of `fam` described by `view` (the view of the
/// whole family; it is restricted here).
pub fn violation_report(
    fam: &MeasurementFamily,
    view: &SettingsView,
    selection: &SettingSelection,
    opts: &LhsOptions,
) -> Result<BoundsReport> {
    if fam.d() != view.d() || fam.outcomes() != view.outcomes() {
        return Err(Error::ShapeMismatch(format!(
            "family ({} settings in d = {}) and parameters ({} settings in d = {}) disagree",
            fam.n_settings(),
            fam.d(),
            view.len(),
            view.d()
        )));
    }
    let sub_view = view.restrict(selection)?;
    let sub_fam = fam.restrict(selection)?;
    let mut report = BoundsReport::analytic(&sub_view, selection);
    let optimum = lhs_value(&sub_fam, opts)?;
    report.exact_lhs = Some(optimum.value);
    report.lhs_exact = optimum.exact;
    report.strategy = Some(optimum.strategy.iter().map(|k| k + 1).collect());
    report.certificate = Some(vector_to_pairs(&optimum.certificate));
    report.physical_quantum_value = physical_quantum_value(&sub_fam);
    report.gap = Some(report.xi_plus - optimum.value);
    report.within_bound = Some(optimum.value <= report.xi_plus + tol::CONSTRAINT);
    if optimum.exact {
        let v = report.quantum_value / optimum.value;
        report.violation = Some(v);
        report.steering_certified = v > 1.0 + tol::CONSTRAINT;
    }
    Ok(report)
}
