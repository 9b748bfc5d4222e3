//! Scalar parameter algebra of generalized equiangular measurements.
//!
//! A GEAM in dimension `d` is described by `N` settings with `M_α` outcomes each, weights
//! `γ_α` summing to one and purities `b_α`. The remaining parameters follow:
//!
//! ```text
//! a_α = d γ_α / M_α        c_α = (M_α − d b_α) / (d (M_α − 1))        f = 1/d
//! ```
//!
//! with `1/d < b_α ≤ min{d, M_α}/d` and `Σ_α M_α = d² + N − 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Constraint, Error, Result};
use crate::tol;

/// One admissibility rule evaluated on a candidate parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantCheck {
    pub constraint: Constraint,
    pub passed: bool,
    pub detail: String,
}

impl InvariantCheck {
    fn new(constraint: Constraint, passed: bool, detail: String) -> Self {
        Self { constraint, passed, detail }
    }
}

/// Fully validated GEAM parameter record.
#[derive(Debug, Clone, PartialEq)]
pub struct GeamParams {
    d: usize,
    outcomes: Vec<usize>,
    weights: Vec<f64>,
    purity: Vec<f64>,
    trace_scale: Vec<f64>,
    offdiag: Vec<f64>,
    cross: f64,
}

/// Evaluates every admissibility rule independently.
///
/// Rules whose inputs are malformed upstream (wrong lengths, `d < 2`) are reported as
/// failed and the dependent rules are skipped.
pub fn admissibility_checks(
    d: usize,
    n_settings: usize,
    outcomes: &[usize],
    weights: &[f64],
    purity: &[f64],
    tol: f64,
) -> Vec<InvariantCheck> {
    let mut checks = Vec::new();
    if d < 2 {
        checks.push(InvariantCheck::new(Constraint::Dimension, false, format!("d = {d} < 2")));
        return checks;
    }
    checks.push(InvariantCheck::new(Constraint::Dimension, true, format!("d = {d}")));

    let lengths_ok = outcomes.len() == n_settings && weights.len() == n_settings && purity.len() == n_settings;
    checks.push(InvariantCheck::new(
        Constraint::SequenceLength,
        lengths_ok,
        format!("N = {n_settings}, |M| = {}, |gamma| = {}, |b| = {}", outcomes.len(), weights.len(), purity.len()),
    ));
    if !lengths_ok {
        return checks;
    }

    let max_settings = d * d - 1;
    checks.push(InvariantCheck::new(
        Constraint::SettingRange,
        (1..=max_settings).contains(&n_settings),
        format!("1 <= N = {n_settings} <= d^2 - 1 = {max_settings}"),
    ));

    let bad_outcome = outcomes.iter().position(|&m| m < 2);
    checks.push(InvariantCheck::new(
        Constraint::OutcomeCount,
        bad_outcome.is_none(),
        match bad_outcome {
            Some(i) => format!("M[{}] = {} < 2", i + 1, outcomes[i]),
            None => "every M_alpha >= 2".into(),
        },
    ));

    let bad_weight = weights.iter().position(|&g| !(g > 0.0 && g <= 1.0 + tol));
    checks.push(InvariantCheck::new(
        Constraint::WeightRange,
        bad_weight.is_none(),
        match bad_weight {
            Some(i) => format!("gamma[{}] = {} outside (0, 1]", i + 1, weights[i]),
            None => "every gamma_alpha in (0, 1]".into(),
        },
    ));

    let weight_sum: f64 = weights.iter().sum();
    checks.push(InvariantCheck::new(
        Constraint::WeightSum,
        (weight_sum - 1.0).abs() <= tol,
        format!("sum gamma = {weight_sum}"),
    ));

    let element_sum: usize = outcomes.iter().sum();
    let expected = d * d + n_settings - 1;
    checks.push(InvariantCheck::new(
        Constraint::ElementCount,
        element_sum == expected,
        format!("sum M = {element_sum}, d^2 + N - 1 = {expected}"),
    ));

    let bad_purity = outcomes.iter().zip(purity).position(|(&m, &b)| !purity_admissible(d, m, b, tol));
    checks.push(InvariantCheck::new(
        Constraint::PurityWindow,
        bad_purity.is_none(),
        match bad_purity {
            Some(i) => {
                let (lo, hi) = purity_window(d, outcomes[i]);
                format!("b[{}] = {} outside ({lo}, {hi}]", i + 1, purity[i])
            }
            None => "every b_alpha in (1/d, min{d, M_alpha}/d]".into(),
        },
    ));
    checks
}

/// The admissible interval `(1/d, min{d, M}/d]` for a purity parameter.
pub fn purity_window(d: usize, outcomes: usize) -> (f64, f64) {
    let d_f = d as f64;
    (1.0 / d_f, d.min(outcomes) as f64 / d_f)
}

fn purity_admissible(d: usize, outcomes: usize, b: f64, tol: f64) -> bool {
    let (lo, hi) = purity_window(d, outcomes);
    b > lo + tol::PURITY_FLOOR && b <= hi + tol
}

fn offdiag_for(d: usize, outcomes: usize, purity: f64) -> f64 {
    let (d, m) = (d as f64, outcomes as f64);
    (m - d * purity) / (d * (m - 1.0))
}

impl GeamParams {
    /// Builds and validates a parameter record with the default tolerance.
    pub fn derive(d: usize, n_settings: usize, outcomes: &[usize], weights: &[f64], purity: &[f64]) -> Result<Self> {
        Self::derive_with_tol(d, n_settings, outcomes, weights, purity, tol::CONSTRAINT)
    }

    pub fn derive_with_tol(
        d: usize,
        n_settings: usize,
        outcomes: &[usize],
        weights: &[f64],
        purity: &[f64],
        tol: f64,
    ) -> Result<Self> {
        if let Some(failed) =
            admissibility_checks(d, n_settings, outcomes, weights, purity, tol).into_iter().find(|c| !c.passed)
        {
            return Err(Error::admissibility(failed.constraint, failed.detail));
        }
        let d_f = d as f64;
        let trace_scale = outcomes.iter().zip(weights).map(|(&m, &g)| d_f * g / m as f64).collect();
        let offdiag = outcomes.iter().zip(purity).map(|(&m, &b)| offdiag_for(d, m, b)).collect();
        Ok(Self {
            d,
            outcomes: outcomes.to_vec(),
            weights: weights.to_vec(),
            purity: purity.to_vec(),
            trace_scale,
            offdiag,
            cross: 1.0 / d_f,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_settings(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn purity(&self) -> &[f64] {
        &self.purity
    }

    pub fn trace_scale(&self) -> &[f64] {
        &self.trace_scale
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn cross(&self) -> f64 {
        self.cross
    }

    /// View over every setting.
    pub fn view(&self) -> SettingsView {
        let settings = (0..self.n_settings()).map(|i| self.setting(i)).collect();
        SettingsView { d: self.d, cross: self.cross, settings, complete: true }
    }

    /// View over a subset of settings. Weights are kept as they are, so the view is
    /// subnormalized whenever the selection is proper.
    pub fn restrict(&self, sel: &SettingSelection) -> Result<SettingsView> {
        self.view().restrict(sel)
    }

    fn setting(&self, i: usize) -> SettingParams {
        SettingParams {
            index: i,
            outcomes: self.outcomes[i],
            weight: self.weights[i],
            trace_scale: self.trace_scale[i],
            purity: self.purity[i],
            offdiag: self.offdiag[i],
        }
    }

    pub fn to_document(&self) -> ParamDocument {
        ParamDocument {
            d: self.d,
            n_settings: self.n_settings(),
            outcomes: self.outcomes.clone(),
            weights: self.weights.clone(),
            purity: self.purity.clone(),
        }
    }
}

/// On-disk parameter document. Derived quantities are never read; they are recomputed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamDocument {
    pub d: usize,
    #[serde(rename = "N")]
    pub n_settings: usize,
    #[serde(rename = "M")]
    pub outcomes: Vec<usize>,
    #[serde(rename = "gamma")]
    pub weights: Vec<f64>,
    #[serde(rename = "b")]
    pub purity: Vec<f64>,
}

impl ParamDocument {
    pub fn checks(&self, tol: f64) -> Vec<InvariantCheck> {
        admissibility_checks(self.d, self.n_settings, &self.outcomes, &self.weights, &self.purity, tol)
    }

    pub fn derive(&self, tol: f64) -> Result<GeamParams> {
        GeamParams::derive_with_tol(self.d, self.n_settings, &self.outcomes, &self.weights, &self.purity, tol)
    }
}

/// Ordered, distinct, zero-based setting indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SettingSelection(Vec<usize>);

impl SettingSelection {
    pub fn new(indices: Vec<usize>, n_settings: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Index("selection is empty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n_settings) {
            return Err(Error::Index(format!("index {bad} out of range for {n_settings} settings")));
        }
        let mut seen = vec![false; n_settings];
        for &i in &indices {
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::Index(format!("index {i} selected twice")));
            }
        }
        Ok(Self(indices))
    }

    pub fn all(n_settings: usize) -> Self {
        Self((0..n_settings).collect())
    }

    /// Parses one-based indices as typed on a command line.
    pub fn from_one_based(indices: &[usize], n_settings: usize) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Index("setting indices are one-based".into()));
        }
        Self::new(indices.iter().map(|i| i - 1).collect(), n_settings)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }
}

/// Parameters of one setting inside a view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SettingParams {
    /// Position of the setting in the parent record.
    pub index: usize,
    pub outcomes: usize,
    pub weight: f64,
    pub trace_scale: f64,
    pub purity: f64,
    pub offdiag: f64,
}

/// A collection of `L` settings sharing the GEAM relations, possibly informationally
/// incomplete. Neither `Σγ = 1` nor the element count is imposed.
#[derive(Debug, Clone, PartialEq)]
pub struct SettingsView {
    d: usize,
    cross: f64,
    settings: Vec<SettingParams>,
    complete: bool,
}

impl SettingsView {
    /// Builds a view from per-setting data, checking only the per-setting rules and
    /// `Σγ ≤ 1`. This is how families that are not complete GEAMs (e.g. `L < d+1` MUBs with
    /// `γ_α = 1/L`) are described.
    pub fn partial(d: usize, outcomes: &[usize], weights: &[f64], purity: &[f64]) -> Result<Self> {
        Self::partial_with_tol(d, outcomes, weights, purity, tol::CONSTRAINT)
    }

    pub fn partial_with_tol(d: usize, outcomes: &[usize], weights: &[f64], purity: &[f64], tol: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::admissibility(Constraint::Dimension, format!("d = {d} < 2")));
        }
        if outcomes.len() != weights.len() || outcomes.len() != purity.len() {
            return Err(Error::admissibility(
                Constraint::SequenceLength,
                format!("|M| = {}, |gamma| = {}, |b| = {}", outcomes.len(), weights.len(), purity.len()),
            ));
        }
        let checks = admissibility_checks(d, outcomes.len(), outcomes, weights, purity, tol);
        if let Some(failed) = checks.into_iter().find(|c| {
            !c.passed && matches!(c.constraint, Constraint::OutcomeCount | Constraint::WeightRange | Constraint::PurityWindow)
        }) {
            return Err(Error::admissibility(failed.constraint, failed.detail));
        }
        let total: f64 = weights.iter().sum();
        if total > 1.0 + tol {
            return Err(Error::admissibility(Constraint::WeightSum, format!("sum gamma = {total} > 1")));
        }
        let d_f = d as f64;
        let settings = (0..outcomes.len())
            .map(|i| SettingParams {
                index: i,
                outcomes: outcomes[i],
                weight: weights[i],
                trace_scale: d_f * weights[i] / outcomes[i] as f64,
                purity: purity[i],
                offdiag: offdiag_for(d, outcomes[i], purity[i]),
            })
            .collect();
        Ok(Self { d, cross: 1.0 / d_f, settings, complete: false })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn cross(&self) -> f64 {
        self.cross
    }

    pub fn settings(&self) -> &[SettingParams] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    /// True when the view covers every setting of a validated [`GeamParams`].
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.settings.iter().map(|s| s.outcomes).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.settings.iter().map(|s| s.weight).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.settings.iter().map(|s| s.weight).sum()
    }

    /// `A = Σ_α a_α`.
    pub fn trace_sum(&self) -> f64 {
        self.settings.iter().map(|s| s.trace_scale).sum()
    }

    pub fn is_subnormalized(&self) -> bool {
        self.total_weight() < 1.0 - tol::CONSTRAINT
    }

    pub fn restrict(&self, sel: &SettingSelection) -> Result<SettingsView> {
        if let Some(&bad) = sel.indices().iter().find(|&&i| i >= self.settings.len()) {
            return Err(Error::Index(format!("index {bad} out of range for {} settings", self.settings.len())));
        }
        let full = sel.len() == self.settings.len();
        Ok(SettingsView {
            d: self.d,
            cross: self.cross,
            settings: sel.indices().iter().map(|&i| self.settings[i]).collect(),
            complete: self.complete && full,
        })
    }

    /// Attempts to promote the view to a full parameter record.
    pub fn complete(&self) -> Result<GeamParams> {
        let purity: Vec<f64> = self.settings.iter().map(|s| s.purity).collect();
        GeamParams::derive(self.d, self.len(), &self.outcomes(), &self.weights(), &purity)
    }
}

/// Index of coincidence `C = Σ_k p_k²` of a probability vector.
pub fn coincidence_index(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(neg) = p.iter().find(|&&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::InvalidDistribution(format!("entry {neg} is negative or not finite")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol::CONSTRAINT {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(p.iter().map(|x| x * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn qubit_three_settings() -> GeamParams {
        let third = 1.0 / 3.0;
        GeamParams::derive(2, 3, &[2, 2, 2], &[third; 3], &[1.0; 3]).unwrap()
    }

    fn constraint_of(err: Error) -> Constraint {
        match err {
            Error::Admissibility { constraint, .. } => constraint,
            other => panic!("expected admissibility error, got {other}"),
        }
    }

    #[test]
    fn qubit_three_setting_parameters() {
        let p = qubit_three_settings();
        for i in 0..3 {
            assert_abs_diff_eq!(p.trace_scale()[i], 1.0 / 3.0, epsilon = 1e-15);
            assert_abs_diff_eq!(p.offdiag()[i], 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(p.cross(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn qubit_sic_purity_window() {
        // N = 1, M = 4: the window is (1/2, 1].
        assert_eq!(purity_window(2, 4), (0.5, 1.0));
        assert!(GeamParams::derive(2, 1, &[4], &[1.0], &[0.5 + 1e-6]).is_ok());
        assert!(GeamParams::derive(2, 1, &[4], &[1.0], &[1.0]).is_ok());
        let low = GeamParams::derive(2, 1, &[4], &[1.0], &[0.5]).unwrap_err();
        assert_eq!(constraint_of(low), Constraint::PurityWindow);
        let high = GeamParams::derive(2, 1, &[4], &[1.0], &[1.0 + 1e-6]).unwrap_err();
        assert_eq!(constraint_of(high), Constraint::PurityWindow);
    }

    #[test]
    fn weight_sum_violation_is_named() {
        let err = GeamParams::derive(2, 2, &[2, 3], &[0.5, 0.6], &[1.0, 1.0]).unwrap_err();
        assert_eq!(constraint_of(err), Constraint::WeightSum);
        assert!(GeamParams::derive(2, 2, &[2, 3], &[0.5, 0.6], &[1.0, 1.0])
            .unwrap_err()
            .to_string()
            .contains("weight sum"));
    }

    #[test]
    fn single_violations_name_their_constraint() {
        let third = 1.0 / 3.0;
        let cases: Vec<(Constraint, Result<GeamParams>)> = vec![
            (Constraint::Dimension, GeamParams::derive(1, 1, &[2], &[1.0], &[1.0])),
            (Constraint::SequenceLength, GeamParams::derive(2, 3, &[2, 2], &[third; 3], &[1.0; 3])),
            (Constraint::SettingRange, GeamParams::derive(2, 4, &[2, 2, 2, 2], &[0.25; 4], &[1.0; 4])),
            (Constraint::ElementCount, GeamParams::derive(2, 3, &[2, 2, 3], &[third; 3], &[1.0; 3])),
            (Constraint::PurityWindow, GeamParams::derive(2, 3, &[2, 2, 2], &[third; 3], &[1.0, 0.4, 1.0])),
            (Constraint::WeightRange, GeamParams::derive(2, 3, &[2, 2, 2], &[1.2, -0.1, -0.1], &[1.0; 3])),
        ];
        for (expected, result) in cases {
            assert_eq!(constraint_of(result.unwrap_err()), expected);
        }
    }

    #[test]
    fn coincidence_index_examples() {
        assert_abs_diff_eq!(coincidence_index(&[0.25; 4]).unwrap(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_index(&[1.0, 0.0, 0.0]).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_index(&[0.5, 0.5, 0.0]).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(coincidence_index(&[0.5, -0.1, 0.6]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(coincidence_index(&[0.5, 0.4]), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn restriction_keeps_original_weights() {
        let p = qubit_three_settings();
        let full = p.restrict(&SettingSelection::all(3)).unwrap();
        assert_eq!(full, p.view());
        assert!(full.is_complete());

        let sub = p.restrict(&SettingSelection::new(vec![0, 1], 3).unwrap()).unwrap();
        assert_eq!(sub.len(), 2);
        assert_abs_diff_eq!(sub.total_weight(), 2.0 / 3.0, epsilon = 1e-15);
        assert!(sub.is_subnormalized());
        assert!(!sub.is_complete());

        assert!(matches!(SettingSelection::new(vec![], 3), Err(Error::Index(_))));
        assert!(matches!(SettingSelection::new(vec![3], 3), Err(Error::Index(_))));
        assert!(matches!(SettingSelection::new(vec![1, 1], 3), Err(Error::Index(_))));
    }

    #[test]
    fn document_uses_short_field_names() {
        let doc: ParamDocument =
            serde_json::from_str(r#"{"d": 2, "N": 1, "M": [4], "gamma": [1.0], "b": [1.0]}"#).unwrap();
        let p = doc.derive(tol::CONSTRAINT).unwrap();
        assert_abs_diff_eq!(p.trace_scale()[0], 0.5, epsilon = 1e-15);
        assert_eq!(p.to_document(), doc);
    }

    /// Admissible homogeneous parameter sets: N settings of M outcomes with N(M−1) = d²−1.
    fn admissible() -> impl Strategy<Value = (usize, usize, usize, Vec<f64>)> {
        (2usize..9)
            .prop_flat_map(|d| {
                let n2 = d * d - 1;
                let divisors: Vec<usize> = (1..=n2).filter(|m1| n2 % m1 == 0).collect();
                (Just(d), prop::sample::select(divisors))
            })
            .prop_flat_map(|(d, m1)| {
                let m = m1 + 1;
                let n = (d * d - 1) / m1;
                let (lo, hi) = purity_window(d, m);
                (Just(d), Just(n), Just(m), prop::collection::vec(0.0..1.0f64, n).prop_map(move |u| {
                    u.into_iter().map(|t| lo + 1e-6 + t * (hi - lo - 1e-6)).collect::<Vec<_>>()
                }))
            })
    }

    proptest! {
        #[test]
        fn offdiag_cross_identity((d, n, m, b) in admissible()) {
            let weights = vec![1.0 / n as f64; n];
            let p = GeamParams::derive(d, n, &vec![m; n], &weights, &b).unwrap();
            for s in p.view().settings() {
                let lhs = s.offdiag - p.cross();
                let via_purity = -(d as f64 * s.purity - 1.0) / (d as f64 * (m as f64 - 1.0));
                let via_offdiag = -(s.purity - s.offdiag) / m as f64;
                prop_assert!((lhs - via_purity).abs() < 1e-12);
                prop_assert!((lhs - via_offdiag).abs() < 1e-12);
            }
        }

        #[test]
        fn coincidence_index_range(raw in prop::collection::vec(0.0..1.0f64, 1..12)) {
            let total: f64 = raw.iter().sum();
            prop_assume!(total > 1e-3);
            let p: Vec<f64> = raw.iter().map(|x| x / total).collect();
            let c = coincidence_index(&p).unwrap();
            prop_assert!(c >= 1.0 / p.len() as f64 - 1e-12);
            prop_assert!(c <= 1.0 + 1e-12);
        }
    }
}
