//! Concrete measurement families realizing GEAMs, and verification of their trace relations.

mod bases;
mod mub;
mod sic;
mod verify;

use serde::{Deserialize, Serialize};

pub use bases::{gell_mann_basis, helmert_rows, simplex_from_orthonormal};
pub use mub::{build_mubs, build_mums, build_nm_povm, is_prime, mub_vectors};
pub use sic::build_sic;
pub use verify::{infer_params, verify_relations, InferredParams, RelationReport};

use crate::error::{Error, Result};
use crate::geam::SettingSelection;
use crate::linalg::{self, CMatrix};
use crate::tol::{self, Tolerances};

/// Largest dimension the dense constructions are meant for.
pub const MAX_DIMENSION: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Mub,
    Mum,
    Sic,
    NmPovm,
    Etf,
    Custom,
}

/// `N` settings of positive semidefinite Hermitian `d×d` operators `P_{α,k}` together with
/// the declared weights `γ_α`.
///
/// Construction checks Hermiticity and positivity. The resolution `Σ_k P_{α,k} = γ_α I` is
/// guaranteed by the built-in constructions but only *reported* for families read from
/// files, so that perturbed or foreign families can still be inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFamily {
    d: usize,
    kind: FamilyKind,
    weights: Vec<f64>,
    settings: Vec<Vec<CMatrix>>,
}

impl MeasurementFamily {
    pub fn new(d: usize, kind: FamilyKind, weights: Vec<f64>, settings: Vec<Vec<CMatrix>>) -> Result<Self> {
        Self::new_with_tol(d, kind, weights, settings, &Tolerances::default())
    }

    pub fn new_with_tol(
        d: usize,
        kind: FamilyKind,
        weights: Vec<f64>,
        settings: Vec<Vec<CMatrix>>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::ShapeMismatch("dimension must be positive".into()));
        }
        if settings.is_empty() {
            return Err(Error::ShapeMismatch("family has no settings".into()));
        }
        if weights.len() != settings.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights declared for {} settings",
                weights.len(),
                settings.len()
            )));
        }
        for (alpha, ops) in settings.iter().enumerate() {
            if ops.is_empty() {
                return Err(Error::ShapeMismatch(format!("setting {} has no outcomes", alpha + 1)));
            }
            for (k, p) in ops.iter().enumerate() {
                if p.nrows() != d || p.ncols() != d {
                    return Err(Error::ShapeMismatch(format!(
                        "P[{},{}] is {}x{}, expected {d}x{d}",
                        alpha + 1,
                        k + 1,
                        p.nrows(),
                        p.ncols()
                    )));
                }
                let name = || format!("P[{},{}]", alpha + 1, k + 1);
                linalg::check_hermitian(p, tol.hermitian, name)?;
                linalg::check_psd(p, tol.psd, name)?;
            }
        }
        Ok(Self { d, kind, weights, settings })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn settings(&self) -> &[Vec<CMatrix>] {
        &self.settings
    }

    pub fn n_settings(&self) -> usize {
        self.settings.len()
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.settings.iter().map(Vec::len).collect()
    }

    pub fn operator(&self, setting: usize, outcome: usize) -> &CMatrix {
        &self.settings[setting][outcome]
    }

    /// Number of deterministic response strategies `Π_α M_α`, saturating at `u128::MAX`.
    pub fn strategy_count(&self) -> u128 {
        self.settings.iter().fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    /// Largest entrywise deviation of `Σ_k P_{α,k}` from `γ_α I` over all settings.
    pub fn resolution_residual(&self) -> f64 {
        let id = linalg::identity(self.d);
        self.settings
            .iter()
            .zip(&self.weights)
            .map(|(ops, &g)| {
                let sum = ops.iter().fold(linalg::zeros(self.d), |acc, p| acc + p);
                linalg::max_abs_diff(&sum, &id.scale(g))
            })
            .fold(0.0, f64::max)
    }

    pub fn check_resolution(&self, tol: f64) -> Result<()> {
        let residual = self.resolution_residual();
        if residual > tol {
            return Err(Error::Construction(format!("sum_k P[alpha,k] deviates from gamma I by {residual:.3e}")));
        }
        Ok(())
    }

    /// The sub-family of the selected settings. Weights are not rescaled.
    pub fn restrict(&self, sel: &SettingSelection) -> Result<Self> {
        if let Some(&bad) = sel.indices().iter().find(|&&i| i >= self.n_settings()) {
            return Err(Error::Index(format!("index {bad} out of range for {} settings", self.n_settings())));
        }
        Ok(Self {
            d: self.d,
            kind: self.kind,
            weights: sel.indices().iter().map(|&i| self.weights[i]).collect(),
            settings: sel.indices().iter().map(|&i| self.settings[i].clone()).collect(),
        })
    }

    pub fn to_document(&self) -> FamilyDocument {
        FamilyDocument {
            d: self.d,
            label: self.kind,
            gamma: self.weights.clone(),
            settings: self.settings.iter().map(|ops| ops.iter().map(linalg::to_rows).collect()).collect(),
        }
    }

    pub fn from_document(doc: &FamilyDocument, tol: &Tolerances) -> Result<Self> {
        let settings = doc
            .settings
            .iter()
            .map(|ops| ops.iter().map(|rows| linalg::from_rows(rows)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new_with_tol(doc.d, doc.label, doc.gamma.clone(), settings, tol)
    }
}

/// JSON layout of a family: each operator is a list of rows, each entry an `[re, im]` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub d: usize,
    pub label: FamilyKind,
    pub gamma: Vec<f64>,
    pub settings: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

/// `P_{α,k} = (γ_α/M_α) I + a_α √(b_α − 1/d) Ĝ_{α,k}` for unit-norm traceless simplices `Ĝ`.
///
/// Each simplex must satisfy `Σ_k Ĝ_k = 0`, `Tr Ĝ_k² = 1` and `Tr Ĝ_k Ĝ_l = −1/(M−1)`, and
/// simplices of different settings must be mutually orthogonal. The four trace relations
/// then hold exactly; only positivity depends on the simplex and is checked here.
pub(crate) fn equiangular_family(
    d: usize,
    kind: FamilyKind,
    weights: &[f64],
    purity: &[f64],
    simplices: &[Vec<CMatrix>],
) -> Result<MeasurementFamily> {
    let d_f = d as f64;
    let id = linalg::identity(d);
    let mut settings = Vec::with_capacity(simplices.len());
    for (alpha, simplex) in simplices.iter().enumerate() {
        let m = simplex.len() as f64;
        let (gamma, b) = (weights[alpha], purity[alpha]);
        let a = d_f * gamma / m;
        let scale = a * (b - 1.0 / d_f).sqrt();
        let floor = gamma / m;
        let worst = simplex.iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min);
        if floor + scale * worst < -tol::PSD {
            let max_scale = floor / -worst;
            let max_purity = 1.0 / d_f + (max_scale / a).powi(2);
            return Err(Error::Construction(format!(
                "setting {} is not positive at b = {b} (largest attainable b is {max_purity:.6})",
                alpha + 1
            )));
        }
        settings.push(simplex.iter().map(|g| id.scale(floor) + g.scale(scale)).collect());
    }
    MeasurementFamily::new(d, kind, weights.to_vec(), settings)
}
