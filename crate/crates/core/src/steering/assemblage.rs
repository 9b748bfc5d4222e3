use serde::{Deserialize, Serialize};

use super::strategy::LhsStrategy;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operators::MeasurementFamily;
use crate::tol;

/// Conditional states `σ_{α,k}` on the steered party.
///
/// Every element is Hermitian and positive semidefinite. A *physical* assemblage also has
/// per-setting traces `Tr Σ_k σ_{α,k} ≤ 1`; it is flagged subnormalized when some setting's
/// trace falls below one. Nonsignaling is measured, not enforced, see
/// [`Assemblage::nonsignaling_residual`].
#[derive(Debug, Clone, PartialEq)]
pub struct Assemblage {
    d: usize,
    elements: Vec<Vec<CMatrix>>,
    subnormalized: bool,
    physical: bool,
}

fn check_elements(d: usize, elements: &[Vec<CMatrix>]) -> Result<()> {
    for (alpha, ops) in elements.iter().enumerate() {
        for (k, s) in ops.iter().enumerate() {
            if s.nrows() != d || s.ncols() != d {
                return Err(Error::ShapeMismatch(format!(
                    "sigma[{},{}] is {}x{}, expected {d}x{d}",
                    alpha + 1,
                    k + 1,
                    s.nrows(),
                    s.ncols()
                )));
            }
            let name = || format!("sigma[{},{}]", alpha + 1, k + 1);
            linalg::check_hermitian(s, tol::HERMITIAN, name)?;
            linalg::check_psd(s, tol::PSD, name)?;
        }
    }
    Ok(())
}

impl Assemblage {
    pub fn new(d: usize, elements: Vec<Vec<CMatrix>>) -> Result<Self> {
        check_elements(d, &elements)?;
        let mut subnormalized = false;
        for (alpha, ops) in elements.iter().enumerate() {
            let t: f64 = ops.iter().map(linalg::real_trace).sum();
            if t > 1.0 + tol::CONSTRAINT {
                return Err(Error::InvalidDistribution(format!("setting {} has total trace {t} > 1", alpha + 1)));
            }
            subnormalized |= t < 1.0 - tol::CONSTRAINT;
        }
        Ok(Self { d, elements, subnormalized, physical: true })
    }

    /// Positive elements without the trace condition, for probing functionals with
    /// operator collections such as `σ_{α,k} = I/d` that are not assemblages themselves.
    pub fn unnormalized(d: usize, elements: Vec<Vec<CMatrix>>) -> Result<Self> {
        check_elements(d, &elements)?;
        Ok(Self { d, elements, subnormalized: false, physical: false })
    }

    /// `σ_{α,k} = Σ_λ q_λ p_λ(k|α) σ_λ` from explicit hidden-state data.
    pub fn from_lhs_model(weights: &[f64], strategies: &[LhsStrategy], states: &[CMatrix]) -> Result<Self> {
        if weights.len() != strategies.len() || weights.len() != states.len() || weights.is_empty() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights, {} strategies, {} states",
                weights.len(),
                strategies.len(),
                states.len()
            )));
        }
        let outcomes = strategies[0].outcomes();
        if strategies.iter().any(|s| s.outcomes() != outcomes) {
            return Err(Error::ShapeMismatch("strategies disagree on outcome counts".into()));
        }
        let d = states[0].nrows();
        let elements = outcomes
            .iter()
            .enumerate()
            .map(|(alpha, &m)| {
                (0..m)
                    .map(|k| {
                        weights.iter().zip(strategies).zip(states).fold(linalg::zeros(d), |acc, ((&q, s), rho)| {
                            acc + rho.scale(q * s.rows()[alpha][k])
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(d, elements)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn elements(&self) -> &[Vec<CMatrix>] {
        &self.elements
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.elements.iter().map(Vec::len).collect()
    }

    pub fn is_subnormalized(&self) -> bool {
        self.subnormalized
    }

    /// False for collections built with [`Assemblage::unnormalized`].
    pub fn is_physical(&self) -> bool {
        self.physical
    }

    /// `Σ_k σ_{α,k}` per setting.
    pub fn marginals(&self) -> Vec<CMatrix> {
        self.elements.iter().map(|ops| ops.iter().fold(linalg::zeros(self.d), |acc, s| acc + s)).collect()
    }

    pub fn setting_traces(&self) -> Vec<f64> {
        self.marginals().iter().map(linalg::real_trace).collect()
    }

    /// Largest entrywise difference between the per-setting marginals, each divided by its
    /// own trace. Settings with vanishing trace are skipped. Dividing out the trace lets
    /// subnormalized settings with different detection weights `γ_α` be compared.
    pub fn nonsignaling_residual(&self) -> f64 {
        let normalized: Vec<CMatrix> = self
            .marginals()
            .into_iter()
            .filter_map(|m| {
                let t = linalg::real_trace(&m);
                (t > tol::CONSTRAINT).then(|| m.scale(1.0 / t))
            })
            .collect();
        let Some(first) = normalized.first() else { return 0.0 };
        normalized.iter().skip(1).map(|m| linalg::max_abs_diff(first, m)).fold(0.0, f64::max)
    }

    pub fn is_nonsignaling(&self, tol: f64) -> bool {
        self.nonsignaling_residual() <= tol
    }

    pub fn to_document(&self) -> AssemblageDocument {
        AssemblageDocument {
            d: self.d,
            subnormalized: self.subnormalized,
            elements: self.elements.iter().map(|ops| ops.iter().map(linalg::to_rows).collect()).collect(),
        }
    }

    pub fn from_document(doc: &AssemblageDocument) -> Result<Self> {
        let elements = doc
            .elements
            .iter()
            .map(|ops| ops.iter().map(|rows| linalg::from_rows(rows)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(doc.d, elements)
    }
}

/// JSON layout matching [`crate::operators::FamilyDocument`] matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssemblageDocument {
    pub d: usize,
    pub subnormalized: bool,
    pub elements: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
}

/// `σ_{α,k} = Tr_A[(P_{α,k} ⊗ I) ρ]` for a state `ρ` on `C^{d_A} ⊗ C^{d_B}` with `d_A` the
/// family dimension.
pub fn assemblage_from_state(rho: &CMatrix, fam: &MeasurementFamily) -> Result<Assemblage> {
    let n = rho.nrows();
    let d_a = fam.d();
    if !rho.is_square() || n == 0 || !n.is_multiple_of(d_a) {
        return Err(Error::ShapeMismatch(format!("state of size {}x{} does not factor over d_A = {d_a}", n, rho.ncols())));
    }
    let d_b = n / d_a;
    if linalg::hermitian_residual(rho) > tol::HERMITIAN {
        return Err(Error::NotAState("not Hermitian".into()));
    }
    let t = linalg::real_trace(rho);
    if (t - 1.0).abs() > tol::CONSTRAINT {
        return Err(Error::NotAState(format!("trace is {t}")));
    }
    let min = linalg::min_eigenvalue(rho);
    if min < -tol::PSD {
        return Err(Error::NotAState(format!("minimum eigenvalue {min:.3e}")));
    }
    let elements = fam
        .settings()
        .iter()
        .map(|ops| {
            ops.iter()
                .map(|p| {
                    let sigma = CMatrix::from_fn(d_b, d_b, |i, j| {
                        let mut acc = linalg::c(0.0, 0.0);
                        for a in 0..d_a {
                            for a2 in 0..d_a {
                                acc += p[(a, a2)] * rho[(a2 * d_b + i, a * d_b + j)];
                            }
                        }
                        acc
                    });
                    linalg::hermitian_part(&sigma)
                })
                .collect()
        })
        .collect();
    Assemblage::new(d_b, elements)
}
