use super::assemblage::Assemblage;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operators::MeasurementFamily;
use crate::tol;

/// Hermitian coefficients `F_{α,k}` paired with assemblages as `Σ Tr(F_{α,k} σ_{α,k})`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringFunctional {
    d: usize,
    coefficients: Vec<Vec<CMatrix>>,
}

impl SteeringFunctional {
    pub fn new(d: usize, coefficients: Vec<Vec<CMatrix>>) -> Result<Self> {
        for (alpha, ops) in coefficients.iter().enumerate() {
            for (k, f) in ops.iter().enumerate() {
                if f.nrows() != d || f.ncols() != d {
                    return Err(Error::ShapeMismatch(format!("F[{},{}] is not {d}x{d}", alpha + 1, k + 1)));
                }
                linalg::check_hermitian(f, tol::HERMITIAN, || format!("F[{},{}]", alpha + 1, k + 1))?;
            }
        }
        Ok(Self { d, coefficients })
    }

    /// `F_{α,k} = P_{α,k}`.
    pub fn from_family(fam: &MeasurementFamily) -> Self {
        Self { d: fam.d(), coefficients: fam.settings().to_vec() }
    }

    /// `F_{α,k} = I` for every index.
    pub fn identity(d: usize, outcomes: &[usize]) -> Self {
        let id = linalg::identity(d);
        Self { d, coefficients: outcomes.iter().map(|&m| vec![id.clone(); m]).collect() }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coefficients(&self) -> &[Vec<CMatrix>] {
        &self.coefficients
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.coefficients.iter().map(Vec::len).collect()
    }

    /// `⟨F, σ⟩`; the imaginary residue is checked and dropped.
    pub fn evaluate(&self, sigma: &Assemblage) -> Result<f64> {
        if sigma.d() != self.d || sigma.outcomes() != self.outcomes() {
            return Err(Error::ShapeMismatch(format!(
                "functional indexed by {:?} in d = {}, assemblage by {:?} in d = {}",
                self.outcomes(),
                self.d,
                sigma.outcomes(),
                sigma.d()
            )));
        }
        let mut total = linalg::c(0.0, 0.0);
        for (fs, ss) in self.coefficients.iter().zip(sigma.elements()) {
            for (f, s) in fs.iter().zip(ss) {
                total += linalg::trace_product(f, s);
            }
        }
        if total.im.abs() > tol::IMAGINARY {
            return Err(Error::NonHermitianResidue(total.im.abs()));
        }
        Ok(total.re)
    }
}
