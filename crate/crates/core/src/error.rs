use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The admissibility rule a parameter set failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Dimension,
    SequenceLength,
    SettingRange,
    OutcomeCount,
    WeightRange,
    WeightSum,
    ElementCount,
    PurityWindow,
    CoincidenceRange,
    FormulaDomain,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::Dimension => "dimension",
            Constraint::SequenceLength => "sequence length",
            Constraint::SettingRange => "N range",
            Constraint::OutcomeCount => "outcome count",
            Constraint::WeightRange => "weight range",
            Constraint::WeightSum => "weight sum",
            Constraint::ElementCount => "element count",
            Constraint::PurityWindow => "b window",
            Constraint::CoincidenceRange => "coincidence range",
            Constraint::FormulaDomain => "formula domain",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("admissibility violated ({constraint}): {detail}")]
    Admissibility { constraint: Constraint, detail: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("setting selection invalid: {0}")]
    Index(String),

    #[error("unsupported dimension {d}: {reason}")]
    UnsupportedDimension { d: usize, reason: String },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operator {what} is not Hermitian (residual {residual:.3e})")]
    NotHermitian { what: String, residual: f64 },

    #[error("operator {what} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { what: String, min_eigenvalue: f64 },

    #[error("family is not equiangular: max deviation {deviation:.3e} exceeds {tol:.1e}")]
    NotEquiangular { deviation: f64, tol: f64 },

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("imaginary residue {0:.3e} in a quantity that should be real")]
    NonHermitianResidue(f64),

    #[error("negative spectral variance {0:.3e}")]
    NegativeVariance(f64),

    #[error("enumeration cap exceeded: {count} deterministic strategies > cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },
}

impl Error {
    pub(crate) fn admissibility(constraint: Constraint, detail: impl Into<String>) -> Self {
        Error::Admissibility { constraint, detail: detail.into() }
    }
}
