use crate::error::{Error, Result};
use crate::geam::coincidence_index;
use crate::tol;

/// Response distributions `p(k|α)`, one row per setting.
#[derive(Debug, Clone, PartialEq)]
pub struct LhsStrategy {
    rows: Vec<Vec<f64>>,
    choices: Option<Vec<usize>>,
}

impl LhsStrategy {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        for (alpha, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::InvalidDistribution(format!("row {} is empty", alpha + 1)));
            }
            if row.iter().any(|&p| p < 0.0 || !p.is_finite()) {
                return Err(Error::InvalidDistribution(format!("row {} has a negative entry", alpha + 1)));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > tol::STRATEGY_ROW {
                return Err(Error::InvalidDistribution(format!("row {} sums to {total}", alpha + 1)));
            }
        }
        let choices = rows
            .iter()
            .map(|row| {
                let ones: Vec<usize> = row.iter().enumerate().filter(|(_, &p)| p == 1.0).map(|(k, _)| k).collect();
                (ones.len() == 1).then(|| ones[0])
            })
            .collect::<Option<Vec<_>>>();
        Ok(Self { rows, choices })
    }

    /// Point-mass rows picking outcome `choice[α]` in setting `α`.
    pub fn deterministic(choice: &[usize], outcomes: &[usize]) -> Result<Self> {
        if choice.len() != outcomes.len() {
            return Err(Error::ShapeMismatch(format!("{} choices for {} settings", choice.len(), outcomes.len())));
        }
        if let Some(alpha) = choice.iter().zip(outcomes).position(|(&k, &m)| k >= m) {
            return Err(Error::ShapeMismatch(format!(
                "choice {} exceeds {} outcomes in setting {}",
                choice[alpha], outcomes[alpha], alpha + 1
            )));
        }
        let rows = choice
            .iter()
            .zip(outcomes)
            .map(|(&k, &m)| (0..m).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Ok(Self { rows, choices: Some(choice.to_vec()) })
    }

    pub fn uniform(outcomes: &[usize]) -> Self {
        let rows = outcomes.iter().map(|&m| vec![1.0 / m as f64; m]).collect();
        Self::new(rows).expect("uniform rows are valid")
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn outcomes(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.choices.is_some()
    }

    /// The chosen outcome per setting, for deterministic strategies.
    pub fn choices(&self) -> Option<&[usize]> {
        self.choices.as_deref()
    }

    /// Index of coincidence `C_α = Σ_k p(k|α)²` per setting.
    pub fn coincidence_indices(&self) -> Vec<f64> {
        self.rows.iter().map(|row| coincidence_index(row).expect("rows validated on construction")).collect()
    }
}
