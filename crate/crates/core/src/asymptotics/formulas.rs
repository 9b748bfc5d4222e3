//! Special cases of `ξ+ = (1/d)[Σ a_α + √((d − 1) Σ a_α² (d b_α − 1))]`.
//!
//! Writing `b_α = z_α/d` and `a_α = d γ_α/M_α` gives the decomposition
//! `ξ+ = Σ_α γ_α/M_α + √Δ(d)` with `Δ(d) = (d − 1) Σ_α γ_α²/M_α² (z_α − 1)`.

use crate::error::{Constraint, Error, Result};
use crate::tol;

fn check_dimension(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::admissibility(Constraint::Dimension, format!("d = {d} < 2")));
    }
    Ok(d as f64)
}

fn check_mub_count(d: usize, l: usize) -> Result<()> {
    if l == 0 || l > d + 1 {
        return Err(Error::admissibility(Constraint::SettingRange, format!("L = {l} outside 1..={}", d + 1)));
    }
    Ok(())
}

/// MUBs (`a_α = 1/L`, `b_α = 1`): `ξ+ = (1/d)(1 + (d − 1)/√L)`.
pub fn xi_plus_mub(d: usize, l: usize) -> Result<f64> {
    let d_f = check_dimension(d)?;
    check_mub_count(d, l)?;
    Ok((1.0 + (d_f - 1.0) / (l as f64).sqrt()) / d_f)
}

/// MUMs (`a_α = 1/L`, `b_α = κ`): `ξ+ = (1/d)(1 + √((d − 1)(dκ − 1)/L))`.
pub fn xi_plus_mum(d: usize, l: usize, kappa: f64) -> Result<f64> {
    let d_f = check_dimension(d)?;
    check_mub_count(d, l)?;
    if !(kappa > 1.0 / d_f + tol::PURITY_FLOOR && kappa <= 1.0 + tol::CONSTRAINT) {
        return Err(Error::admissibility(Constraint::PurityWindow, format!("kappa = {kappa} outside (1/{d}, 1]")));
    }
    Ok((1.0 + ((d_f - 1.0) * (d_f * kappa - 1.0) / l as f64).sqrt()) / d_f)
}

/// `x` window `(d/M², min{d²/M², d/M}]` of the `(N,M)`-POVMs.
pub(crate) fn nm_window(d: usize, m: usize) -> (f64, f64) {
    let (d, m) = (d as f64, m as f64);
    (d / (m * m), (d * d / (m * m)).min(d / m))
}

/// `(N,M)`-POVMs with `L` settings kept: `ξ+ = (1/M)(1 + √((d − 1)(x M² − d)/(d L)))`.
pub fn xi_plus_nm(d: usize, l: usize, m: usize, x: f64) -> Result<f64> {
    let d_f = check_dimension(d)?;
    if m < 2 {
        return Err(Error::admissibility(Constraint::OutcomeCount, format!("M = {m} < 2")));
    }
    if l == 0 {
        return Err(Error::admissibility(Constraint::SettingRange, "L = 0".to_string()));
    }
    let (lo, hi) = nm_window(d, m);
    if !(x > lo + tol::PURITY_FLOOR && x <= hi + tol::CONSTRAINT) {
        return Err(Error::admissibility(Constraint::PurityWindow, format!("x = {x} outside ({lo}, {hi}]")));
    }
    let m_f = m as f64;
    let radicand = ((d_f - 1.0) * (x * m_f * m_f - d_f) / (d_f * l as f64)).max(0.0);
    Ok((1.0 + radicand.sqrt()) / m_f)
}

/// Projective families (`b_α = 1`) with common `M` and weights `γ_α` summing to one:
/// `ξ+ = (1/M)[1 + (d − 1)√(Σ γ_α²)]`.
pub fn xi_plus_etf(d: usize, m: usize, gammas: &[f64]) -> Result<f64> {
    let d_f = check_dimension(d)?;
    if m < d {
        return Err(Error::admissibility(Constraint::PurityWindow, format!("b = 1 needs M >= d, got M = {m}")));
    }
    if gammas.is_empty() {
        return Err(Error::admissibility(Constraint::SequenceLength, "no weights".to_string()));
    }
    if let Some(g) = gammas.iter().find(|&&g| !(g > 0.0 && g <= 1.0 + tol::CONSTRAINT)) {
        return Err(Error::admissibility(Constraint::WeightRange, format!("gamma = {g} outside (0, 1]")));
    }
    let total: f64 = gammas.iter().sum();
    if (total - 1.0).abs() > tol::CONSTRAINT {
        return Err(Error::admissibility(Constraint::WeightSum, format!("sum gamma = {total}")));
    }
    let squares: f64 = gammas.iter().map(|g| g * g).sum();
    Ok((1.0 + (d_f - 1.0) * squares.sqrt()) / m as f64)
}

/// Group of settings sharing `(γ, M, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SettingProfile {
    pub count: usize,
    pub weight: f64,
    pub outcomes: usize,
    /// `z = d b`
    pub z: f64,
}

impl SettingProfile {
    pub fn single(weight: f64, outcomes: usize, z: f64) -> Self {
        Self { count: 1, weight, outcomes, z }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaDecomposition {
    pub delta: f64,
    /// `Σ_α γ_α/M_α`, the limit of `ξ+` when `Δ(d) → 0`.
    pub leading: f64,
    pub xi_plus: f64,
    pub xi_minus: f64,
    /// `Σ_α γ_α`
    pub total_weight: f64,
}

/// `Δ(d)` and `ξ± = Σ γ_α/M_α ± √Δ(d)` for settings given as `(γ_α, M_α, z_α)` groups.
pub fn delta_d(d: usize, profiles: &[SettingProfile]) -> Result<DeltaDecomposition> {
    let d_f = check_dimension(d)?;
    let (mut delta, mut leading, mut total_weight) = (0.0, 0.0, 0.0);
    for p in profiles {
        if p.outcomes < 2 {
            return Err(Error::admissibility(Constraint::OutcomeCount, format!("M = {} < 2", p.outcomes)));
        }
        if !(p.weight > 0.0 && p.weight <= 1.0 + tol::CONSTRAINT) {
            return Err(Error::admissibility(Constraint::WeightRange, format!("gamma = {} outside (0, 1]", p.weight)));
        }
        let z_max = d.min(p.outcomes) as f64;
        if !(p.z > 1.0 + tol::PURITY_FLOOR && p.z <= z_max + tol::CONSTRAINT) {
            return Err(Error::admissibility(Constraint::PurityWindow, format!("z = {} outside (1, {z_max}]", p.z)));
        }
        let n = p.count as f64;
        let m = p.outcomes as f64;
        delta += n * p.weight * p.weight / (m * m) * (p.z - 1.0);
        leading += n * p.weight / m;
        total_weight += n * p.weight;
    }
    delta *= d_f - 1.0;
    let root = delta.sqrt();
    Ok(DeltaDecomposition { delta, leading, xi_plus: leading + root, xi_minus: leading - root, total_weight })
}
